#include "opinf/words.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>

namespace opinf {

std::uint32_t encode(const Word& w) {
  std::uint32_t v = 0;
  for (std::int8_t x : w) v = v * 4u + static_cast<std::uint32_t>(x);
  return v;
}

Word decode(std::uint32_t code, int n) {
  Word w(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    w[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(code & 3u);
    code >>= 2;
  }
  return w;
}

std::string display(const Word& w) {
  static constexpr char kLetters[] = "jkl0";
  std::string s;
  s.reserve(w.size());
  for (std::int8_t x : w) s.push_back(kLetters[static_cast<int>(x)]);
  return s;
}

Word parse_word(const std::string& s) {
  Word w;
  w.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case 'j': w.push_back(0); break;
      case 'k': w.push_back(1); break;
      case 'l': w.push_back(2); break;
      case '0': w.push_back(kIdentity); break;
      default: throw std::invalid_argument("bad word character: " + std::string(1, ch));
    }
  }
  return w;
}

std::string outcome_display(const Word& o) {
  std::string s;
  s.reserve(o.size());
  for (std::int8_t x : o) s.push_back(static_cast<char>('0' + x));
  return s;
}

Word parse_outcome(const std::string& s) {
  Word o;
  o.reserve(s.size());
  for (char ch : s) {
    if (ch < '0' || ch > '3') throw std::invalid_argument("bad outcome digit");
    o.push_back(static_cast<std::int8_t>(ch - '0'));
  }
  return o;
}

bool is_vanishing(const Word& w) {
  int c[3] = {0, 0, 0};
  for (std::int8_t x : w)
    if (x != kIdentity) ++c[static_cast<int>(x)];
  return !((c[0] % 2) == (c[1] % 2) && (c[1] % 2) == (c[2] % 2));
}

int chi_word(const Word& w, const Word& o) {
  int s = 1;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] != kIdentity) s *= kChi[static_cast<int>(o[i])][static_cast<int>(w[i])];
  return s;
}

namespace {

Word rotate(const Word& w) {
  Word v(w.begin() + 1, w.end());
  v.push_back(w[0]);
  return v;
}

Word reflect(const Word& w) { return Word(w.rbegin(), w.rend()); }

Word relabel(const Word& w, const std::array<std::int8_t, 4>& perm, bool fix_identity) {
  Word v(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::int8_t x = w[i];
    v[i] = (fix_identity && x == kIdentity) ? kIdentity : perm[static_cast<int>(x)];
  }
  return v;
}

template <class GenFn>
std::vector<Word> orbit_closure(const Word& start, GenFn&& generators) {
  std::set<std::uint32_t> seen{encode(start)};
  std::vector<Word> stack{start};
  std::vector<Word> out{start};
  while (!stack.empty()) {
    Word u = std::move(stack.back());
    stack.pop_back();
    for (Word& v : generators(u)) {
      const std::uint32_t code = encode(v);
      if (seen.insert(code).second) {
        out.push_back(v);
        stack.push_back(std::move(v));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

std::vector<Word> word_orbit(const Word& w) {
  // Generators: rotation, reflection, and the two transpositions (jk), (kl)
  // of the character labels (identity fixed).
  static constexpr std::array<std::int8_t, 4> kSwapJK{1, 0, 2, 3};
  static constexpr std::array<std::int8_t, 4> kSwapKL{0, 2, 1, 3};
  return orbit_closure(w, [](const Word& u) {
    return std::vector<Word>{rotate(u), reflect(u), relabel(u, kSwapJK, true),
                             relabel(u, kSwapKL, true)};
  });
}

Word canonical_word(const Word& w) { return word_orbit(w).front(); }

std::vector<Word> outcome_orbit(const Word& o) {
  // Generators: rotation, reflection, and three output permutations that
  // generate the full symmetric group on the four outputs.
  static constexpr std::array<std::int8_t, 4> kPermA{1, 0, 3, 2};
  static constexpr std::array<std::int8_t, 4> kPermB{1, 2, 3, 0};
  static constexpr std::array<std::int8_t, 4> kPermC{0, 2, 1, 3};
  return orbit_closure(o, [](const Word& u) {
    return std::vector<Word>{rotate(u), reflect(u), relabel(u, kPermA, false),
                             relabel(u, kPermB, false), relabel(u, kPermC, false)};
  });
}

WordOrbits enumerate_word_orbits(int n) {
  WordOrbits result;
  result.n = n;
  const std::uint32_t total = 1u << (2 * n);
  std::vector<bool> visited(total, false);
  for (std::uint32_t code = 0; code < total; ++code) {
    if (visited[code]) continue;
    const Word w = decode(code, n);
    const std::vector<Word> orb = word_orbit(w);
    for (const Word& m : orb) visited[encode(m)] = true;
    if (code == total - 1) continue;  // all-identity word
    if (is_vanishing(w)) continue;
    // The ascending scan reaches the lexicographic minimum of each orbit first.
    result.reps.push_back(w);
    result.sizes.push_back(static_cast<long long>(orb.size()));
  }
  return result;
}

OutcomeOrbits enumerate_outcome_orbits(int n) {
  OutcomeOrbits result;
  result.n = n;
  const std::uint32_t total = 1u << (2 * n);
  result.orbit_id.assign(total, -1);
  for (std::uint32_t code = 0; code < total; ++code) {
    if (result.orbit_id[code] >= 0) continue;
    const Word o = decode(code, n);
    const std::vector<Word> orb = outcome_orbit(o);
    const auto id = static_cast<std::int32_t>(result.reps.size());
    for (const Word& m : orb) result.orbit_id[encode(m)] = id;
    result.reps.push_back(o);
    result.sizes.push_back(static_cast<long long>(orb.size()));
  }
  return result;
}

} // namespace opinf
