#include "opinf/chain.hpp"

#include <algorithm>
#include <set>

namespace opinf {

std::vector<Word> cyclic_blocks(const Word& w) {
  const int n = static_cast<int>(w.size());
  int support = 0;
  for (std::int8_t x : w)
    if (x != kIdentity) ++support;
  if (support == 0) return {};
  if (support == n) return {w};
  // Find a block start (a non-identity letter preceded cyclically by an
  // identity), then walk once around the polygon.
  int start = 0;
  for (int i = 0; i < n; ++i) {
    if (w[static_cast<std::size_t>(i)] != kIdentity &&
        w[static_cast<std::size_t>((i + n - 1) % n)] == kIdentity) {
      start = i;
      break;
    }
  }
  std::vector<Word> blocks;
  Word cur;
  for (int step = 0; step < n; ++step) {
    const std::int8_t x = w[static_cast<std::size_t>((start + step) % n)];
    if (x != kIdentity) {
      cur.push_back(x);
    } else if (!cur.empty()) {
      blocks.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) blocks.push_back(std::move(cur));
  return blocks;
}

std::vector<Word> linear_runs(const Word& w) {
  std::vector<Word> blocks;
  Word cur;
  for (std::int8_t x : w) {
    if (x != kIdentity) {
      cur.push_back(x);
    } else if (!cur.empty()) {
      blocks.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) blocks.push_back(std::move(cur));
  return blocks;
}

Word rename_first_appearance(const Word& p) {
  int map[4] = {-1, -1, -1, -1};
  int next = 0;
  Word out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const std::int8_t x = p[i];
    if (x == kIdentity) {
      out[i] = kIdentity;
      continue;
    }
    if (map[static_cast<int>(x)] < 0) map[static_cast<int>(x)] = next++;
    out[i] = static_cast<std::int8_t>(map[static_cast<int>(x)]);
  }
  return out;
}

Word chain_canon(const Word& p) {
  const Word fwd = rename_first_appearance(p);
  const Word rev = rename_first_appearance(Word(p.rbegin(), p.rend()));
  return std::min(fwd, rev);
}

std::vector<Word> factorize(const Word& w) {
  return cyclic_blocks(canonical_word(w));
}

std::vector<Word> chain_keys(const Word& w) {
  const int n = static_cast<int>(w.size());
  std::vector<int> id_pos;
  for (int i = 0; i < n; ++i)
    if (w[static_cast<std::size_t>(i)] == kIdentity) id_pos.push_back(i);
  if (id_pos.empty() || static_cast<int>(id_pos.size()) == n) return {};
  std::vector<bool> is_id(static_cast<std::size_t>(n), false);
  for (int i : id_pos) is_id[static_cast<std::size_t>(i)] = true;
  // Cyclic identity runs: (start, length).
  std::vector<std::pair<int, int>> runs;
  for (int s : id_pos) {
    if (is_id[static_cast<std::size_t>((s + n - 1) % n)]) continue;  // not a run start
    int len = 0;
    while (w[static_cast<std::size_t>((s + len) % n)] == kIdentity) ++len;
    runs.emplace_back(s, len);
  }
  int max_len = 0;
  for (const auto& [s, len] : runs) max_len = std::max(max_len, len);
  std::set<Word> keys;
  for (const auto& [s, len] : runs) {
    if (len != max_len) continue;
    const int start = (s + len) % n;
    Word pat(static_cast<std::size_t>(n - len));
    for (int t = 0; t < n - len; ++t)
      pat[static_cast<std::size_t>(t)] = w[static_cast<std::size_t>((start + t) % n)];
    keys.insert(chain_canon(pat));
  }
  return std::vector<Word>(keys.begin(), keys.end());
}

Word pad_orbit_canon(const Word& block, int n) {
  Word padded = block;
  padded.resize(static_cast<std::size_t>(n), kIdentity);
  return canonical_word(padded);
}

} // namespace opinf
