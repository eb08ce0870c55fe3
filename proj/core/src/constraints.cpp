#include "opinf/constraints.hpp"

#include "opinf/polygon.hpp"

#include <algorithm>
#include <cassert>
#include <mutex>
#include <set>
#include <stdexcept>

namespace opinf {

PolygonConstraints constraints_for(int n, BlockPolicy policy) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, PolygonConstraints> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    const auto it = cache.find({n, static_cast<int>(policy)});
    if (it != cache.end()) return it->second;
  }

  PolygonConstraints out;
  out.n = n;
  out.policy = policy;
  const WordOrbits orbits = enumerate_word_orbits(n);
  for (const Word& w : orbits.reps) {
    std::vector<Word> blocks = cyclic_blocks(w);
    if (blocks.size() < 2) continue;
    if (policy == BlockPolicy::Display) blocks = linear_runs(w);
    // A factor that vanishes on its own polygon forces the whole word to zero.
    bool zero = false;
    for (const Word& b : blocks) {
      Word padded = b;
      padded.resize(static_cast<std::size_t>(n), kIdentity);
      if (is_vanishing(padded)) {
        zero = true;
        break;
      }
    }
    if (zero) {
      out.zeros.push_back(w);
      continue;
    }
    std::vector<Word> key;
    key.reserve(blocks.size());
    for (const Word& b : blocks) key.push_back(chain_canon(b));
    std::sort(key.begin(), key.end());
    out.classes[key].push_back(w);
  }
  for (auto& [key, members] : out.classes) {
    std::sort(members.begin(), members.end());
    for (std::size_t i = 1; i < members.size(); ++i)
      out.equalities.emplace_back(members[i], members[0]);
  }

  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::make_pair(n, static_cast<int>(policy)), std::move(out))
      .first->second;
}

std::vector<std::array<Word, 3>> quad_triples(int n, const PolygonConstraints& c) {
  std::vector<std::array<Word, 3>> triples;
  for (const auto& [key, members] : c.classes) {
    const Word& rep = members.front();  // members are sorted
    const std::vector<Word> blocks = linear_runs(rep);
    if (blocks.size() == 2) {
      triples.push_back({rep, pad_orbit_canon(blocks[0], n), pad_orbit_canon(blocks[1], n)});
      continue;
    }
    // Split off the block with the lexicographically least chain pattern
    // (ties resolved by position); the rest keeps its positions and is
    // itself a class member of this polygon.
    std::vector<std::pair<Word, std::size_t>> pats;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      pats.emplace_back(chain_canon(blocks[i]), i);
    std::sort(pats.begin(), pats.end());
    const std::size_t cut = pats.front().second;
    // Positions of the linear runs inside rep.
    std::vector<std::pair<int, int>> spans;
    int start = -1;
    for (int i = 0; i < n; ++i) {
      if (rep[static_cast<std::size_t>(i)] != kIdentity) {
        if (start < 0) start = i;
      } else if (start >= 0) {
        spans.emplace_back(start, i - 1);
        start = -1;
      }
    }
    if (start >= 0) spans.emplace_back(start, n - 1);
    assert(spans.size() == blocks.size());
    Word rest = rep;
    for (int i = spans[cut].first; i <= spans[cut].second; ++i)
      rest[static_cast<std::size_t>(i)] = kIdentity;
    triples.push_back({rep, pad_orbit_canon(blocks[cut], n), canonical_word(rest)});
  }
  return triples;
}

// --- VarKey / union-find -------------------------------------------------------

std::string VarKey::str() const {
  switch (kind) {
    case Chain: return "c:" + display(w);
    case Full: return "f:" + std::to_string(m) + ":" + display(w);
    case WordVar: return "w:" + display(w);
    case Zero: return "zero";
  }
  return "?";
}

VarKey zero_key() { return VarKey{}; }

VarKey KeyUnionFind::find(const VarKey& k) const {
  auto it = parent_.find(k);
  if (it == parent_.end()) {
    parent_.emplace(k, k);
    return k;
  }
  VarKey x = k;
  while (true) {
    const VarKey& p = parent_[x];
    if (p == x) break;
    const VarKey& gp = parent_[p];
    parent_[x] = gp;  // path halving
    x = gp;
  }
  return x;
}

void KeyUnionFind::unite(const VarKey& a, const VarKey& b) {
  VarKey ra = find(a);
  VarKey rb = find(b);
  if (ra == rb) return;
  if (rb == zero_key() || (ra != zero_key() && rb < ra)) std::swap(ra, rb);
  parent_[rb] = ra;
}

// --- model ----------------------------------------------------------------------

std::string mode_name(Mode m) {
  return m == Mode::Single ? "single" : "cumulative";
}

int Model::var_index(const VarKey& resolved) const {
  const auto it = std::lower_bound(vars.begin(), vars.end(), resolved);
  if (it == vars.end() || !(*it == resolved)) return -1;
  return static_cast<int>(it - vars.begin());
}

long long Model::coeff(int row, int var) const {
  for (const auto& [v, c] : rows[static_cast<std::size_t>(row)].coeffs)
    if (v == var) return c;
  return 0;
}

Model build_model(int n, Mode mode) {
  Model model;
  model.n = n;
  model.mode = mode;
  KeyUnionFind& uf = model.uf;

  std::vector<int> polys;
  if (mode == Mode::Cumulative) {
    for (int m = 3; m <= n; ++m) polys.push_back(m);
  } else {
    polys.push_back(n);
  }

  auto key_of = [&](int m, const Word& w) -> VarKey {
    if (mode == Mode::Single) return VarKey{VarKey::WordVar, 0, w};
    const std::vector<Word> ks = chain_keys(w);
    if (ks.empty()) return VarKey{VarKey::Full, m, w};
    const VarKey k0{VarKey::Chain, 0, ks[0]};
    for (std::size_t i = 1; i < ks.size(); ++i)
      uf.unite(k0, VarKey{VarKey::Chain, 0, ks[i]});
    return k0;
  };

  // Pass 1: identifications from zeros and equalities, raw quadratic triples.
  std::vector<std::array<VarKey, 3>> raw_quads;
  for (int m : polys) {
    const PolygonConstraints& c = constraints_for(m);
    for (const Word& w : c.zeros) uf.unite(key_of(m, w), zero_key());
    for (const auto& [a, b] : c.equalities) uf.unite(key_of(m, a), key_of(m, b));
    for (const auto& [t, u, v] : quad_triples(m, c))
      raw_quads.push_back({key_of(m, t), key_of(m, u), key_of(m, v)});
  }

  // Resolve through the union-find and deduplicate.
  std::vector<std::array<VarKey, 3>> quad_keys;
  std::set<std::array<VarKey, 3>> seen;
  for (const auto& [t, u, v] : raw_quads) {
    VarKey rt = uf.find(t), ru = uf.find(u), rv = uf.find(v);
    if (rv < ru) std::swap(ru, rv);
    const std::array<VarKey, 3> sig{rt, ru, rv};
    if (seen.insert(sig).second) quad_keys.push_back(sig);
  }

  // Positivity rows, coefficients accumulated per resolved variable.
  std::set<VarKey> var_set;
  struct RawRow {
    int m, oi;
    std::map<VarKey, long long> coeffs;
  };
  std::vector<RawRow> raw_rows;
  for (int m : polys) {
    const PolygonData& p = polygon(m);
    const std::size_t nw = p.words().reps.size();
    const std::size_t no = p.outcomes().reps.size();
    for (std::size_t oi = 0; oi < no; ++oi) {
      RawRow row;
      row.m = m;
      row.oi = static_cast<int>(oi);
      for (std::size_t wi = 0; wi < nw; ++wi) {
        const VarKey k = uf.find(key_of(m, p.words().reps[wi]));
        if (k == zero_key()) continue;
        const long long c = p.R()[wi][oi];
        if (c != 0) row.coeffs[k] += c;
      }
      for (const auto& [k, c] : row.coeffs) var_set.insert(k);
      raw_rows.push_back(std::move(row));
    }
  }
  for (const auto& q : quad_keys)
    for (const VarKey& k : q) var_set.insert(k);

  model.vars.assign(var_set.begin(), var_set.end());  // set iterates sorted

  for (const RawRow& raw : raw_rows) {
    ModelRow row;
    row.polygon_m = raw.m;
    row.orbit_index = raw.oi;
    for (const auto& [k, c] : raw.coeffs) {
      if (c == 0) continue;
      row.coeffs.emplace_back(model.var_index(k), c);
    }
    model.rows.push_back(std::move(row));
  }
  for (const auto& [t, u, v] : quad_keys)
    model.quads.push_back({model.var_index(t), model.var_index(u), model.var_index(v)});

  Word two_point = parse_word("jj" + std::string(static_cast<std::size_t>(n - 2), '0'));
  const VarKey obj_key = uf.find(key_of(n, canonical_word(two_point)));
  if (obj_key == zero_key())
    throw std::logic_error("two-point correlator identified with zero");
  model.obj = model.var_index(obj_key);
  if (model.obj < 0) throw std::logic_error("objective variable missing from model");
  return model;
}

std::vector<CrossLink> cross_links(int n) {
  std::map<Word, std::vector<std::pair<int, Word>>> groups;
  for (int m = 3; m <= n; ++m) {
    const WordOrbits orbits = enumerate_word_orbits(m);
    for (const Word& w : orbits.reps)
      for (const Word& pat : chain_keys(w)) groups[pat].emplace_back(m, w);
  }
  std::vector<CrossLink> out;
  for (auto& [pat, members] : groups) {
    bool cross_size = false;
    for (const auto& [m, w] : members)
      if (m != members.front().first) cross_size = true;
    if (!cross_size) continue;
    out.push_back(CrossLink{pat, std::move(members)});
  }
  return out;
}

} // namespace opinf
