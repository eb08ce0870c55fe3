#pragma once

#include "opinf/chain.hpp"
#include "opinf/words.hpp"

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace opinf {

// --- per-polygon constraint classification ---------------------------------

enum class BlockPolicy {
  // Blocks read from the canonical display string without wraparound; words
  // whose support is a single cyclic block keep their cyclic factorization.
  // This is the convention behind the published constraint counts.
  Display,
  // Blocks are the maximal cyclic runs (source-disjointness taken literally
  // on the polygon).
  Cyclic,
};

struct PolygonConstraints {
  int n = 0;
  BlockPolicy policy = BlockPolicy::Display;
  std::vector<Word> zeros;                        // orbit reps forced to zero
  std::vector<std::pair<Word, Word>> equalities;  // (member, class representative)
  // Factorization classes keyed by the multiset of canonical block patterns.
  std::map<std::vector<Word>, std::vector<Word>> classes;

  std::size_t linear_count() const { return zeros.size() + equalities.size(); }
  std::size_t quadratic_count() const { return classes.size(); }
};

PolygonConstraints constraints_for(int n, BlockPolicy policy = BlockPolicy::Display);

// One representative factorization per class: (target, factor, factor) as
// canonical words of polygon n.  Classes with three or more blocks chain
// through the rest-word obtained by deleting the split block.
std::vector<std::array<Word, 3>> quad_triples(int n, const PolygonConstraints& c);

// --- variable identification across polygons --------------------------------

struct VarKey {
  enum Kind : std::uint8_t { Chain = 0, Full = 1, WordVar = 2, Zero = 3 };
  Kind kind = Zero;
  int m = 0;  // polygon size; used by Full only
  Word w;     // chain pattern (Chain), word rep (Full, WordVar)

  auto operator<=>(const VarKey&) const = default;
  std::string str() const;
};

VarKey zero_key();

class KeyUnionFind {
 public:
  VarKey find(const VarKey& k) const;
  void unite(const VarKey& a, const VarKey& b);

 private:
  // Zero stays a root; among non-zero roots the lexicographic minimum wins.
  mutable std::map<VarKey, VarKey> parent_;
};

// --- optimization model ------------------------------------------------------

enum class Mode { Single, Cumulative };

std::string mode_name(Mode m);

struct ModelRow {
  int polygon_m = 0;    // polygon the row came from
  int orbit_index = 0;  // outcome orbit index within that polygon
  // 1 + sum coeffs * x >= 0, variables by index into Model::vars.
  std::vector<std::pair<int, long long>> coeffs;
};

struct Model {
  int n = 0;
  Mode mode = Mode::Single;
  std::vector<VarKey> vars;               // sorted ascending
  std::vector<ModelRow> rows;
  std::vector<std::array<int, 3>> quads;  // x[t] = x[u] * x[v]
  int obj = -1;                           // index of the two-point correlator
  KeyUnionFind uf;

  int var_index(const VarKey& resolved) const;
  long long coeff(int row, int var) const;
};

Model build_model(int n, Mode mode);

// --- cross-polygon pattern links ---------------------------------------------

struct CrossLink {
  Word pattern;                               // canonical chain pattern
  std::vector<std::pair<int, Word>> members;  // (polygon size, word rep)
};

// Chain patterns shared by words of different polygon sizes up to n; these
// are the identifications that make the cumulative model consistent.
std::vector<CrossLink> cross_links(int n);

} // namespace opinf
