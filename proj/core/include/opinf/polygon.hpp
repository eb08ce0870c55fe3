#pragma once

#include "opinf/words.hpp"

#include <vector>

namespace opinf {

// Precomputed orbit data for the n-gon inflation.  M[w][o] is the sum of the
// product character of word rep w over the members of outcome orbit o; the
// positivity coefficients are R[w][o] = |word orbit| * M[w][o] / |outcome
// orbit| (always an exact integer), so that for symmetric strategies
//   p(rep_o) = 4^{-n} (1 + sum_w R[w][o] E_w) >= 0.
class PolygonData {
 public:
  explicit PolygonData(int n, int threads = 0);

  int n() const { return n_; }
  const WordOrbits& words() const { return words_; }
  const OutcomeOrbits& outcomes() const { return outcomes_; }
  const std::vector<std::vector<long long>>& M() const { return m_; }
  const std::vector<std::vector<long long>>& R() const { return r_; }

  // Index of a canonical word among the orbit reps; -1 if not present.
  int word_index(const Word& canonical) const;

 private:
  int n_;
  WordOrbits words_;
  OutcomeOrbits outcomes_;
  std::vector<std::vector<long long>> m_;
  std::vector<std::vector<long long>> r_;
};

// Shared per-n cache (thread-safe).  Data for each n is built on first use.
const PolygonData& polygon(int n);

// The published change-of-basis matrix: first row lists the outcome orbit
// sizes (normalization), the following rows are M indexed by word orbit.
struct CorrelatorMatrix {
  int n = 0;
  std::vector<std::string> row_labels;   // "1" then word displays
  std::vector<std::string> col_labels;   // outcome rep displays
  std::vector<std::vector<long long>> entries;
};

CorrelatorMatrix build_matrix(int n);

} // namespace opinf
