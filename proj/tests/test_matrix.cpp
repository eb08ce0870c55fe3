#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "expected_data.hpp"
#include "test_util.hpp"

#include "opinf/polygon.hpp"
#include "opinf/words.hpp"

#include <numeric>
#include <string>
#include <vector>

using namespace opinf;

TEST_CASE("published matrices are reproduced exactly") {
  const CorrelatorMatrix m3 = build_matrix(3);
  CHECK(m3.entries == expected::kMatrix3);
  REQUIRE(m3.row_labels.size() == 3);
  CHECK(m3.row_labels[0] == "1");
  CHECK(m3.col_labels == std::vector<std::string>{"000", "001", "012"});

  const CorrelatorMatrix m4 = build_matrix(4);
  CHECK(m4.entries == expected::kMatrix4);
  REQUIRE(m4.row_labels.size() == 7);
  CHECK(m4.row_labels[0] == "1");
}

TEST_CASE("matrix layout: labels match the orbit enumerations") {
  for (int n = 3; n <= 5; ++n) {
    CAPTURE(n);
    const CorrelatorMatrix m = build_matrix(n);
    const PolygonData& pd = polygon(n);
    REQUIRE(m.row_labels.size() == pd.words().reps.size() + 1);
    REQUIRE(m.col_labels.size() == pd.outcomes().reps.size());
    for (std::size_t i = 0; i < pd.words().reps.size(); ++i)
      CHECK(m.row_labels[i + 1] == display(pd.words().reps[i]));
    for (std::size_t j = 0; j < pd.outcomes().reps.size(); ++j)
      CHECK(m.col_labels[j] == outcome_display(pd.outcomes().reps[j]));
    // first row: outcome orbit sizes, summing to 4^n
    REQUIRE(m.entries.size() == m.row_labels.size());
    long long total = 0;
    for (std::size_t j = 0; j < m.entries[0].size(); ++j) {
      CHECK(m.entries[0][j] == pd.outcomes().sizes[j]);
      total += m.entries[0][j];
    }
    CHECK(total == (1LL << (2 * n)));
  }
}

TEST_CASE("M agrees with brute-force character sums") {
  for (int n = 3; n <= 5; ++n) {
    CAPTURE(n);
    const PolygonData& pd = polygon(n);
    const auto brute = oracle::brute_M(n, pd.words().reps, pd.outcomes().reps);
    CHECK(pd.M() == brute);
  }
}

TEST_CASE("R is the exact integer rescaling of M") {
  for (int n = 3; n <= 6; ++n) {
    CAPTURE(n);
    const PolygonData& pd = polygon(n);
    const auto& m = pd.M();
    const auto& r = pd.R();
    REQUIRE(r.size() == m.size());
    for (std::size_t w = 0; w < m.size(); ++w) {
      for (std::size_t o = 0; o < m[w].size(); ++o) {
        const long long num = pd.words().sizes[w] * m[w][o];
        const long long den = pd.outcomes().sizes[o];
        REQUIRE(num % den == 0);
        CHECK(r[w][o] == num / den);
      }
    }
  }
}

TEST_CASE("rows of M are orthogonal to the normalization") {
  // summing a surviving word's character over all outcomes gives zero, so
  // every M row must sum to zero across orbit columns
  for (int n = 3; n <= 7; ++n) {
    CAPTURE(n);
    const PolygonData& pd = polygon(n);
    for (const auto& row : pd.M()) {
      long long sum = std::accumulate(row.begin(), row.end(), 0LL);
      CHECK(sum == 0);
    }
  }
}

TEST_CASE("column sums of R take exactly two values") {
  // Fourier inversion at the symmetrized all-equal point mass: the column of
  // the all-equal orbit sums to 4^(n-1) - 1, every other column to -1.
  for (int n = 3; n <= 7; ++n) {
    CAPTURE(n);
    const PolygonData& pd = polygon(n);
    const auto& r = pd.R();
    for (std::size_t o = 0; o < pd.outcomes().reps.size(); ++o) {
      long long sum = 0;
      for (std::size_t w = 0; w < r.size(); ++w) sum += r[w][o];
      const Word& rep = pd.outcomes().reps[o];
      const bool all_equal =
          std::all_of(rep.begin(), rep.end(), [&](std::int8_t c) { return c == rep[0]; });
      CHECK(sum == (all_equal ? (1LL << (2 * (n - 1))) - 1 : -1));
    }
  }
}

TEST_CASE("the full matrix is invertible") {
  // words + normalization vs outcome orbits is square, and the basis change
  // must lose nothing: exact determinant is nonzero
  for (int n = 3; n <= 6; ++n) {
    CAPTURE(n);
    const CorrelatorMatrix m = build_matrix(n);
    REQUIRE(m.entries.size() == m.col_labels.size());
    std::vector<std::vector<oracle::Rational>> q;
    for (const auto& row : m.entries) {
      std::vector<oracle::Rational> qr;
      for (long long v : row) qr.emplace_back(v);
      q.push_back(std::move(qr));
    }
    CHECK(oracle::determinant(std::move(q)) != 0);
  }
}

TEST_CASE("word_index finds every rep and rejects strangers") {
  const PolygonData& pd = polygon(4);
  for (std::size_t i = 0; i < pd.words().reps.size(); ++i)
    CHECK(pd.word_index(pd.words().reps[i]) == static_cast<int>(i));
  CHECK(pd.word_index(parse_word("jjjk")) == -1);  // vanishing, not a rep
}
