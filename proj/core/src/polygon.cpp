#include "opinf/polygon.hpp"

#include "opinf/common.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

namespace opinf {

PolygonData::PolygonData(int n, int threads)
    : n_(n),
      words_(enumerate_word_orbits(n)),
      outcomes_(enumerate_outcome_orbits(n)) {
  const std::size_t nw = words_.reps.size();
  const std::size_t no = outcomes_.reps.size();
  const std::uint32_t total = 1u << (2 * n);
  m_.assign(nw, std::vector<long long>(no, 0));

  // Decode all outcomes once; the character product for word w at outcome x
  // is accumulated into the bucket of x's orbit.
  std::vector<std::int8_t> digits(static_cast<std::size_t>(total) * n);
  for (std::uint32_t code = 0; code < total; ++code) {
    std::uint32_t c = code;
    for (int i = n - 1; i >= 0; --i) {
      digits[static_cast<std::size_t>(code) * n + i] = static_cast<std::int8_t>(c & 3u);
      c >>= 2;
    }
  }

  auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t wi = begin; wi < end; ++wi) {
      const Word& w = words_.reps[wi];
      auto& row = m_[wi];
      for (std::uint32_t code = 0; code < total; ++code) {
        const std::int8_t* x = &digits[static_cast<std::size_t>(code) * n];
        int v = 1;
        for (int i = 0; i < n; ++i)
          if (w[static_cast<std::size_t>(i)] != kIdentity)
            v *= kChi[static_cast<int>(x[i])][static_cast<int>(w[static_cast<std::size_t>(i)])];
        row[static_cast<std::size_t>(outcomes_.orbit_id[code])] += v;
      }
    }
  };

  const int nthreads = std::min<int>(thread_count(threads), static_cast<int>(nw));
  if (nthreads <= 1 || nw < 8) {
    fill_rows(0, nw);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (nw + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(nw, b + chunk);
      if (b >= e) break;
      pool.emplace_back(fill_rows, b, e);
    }
    for (auto& th : pool) th.join();
  }

  r_.assign(nw, std::vector<long long>(no, 0));
  for (std::size_t wi = 0; wi < nw; ++wi) {
    const long long wsz = words_.sizes[wi];
    for (std::size_t oi = 0; oi < no; ++oi) {
      const long long numer = wsz * m_[wi][oi];
      const long long osz = outcomes_.sizes[oi];
      assert(numer % osz == 0 && "positivity coefficient must be integral");
      r_[wi][oi] = numer / osz;
    }
  }
}

int PolygonData::word_index(const Word& canonical) const {
  const auto it =
      std::lower_bound(words_.reps.begin(), words_.reps.end(), canonical);
  if (it == words_.reps.end() || *it != canonical) return -1;
  return static_cast<int>(it - words_.reps.begin());
}

const PolygonData& polygon(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<PolygonData>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<PolygonData>(n);
  return *slot;
}

CorrelatorMatrix build_matrix(int n) {
  const PolygonData& p = polygon(n);
  CorrelatorMatrix m;
  m.n = n;
  m.row_labels.push_back("1");
  for (const Word& w : p.words().reps) m.row_labels.push_back(display(w));
  for (const Word& o : p.outcomes().reps) m.col_labels.push_back(outcome_display(o));
  std::vector<long long> norm(p.outcomes().sizes.begin(), p.outcomes().sizes.end());
  m.entries.push_back(std::move(norm));
  for (const auto& row : p.M()) m.entries.push_back(row);
  return m;
}

} // namespace opinf
