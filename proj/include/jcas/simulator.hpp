#ifndef JCAS_SIMULATOR_HPP_
#define JCAS_SIMULATOR_HPP_

// Monte-Carlo sampling of (X, S1, S2, Y1, Y2) with the optimal per-letter
// estimators applied to every draw.
//
// Stream contract: the n samples are split into shards of kShardSize draws.
// Shard k uses Rng(derive_seed(seed, k)) and draws, per sample, one uniform
// each for (S1,S2), X and (Y1,Y2), in that order, by inverse CDF over the
// flattened tables. Shards are merged in index order, so results do not
// depend on the number of worker threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "jcas/channel.hpp"
#include "jcas/errors.hpp"
#include "jcas/estimators.hpp"
#include "jcas/random.hpp"
#include "jcas/regions.hpp"

namespace jcas {

inline constexpr std::size_t kShardSize = 1 << 16;

struct EmpiricalStats {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double mean_d1 = 0, mean_d2 = 0;
  double var_d1 = 0, var_d2 = 0; ///< sample variances of the per-letter distortions
  std::vector<std::uint64_t> counts; ///< over (x, s1, s2, y1, y2), row-major
  std::vector<double> freq;          ///< counts / n

  bool operator==(const EmpiricalStats&) const = default;
};

namespace detail {

/// Cumulative table; entries with zero mass can never be selected.
class CategoricalSampler {
public:
  explicit CategoricalSampler(const double* p, std::size_t n) : cdf_(n) {
    double acc = 0.0;
    last_ = 0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += p[i];
      cdf_[i] = acc;
      if (p[i] > 0.0) last_ = i;
    }
  }

  std::size_t operator()(double u) const {
    const double target = u * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    const auto i = static_cast<std::size_t>(it - cdf_.begin());
    return std::min(i, last_);
  }

private:
  std::vector<double> cdf_;
  std::size_t last_;
};

struct ShardResult {
  std::vector<std::uint64_t> counts;
  double sum_d1 = 0, sum_d2 = 0, sq_d1 = 0, sq_d2 = 0;
};

} // namespace detail

inline EmpiricalStats sample_run(const ChannelSpec& spec, const std::vector<double>& p_x,
                                 std::size_t n, std::uint64_t seed, std::size_t threads = 1) {
  if (n < 1) throw DegenerateInput("sample count must be at least 1");
  require_valid(spec);
  detail::require_input(spec, p_x);
  const auto& a = spec.sizes;

  const auto est1 = synthesize_estimator(spec, p_x, 1);
  const auto est2 = synthesize_estimator(spec, p_x, 2);
  const detail::CategoricalSampler state(spec.state_dist.data(), spec.state_dist.size());
  const detail::CategoricalSampler input(p_x.data(), p_x.size());
  std::vector<detail::CategoricalSampler> outputs;
  outputs.reserve(a.x * a.s1 * a.s2);
  for (std::size_t x = 0; x < a.x; ++x)
    for (std::size_t s1 = 0; s1 < a.s1; ++s1)
      for (std::size_t s2 = 0; s2 < a.s2; ++s2)
        outputs.emplace_back(spec.kernel.data() + spec.kernel_offset(x, s1, s2), a.y1 * a.y2);

  const std::size_t cells = a.x * a.s1 * a.s2 * a.y1 * a.y2;
  const std::size_t shards = (n + kShardSize - 1) / kShardSize;
  std::vector<detail::ShardResult> results(shards);
  detail::parallel_for(shards, threads, [&](std::size_t k) {
    auto& res = results[k];
    res.counts.assign(cells, 0);
    Rng rng(derive_seed(seed, k));
    const std::size_t count = std::min(kShardSize, n - k * kShardSize);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t s = state(rng.uniform());
      const std::size_t s1 = s / a.s2, s2 = s % a.s2;
      const std::size_t x = input(rng.uniform());
      const std::size_t y = outputs[(x * a.s1 + s1) * a.s2 + s2](rng.uniform());
      const std::size_t y1 = y / a.y2, y2 = y % a.y2;
      ++res.counts[(((x * a.s1 + s1) * a.s2 + s2) * a.y1 + y1) * a.y2 + y2];
      const double e1 = spec.distortion(1, s1, est1(x, y1, y2));
      const double e2 = spec.distortion(2, s2, est2(x, y1, y2));
      res.sum_d1 += e1;
      res.sum_d2 += e2;
      res.sq_d1 += e1 * e1;
      res.sq_d2 += e2 * e2;
    }
  });

  EmpiricalStats st;
  st.n = n;
  st.seed = seed;
  st.counts.assign(cells, 0);
  double s1 = 0, s2 = 0, q1 = 0, q2 = 0;
  for (const auto& r : results) {
    for (std::size_t c = 0; c < cells; ++c) st.counts[c] += r.counts[c];
    s1 += r.sum_d1;
    s2 += r.sum_d2;
    q1 += r.sq_d1;
    q2 += r.sq_d2;
  }
  const double nn = static_cast<double>(n);
  st.mean_d1 = s1 / nn;
  st.mean_d2 = s2 / nn;
  st.var_d1 = std::max(0.0, q1 / nn - st.mean_d1 * st.mean_d1);
  st.var_d2 = std::max(0.0, q2 / nn - st.mean_d2 * st.mean_d2);
  st.freq.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) st.freq[c] = static_cast<double>(st.counts[c]) / nn;
  return st;
}

/// Analytic P(x, s1, s2, y1, y2), same layout as EmpiricalStats::freq.
inline std::vector<double> analytic_joint(const ChannelSpec& spec, const std::vector<double>& p_x) {
  const auto& a = spec.sizes;
  std::vector<double> out(a.x * a.s1 * a.s2 * a.y1 * a.y2);
  const std::size_t row = a.y1 * a.y2;
  for (std::size_t x = 0; x < a.x; ++x)
    for (std::size_t s1 = 0; s1 < a.s1; ++s1)
      for (std::size_t s2 = 0; s2 < a.s2; ++s2) {
        const std::size_t off = ((x * a.s1 + s1) * a.s2 + s2) * row;
        for (std::size_t k = 0; k < row; ++k)
          out[off + k] = p_x[x] * spec.state(s1, s2) * spec.kernel[spec.kernel_offset(x, s1, s2) + k];
      }
  return out;
}

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("distributions differ in size");
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return 0.5 * tv;
}

struct DistortionCheck {
  double analytic = 0;
  double empirical = 0;
  double std_error = 0;
  bool pass = false;
};

struct VerificationReport {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double tol = 0;
  DistortionCheck d1, d2;
  double tv_distance = 0;
  bool pass = false;
};

inline VerificationReport verify_distortion(const ChannelSpec& spec, const std::vector<double>& p_x,
                                            std::size_t n, std::uint64_t seed, double tol,
                                            std::size_t threads = 1) {
  const auto st = sample_run(spec, p_x, n, seed, threads);
  const auto exact = optimal_distortions(spec, p_x);
  const double nn = static_cast<double>(n);
  VerificationReport rep;
  rep.n = n;
  rep.seed = seed;
  rep.tol = tol;
  rep.d1 = {exact.d1, st.mean_d1, std::sqrt(st.var_d1 / nn), false};
  rep.d2 = {exact.d2, st.mean_d2, std::sqrt(st.var_d2 / nn), false};
  rep.d1.pass = std::abs(rep.d1.empirical - rep.d1.analytic) <= tol;
  rep.d2.pass = std::abs(rep.d2.empirical - rep.d2.analytic) <= tol;
  rep.tv_distance = total_variation(st.freq, analytic_joint(spec, p_x));
  rep.pass = rep.d1.pass && rep.d2.pass;
  return rep;
}

} // namespace jcas

#endif // JCAS_SIMULATOR_HPP_
