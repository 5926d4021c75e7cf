#ifndef JCAS_ESTIMATORS_HPP_
#define JCAS_ESTIMATORS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "jcas/channel.hpp"
#include "jcas/info.hpp"

namespace jcas {

/// Deterministic per-letter state estimator (x, y1, y2) -> shat_j.
struct EstimatorTable {
  int j = 1;
  std::size_t nx = 0, ny1 = 0, ny2 = 0;
  std::vector<std::size_t> table; ///< row-major over (x, y1, y2)

  std::size_t operator()(std::size_t x, std::size_t y1, std::size_t y2) const {
    return table[(x * ny1 + y1) * ny2 + y2];
  }

  bool operator==(const EstimatorTable&) const = default;
};

namespace detail {

inline void require_receiver(int j) {
  if (j != 1 && j != 2) throw DomainError("receiver index must be 1 or 2");
}

/// Relative slack under which two posterior costs count as a tie.
inline constexpr double kTieSlack = 1e-13;

/// argmin over shat of sum_s w[s] d_j(s, shat); ties go to the smallest index.
inline std::size_t argmin_expected_cost(const ChannelSpec& spec, int j,
                                        const std::vector<double>& w) {
  const std::size_t ns = spec.state_size(j);
  const std::size_t nhat = spec.reconstruction_size(j);
  double mass = 0.0;
  for (double v : w) mass += v;
  std::size_t best = 0;
  double best_cost = 0.0;
  for (std::size_t shat = 0; shat < nhat; ++shat) {
    double cost = 0.0;
    for (std::size_t s = 0; s < ns; ++s) cost += (w[s] / mass) * spec.distortion(j, s, shat);
    if (shat == 0 || cost < best_cost - kTieSlack * std::max(1.0, std::abs(best_cost))) {
      best = shat;
      best_cost = cost;
    }
  }
  return best;
}

/// Posterior weights P(x, s_j, y1, y2) laid out as [x][y1][y2][s_j].
inline std::vector<double> estimation_weights(const ChannelSpec& spec,
                                              const std::vector<double>& p_x, int j) {
  const auto& a = spec.sizes;
  const std::size_t ns = spec.state_size(j);
  std::vector<double> w(a.x * a.y1 * a.y2 * ns, 0.0);
  for (std::size_t x = 0; x < a.x; ++x)
    for (std::size_t s1 = 0; s1 < a.s1; ++s1)
      for (std::size_t s2 = 0; s2 < a.s2; ++s2) {
        const double ps = p_x[x] * spec.state(s1, s2);
        if (ps == 0.0) continue;
        const std::size_t sj = j == 1 ? s1 : s2;
        for (std::size_t y1 = 0; y1 < a.y1; ++y1)
          for (std::size_t y2 = 0; y2 < a.y2; ++y2)
            w[((x * a.y1 + y1) * a.y2 + y2) * ns + sj] +=
                ps * spec.channel(x, s1, s2, y1, y2);
      }
  return w;
}

inline void require_input(const ChannelSpec& spec, const std::vector<double>& p_x) {
  if (p_x.size() != spec.sizes.x)
    throw DimensionMismatch("p_x has " + std::to_string(p_x.size()) + " entries, expected " +
                            std::to_string(spec.sizes.x));
  require_distribution(p_x, "p_x");
}

} // namespace detail

/// Bayes-optimal per-letter estimator of S_j from (X, Y1, Y2) under d_j.
/// Cells of zero probability fall back to the prior-optimal reconstruction.
inline EstimatorTable synthesize_estimator(const ChannelSpec& spec,
                                           const std::vector<double>& p_x, int j) {
  detail::require_receiver(j);
  detail::require_input(spec, p_x);
  const auto& a = spec.sizes;
  const std::size_t ns = spec.state_size(j);

  std::vector<double> prior(ns, 0.0);
  for (std::size_t s1 = 0; s1 < a.s1; ++s1)
    for (std::size_t s2 = 0; s2 < a.s2; ++s2) prior[j == 1 ? s1 : s2] += spec.state(s1, s2);
  const std::size_t fallback = detail::argmin_expected_cost(spec, j, prior);

  const auto w = detail::estimation_weights(spec, p_x, j);
  EstimatorTable est{j, a.x, a.y1, a.y2, std::vector<std::size_t>(a.x * a.y1 * a.y2)};
  std::vector<double> cell(ns);
  for (std::size_t c = 0; c < est.table.size(); ++c) {
    double mass = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      cell[s] = w[c * ns + s];
      mass += cell[s];
    }
    est.table[c] = mass > 0.0 ? detail::argmin_expected_cost(spec, j, cell) : fallback;
  }
  return est;
}

/// E[d_j(S_j, est(X, Y1, Y2))] under P_X P_{S1S2} P_{Y1Y2|S1S2X}.
inline double expected_distortion(const ChannelSpec& spec, const std::vector<double>& p_x,
                                  const EstimatorTable& est, int j) {
  detail::require_receiver(j);
  detail::require_input(spec, p_x);
  const auto& a = spec.sizes;
  if (est.nx != a.x || est.ny1 != a.y1 || est.ny2 != a.y2 ||
      est.table.size() != a.x * a.y1 * a.y2)
    throw DimensionMismatch("estimator domain does not match the channel alphabets");
  const std::size_t nhat = spec.reconstruction_size(j);
  for (auto shat : est.table)
    if (shat >= nhat) throw DimensionMismatch("estimator output outside reconstruction alphabet");

  const std::size_t ns = spec.state_size(j);
  const auto w = detail::estimation_weights(spec, p_x, j);
  double d = 0.0;
  for (std::size_t c = 0; c < est.table.size(); ++c)
    for (std::size_t s = 0; s < ns; ++s)
      d += w[c * ns + s] * spec.distortion(j, s, est.table[c]);
  return d;
}

struct DistortionPair {
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Both distortions under the optimal estimators; a function of P_X alone.
inline DistortionPair optimal_distortions(const ChannelSpec& spec,
                                          const std::vector<double>& p_x) {
  return {expected_distortion(spec, p_x, synthesize_estimator(spec, p_x, 1), 1),
          expected_distortion(spec, p_x, synthesize_estimator(spec, p_x, 2), 2)};
}

} // namespace jcas

#endif // JCAS_ESTIMATORS_HPP_
