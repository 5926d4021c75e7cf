#ifndef JCAS_BINARY_EXAMPLE_HPP_
#define JCAS_BINARY_EXAMPLE_HPP_

// Closed-form single-message region of the binary channel with multiplicative
// Bernoulli states, Y_j = S_j * X, X ~ Bern(p), and the separation baseline
// that time-shares between the max-rate point and the zero-distortion point.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "jcas/channel.hpp"
#include "jcas/errors.hpp"
#include "jcas/format.hpp"
#include "jcas/info.hpp"
#include "jcas/regions.hpp"

namespace jcas {

struct ExamplePoint {
  double q = 0, alpha = 0, p = 0;
  double r = 0;
  double d1 = 0, d2 = 0;
};

namespace detail {

inline void require_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(name) + " must lie in [0,1]");
}

} // namespace detail

/// Secrecy term q(1-a)H_b(p) + p(1-qa)H_b(q(1-a)/(1-qa)); defined as 0 at qa = 1.
inline double lemma1_secrecy_term(double q, double alpha, double p) {
  const double qa = q * alpha;
  if (qa >= 1.0) return 0.0;
  const double ratio = std::clamp(q * (1.0 - alpha) / (1.0 - qa), 0.0, 1.0);
  return q * (1.0 - alpha) * binary_entropy(p) + p * (1.0 - qa) * binary_entropy(ratio);
}

inline ExamplePoint lemma1_point(double q, double alpha, double p) {
  detail::require_probability(q, "q");
  detail::require_probability(alpha, "alpha");
  detail::require_probability(p, "p");
  ExamplePoint e{q, alpha, p};
  e.r = std::min(lemma1_secrecy_term(q, alpha, p), q * binary_entropy(p));
  e.d1 = (1.0 - p) * std::min(q, 1.0 - q);
  e.d2 = (1.0 - p) * std::min(q * alpha, 1.0 - q * alpha);
  return e;
}

/// Points at p = k / grid_step, k = 0..grid_step.
inline std::vector<ExamplePoint> lemma1_sweep(double q, double alpha, std::size_t grid_step) {
  if (grid_step < 2) throw EmptyGrid("grid step must be at least 2");
  std::vector<ExamplePoint> out;
  out.reserve(grid_step + 1);
  for (std::size_t k = 0; k <= grid_step; ++k)
    out.push_back(lemma1_point(q, alpha, static_cast<double>(k) / static_cast<double>(grid_step)));
  return out;
}

struct BaselinePoint {
  double lambda = 0;
  ExamplePoint point; ///< p is the max-rate input p*; r, d1, d2 are the mixture
};

/// Time sharing with weight lambda on the max-rate point (p* maximizing r on
/// the p grid, ties to the smaller p) and 1 - lambda on p = 1, where
/// r = d1 = d2 = 0. Uses the same step for the p grid and the lambda grid.
inline std::vector<BaselinePoint> separation_baseline(double q, double alpha,
                                                      std::size_t lambda_grid_step) {
  const auto sweep = lemma1_sweep(q, alpha, lambda_grid_step);
  ExamplePoint best = sweep.front();
  for (const auto& e : sweep)
    if (e.r > best.r) best = e;
  std::vector<BaselinePoint> out;
  out.reserve(lambda_grid_step + 1);
  for (std::size_t k = 0; k <= lambda_grid_step; ++k) {
    const double l = static_cast<double>(k) / static_cast<double>(lambda_grid_step);
    ExamplePoint m = best;
    m.r = l * best.r;
    m.d1 = l * best.d1;
    m.d2 = l * best.d2;
    out.push_back({l, m});
  }
  return out;
}

struct CrosscheckReport {
  ExamplePoint closed_form;
  RegionPoint tensor;
  double max_deviation = 0;
  double tol = 0;
  bool pass = false;
};

/// Compares the closed form against the general single-message region
/// evaluated on the constructed channel at X ~ Bern(p).
inline CrosscheckReport crosscheck(double q, double alpha, double p, double tol) {
  CrosscheckReport rep;
  rep.closed_form = lemma1_point(q, alpha, p);
  rep.tensor = exact_region_degraded_single(make_binary_multiplicative(q, alpha), {1.0 - p, p});
  rep.max_deviation = std::max({std::abs(*rep.tensor.r - rep.closed_form.r),
                                std::abs(rep.tensor.d1 - rep.closed_form.d1),
                                std::abs(rep.tensor.d2 - rep.closed_form.d2)});
  rep.tol = tol;
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

inline void write_example_csv(std::ostream& os, const std::vector<ExamplePoint>& pts) {
  os << "q,alpha,p,r,d1,d2\n";
  for (const auto& e : pts)
    os << fmt12(e.q) << ',' << fmt12(e.alpha) << ',' << fmt12(e.p) << ',' << fmt12(e.r) << ','
       << fmt12(e.d1) << ',' << fmt12(e.d2) << '\n';
}

inline void write_baseline_csv(std::ostream& os, const std::vector<BaselinePoint>& pts) {
  os << "q,alpha,p,r,d1,d2,lambda\n";
  for (const auto& b : pts) {
    const auto& e = b.point;
    os << fmt12(e.q) << ',' << fmt12(e.alpha) << ',' << fmt12(e.p) << ',' << fmt12(e.r) << ','
       << fmt12(e.d1) << ',' << fmt12(e.d2) << ',' << fmt12(b.lambda) << '\n';
  }
}

} // namespace jcas

#endif // JCAS_BINARY_EXAMPLE_HPP_
