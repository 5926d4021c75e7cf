#ifndef JCAS_REGIONS_HPP_
#define JCAS_REGIONS_HPP_

// Secrecy-distortion bounds evaluated at a fixed input design, discretized
// unions over designs, and Pareto-frontier extraction.
//
// Two message settings are covered:
//   * partial secrecy (ps_*): rates (R1, R2), only M2 must be hidden;
//   * single secure message (single_*): one rate R.
// Distortions always come from the optimal per-letter estimators, so they
// depend on P_X only.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "jcas/channel.hpp"
#include "jcas/errors.hpp"
#include "jcas/estimators.hpp"
#include "jcas/format.hpp"
#include "jcas/info.hpp"
#include "jcas/random.hpp"

namespace jcas {

enum class Mode {
  ps_inner,
  ps_outer,
  ps_exact_deg,
  ps_exact_rev,
  single_inner,
  single_outer,
  single_exact_deg,
  single_exact_rev,
};

inline constexpr Mode kAllModes[] = {Mode::ps_inner,         Mode::ps_outer,
                                     Mode::ps_exact_deg,     Mode::ps_exact_rev,
                                     Mode::single_inner,     Mode::single_outer,
                                     Mode::single_exact_deg, Mode::single_exact_rev};

inline std::string to_string(Mode m) {
  switch (m) {
  case Mode::ps_inner: return "ps_inner";
  case Mode::ps_outer: return "ps_outer";
  case Mode::ps_exact_deg: return "ps_exact_deg";
  case Mode::ps_exact_rev: return "ps_exact_rev";
  case Mode::single_inner: return "single_inner";
  case Mode::single_outer: return "single_outer";
  case Mode::single_exact_deg: return "single_exact_deg";
  case Mode::single_exact_rev: return "single_exact_rev";
  }
  return "?";
}

inline std::optional<Mode> parse_mode(const std::string& s) {
  for (Mode m : kAllModes)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

inline bool is_partial_secrecy(Mode m) {
  return m == Mode::ps_inner || m == Mode::ps_outer || m == Mode::ps_exact_deg ||
         m == Mode::ps_exact_rev;
}

inline bool is_outer(Mode m) { return m == Mode::ps_outer || m == Mode::single_outer; }

/// Modes whose search ranges over auxiliary channels in addition to P_X.
inline bool uses_v(Mode m) { return is_partial_secrecy(m) || m == Mode::single_inner; }
inline bool uses_u(Mode m) { return m == Mode::ps_inner; }

struct RegionPoint {
  Mode mode = Mode::single_outer;
  std::optional<double> r1; ///< partial-secrecy modes only
  std::optional<double> r2; ///< partial-secrecy modes only
  std::optional<double> r;  ///< single-message modes only
  double d1 = 0.0;
  double d2 = 0.0;
  std::string design_tag;

  std::vector<double> rates() const {
    std::vector<double> out;
    if (r1) out.push_back(*r1);
    if (r2) out.push_back(*r2);
    if (r) out.push_back(*r);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Cardinality bounds on the auxiliaries

/// min{|X|, |Y1||S1|, |Y2||S2|}
inline std::size_t cardinality_base(const ChannelSpec& spec) {
  const auto& a = spec.sizes;
  return std::min({a.x, a.y1 * a.s1, a.y2 * a.s2});
}

struct CardinalityCaps {
  std::size_t u = 1; ///< 1 when U is not used
  std::size_t v = 0; ///< 0 when V is not used
};

inline CardinalityCaps cardinality_caps(const ChannelSpec& spec, Mode m) {
  const std::size_t k = cardinality_base(spec);
  switch (m) {
  case Mode::ps_inner: return {k + 2, (k + 2) * (k + 1)};
  case Mode::ps_outer:
  case Mode::ps_exact_deg:
  case Mode::single_inner: return {1, k + 1};
  case Mode::ps_exact_rev: return {1, k};
  default: return {1, 0};
  }
}

namespace detail {

inline void check_caps(const ChannelSpec& spec, const InputDesign& design, Mode m) {
  const auto caps = cardinality_caps(spec, m);
  if (design.p_v_given_x && design.nv() > caps.v)
    throw CardinalityExceeded("|V| = " + std::to_string(design.nv()) + " exceeds " +
                              std::to_string(caps.v) + " for " + to_string(m));
  if (design.p_u_given_v && design.nu() > caps.u)
    throw CardinalityExceeded("|U| = " + std::to_string(design.nu()) + " exceeds " +
                              std::to_string(caps.u) + " for " + to_string(m));
}

inline void require_physically_degraded(const ChannelSpec& spec) {
  const auto c = classify_degradedness(spec);
  if (!is_physically_degraded(c))
    throw NotDegraded("channel is not physically degraded (residual " +
                      fmt12(c.residual_phys) + ")");
}

inline void require_reversely_degraded(const ChannelSpec& spec) {
  const auto c = classify_degradedness(spec);
  if (!is_reversely_degraded(c))
    throw NotDegraded("channel is not reversely physically degraded (residual " +
                      fmt12(c.residual_rev) + ")");
}

/// Small negative values from cancellation are clamped so emitted rates
/// stay nonnegative; this is not the [.]^+ of the bounds.
inline double clamp_rate(double r) { return r < 0.0 ? 0.0 : r; }

} // namespace detail

// ---------------------------------------------------------------------------
// Information terms

/// Every information quantity used by the bounds, for one joint over
/// (U, V, X, S1, S2, Y1, Y2).
struct InformationTerms {
  double i_u_y1_given_s1 = 0;    ///< I(U;Y1|S1)
  double i_v_y1_given_s1 = 0;    ///< I(V;Y1|S1)
  double i_v_y2_given_s2 = 0;    ///< I(V;Y2|S2)
  double i_v_y1_given_s1u = 0;   ///< I(V;Y1|S1,U)
  double i_v_y2_given_s2u = 0;   ///< I(V;Y2|S2,U)
  double h_y1_given_y2s2v = 0;   ///< H(Y1|Y2,S2,V)
  double h_y1_given_y2s2 = 0;    ///< H(Y1|Y2,S2)
  double h_y1s1_given_y2s2 = 0;  ///< H(Y1,S1|Y2,S2)
  double h_s1_given_y1y2s2v = 0; ///< H(S1|Y1,Y2,S2,V)

  /// [I(V;Y1|S1,U) - I(V;Y2|S2,U)]^+ + H(Y1|Y2,S2,V)
  double r2_prime() const {
    return pos_part(i_v_y1_given_s1u - i_v_y2_given_s2u) + h_y1_given_y2s2v;
  }
  /// [I(V;Y1|S1) - I(V;Y2|S2)]^+ + H(Y1|Y2,S2,V)
  double r_double_prime() const {
    return pos_part(i_v_y1_given_s1 - i_v_y2_given_s2) + h_y1_given_y2s2v;
  }
  /// H(Y1,S1|Y2,S2) - H(S1|Y1,Y2,S2,V)
  double outer_secrecy_term() const { return h_y1s1_given_y2s2 - h_s1_given_y1y2s2v; }
};

inline InformationTerms information_terms(const JointDistribution& j) {
  using enum Var;
  InformationTerms t;
  t.i_u_y1_given_s1 = mutual_information(j, {U}, {Y1}, {S1});
  t.i_v_y1_given_s1 = mutual_information(j, {V}, {Y1}, {S1});
  t.i_v_y2_given_s2 = mutual_information(j, {V}, {Y2}, {S2});
  t.i_v_y1_given_s1u = mutual_information(j, {V}, {Y1}, {S1, U});
  t.i_v_y2_given_s2u = mutual_information(j, {V}, {Y2}, {S2, U});
  t.h_y1_given_y2s2v = entropy(j, {Y1}, {Y2, S2, V});
  t.h_y1_given_y2s2 = entropy(j, {Y1}, {Y2, S2});
  t.h_y1s1_given_y2s2 = entropy(j, {Y1, S1}, {Y2, S2});
  t.h_s1_given_y1y2s2v = entropy(j, {S1}, {Y1, Y2, S2, V});
  return t;
}

/// Number of evenly spaced R1 values per design in partial-secrecy modes.
inline constexpr std::size_t kR1GridSize = 33;

namespace detail {

/// R1 on an even grid over [0, r1_max], R2 = min{cap, total - R1}.
inline std::vector<RegionPoint> rate_tradeoff(Mode m, double r1_max, double r2_cap,
                                              double total, DistortionPair d,
                                              const std::string& tag) {
  std::vector<RegionPoint> out;
  out.reserve(kR1GridSize);
  r1_max = clamp_rate(r1_max);
  for (std::size_t i = 0; i < kR1GridSize; ++i) {
    const double r1 = r1_max * static_cast<double>(i) / static_cast<double>(kR1GridSize - 1);
    RegionPoint p;
    p.mode = m;
    p.r1 = r1;
    p.r2 = clamp_rate(std::min(r2_cap, total - r1));
    p.d1 = d.d1;
    p.d2 = d.d2;
    p.design_tag = tag;
    out.push_back(std::move(p));
  }
  return out;
}

inline RegionPoint single_point(Mode m, double r, DistortionPair d, const std::string& tag) {
  RegionPoint p;
  p.mode = m;
  p.r = clamp_rate(r);
  p.d1 = d.d1;
  p.d2 = d.d2;
  p.design_tag = tag;
  return p;
}

inline InputDesign without_u(InputDesign design) {
  design.p_u_given_v.reset();
  return design;
}

/// Evaluates the bound for `m` without precondition checks.
inline std::vector<RegionPoint> evaluate_unchecked(Mode m, const ChannelSpec& spec,
                                                   const InputDesign& design,
                                                   const DistortionPair& d,
                                                   const std::string& tag) {
  switch (m) {
  case Mode::ps_inner: {
    const auto t = information_terms(build_joint(spec, design));
    return rate_tradeoff(m, t.i_u_y1_given_s1, t.r2_prime(), t.i_v_y1_given_s1, d, tag);
  }
  case Mode::ps_outer:
  case Mode::ps_exact_deg: {
    const auto t = information_terms(build_joint(spec, without_u(design)));
    return rate_tradeoff(m, t.i_v_y1_given_s1, t.outer_secrecy_term(), t.i_v_y1_given_s1, d,
                         tag);
  }
  case Mode::ps_exact_rev: {
    const auto t = information_terms(build_joint(spec, without_u(design)));
    return rate_tradeoff(m, t.i_v_y1_given_s1, t.h_y1_given_y2s2, t.i_v_y1_given_s1, d, tag);
  }
  case Mode::single_inner: {
    const auto t = information_terms(build_joint(spec, without_u(design)));
    return {single_point(m, std::min(t.r_double_prime(), t.i_v_y1_given_s1), d, tag)};
  }
  case Mode::single_outer:
  case Mode::single_exact_deg: {
    // V = X
    const auto t = information_terms(build_joint(spec, InputDesign{design.p_x, {}, {}}));
    return {single_point(m, std::min(t.outer_secrecy_term(), t.i_v_y1_given_s1), d, tag)};
  }
  case Mode::single_exact_rev: {
    const auto t = information_terms(build_joint(spec, InputDesign{design.p_x, {}, {}}));
    return {single_point(m, std::min(t.h_y1_given_y2s2, t.i_v_y1_given_s1), d, tag)};
  }
  }
  return {};
}

inline std::vector<RegionPoint> evaluate_checked(Mode m, const ChannelSpec& spec,
                                                 const InputDesign& design,
                                                 const std::string& tag) {
  check_caps(spec, design, m);
  return evaluate_unchecked(m, spec, design, optimal_distortions(spec, design.p_x), tag);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Per-design bounds

/// Partial-secrecy inner bound: R1 <= I(U;Y1|S1), R2 <= min{R2', I(V;Y1|S1) - R1}.
inline std::vector<RegionPoint> inner_bound_ps(const ChannelSpec& spec,
                                               const InputDesign& design,
                                               const std::string& tag = "design") {
  return detail::evaluate_checked(Mode::ps_inner, spec, design, tag);
}

/// Partial-secrecy outer bound (U unused):
/// R1 <= I(V;Y1|S1), R2 <= min{H(Y1,S1|Y2,S2) - H(S1|Y1,Y2,S2,V), I(V;Y1|S1) - R1}.
inline std::vector<RegionPoint> outer_bound_ps(const ChannelSpec& spec,
                                               const InputDesign& design,
                                               const std::string& tag = "design") {
  return detail::evaluate_checked(Mode::ps_outer, spec, detail::without_u(design), tag);
}

/// Exact partial-secrecy region of a physically degraded channel: the outer
/// bound formulas with constant U.
inline std::vector<RegionPoint> exact_region_degraded_ps(const ChannelSpec& spec,
                                                         const InputDesign& design,
                                                         const std::string& tag = "design") {
  detail::require_physically_degraded(spec);
  return detail::evaluate_checked(Mode::ps_exact_deg, spec, detail::without_u(design), tag);
}

/// Exact partial-secrecy region of a reversely physically degraded channel:
/// R2 <= min{H(Y1|Y2,S2), I(V;Y1|S1) - R1}.
inline std::vector<RegionPoint> exact_region_reverse_ps(const ChannelSpec& spec,
                                                        const InputDesign& design,
                                                        const std::string& tag = "design") {
  detail::require_reversely_degraded(spec);
  return detail::evaluate_checked(Mode::ps_exact_rev, spec, detail::without_u(design), tag);
}

/// Single-message inner bound: R <= min{R'', I(V;Y1|S1)}.
inline RegionPoint inner_bound_single(const ChannelSpec& spec, const InputDesign& design,
                                      const std::string& tag = "design") {
  return detail::evaluate_checked(Mode::single_inner, spec, detail::without_u(design), tag)
      .front();
}

/// Single-message outer bound:
/// R <= min{H(Y1,S1|Y2,S2) - H(S1|Y1,Y2,S2,X), I(X;Y1|S1)}.
inline RegionPoint outer_bound_single(const ChannelSpec& spec, const std::vector<double>& p_x,
                                      const std::string& tag = "design") {
  return detail::evaluate_checked(Mode::single_outer, spec, InputDesign{p_x, {}, {}}, tag)
      .front();
}

inline RegionPoint exact_region_degraded_single(const ChannelSpec& spec,
                                                const std::vector<double>& p_x,
                                                const std::string& tag = "design") {
  detail::require_physically_degraded(spec);
  return detail::evaluate_checked(Mode::single_exact_deg, spec, InputDesign{p_x, {}, {}}, tag)
      .front();
}

/// R <= min{H(Y1|Y2,S2), I(X;Y1|S1)}.
inline RegionPoint exact_region_reverse_single(const ChannelSpec& spec,
                                               const std::vector<double>& p_x,
                                               const std::string& tag = "design") {
  detail::require_reversely_degraded(spec);
  return detail::evaluate_checked(Mode::single_exact_rev, spec, InputDesign{p_x, {}, {}}, tag)
      .front();
}

// ---------------------------------------------------------------------------
// Pareto filtering

inline constexpr double kDominanceSlack = 1e-12;

/// a dominates b: every rate >=, every distortion <=, one of them strictly
/// by more than kDominanceSlack.
inline bool dominates(const RegionPoint& a, const RegionPoint& b) {
  const auto ra = a.rates();
  const auto rb = b.rates();
  bool strict = false;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    if (ra[i] < rb[i] - kDominanceSlack) return false;
    strict = strict || ra[i] > rb[i] + kDominanceSlack;
  }
  const double da[] = {a.d1, a.d2};
  const double db[] = {b.d1, b.d2};
  for (int i = 0; i < 2; ++i) {
    if (da[i] > db[i] + kDominanceSlack) return false;
    strict = strict || da[i] < db[i] - kDominanceSlack;
  }
  return strict;
}

/// Canonical order: rates descending, then distortions ascending, then tag.
inline bool canonical_less(const RegionPoint& a, const RegionPoint& b) {
  const auto ra = a.rates();
  const auto rb = b.rates();
  if (ra != rb) return std::greater<>{}(ra, rb);
  if (a.d1 != b.d1) return a.d1 < b.d1;
  if (a.d2 != b.d2) return a.d2 < b.d2;
  return a.design_tag < b.design_tag;
}

/// Nondominated subset, returned in canonical order.
inline std::vector<RegionPoint> pareto_filter(std::vector<RegionPoint> points) {
  if (points.empty()) return points;
  const auto arity = points.front().rates().size();
  for (const auto& p : points)
    if (p.rates().size() != arity)
      throw MixedArity("points mix single-message and partial-secrecy rates");

  std::sort(points.begin(), points.end(), canonical_less);
  std::vector<RegionPoint> front;
  for (auto& p : points) {
    if (std::any_of(front.begin(), front.end(),
                    [&](const RegionPoint& f) { return dominates(f, p); }))
      continue;
    std::erase_if(front, [&](const RegionPoint& f) { return dominates(p, f); });
    front.push_back(std::move(p));
  }
  std::sort(front.begin(), front.end(), canonical_less);
  return front;
}

// ---------------------------------------------------------------------------
// Search over designs

struct SearchConfig {
  Mode mode = Mode::single_exact_deg;
  std::size_t grid_step = 32;  ///< P_X grid resolution 1/grid_step
  std::size_t n_samples = 16;  ///< random auxiliary draws per P_X grid point
  std::uint64_t seed = 0;
  std::optional<std::size_t> card_u; ///< may only lower the default cap
  std::optional<std::size_t> card_v; ///< may only lower the default cap
  bool convexify = false;
};

inline constexpr std::size_t kMaxGridPoints = 1'000'000;

/// Integer compositions of `step` into `parts` nonnegative parts, in
/// lexicographic order. Each composition c encodes P_X = c / step.
inline std::vector<std::vector<std::size_t>> simplex_grid(std::size_t parts, std::size_t step) {
  if (step < 2) throw EmptyGrid("grid step must be at least 2");
  if (parts == 0) throw EmptyGrid("empty input alphabet");
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(parts, 0);
  // Recursive fill of the first parts-1 coordinates; the last takes the rest.
  auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
    if (pos + 1 == parts) {
      cur[pos] = left;
      if (out.size() >= kMaxGridPoints)
        throw DomainError("P_X grid exceeds " + std::to_string(kMaxGridPoints) + " points");
      out.push_back(cur);
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      cur[pos] = k;
      self(self, pos + 1, left - k);
    }
  };
  rec(rec, 0, step);
  return out;
}

inline std::vector<double> composition_to_px(const std::vector<std::size_t>& c, std::size_t step) {
  std::vector<double> p(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    p[i] = static_cast<double>(c[i]) / static_cast<double>(step);
  return p;
}

inline std::string composition_tag(const std::vector<std::size_t>& c) {
  std::ostringstream os;
  os << "px=";
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? ":" : "") << c[i];
  return os.str();
}

/// Result of a sweep. `label` names what the point set means.
struct RegionSet {
  Mode mode = Mode::single_exact_deg;
  std::string label;
  std::vector<RegionPoint> points;
};

inline std::string region_label(Mode m) {
  if (is_outer(m)) return "necessary-condition envelope (per-design outer bounds)";
  if (m == Mode::ps_inner || m == Mode::single_inner) return "achievable (sampled inner bound)";
  return "exact region (sampled union)";
}

namespace detail {

inline Matrix random_stochastic(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows);
  for (auto& r : m) r = rng.simplex(cols);
  return m;
}

/// Designs evaluated at one grid point. Index 0 is the canonical V = X,
/// constant-U design; indices 1..n_samples are seeded random draws whose
/// seed depends on (seed, composition, index) only.
inline InputDesign design_at(const SearchConfig& cfg, const CardinalityCaps& caps,
                             const std::vector<std::size_t>& comp, std::size_t step,
                             std::size_t sample) {
  InputDesign d{composition_to_px(comp, step), {}, {}};
  if (sample == 0 || !uses_v(cfg.mode)) return d;
  std::uint64_t h = 0x51ed270b27364f1dULL;
  for (auto c : comp) h = mix64(h ^ c);
  Rng rng(derive_seed(cfg.seed, mix64(h) ^ sample));
  const std::size_t nx = comp.size();
  d.p_v_given_x = random_stochastic(rng, nx, caps.v);
  if (uses_u(cfg.mode)) d.p_u_given_v = random_stochastic(rng, caps.v, caps.u);
  return d;
}

inline CardinalityCaps effective_caps(const ChannelSpec& spec, const SearchConfig& cfg) {
  auto caps = cardinality_caps(spec, cfg.mode);
  if (cfg.card_v) {
    if (!uses_v(cfg.mode)) throw DomainError("|V| override given for a mode without V");
    if (*cfg.card_v == 0) throw DomainError("|V| override must be positive");
    if (*cfg.card_v > caps.v)
      throw CardinalityExceeded("|V| override " + std::to_string(*cfg.card_v) +
                                " exceeds the cap " + std::to_string(caps.v));
    caps.v = *cfg.card_v;
  }
  if (cfg.card_u) {
    if (!uses_u(cfg.mode)) throw DomainError("|U| override given for a mode without U");
    if (*cfg.card_u == 0) throw DomainError("|U| override must be positive");
    if (*cfg.card_u > caps.u)
      throw CardinalityExceeded("|U| override " + std::to_string(*cfg.card_u) +
                                " exceeds the cap " + std::to_string(caps.u));
    caps.u = *cfg.card_u;
  }
  return caps;
}

inline void check_search_preconditions(const ChannelSpec& spec, const SearchConfig& cfg) {
  if (cfg.grid_step < 2) throw EmptyGrid("grid step must be at least 2");
  if (cfg.n_samples < 1) throw DomainError("n_samples must be at least 1");
  require_valid(spec);
  if (cfg.mode == Mode::ps_exact_deg || cfg.mode == Mode::single_exact_deg)
    require_physically_degraded(spec);
  if (cfg.mode == Mode::ps_exact_rev || cfg.mode == Mode::single_exact_rev)
    require_reversely_degraded(spec);
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to per-index slots so that the merge order never depends on
/// scheduling.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          failed = true;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

} // namespace detail

/// Evaluates every design generated for the given P_X grid points and
/// returns all points, concatenated in grid order. No filtering.
inline std::vector<RegionPoint> evaluate_grid(const ChannelSpec& spec, const SearchConfig& cfg,
                                              const std::vector<std::vector<std::size_t>>& grid,
                                              std::size_t threads = 1) {
  detail::check_search_preconditions(spec, cfg);
  const auto caps = detail::effective_caps(spec, cfg);
  const std::size_t per_point = uses_v(cfg.mode) ? cfg.n_samples + 1 : 1;

  std::vector<std::vector<RegionPoint>> slots(grid.size() * per_point);
  std::vector<DistortionPair> dist(grid.size());
  detail::parallel_for(grid.size(), threads, [&](std::size_t g) {
    if (grid[g].size() != spec.sizes.x)
      throw DimensionMismatch("grid composition does not match the input alphabet");
    dist[g] = optimal_distortions(spec, composition_to_px(grid[g], cfg.grid_step));
  });
  detail::parallel_for(slots.size(), threads, [&](std::size_t i) {
    const std::size_t g = i / per_point;
    const std::size_t s = i % per_point;
    const auto design = detail::design_at(cfg, caps, grid[g], cfg.grid_step, s);
    std::string tag = composition_tag(grid[g]);
    if (uses_v(cfg.mode)) tag += s == 0 ? ";v=x" : ";s=" + std::to_string(s);
    slots[i] = detail::evaluate_unchecked(cfg.mode, spec, design, dist[g], tag);
  });

  std::vector<RegionPoint> out;
  for (auto& s : slots)
    for (auto& p : s) out.push_back(std::move(p));
  return out;
}

/// Pairwise time-sharing mixtures at lambda in {1/4, 1/2, 3/4}. Quadratic in
/// the number of points.
inline std::vector<RegionPoint> time_sharing_mixtures(const std::vector<RegionPoint>& points) {
  std::vector<RegionPoint> out;
  constexpr double lambdas[] = {0.25, 0.5, 0.75};
  auto mix = [](std::optional<double> a, std::optional<double> b, double l) {
    return a && b ? std::optional<double>(l * *a + (1 - l) * *b) : std::nullopt;
  };
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t k = i + 1; k < points.size(); ++k)
      for (double l : lambdas) {
        const auto& a = points[i];
        const auto& b = points[k];
        RegionPoint p;
        p.mode = a.mode;
        p.r1 = mix(a.r1, b.r1, l);
        p.r2 = mix(a.r2, b.r2, l);
        p.r = mix(a.r, b.r, l);
        p.d1 = l * a.d1 + (1 - l) * b.d1;
        p.d2 = l * a.d2 + (1 - l) * b.d2;
        p.design_tag = "mix(" + a.design_tag + "|" + b.design_tag + "|" + fmt12(l) + ")";
        out.push_back(std::move(p));
      }
  return out;
}

/// Discretized union over designs for cfg.mode, reduced to its Pareto
/// frontier (rates maximized, distortions minimized).
inline RegionSet sweep_region(const ChannelSpec& spec, const SearchConfig& cfg,
                              std::size_t threads = 1) {
  if (cfg.grid_step < 2) throw EmptyGrid("grid step must be at least 2");
  const auto grid = simplex_grid(spec.sizes.x, cfg.grid_step);
  auto front = pareto_filter(evaluate_grid(spec, cfg, grid, threads));
  if (cfg.convexify) {
    auto mixed = time_sharing_mixtures(front);
    mixed.insert(mixed.end(), front.begin(), front.end());
    front = pareto_filter(std::move(mixed));
  }
  return {cfg.mode, region_label(cfg.mode), std::move(front)};
}

// ---------------------------------------------------------------------------
// CSV

inline void write_region_csv(std::ostream& os, const std::vector<RegionPoint>& points) {
  auto opt = [](const std::optional<double>& v) { return v ? fmt12(*v) : std::string(); };
  os << "mode,design_tag,r1,r2,r,d1,d2\n";
  for (const auto& p : points)
    os << to_string(p.mode) << ',' << p.design_tag << ',' << opt(p.r1) << ',' << opt(p.r2)
       << ',' << opt(p.r) << ',' << fmt12(p.d1) << ',' << fmt12(p.d2) << '\n';
}

} // namespace jcas

#endif // JCAS_REGIONS_HPP_
