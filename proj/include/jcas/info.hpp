#ifndef JCAS_INFO_HPP_
#define JCAS_INFO_HPP_

// Dense probability tensors over the named variables (U, V, X, S1, S2, Y1, Y2)
// and the entropy / mutual-information algebra on them. Logarithms are base 2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "jcas/channel.hpp"
#include "jcas/errors.hpp"

namespace jcas {

enum class Var { U, V, X, S1, S2, Y1, Y2 };

inline std::string to_string(Var v) {
  switch (v) {
  case Var::U: return "U";
  case Var::V: return "V";
  case Var::X: return "X";
  case Var::S1: return "S1";
  case Var::S2: return "S2";
  case Var::Y1: return "Y1";
  case Var::Y2: return "Y2";
  }
  return "?";
}

using VarList = std::vector<Var>;
using Matrix = std::vector<std::vector<double>>;

inline constexpr std::size_t kMaxJointCells = 100'000'000;

/// Cells below this mass contribute nothing to an entropy.
inline constexpr double kEntropyFloor = 1e-300;

class JointDistribution {
public:
  JointDistribution() = default;

  JointDistribution(VarList vars, std::vector<std::size_t> dims,
                    std::vector<double> probs)
      : vars_(std::move(vars)), dims_(std::move(dims)), probs_(std::move(probs)) {
    if (vars_.size() != dims_.size())
      throw DimensionMismatch("variable and dimension lists differ in length");
    for (std::size_t i = 0; i < vars_.size(); ++i)
      for (std::size_t k = i + 1; k < vars_.size(); ++k)
        if (vars_[i] == vars_[k]) throw OverlapError("duplicate variable " + to_string(vars_[i]));
    const std::size_t cells = cell_count(dims_);
    if (probs_.size() != cells)
      throw DimensionMismatch("probability tensor has " + std::to_string(probs_.size()) +
                              " cells, expected " + std::to_string(cells));
  }

  const VarList& vars() const { return vars_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<double>& probs() const { return probs_; }

  /// Position of `v` in vars(), or throws UnknownVariable.
  std::size_t axis(Var v) const {
    auto it = std::find(vars_.begin(), vars_.end(), v);
    if (it == vars_.end()) throw UnknownVariable(to_string(v));
    return static_cast<std::size_t>(it - vars_.begin());
  }

  bool has(Var v) const {
    return std::find(vars_.begin(), vars_.end(), v) != vars_.end();
  }

  std::size_t dim(Var v) const { return dims_[axis(v)]; }

  double total() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

  /// Throws JointTooLarge once the product of dims exceeds kMaxJointCells.
  static std::size_t cell_count(const std::vector<std::size_t>& dims) {
    std::size_t cells = 1;
    for (auto d : dims) {
      if (d != 0 && cells > kMaxJointCells / d)
        throw JointTooLarge("joint tensor exceeds " + std::to_string(kMaxJointCells) + " cells");
      cells *= d;
    }
    if (cells > kMaxJointCells)
      throw JointTooLarge("joint tensor exceeds " + std::to_string(kMaxJointCells) + " cells");
    return cells;
  }

private:
  VarList vars_;
  std::vector<std::size_t> dims_;
  std::vector<double> probs_;
};

/// Sums out every variable not in `keep`. The result lists the kept variables
/// in the order given by `keep`.
inline JointDistribution marginalize(const JointDistribution& j, const VarList& keep) {
  std::vector<std::size_t> axes;
  std::vector<std::size_t> out_dims;
  axes.reserve(keep.size());
  for (Var v : keep) {
    axes.push_back(j.axis(v));
    out_dims.push_back(j.dims()[axes.back()]);
  }
  for (std::size_t i = 0; i < axes.size(); ++i)
    for (std::size_t k = i + 1; k < axes.size(); ++k)
      if (axes[i] == axes[k]) throw OverlapError("duplicate variable " + to_string(keep[i]));

  // Stride of each source axis inside the output tensor (0 when summed out).
  const std::size_t rank = j.vars().size();
  std::vector<std::size_t> out_stride(rank, 0);
  std::size_t s = 1;
  for (std::size_t i = axes.size(); i-- > 0;) {
    out_stride[axes[i]] = s;
    s *= out_dims[i];
  }

  std::vector<double> out(s, 0.0);
  std::vector<std::size_t> idx(rank, 0);
  std::size_t target = 0;
  const auto& dims = j.dims();
  for (double p : j.probs()) {
    out[target] += p;
    // Odometer increment, keeping `target` in sync.
    for (std::size_t a = rank; a-- > 0;) {
      if (++idx[a] < dims[a]) {
        target += out_stride[a];
        break;
      }
      target -= out_stride[a] * (dims[a] - 1);
      idx[a] = 0;
    }
  }
  return JointDistribution(keep, std::move(out_dims), std::move(out));
}

namespace detail {

inline double shannon_bits(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > kEntropyFloor) h -= p * std::log2(p);
  return h;
}

inline void require_disjoint(const VarList& a, const VarList& b) {
  for (Var v : a)
    if (std::find(b.begin(), b.end(), v) != b.end())
      throw OverlapError("variable " + to_string(v) + " appears in two argument sets");
}

inline VarList concat(VarList a, const VarList& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

} // namespace detail

/// H(targets | givens) in bits.
inline double entropy(const JointDistribution& j, const VarList& targets,
                      const VarList& givens = {}) {
  detail::require_disjoint(targets, givens);
  for (Var v : targets) j.axis(v);
  for (Var v : givens) j.axis(v);
  const double joint = detail::shannon_bits(
      marginalize(j, detail::concat(targets, givens)).probs());
  const double cond = givens.empty() ? 0.0 : detail::shannon_bits(marginalize(j, givens).probs());
  return joint - cond;
}

/// I(a; b | givens) = H(a | givens) - H(a | b, givens), in bits.
inline double mutual_information(const JointDistribution& j, const VarList& a,
                                 const VarList& b, const VarList& givens = {}) {
  detail::require_disjoint(a, b);
  detail::require_disjoint(a, givens);
  detail::require_disjoint(b, givens);
  return entropy(j, a, givens) - entropy(j, a, detail::concat(b, givens));
}

inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary entropy argument outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// [a]^+
inline double pos_part(double a) { return std::max(a, 0.0); }

// ---------------------------------------------------------------------------
// Input designs

struct InputDesign {
  std::vector<double> p_x;
  std::optional<Matrix> p_v_given_x; ///< nx rows, nv columns; absent means V = X
  std::optional<Matrix> p_u_given_v; ///< nv rows, nu columns; absent means constant U

  std::size_t nv() const {
    return p_v_given_x && !p_v_given_x->empty() ? p_v_given_x->front().size() : p_x.size();
  }
  std::size_t nu() const {
    return p_u_given_v && !p_u_given_v->empty() ? p_u_given_v->front().size() : 1;
  }
};

namespace detail {

inline void require_distribution(const std::vector<double>& p, const std::string& what,
                                 double tol = kDefaultTolerance) {
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) throw DegenerateInput(what + " has a negative entry");
    sum += v;
  }
  if (p.empty() || std::abs(sum - 1.0) > tol)
    throw DegenerateInput(what + " does not sum to 1");
}

inline void require_stochastic(const Matrix& m, std::size_t rows, const std::string& what) {
  if (m.size() != rows)
    throw DimensionMismatch(what + " has " + std::to_string(m.size()) + " rows, expected " +
                            std::to_string(rows));
  if (rows == 0) return;
  const std::size_t cols = m.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    if (m[r].size() != cols || cols == 0)
      throw DimensionMismatch(what + " is not rectangular");
    require_distribution(m[r], what + " row " + std::to_string(r));
  }
}

} // namespace detail

/// Product-form joint P_{U|V} P_{V|X} P_X P_{S1S2} P_{Y1Y2|S1S2X} over
/// (U, V, X, S1, S2, Y1, Y2). The states are independent of (U, V, X).
inline JointDistribution build_joint(const ChannelSpec& spec, const InputDesign& design) {
  const auto& a = spec.sizes;
  if (design.p_x.size() != a.x)
    throw DimensionMismatch("p_x has " + std::to_string(design.p_x.size()) +
                            " entries, channel input alphabet has " + std::to_string(a.x));
  detail::require_distribution(design.p_x, "p_x");
  if (design.p_v_given_x) detail::require_stochastic(*design.p_v_given_x, a.x, "P_{V|X}");
  const std::size_t nv = design.nv();
  if (design.p_u_given_v) detail::require_stochastic(*design.p_u_given_v, nv, "P_{U|V}");
  const std::size_t nu = design.nu();

  auto p_v = [&](std::size_t v, std::size_t x) {
    return design.p_v_given_x ? (*design.p_v_given_x)[x][v] : (v == x ? 1.0 : 0.0);
  };
  auto p_u = [&](std::size_t u, std::size_t v) {
    return design.p_u_given_v ? (*design.p_u_given_v)[v][u] : 1.0;
  };

  std::vector<std::size_t> dims{nu, nv, a.x, a.s1, a.s2, a.y1, a.y2};
  std::vector<double> probs(JointDistribution::cell_count(dims), 0.0);
  const std::size_t tail = a.x * a.s1 * a.s2 * a.y1 * a.y2;
  const std::size_t row = a.y1 * a.y2;

  // channel part P_X P_{S1S2} P_{Y1Y2|S1S2X}, indexed (x, s1, s2, y1, y2)
  std::vector<double> base(tail);
  for (std::size_t x = 0; x < a.x; ++x)
    for (std::size_t s1 = 0; s1 < a.s1; ++s1)
      for (std::size_t s2 = 0; s2 < a.s2; ++s2) {
        const double w = design.p_x[x] * spec.state(s1, s2);
        const std::size_t off = spec.kernel_offset(x, s1, s2);
        for (std::size_t k = 0; k < row; ++k) base[off + k] = w * spec.kernel[off + k];
      }

  const std::size_t per_x = tail / a.x;
  for (std::size_t u = 0; u < nu; ++u)
    for (std::size_t v = 0; v < nv; ++v) {
      const double wu = p_u(u, v);
      double* dst = probs.data() + (u * nv + v) * tail;
      for (std::size_t x = 0; x < a.x; ++x) {
        const double w = wu * p_v(v, x);
        if (w == 0.0) continue;
        for (std::size_t k = 0; k < per_x; ++k)
          dst[x * per_x + k] = w * base[x * per_x + k];
      }
    }
  return JointDistribution({Var::U, Var::V, Var::X, Var::S1, Var::S2, Var::Y1, Var::Y2},
                           std::move(dims), std::move(probs));
}

} // namespace jcas

#endif // JCAS_INFO_HPP_
