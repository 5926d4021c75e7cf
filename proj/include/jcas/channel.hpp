#ifndef JCAS_CHANNEL_HPP_
#define JCAS_CHANNEL_HPP_

// Finite-alphabet state-dependent broadcast channel with perfect output
// feedback. The feedback Z_{i-1} = (Y1_{i-1}, Y2_{i-1}) is implicit, so a
// channel is fully described by P_{S1S2}, P_{Y1Y2|S1S2X} and the two
// per-letter distortion matrices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "jcas/errors.hpp"

namespace jcas {

inline constexpr double kDefaultTolerance = 1e-9;

struct Alphabets {
  std::size_t x = 0;
  std::size_t s1 = 0;
  std::size_t s2 = 0;
  std::size_t y1 = 0;
  std::size_t y2 = 0;
  std::size_t shat1 = 0;
  std::size_t shat2 = 0;

  bool operator==(const Alphabets&) const = default;
};

/// Channel description. All tensors are dense and row-major:
///   state_dist[s1][s2], kernel[x][s1][s2][y1][y2], d1[s1][shat1], d2[s2][shat2].
struct ChannelSpec {
  Alphabets sizes;
  std::vector<double> state_dist;
  std::vector<double> kernel;
  std::vector<double> d1;
  std::vector<double> d2;

  double state(std::size_t s1, std::size_t s2) const {
    return state_dist[s1 * sizes.s2 + s2];
  }

  double channel(std::size_t x, std::size_t s1, std::size_t s2, std::size_t y1,
                 std::size_t y2) const {
    return kernel[kernel_offset(x, s1, s2) + y1 * sizes.y2 + y2];
  }

  /// Offset of the flattened (y1, y2) row for kernel[x][s1][s2].
  std::size_t kernel_offset(std::size_t x, std::size_t s1, std::size_t s2) const {
    return ((x * sizes.s1 + s1) * sizes.s2 + s2) * sizes.y1 * sizes.y2;
  }

  /// d_j(s, shat) for receiver j in {1, 2}.
  double distortion(int j, std::size_t s, std::size_t shat) const {
    return j == 1 ? d1[s * sizes.shat1 + shat] : d2[s * sizes.shat2 + shat];
  }

  std::size_t state_size(int j) const { return j == 1 ? sizes.s1 : sizes.s2; }
  std::size_t reconstruction_size(int j) const {
    return j == 1 ? sizes.shat1 : sizes.shat2;
  }

  bool operator==(const ChannelSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Validation

struct Finding {
  enum class Kind { Dimension, NegativeProbability, Stochasticity, Distortion };

  Kind kind;
  std::string location;
  double magnitude;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const { return findings.empty(); }
};

inline std::string to_string(Finding::Kind k) {
  switch (k) {
  case Finding::Kind::Dimension: return "dimension";
  case Finding::Kind::NegativeProbability: return "negative-probability";
  case Finding::Kind::Stochasticity: return "stochasticity";
  case Finding::Kind::Distortion: return "distortion";
  }
  return "unknown";
}

namespace detail {

inline std::string index_label(std::string_view name,
                               std::initializer_list<std::size_t> idx) {
  std::ostringstream os;
  os << name;
  for (auto i : idx) os << '[' << i << ']';
  return os.str();
}

inline void check_distribution(const double* first, std::size_t n,
                               const std::string& where, double tol,
                               std::vector<Finding>& out) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = first[i];
    if (!std::isfinite(p) || p < 0.0) {
      std::ostringstream loc;
      loc << where << '[' << i << ']';
      out.push_back({Finding::Kind::NegativeProbability, loc.str(),
                     std::isfinite(p) ? -p : INFINITY});
    }
    sum += p;
  }
  if (!(std::abs(sum - 1.0) <= tol))
    out.push_back({Finding::Kind::Stochasticity, where, std::abs(sum - 1.0)});
}

inline void check_distortion(const std::vector<double>& d, std::size_t rows,
                             std::size_t cols, std::string_view name,
                             std::vector<Finding>& out) {
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = d[r * cols + c];
      if (!std::isfinite(v) || v < 0.0)
        out.push_back({Finding::Kind::Distortion, index_label(name, {r, c}),
                       std::isfinite(v) ? -v : INFINITY});
    }
}

} // namespace detail

/// Lists every violated invariant. Order is fixed: dimensions, state_dist,
/// kernel slices in (x, s1, s2) order, d1, d2; entries in row-major order.
inline ValidationReport validate(const ChannelSpec& spec,
                                 double tol = kDefaultTolerance) {
  ValidationReport report;
  auto& out = report.findings;
  const auto& a = spec.sizes;

  const std::pair<const char*, std::size_t> alph[] = {
      {"alphabets.x", a.x},   {"alphabets.s1", a.s1},       {"alphabets.s2", a.s2},
      {"alphabets.y1", a.y1}, {"alphabets.y2", a.y2},       {"alphabets.shat1", a.shat1},
      {"alphabets.shat2", a.shat2}};
  for (const auto& [name, n] : alph)
    if (n == 0) out.push_back({Finding::Kind::Dimension, name, 0.0});

  auto check_size = [&](const std::vector<double>& v, std::size_t want,
                        const char* name) {
    if (v.size() != want)
      out.push_back({Finding::Kind::Dimension, name,
                     static_cast<double>(v.size())});
    return v.size() == want;
  };
  const bool sd_ok = check_size(spec.state_dist, a.s1 * a.s2, "state_dist");
  const bool k_ok =
      check_size(spec.kernel, a.x * a.s1 * a.s2 * a.y1 * a.y2, "kernel");
  const bool d1_ok = check_size(spec.d1, a.s1 * a.shat1, "d1");
  const bool d2_ok = check_size(spec.d2, a.s2 * a.shat2, "d2");
  if (!report.ok()) {
    // Entry checks are meaningless against a tensor of the wrong shape.
    if (!(sd_ok && k_ok && d1_ok && d2_ok)) return report;
    if (a.x == 0 || a.s1 == 0 || a.s2 == 0 || a.y1 == 0 || a.y2 == 0)
      return report;
  }

  detail::check_distribution(spec.state_dist.data(), spec.state_dist.size(),
                             "state_dist", tol, out);
  const std::size_t row = a.y1 * a.y2;
  for (std::size_t x = 0; x < a.x; ++x)
    for (std::size_t s1 = 0; s1 < a.s1; ++s1)
      for (std::size_t s2 = 0; s2 < a.s2; ++s2)
        detail::check_distribution(spec.kernel.data() + spec.kernel_offset(x, s1, s2),
                                   row, detail::index_label("kernel", {x, s1, s2}),
                                   tol, out);
  detail::check_distortion(spec.d1, a.s1, a.shat1, "d1", out);
  detail::check_distortion(spec.d2, a.s2, a.shat2, "d2", out);
  return report;
}

/// Throws the error type of the first finding, if any.
inline void require_valid(const ChannelSpec& spec, double tol = kDefaultTolerance) {
  const auto report = validate(spec, tol);
  if (report.ok()) return;
  const auto& f = report.findings.front();
  std::ostringstream msg;
  msg << f.location << " (magnitude " << f.magnitude << ")";
  if (report.findings.size() > 1)
    msg << " and " << report.findings.size() - 1 << " more finding(s)";
  switch (f.kind) {
  case Finding::Kind::Dimension: throw SchemaError(msg.str());
  case Finding::Kind::NegativeProbability: throw NegativeProbability(msg.str());
  case Finding::Kind::Stochasticity: throw StochasticityError(msg.str());
  case Finding::Kind::Distortion: throw SchemaError("invalid distortion " + msg.str());
  }
}

// ---------------------------------------------------------------------------
// Construction helpers

inline std::vector<double> hamming_distortion(std::size_t n) {
  std::vector<double> d(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  return d;
}

/// Y1 = S1 * X, Y2 = S2 * X over binary alphabets, Hamming distortions.
inline ChannelSpec make_binary_multiplicative(double q, double alpha) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("q must lie in [0,1]");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");

  ChannelSpec spec;
  spec.sizes = {2, 2, 2, 2, 2, 2, 2};
  spec.state_dist = {1.0 - q, 0.0, q * (1.0 - alpha), q * alpha};
  spec.kernel.assign(32, 0.0);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t s1 = 0; s1 < 2; ++s1)
      for (std::size_t s2 = 0; s2 < 2; ++s2)
        spec.kernel[spec.kernel_offset(x, s1, s2) + (s1 * x) * 2 + (s2 * x)] = 1.0;
  spec.d1 = hamming_distortion(2);
  spec.d2 = hamming_distortion(2);
  return spec;
}

/// Exchanges the roles of (S1, Y1, d1) and (S2, Y2, d2).
inline ChannelSpec swap_receivers(const ChannelSpec& spec) {
  const auto& a = spec.sizes;
  ChannelSpec out;
  out.sizes = {a.x, a.s2, a.s1, a.y2, a.y1, a.shat2, a.shat1};
  out.state_dist.resize(spec.state_dist.size());
  for (std::size_t s1 = 0; s1 < a.s1; ++s1)
    for (std::size_t s2 = 0; s2 < a.s2; ++s2)
      out.state_dist[s2 * a.s1 + s1] = spec.state(s1, s2);
  out.kernel.resize(spec.kernel.size());
  for (std::size_t x = 0; x < a.x; ++x)
    for (std::size_t s1 = 0; s1 < a.s1; ++s1)
      for (std::size_t s2 = 0; s2 < a.s2; ++s2)
        for (std::size_t y1 = 0; y1 < a.y1; ++y1)
          for (std::size_t y2 = 0; y2 < a.y2; ++y2)
            out.kernel[out.kernel_offset(x, s2, s1) + y2 * a.y1 + y1] =
                spec.channel(x, s1, s2, y1, y2);
  out.d1 = spec.d2;
  out.d2 = spec.d1;
  return out;
}

// ---------------------------------------------------------------------------
// Degradedness

struct DegradednessClass {
  enum class Kind { PhysicallyDegraded, ReverselyPhysicallyDegraded, Both, Neither };

  Kind kind = Kind::Neither;
  double residual_phys = 0.0;
  double residual_rev = 0.0;
};

inline std::string to_string(DegradednessClass::Kind k) {
  using K = DegradednessClass::Kind;
  switch (k) {
  case K::PhysicallyDegraded: return "physically-degraded";
  case K::ReverselyPhysicallyDegraded: return "reversely-physically-degraded";
  case K::Both: return "both";
  case K::Neither: return "neither";
  }
  return "unknown";
}

namespace detail {

/// max over (s1, y1, x) with positive mass of
///   | P(y2, s2 | s1, y1, x) - P(y2, s2 | s1, y1) |
/// under a uniform input. Zero iff X - (S1, Y1) - (S2, Y2).
inline double degradation_residual(const ChannelSpec& spec) {
  const auto& a = spec.sizes;
  const double px = 1.0 / static_cast<double>(a.x);
  // joint[x][s1][y1][s2][y2]
  const std::size_t inner = a.s2 * a.y2;
  std::vector<double> joint(a.x * a.s1 * a.y1 * inner, 0.0);
  auto at = [&](std::size_t x, std::size_t s1, std::size_t y1) {
    return ((x * a.s1 + s1) * a.y1 + y1) * inner;
  };
  for (std::size_t x = 0; x < a.x; ++x)
    for (std::size_t s1 = 0; s1 < a.s1; ++s1)
      for (std::size_t s2 = 0; s2 < a.s2; ++s2)
        for (std::size_t y1 = 0; y1 < a.y1; ++y1)
          for (std::size_t y2 = 0; y2 < a.y2; ++y2)
            joint[at(x, s1, y1) + s2 * a.y2 + y2] +=
                px * spec.state(s1, s2) * spec.channel(x, s1, s2, y1, y2);

  double residual = 0.0;
  std::vector<double> pooled(inner);
  for (std::size_t s1 = 0; s1 < a.s1; ++s1)
    for (std::size_t y1 = 0; y1 < a.y1; ++y1) {
      std::fill(pooled.begin(), pooled.end(), 0.0);
      double pooled_mass = 0.0;
      for (std::size_t x = 0; x < a.x; ++x)
        for (std::size_t t = 0; t < inner; ++t) {
          pooled[t] += joint[at(x, s1, y1) + t];
          pooled_mass += joint[at(x, s1, y1) + t];
        }
      if (pooled_mass <= 0.0) continue;
      for (std::size_t x = 0; x < a.x; ++x) {
        double mass = 0.0;
        for (std::size_t t = 0; t < inner; ++t) mass += joint[at(x, s1, y1) + t];
        if (mass <= 0.0) continue;
        for (std::size_t t = 0; t < inner; ++t)
          residual = std::max(residual, std::abs(joint[at(x, s1, y1) + t] / mass -
                                                 pooled[t] / pooled_mass));
      }
    }
  return residual;
}

} // namespace detail

/// Tests X -- (S1,Y1) -- (S2,Y2) (physically degraded) and
/// X -- (S2,Y2) -- (S1,Y1) (reversely physically degraded) under the uniform
/// input, which has full support and therefore witnesses both factorizations.
inline DegradednessClass classify_degradedness(const ChannelSpec& spec,
                                               double tol = kDefaultTolerance) {
  DegradednessClass c;
  c.residual_phys = detail::degradation_residual(spec);
  c.residual_rev = detail::degradation_residual(swap_receivers(spec));
  const bool phys = c.residual_phys <= tol;
  const bool rev = c.residual_rev <= tol;
  using K = DegradednessClass::Kind;
  c.kind = phys && rev ? K::Both : phys ? K::PhysicallyDegraded
                               : rev    ? K::ReverselyPhysicallyDegraded
                                        : K::Neither;
  return c;
}

inline bool is_physically_degraded(const DegradednessClass& c) {
  using K = DegradednessClass::Kind;
  return c.kind == K::PhysicallyDegraded || c.kind == K::Both;
}

inline bool is_reversely_degraded(const DegradednessClass& c) {
  using K = DegradednessClass::Kind;
  return c.kind == K::ReverselyPhysicallyDegraded || c.kind == K::Both;
}

// ---------------------------------------------------------------------------
// JSON document

namespace detail {

inline const nlohmann::json& require_key(const nlohmann::json& obj,
                                         const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key))
    throw SchemaError(std::string("missing field '") + key + "' in " + where);
  return obj.at(key);
}

inline std::size_t read_size(const nlohmann::json& v, const char* name) {
  if (!v.is_number_integer() || v.get<long long>() <= 0)
    throw SchemaError(std::string("alphabets.") + name + " must be a positive integer");
  return v.get<std::size_t>();
}

inline double read_number(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where + " must be a number");
  return v.get<double>();
}

inline void read_matrix(const nlohmann::json& v, std::size_t rows,
                        std::size_t cols, const char* name,
                        std::vector<double>& out) {
  if (!v.is_array() || v.size() != rows)
    throw SchemaError(std::string(name) + " must have " + std::to_string(rows) + " rows");
  out.clear();
  out.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = v[r];
    if (!row.is_array() || row.size() != cols)
      throw SchemaError(index_label(name, {r}) + " must have " +
                        std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c)
      out.push_back(read_number(row[c], index_label(name, {r, c})));
  }
}

} // namespace detail

/// Reads the document structure without checking stochasticity. Use
/// `parse_channel_spec` for a validated spec.
inline ChannelSpec read_channel_document(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("top level must be an object");

  ChannelSpec spec;
  auto& a = spec.sizes;
  const auto& alph = detail::require_key(doc, "alphabets", "document");
  a.x = detail::read_size(detail::require_key(alph, "x", "alphabets"), "x");
  a.s1 = detail::read_size(detail::require_key(alph, "s1", "alphabets"), "s1");
  a.s2 = detail::read_size(detail::require_key(alph, "s2", "alphabets"), "s2");
  a.y1 = detail::read_size(detail::require_key(alph, "y1", "alphabets"), "y1");
  a.y2 = detail::read_size(detail::require_key(alph, "y2", "alphabets"), "y2");
  a.shat1 = alph.contains("shat1") ? detail::read_size(alph["shat1"], "shat1") : a.s1;
  a.shat2 = alph.contains("shat2") ? detail::read_size(alph["shat2"], "shat2") : a.s2;

  detail::read_matrix(detail::require_key(doc, "state_dist", "document"), a.s1,
                      a.s2, "state_dist", spec.state_dist);

  const auto& kernel = detail::require_key(doc, "kernel", "document");
  const std::size_t row = a.y1 * a.y2;
  spec.kernel.reserve(a.x * a.s1 * a.s2 * row);
  if (!kernel.is_array() || kernel.size() != a.x)
    throw SchemaError("kernel must have " + std::to_string(a.x) + " input slices");
  for (std::size_t x = 0; x < a.x; ++x) {
    if (!kernel[x].is_array() || kernel[x].size() != a.s1)
      throw SchemaError(detail::index_label("kernel", {x}) + " must have " +
                        std::to_string(a.s1) + " entries");
    for (std::size_t s1 = 0; s1 < a.s1; ++s1) {
      const auto& k1 = kernel[x][s1];
      if (!k1.is_array() || k1.size() != a.s2)
        throw SchemaError(detail::index_label("kernel", {x, s1}) + " must have " +
                          std::to_string(a.s2) + " entries");
      for (std::size_t s2 = 0; s2 < a.s2; ++s2) {
        const auto& flat = k1[s2];
        const auto where = detail::index_label("kernel", {x, s1, s2});
        if (!flat.is_array() || flat.size() != row)
          throw SchemaError(where + " must be a flat array of length " +
                            std::to_string(row));
        for (std::size_t i = 0; i < row; ++i)
          spec.kernel.push_back(detail::read_number(flat[i], where));
      }
    }
  }

  auto read_distortion = [&](const char* key, std::size_t ns, std::size_t nshat,
                             std::vector<double>& out) {
    if (doc.contains(key)) {
      detail::read_matrix(doc[key], ns, nshat, key, out);
    } else {
      if (ns != nshat)
        throw SchemaError(std::string(key) +
                          " omitted but reconstruction alphabet differs from state alphabet");
      out = hamming_distortion(ns);
    }
  };
  read_distortion("d1", a.s1, a.shat1, spec.d1);
  read_distortion("d2", a.s2, a.shat2, spec.d2);
  return spec;
}

inline ChannelSpec parse_channel_spec(std::string_view text,
                                      double tol = kDefaultTolerance) {
  auto spec = read_channel_document(text);
  require_valid(spec, tol);
  return spec;
}

/// Doubles are written in shortest round-trip form (up to 17 significant
/// digits), so parse(serialize(spec)) == spec bit for bit.
inline std::string serialize_channel_spec(const ChannelSpec& spec) {
  const auto& a = spec.sizes;
  nlohmann::ordered_json doc;
  doc["alphabets"] = {{"x", a.x},   {"s1", a.s1},       {"s2", a.s2},      {"y1", a.y1},
                      {"y2", a.y2}, {"shat1", a.shat1}, {"shat2", a.shat2}};
  auto matrix = [](const std::vector<double>& v, std::size_t rows, std::size_t cols) {
    auto m = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < rows; ++r)
      m.push_back(std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(r * cols),
                                      v.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols)));
    return m;
  };
  doc["state_dist"] = matrix(spec.state_dist, a.s1, a.s2);
  auto kernel = nlohmann::ordered_json::array();
  const std::size_t row = a.y1 * a.y2;
  for (std::size_t x = 0; x < a.x; ++x) {
    auto kx = nlohmann::ordered_json::array();
    for (std::size_t s1 = 0; s1 < a.s1; ++s1) {
      auto ks = nlohmann::ordered_json::array();
      for (std::size_t s2 = 0; s2 < a.s2; ++s2) {
        const auto off = static_cast<std::ptrdiff_t>(spec.kernel_offset(x, s1, s2));
        ks.push_back(std::vector<double>(spec.kernel.begin() + off,
                                         spec.kernel.begin() + off +
                                             static_cast<std::ptrdiff_t>(row)));
      }
      kx.push_back(std::move(ks));
    }
    kernel.push_back(std::move(kx));
  }
  doc["kernel"] = std::move(kernel);
  doc["d1"] = matrix(spec.d1, a.s1, a.shat1);
  doc["d2"] = matrix(spec.d2, a.s2, a.shat2);
  return doc.dump(2);
}

} // namespace jcas

#endif // JCAS_CHANNEL_HPP_
