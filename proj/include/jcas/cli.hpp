#ifndef JCAS_CLI_HPP_
#define JCAS_CLI_HPP_

// Command-line front end. parse_args() turns argv into a Command; execute()
// runs it against caller-supplied streams so the whole CLI can be driven
// in-process. Exit status: 0 success, 1 domain/validation failure, 2 usage.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "jcas/binary_example.hpp"
#include "jcas/channel.hpp"
#include "jcas/estimators.hpp"
#include "jcas/format.hpp"
#include "jcas/regions.hpp"
#include "jcas/simulator.hpp"

namespace jcas::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
public:
  UsageError(const std::string& what, std::string help)
      : std::runtime_error(what), help_(std::move(help)) {}
  const std::string& help() const { return help_; }

private:
  std::string help_;
};

enum class Subcommand { help, validate, classify, estimator, region, example, baseline, simulate, crosscheck };

struct Command {
  Subcommand sub = Subcommand::help;
  std::string help_text;
  std::string file;
  double tol = kDefaultTolerance;
  std::vector<double> px;
  Mode mode = Mode::single_exact_deg;
  std::size_t grid = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  bool convexify = false;
  std::optional<std::size_t> card_u, card_v;
  std::optional<std::string> out;
  double q = 0, alpha = 0, p = 0;
  std::size_t n = 0;
  std::size_t threads = 1;
};

namespace detail {

inline void add_threads(CLI::App* sub, Command& cmd) {
  sub->add_option("--threads", cmd.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
}

inline void add_out(CLI::App* sub, Command& cmd) {
  sub->add_option("--out", cmd.out, "Write output to this file instead of stdout");
}

inline void add_probability(CLI::App* sub, const char* flag, double& dst, const char* what) {
  sub->add_option(flag, dst, what)->required()->check(CLI::Range(0.0, 1.0));
}

} // namespace detail

inline Command parse_args(const std::vector<std::string>& argv) {
  Command cmd;
  std::string mode_name;

  CLI::App app{"Secrecy-distortion regions for joint communication and sensing", "jcas"};
  app.require_subcommand(1);

  auto* validate_cmd = app.add_subcommand("validate", "Check a channel file and list every violation");
  validate_cmd->add_option("file", cmd.file, "Channel spec (JSON)")->required();
  detail::add_threads(validate_cmd, cmd);

  auto* classify_cmd = app.add_subcommand("classify", "Degradedness classification");
  classify_cmd->add_option("file", cmd.file, "Channel spec (JSON)")->required();
  classify_cmd->add_option("--tol", cmd.tol, "Conditional-independence tolerance")
      ->check(CLI::NonNegativeNumber);
  detail::add_threads(classify_cmd, cmd);

  auto* estimator_cmd = app.add_subcommand("estimator", "Optimal per-letter estimator tables");
  estimator_cmd->add_option("file", cmd.file, "Channel spec (JSON)")->required();
  estimator_cmd->add_option("--px", cmd.px, "Input distribution p0,p1,...")
      ->required()
      ->delimiter(',');
  detail::add_threads(estimator_cmd, cmd);

  auto* region_cmd = app.add_subcommand("region", "Sweep a region and print its Pareto frontier");
  region_cmd->add_option("file", cmd.file, "Channel spec (JSON)")->required();
  region_cmd->add_option("--mode", mode_name, "Bound / region to evaluate")
      ->required()
      ->check(CLI::IsMember({"ps_inner", "ps_outer", "ps_exact_deg", "ps_exact_rev",
                             "single_inner", "single_outer", "single_exact_deg",
                             "single_exact_rev"}));
  region_cmd->add_option("--grid", cmd.grid, "P_X grid step (1/G)")->required();
  region_cmd->add_option("--samples", cmd.samples, "Random auxiliary draws per grid point")
      ->required()
      ->check(CLI::PositiveNumber);
  region_cmd->add_option("--seed", cmd.seed, "Seed")->required();
  region_cmd->add_flag("--convexify", cmd.convexify, "Add time-sharing mixtures");
  region_cmd->add_option("--card-u", cmd.card_u, "Lower |U| below its default cap")
      ->check(CLI::PositiveNumber);
  region_cmd->add_option("--card-v", cmd.card_v, "Lower |V| below its default cap")
      ->check(CLI::PositiveNumber);
  detail::add_out(region_cmd, cmd);
  detail::add_threads(region_cmd, cmd);

  auto* example_cmd = app.add_subcommand("example", "Binary multiplicative-state closed form");
  detail::add_probability(example_cmd, "--q", cmd.q, "P(S1 = 1)");
  detail::add_probability(example_cmd, "--alpha", cmd.alpha, "P(S2 = 1 | S1 = 1)");
  example_cmd->add_option("--grid", cmd.grid, "p grid step (1/G)")->required();
  detail::add_out(example_cmd, cmd);
  detail::add_threads(example_cmd, cmd);

  auto* baseline_cmd = app.add_subcommand("baseline", "Time-sharing separation baseline");
  detail::add_probability(baseline_cmd, "--q", cmd.q, "P(S1 = 1)");
  detail::add_probability(baseline_cmd, "--alpha", cmd.alpha, "P(S2 = 1 | S1 = 1)");
  baseline_cmd->add_option("--grid", cmd.grid, "p and lambda grid step (1/G)")->required();
  detail::add_out(baseline_cmd, cmd);
  detail::add_threads(baseline_cmd, cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo distortion check");
  simulate_cmd->add_option("file", cmd.file, "Channel spec (JSON)")->required();
  simulate_cmd->add_option("--px", cmd.px, "Input distribution p0,p1,...")
      ->required()
      ->delimiter(',');
  simulate_cmd->add_option("--n", cmd.n, "Sample count")->required()->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", cmd.seed, "Seed")->required();
  simulate_cmd->add_option("--tol", cmd.tol, "Allowed |empirical - analytic|")
      ->required()
      ->check(CLI::NonNegativeNumber);
  detail::add_threads(simulate_cmd, cmd);

  auto* crosscheck_cmd = app.add_subcommand("crosscheck", "Closed form vs. general region");
  detail::add_probability(crosscheck_cmd, "--q", cmd.q, "P(S1 = 1)");
  detail::add_probability(crosscheck_cmd, "--alpha", cmd.alpha, "P(S2 = 1 | S1 = 1)");
  detail::add_probability(crosscheck_cmd, "--p", cmd.p, "P(X = 1)");
  crosscheck_cmd->add_option("--tol", cmd.tol, "Allowed deviation")
      ->required()
      ->check(CLI::NonNegativeNumber);
  detail::add_threads(crosscheck_cmd, cmd);

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    cmd.sub = Subcommand::help;
    cmd.help_text = app.help();
    return cmd;
  } catch (const CLI::CallForAllHelp&) {
    cmd.sub = Subcommand::help;
    cmd.help_text = app.help("", CLI::AppFormatMode::All);
    return cmd;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what(), app.help());
  }

  const std::pair<CLI::App*, Subcommand> subs[] = {
      {validate_cmd, Subcommand::validate}, {classify_cmd, Subcommand::classify},
      {estimator_cmd, Subcommand::estimator}, {region_cmd, Subcommand::region},
      {example_cmd, Subcommand::example},   {baseline_cmd, Subcommand::baseline},
      {simulate_cmd, Subcommand::simulate}, {crosscheck_cmd, Subcommand::crosscheck}};
  for (const auto& [app_ptr, sub] : subs)
    if (app_ptr->parsed()) cmd.sub = sub;
  if (cmd.sub == Subcommand::region) cmd.mode = *parse_mode(mode_name);
  return cmd;
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes to a sibling temporary and renames it over `path`.
inline void write_atomically(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename onto " + path + ": " + ec.message());
  }
}

inline void emit(const Command& cmd, std::ostream& out, const std::string& content) {
  if (cmd.out)
    write_atomically(*cmd.out, content);
  else
    out << content;
}

inline int run(const Command& cmd, std::ostream& out, std::ostream& err) {
  switch (cmd.sub) {
  case Subcommand::help:
    out << cmd.help_text;
    return kExitOk;

  case Subcommand::validate: {
    const auto spec = read_channel_document(read_file(cmd.file));
    const auto report = validate(spec, cmd.tol);
    if (report.ok()) {
      out << "valid\n";
      return kExitOk;
    }
    out << "kind,location,magnitude\n";
    for (const auto& f : report.findings)
      out << to_string(f.kind) << ',' << f.location << ',' << fmt12(f.magnitude) << '\n';
    return kExitFailure;
  }

  case Subcommand::classify: {
    const auto spec = parse_channel_spec(read_file(cmd.file));
    const auto c = classify_degradedness(spec, cmd.tol);
    out << to_string(c.kind) << '\n'
        << "residual_phys," << fmt12(c.residual_phys) << '\n'
        << "residual_rev," << fmt12(c.residual_rev) << '\n';
    return kExitOk;
  }

  case Subcommand::estimator: {
    const auto spec = parse_channel_spec(read_file(cmd.file));
    const auto e1 = synthesize_estimator(spec, cmd.px, 1);
    const auto e2 = synthesize_estimator(spec, cmd.px, 2);
    std::ostringstream os;
    os << "x,y1,y2,shat1,shat2\n";
    for (std::size_t x = 0; x < spec.sizes.x; ++x)
      for (std::size_t y1 = 0; y1 < spec.sizes.y1; ++y1)
        for (std::size_t y2 = 0; y2 < spec.sizes.y2; ++y2)
          os << x << ',' << y1 << ',' << y2 << ',' << e1(x, y1, y2) << ',' << e2(x, y1, y2)
             << '\n';
    os << "\nreceiver,expected_distortion\n"
       << "1," << fmt12(expected_distortion(spec, cmd.px, e1, 1)) << '\n'
       << "2," << fmt12(expected_distortion(spec, cmd.px, e2, 2)) << '\n';
    out << os.str();
    return kExitOk;
  }

  case Subcommand::region: {
    const auto spec = parse_channel_spec(read_file(cmd.file));
    SearchConfig cfg;
    cfg.mode = cmd.mode;
    cfg.grid_step = cmd.grid;
    cfg.n_samples = cmd.samples;
    cfg.seed = cmd.seed;
    cfg.card_u = cmd.card_u;
    cfg.card_v = cmd.card_v;
    cfg.convexify = cmd.convexify;
    const auto set = sweep_region(spec, cfg, cmd.threads);
    err << "# " << to_string(set.mode) << ": " << set.label << '\n';
    std::ostringstream os;
    write_region_csv(os, set.points);
    emit(cmd, out, os.str());
    return kExitOk;
  }

  case Subcommand::example: {
    std::ostringstream os;
    write_example_csv(os, lemma1_sweep(cmd.q, cmd.alpha, cmd.grid));
    emit(cmd, out, os.str());
    return kExitOk;
  }

  case Subcommand::baseline: {
    std::ostringstream os;
    write_baseline_csv(os, separation_baseline(cmd.q, cmd.alpha, cmd.grid));
    emit(cmd, out, os.str());
    return kExitOk;
  }

  case Subcommand::simulate: {
    const auto spec = parse_channel_spec(read_file(cmd.file));
    const auto rep = verify_distortion(spec, cmd.px, cmd.n, cmd.seed, cmd.tol, cmd.threads);
    out << "quantity,analytic,empirical,std_error,status\n";
    auto line = [&](const char* name, const DistortionCheck& c) {
      out << name << ',' << fmt12(c.analytic) << ',' << fmt12(c.empirical) << ','
          << fmt12(c.std_error) << ',' << (c.pass ? "pass" : "fail") << '\n';
    };
    line("d1", rep.d1);
    line("d2", rep.d2);
    out << "tv_distance,," << fmt12(rep.tv_distance) << ",,\n"
        << (rep.pass ? "PASS" : "FAIL") << '\n';
    return rep.pass ? kExitOk : kExitFailure;
  }

  case Subcommand::crosscheck: {
    const auto rep = crosscheck(cmd.q, cmd.alpha, cmd.p, cmd.tol);
    out << (rep.pass ? "PASS" : "FAIL") << '\n'
        << "quantity,closed_form,tensor\n"
        << "r," << fmt12(rep.closed_form.r) << ',' << fmt12(*rep.tensor.r) << '\n'
        << "d1," << fmt12(rep.closed_form.d1) << ',' << fmt12(rep.tensor.d1) << '\n'
        << "d2," << fmt12(rep.closed_form.d2) << ',' << fmt12(rep.tensor.d2) << '\n'
        << "max_deviation," << fmt12(rep.max_deviation) << '\n';
    return rep.pass ? kExitOk : kExitFailure;
  }
  }
  return kExitUsage;
}

} // namespace detail

/// Runs a parsed command. Library errors become a one-line diagnostic on
/// `err` and exit status 1.
inline int execute(const Command& cmd, std::ostream& out, std::ostream& err) {
  try {
    return detail::run(cmd, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

/// parse_args + execute with usage errors mapped to exit status 2.
inline int main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  Command cmd;
  try {
    cmd = parse_args(argv);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << e.help();
    return kExitUsage;
  }
  return execute(cmd, out, err);
}

} // namespace jcas::cli

#endif // JCAS_CLI_HPP_
