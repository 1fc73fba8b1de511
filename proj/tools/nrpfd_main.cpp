#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nrpfd/analysis.hpp"
#include "nrpfd/kernel.hpp"
#include "nrpfd/scenario_io.hpp"

namespace {

constexpr int kExitSatisfied = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitConfig = 3;

struct CommonOptions {
  std::string interleaving;
  std::optional<std::size_t> max_states;
  std::optional<std::size_t> max_depth;
  unsigned workers = 1;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--interleaving", opt.interleaving,
                  "equal-time service policy: priority or full");
  cmd->add_option("--max-states", opt.max_states,
                  "abort exploration beyond this many states");
  cmd->add_option("--max-depth", opt.max_depth,
                  "abort exploration beyond this search depth");
  cmd->add_option("--workers", opt.workers,
                  "worker threads for successor computation (results are "
                  "identical for any value)");
  cmd->add_flag("--quiet", opt.quiet, "suppress the report on stdout");
}

void apply_common(const CommonOptions& opt, nrpfd::ScenarioConfig& cfg) {
  if (!opt.interleaving.empty()) {
    if (opt.interleaving == "priority") {
      cfg.interleaving = nrpfd::InterleavingPolicy::Priority;
    } else if (opt.interleaving == "full") {
      cfg.interleaving = nrpfd::InterleavingPolicy::Full;
    } else {
      throw nrpfd::ConfigError("interleaving must be priority or full");
    }
  }
  if (opt.max_states) cfg.limits.max_states = *opt.max_states;
  if (opt.max_depth) cfg.limits.max_depth = *opt.max_depth;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw nrpfd::ConfigError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw nrpfd::ConfigError("failed writing " + path);
}

int exit_code_for(nrpfd::Verdict v) {
  switch (v) {
    case nrpfd::Verdict::Satisfied: return kExitSatisfied;
    case nrpfd::Verdict::Violated: return kExitViolated;
    case nrpfd::Verdict::Unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

int run_one(const nrpfd::ScenarioConfig& cfg, const std::string& scenario_label,
            const CommonOptions& opt, const std::string& dot_path,
            const std::string& xml_path, const std::string& trace_path) {
  const nrpfd::ModelContext ctx = nrpfd::make_context(cfg);
  const nrpfd::GlobalState initial = nrpfd::build_reference_topology(ctx, cfg);
  const nrpfd::Assertion assertion = nrpfd::no_dual_primary();
  const nrpfd::ExplorationResult result =
      nrpfd::explore(ctx, initial, nrpfd::as_property(ctx, assertion),
                     cfg.limits, cfg.interleaving, opt.workers);

  if (!opt.quiet) {
    std::cout << "assertion: " << assertion.name << '\n'
              << "verdict: " << nrpfd::verdict_name(result.verdict);
    if (!result.limit.empty()) std::cout << " (" << result.limit << ")";
    std::cout << '\n'
              << "states: " << result.states << '\n'
              << "transitions: " << result.transitions << '\n';
  }
  if (!dot_path.empty()) write_file(dot_path, nrpfd::export_dot(ctx, result));
  if (!xml_path.empty()) {
    write_file(xml_path, nrpfd::export_xml(ctx, result,
                                           nrpfd::variant_name(cfg.variant),
                                           scenario_label));
  }
  if (result.verdict == nrpfd::Verdict::Violated) {
    const nrpfd::CounterexampleTrace trace =
        nrpfd::extract_trace(ctx, initial, result);
    if (!trace_path.empty()) {
      write_file(trace_path, nrpfd::format_trace(ctx, trace));
      if (!opt.quiet) std::cout << "counterexample: " << trace_path << '\n';
    } else if (!opt.quiet) {
      std::cout << "counterexample: " << trace.steps.size()
                << " steps, violation at t=" << trace.violating_state.now
                << '\n';
    }
  } else if (!trace_path.empty() && !opt.quiet) {
    std::cerr << "no counterexample to export\n";
  }
  if (!opt.quiet) {
    std::cout << "elapsed_ms: "
              << static_cast<long long>(result.elapsed_seconds * 1000.0) << '\n';
  }
  return exit_code_for(result.verdict);
}

int run_suite(nrpfd::Variant variant, const CommonOptions& opt) {
  const auto expected = nrpfd::expected_verdicts(variant);
  bool all_match = true;
  if (!opt.quiet) {
    std::cout << "variant: " << nrpfd::variant_name(variant) << '\n';
    std::cout << std::left << std::setw(6) << "case" << std::setw(52)
              << "configuration" << std::setw(11) << "result" << std::setw(9)
              << "states" << "transitions\n";
  }
  for (int k = 1; k <= 8; ++k) {
    nrpfd::ScenarioConfig cfg = nrpfd::preset_case(k, variant);
    apply_common(opt, cfg);
    const nrpfd::ModelContext ctx = nrpfd::make_context(cfg);
    const nrpfd::GlobalState initial = nrpfd::build_reference_topology(ctx, cfg);
    const nrpfd::ExplorationResult result = nrpfd::explore(
        ctx, initial, nrpfd::as_property(ctx, nrpfd::no_dual_primary()),
        cfg.limits, cfg.interleaving, opt.workers);
    const bool match = result.verdict == expected[static_cast<std::size_t>(k - 1)];
    all_match = all_match && match;
    if (!opt.quiet) {
      std::cout << std::left << std::setw(6) << k << std::setw(52)
                << nrpfd::case_description(k) << std::setw(11)
                << nrpfd::verdict_name(result.verdict) << std::setw(9)
                << result.states << result.transitions
                << (match ? "" : "   <- unexpected") << '\n';
    }
  }
  if (!opt.quiet) {
    std::cout << (all_match ? "all verdicts as expected\n"
                            : "verdict mismatch against the regression vector\n");
  }
  return all_match ? kExitSatisfied : kExitViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nrpfd — explicit-state model checker for the NRP FD "
               "redundancy-failover protocol and its leasing variant"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "check one scenario");
  std::string variant_name_opt;
  int case_number = 0;
  std::string config_path, dot_path, xml_path, trace_path;
  CommonOptions run_opt;
  run->add_option("--variant", variant_name_opt,
                  "baseline, baseline-noopt or leasing (with --case)");
  auto* case_opt = run->add_option("--case", case_number, "preset case 1..8");
  auto* cfg_opt =
      run->add_option("--config", config_path, "scenario file (key = value)");
  case_opt->excludes(cfg_opt);
  run->add_option("--export-dot", dot_path, "write the state graph as DOT");
  run->add_option("--export-xml", xml_path, "write the state graph as XML");
  run->add_option("--export-trace", trace_path,
                  "write the counterexample trace when violated");
  add_common(run, run_opt);

  // suite
  auto* suite = app.add_subcommand(
      "suite", "run all eight presets and compare against the expected verdicts");
  std::string suite_variant = "baseline";
  CommonOptions suite_opt;
  suite->add_option("--variant", suite_variant,
                    "baseline, baseline-noopt or leasing");
  add_common(suite, suite_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the diagnostic
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) {
      if ((case_opt->count() == 0) == (cfg_opt->count() == 0)) {
        throw nrpfd::ConfigError("provide exactly one of --case or --config");
      }
      nrpfd::ScenarioConfig cfg;
      std::string label;
      if (case_opt->count() > 0) {
        nrpfd::Variant v = nrpfd::Variant::Baseline;
        if (!variant_name_opt.empty()) {
          auto parsed = nrpfd::variant_from_name(variant_name_opt);
          if (!parsed) {
            throw nrpfd::ConfigError("unknown variant '" + variant_name_opt + "'");
          }
          v = *parsed;
        }
        cfg = nrpfd::preset_case(case_number, v);
        label = "case " + std::to_string(case_number);
      } else {
        if (!variant_name_opt.empty()) {
          throw nrpfd::ConfigError(
              "--variant applies to presets; set variant inside the config file");
        }
        std::ifstream in(config_path);
        if (!in) throw nrpfd::ConfigError("cannot read " + config_path);
        std::ostringstream text;
        text << in.rdbuf();
        cfg = nrpfd::load_config(text.str());
        label = config_path;
      }
      apply_common(run_opt, cfg);
      return run_one(cfg, label, run_opt, dot_path, xml_path, trace_path);
    }
    auto v = nrpfd::variant_from_name(suite_variant);
    if (!v) throw nrpfd::ConfigError("unknown variant '" + suite_variant + "'");
    return run_suite(*v, suite_opt);
  } catch (const nrpfd::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nrpfd::ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kExitConfig;
  }
}
