// Operator entry point. Exit codes: 0 success, 1 invariant violation or
// oracle mismatch, 2 usage or configuration error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spatial/association.hpp"
#include "spatial/instances.hpp"
#include "spatial/scenario.hpp"
#include "spatial/simulator.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct RunArgs {
  std::string scenario;
  std::string mode = "L2";
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::string fault = "none";
};

void configure(spatial::Scenario& s, spatial::RunOptions& o, const RunArgs& a) {
  for (const auto& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw spatial::ValidationError("override '" + kv + "' is not of the form key=value");
    }
    spatial::apply_override(s, o, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.seed) s.seed = *a.seed;
  if (a.fault == "privacy") {
    o.fault = spatial::Fault::privacy;
  } else if (a.fault != "none") {
    throw spatial::ValidationError("unknown fault '" + a.fault + "'");
  }
  spatial::validate(s);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw spatial::ValidationError("cannot write '" + path.string() + "'");
  out << text;
}

int cmd_run(const RunArgs& a) {
  spatial::Scenario scenario;
  spatial::RunOptions options;
  try {
    scenario = spatial::load_scenario(a.scenario);
    const auto mode = spatial::parse_mode(a.mode);
    if (!mode) throw spatial::ValidationError("mode must be L1 or L2");
    options.mode = *mode;
    configure(scenario, options, a);
    std::filesystem::create_directories(a.out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  const spatial::RunResult r = spatial::run(scenario, options);
  const std::filesystem::path dir(a.out);
  try {
    std::ostringstream trace;
    spatial::write_trace(r.trace, trace);
    write_file(dir / "trace.jsonl", trace.str());
    write_file(dir / "metrics.json", spatial::to_json(r.metrics).dump(2) + "\n");
    write_file(dir / "metrics.txt", spatial::metrics_table(r.metrics));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::cout << scenario.name << " (" << a.mode << ", seed " << scenario.seed << ")\n"
            << spatial::metrics_table(r.metrics);
  if (!r.violations.empty()) {
    std::cerr << r.violations.size() << " invariant violation(s):\n";
    for (const auto& v : r.violations) std::cerr << "  " << v << '\n';
    return kViolation;
  }
  return kOk;
}

int cmd_verify(std::size_t count, std::size_t max_obs, std::uint64_t seed) {
  if (max_obs > spatial::kBruteForceLimit) {
    std::cerr << "error: --max-obs " << max_obs << " exceeds the exhaustive search bound of "
              << spatial::kBruteForceLimit << '\n';
    return kUsage;
  }
  std::size_t energy_mismatch = 0;
  std::size_t partition_mismatch = 0;
  std::size_t observations = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto instance = spatial::random_instance(seed * 1000003ULL + i, max_obs);
    const auto c = spatial::check_against_oracle(instance);
    observations += c.observations;
    if (!c.energy_match) {
      ++energy_mismatch;
      std::cout << "instance " << i << ": energy " << std::setprecision(17) << c.solver_energy
                << " vs oracle " << c.oracle_energy << '\n';
    } else if (!c.partition_match) {
      ++partition_mismatch;
      std::cout << "instance " << i << ": equal energy, different partition\n";
    }
  }
  std::cout << "instances: " << count << "  observations: " << observations
            << "  energy mismatches: " << energy_mismatch
            << "  partition mismatches: " << partition_mismatch << '\n';
  return energy_mismatch + partition_mismatch == 0 ? kOk : kViolation;
}

int cmd_compare(const std::string& path, std::optional<std::uint64_t> seed,
                const std::vector<std::string>& overrides) {
  spatial::Scenario scenario;
  spatial::RunOptions l1;
  spatial::RunOptions l2;
  try {
    scenario = spatial::load_scenario(path);
    RunArgs a;
    a.seed = seed;
    a.overrides = overrides;
    spatial::Scenario copy = scenario;
    configure(scenario, l1, a);
    configure(copy, l2, a);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  l1.mode = spatial::Mode::L1;
  l2.mode = spatial::Mode::L2;
  const auto r1 = spatial::run(scenario, l1);
  const auto r2 = spatial::run(scenario, l2);

  auto row = [](const std::string& name, const std::string& a, const std::string& b) {
    std::cout << std::left << std::setw(30) << name << std::right << std::setw(10) << a
              << std::setw(10) << b << '\n';
  };
  auto num = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << v;
    return s.str();
  };
  std::cout << scenario.name << " (seed " << scenario.seed << ")\n";
  row("", "L1", "L2");
  row("trace records", std::to_string(r1.trace.size()), std::to_string(r2.trace.size()));
  row("delivery events", std::to_string(r1.metrics.delivery_events),
      std::to_string(r2.metrics.delivery_events));
  row("proactive delivery events", std::to_string(r1.metrics.proactive_delivery_events),
      std::to_string(r2.metrics.proactive_delivery_events));
  auto msgs = [](const spatial::Metrics& m) {
    return std::to_string(m.messages_email) + "/" + std::to_string(m.messages_calendar) + "/" +
           std::to_string(m.messages_other);
  };
  row("messages email/cal/other", msgs(r1.metrics), msgs(r2.metrics));
  row("privacy leaks", std::to_string(r1.metrics.privacy_leaks),
      std::to_string(r2.metrics.privacy_leaks));
  row("privacy leaks (true)", std::to_string(r1.metrics.privacy_leaks_true),
      std::to_string(r2.metrics.privacy_leaks_true));
  row("interruptions while engaged", std::to_string(r1.metrics.interruptions_while_engaged),
      std::to_string(r2.metrics.interruptions_while_engaged));
  row("mean latency (ticks)", num(r1.metrics.mean_latency_ticks),
      num(r2.metrics.mean_latency_ticks));
  row("batches", std::to_string(r1.metrics.batch_count), std::to_string(r2.metrics.batch_count));

  int status = kOk;
  for (const auto* r : {&r1, &r2}) {
    for (const auto& v : r->violations) {
      std::cerr << (r == &r1 ? "L1 " : "L2 ") << v << '\n';
      status = kViolation;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial context simulator and association verifier"};
  app.require_subcommand(1);

  RunArgs run_args;
  std::uint64_t run_seed = 0;
  auto* run = app.add_subcommand("run", "Run a scenario and write trace and metrics files");
  run->add_option("--scenario", run_args.scenario, "Scenario JSON file")->required();
  run->add_option("--mode", run_args.mode, "Proactivity level")
      ->check(CLI::IsMember({"L1", "L2"}));
  run->add_option("--out", run_args.out, "Output directory")->required();
  auto* seed_opt = run->add_option("--seed", run_seed, "Override the scenario seed");
  run->add_option("--set", run_args.overrides, "Override key=value (repeatable)");
  run->add_option("--inject-fault", run_args.fault, "Test hook: none or privacy")
      ->check(CLI::IsMember({"none", "privacy"}));

  std::size_t count = 200;
  std::size_t max_obs = 8;
  std::uint64_t verify_seed = 7;
  auto* verify = app.add_subcommand("verify-assoc", "Check the flow solver against exhaustive search");
  verify->add_option("--count", count, "Number of random instances");
  verify->add_option("--max-obs", max_obs, "Largest instance size");
  verify->add_option("--seed", verify_seed, "Instance seed");

  std::string compare_path;
  std::uint64_t compare_seed = 0;
  std::vector<std::string> compare_overrides;
  auto* compare = app.add_subcommand("compare", "Run L1 and L2 on the same sensor stream");
  compare->add_option("--scenario", compare_path, "Scenario JSON file")->required();
  auto* compare_seed_opt = compare->add_option("--seed", compare_seed, "Override the scenario seed");
  compare->add_option("--set", compare_overrides, "Override key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) {
      if (*seed_opt) run_args.seed = run_seed;
      return cmd_run(run_args);
    }
    if (*verify) return cmd_verify(count, max_obs, verify_seed);
    if (*compare) {
      std::optional<std::uint64_t> seed;
      if (*compare_seed_opt) seed = compare_seed;
      return cmd_compare(compare_path, seed, compare_overrides);
    }
  } catch (const spatial::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
