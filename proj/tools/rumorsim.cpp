#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rumor/analytics.hpp"
#include "rumor/experiment.hpp"
#include "rumor/protocols.hpp"
#include "rumor/scenarios.hpp"

namespace {

using namespace rumor;

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  size_t begin = 0;
  while (begin <= text.size()) {
    const size_t comma = text.find(',', begin);
    const size_t end = comma == std::string::npos ? text.size() : comma;
    std::string piece = text.substr(begin, end - begin);
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return out;
}

void print_prediction(const Prediction& p) {
  std::printf("  %-9s base %.6g, expected range [%.6g, %.6g]   %s\n",
              p.quantity.c_str(), p.base, p.low(), p.high(), p.note.c_str());
}

void print_summary_line(const ExperimentResult& res) {
  std::printf(
      "%s: %u trials, success_rate %s, rounds median %s, msgs mean %s\n",
      res.spec.scenario.c_str(), res.spec.trials,
      format_double(res.agg.success_rate).c_str(),
      format_double(res.agg.rounds.median).c_str(),
      format_double(res.agg.messages.mean).c_str());
}

int cmd_simulate(const std::string& config, const std::vector<std::string>& sets,
                 const std::string& out_dir, unsigned workers) {
  KvPairs kv = load_kv_file(config);
  const KvPairs overrides = parse_kv_args(sets);
  kv.insert(kv.end(), overrides.begin(), overrides.end());
  const ExperimentSpec spec = spec_from_kv(kv);
  ExperimentResult res = run_experiment(spec, workers);
  emit_outputs(out_dir, {res});
  print_summary_line(res);
  std::printf("wrote %s/summary.csv, trajectory.csv, summary.json\n",
              out_dir.c_str());
  return 0;
}

int cmd_scenario(const std::string& name, const std::vector<std::string>& sets,
                 const std::string& out_dir, unsigned workers) {
  if (name == "list") {
    for (const std::string& s : scenario_names()) std::printf("%s\n", s.c_str());
    return 0;
  }
  const ScenarioReport rep = run_scenario(name, parse_kv_args(sets), workers);
  if (!out_dir.empty())
    emit_outputs(out_dir, rep.runs, rep.run_labels, rep.assertions);
  size_t passed = 0;
  for (const AssertionResult& a : rep.assertions) {
    std::printf("[%s] %s: %s\n", a.passed ? "PASS" : "FAIL", a.name.c_str(),
                a.detail.c_str());
    if (a.passed) ++passed;
  }
  std::printf("%s: %zu/%zu assertions passed\n", rep.name.c_str(), passed,
              rep.assertions.size());
  return rep.passed() ? 0 : 1;
}

int cmd_predict(const std::string& protocol, uint64_t n, uint32_t f_in,
                uint32_t f_out) {
  const Protocol p = protocol_from_string(protocol);
  std::printf("%s at n=%llu, f_in=%u, f_out=%u\n", to_string(p),
              static_cast<unsigned long long>(n), f_in, f_out);
  print_prediction(predicted_rounds(p, n, f_in, f_out));
  print_prediction(predicted_messages(p, n, f_in, f_out));
  if (p == Protocol::kRegularPull || p == Protocol::kRegularPushThenPull)
    print_prediction(predicted_endgame_rounds(n, f_in));
  if (p == Protocol::kRegularPushThenPull)
    std::printf("  switch_round %u (minimizes message overhead)\n",
                switch_round_for_overhead(static_cast<uint32_t>(n), f_out));
  return 0;
}

int cmd_sweep(const std::string& config, const std::vector<std::string>& sets,
              const std::string& param, const std::string& values,
              const std::string& out_dir, unsigned workers) {
  KvPairs base;
  if (!config.empty()) base = load_kv_file(config);
  const KvPairs overrides = parse_kv_args(sets);
  base.insert(base.end(), overrides.begin(), overrides.end());

  const std::vector<std::string> points = split_csv_list(values);
  if (points.empty()) throw ConfigError("--values lists no values");

  // validate every point before running anything
  std::vector<ExperimentSpec> specs;
  std::vector<std::string> labels;
  for (const std::string& value : points) {
    KvPairs kv = base;
    kv.emplace_back(param, value);
    specs.push_back(spec_from_kv(kv));
    labels.push_back(param + value);
  }
  std::vector<ExperimentResult> results;
  for (const ExperimentSpec& spec : specs) {
    results.push_back(run_experiment(spec, workers));
    print_summary_line(results.back());
  }
  emit_outputs(out_dir, results, labels);
  std::printf("wrote %zu summary rows to %s/summary.csv\n", results.size(),
              out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rumor spreading simulator for the random phone-call model"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned workers = 0;
  app.add_option("--workers", workers,
                 "worker pool size (default: machine parallelism; "
                 "RUMORSIM_WORKERS overrides the default)");

  std::string sim_config, sim_out;
  std::vector<std::string> sim_sets;
  CLI::App* sim =
      app.add_subcommand("simulate", "run one experiment from a config file");
  sim->add_option("--config", sim_config, "key=value config file")->required();
  sim->add_option("--set", sim_sets, "override key=value (repeatable, later wins)");
  sim->add_option("--out", sim_out, "output directory")->required();

  std::string sc_name, sc_out;
  std::vector<std::string> sc_sets;
  CLI::App* sc = app.add_subcommand(
      "scenario", "run a named preset and check its assertions");
  sc->add_option("name", sc_name, "preset name, or 'list'")->required();
  sc->add_option("--set", sc_sets, "override applied to every sub-run");
  sc->add_option("--out", sc_out, "output directory (optional)");

  std::string pd_protocol;
  uint64_t pd_n = 0;
  uint32_t pd_fin = 1, pd_fout = 1;
  CLI::App* pd = app.add_subcommand(
      "predict", "print analytic round/message predictions");
  pd->add_option("--protocol", pd_protocol, "protocol name")->required();
  pd->add_option("--n", pd_n, "process count")->required();
  pd->add_option("--fin", pd_fin, "pull fan-in");
  pd->add_option("--fout", pd_fout, "push fan-out");

  std::string sw_config, sw_param, sw_values, sw_out;
  std::vector<std::string> sw_sets;
  CLI::App* sw = app.add_subcommand(
      "sweep", "run the experiment once per value of one config key");
  sw->add_option("--config", sw_config, "base key=value config (optional)");
  sw->add_option("--set", sw_sets, "base override key=value");
  sw->add_option("--param", sw_param, "config key to sweep")->required();
  sw->add_option("--values", sw_values, "comma-separated values")->required();
  sw->add_option("--out", sw_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_config, sim_sets, sim_out, workers);
    if (sc->parsed()) return cmd_scenario(sc_name, sc_sets, sc_out, workers);
    if (pd->parsed()) return cmd_predict(pd_protocol, pd_n, pd_fin, pd_fout);
    if (sw->parsed())
      return cmd_sweep(sw_config, sw_sets, sw_param, sw_values, sw_out, workers);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
