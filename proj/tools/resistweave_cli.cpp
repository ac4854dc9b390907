// resistweave command-line harness.
//
// Exit codes: 0 all hard assertions held, 1 a run failed or an assertion
// was violated (the report carries an "error" or "passed": false), 2 the
// configuration was rejected.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "resistweave/experiment.hpp"
#include "resistweave/io.hpp"
#include "resistweave/report.hpp"
#include "resistweave/spectral.hpp"

using namespace resistweave;

namespace {

struct Flags {
  std::string graph = "complete";
  std::optional<std::size_t> n;
  std::optional<std::size_t> degree;
  std::optional<double> epsilon;
  std::optional<std::size_t> d_target;
  std::optional<std::uint64_t> seed;
  std::size_t trials = 1;
  std::size_t pairs = 2000;
  double round_constant = 10.0;
  double c0 = 3.0;
  int weave_degree = 0;
  std::string out;
  std::string csv;
  std::string graph_out;
  std::string transcript;
  std::string format = "json";
};

ExperimentConfig build_config(const Flags& f) {
  ExperimentConfig cfg;
  cfg.generator = parse_generator_spec(f.graph);
  if (f.n) cfg.generator.n = *f.n;
  if (f.degree) cfg.generator.degree = *f.degree;
  cfg.epsilon = f.epsilon;
  cfg.d_target = f.d_target;
  cfg.seed = resolve_seed(f.seed);
  cfg.trials = f.trials;
  cfg.pair_budget = f.pairs;
  cfg.round_constant = f.round_constant;
  cfg.c0 = f.c0;
  cfg.weave_degree = f.weave_degree;
  cfg.out = f.out;
  cfg.csv_out = f.csv;
  cfg.graph_out = f.graph_out;
  cfg.transcript_out = f.transcript;
  cfg.format = f.format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  validate(cfg);
  return cfg;
}

// Runs `body` inside an output stream selected by --out.
void with_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  body(file);
}

void emit(const ExperimentConfig& cfg, const RunOutcome& outcome) {
  with_output(cfg.out, [&](std::ostream& os) {
    if (cfg.format == OutputFormat::Csv) {
      write_csv(os, outcome.rows);
    } else {
      write_json(os, outcome.report);
    }
  });
  if (!cfg.csv_out.empty()) {
    std::ofstream csv(cfg.csv_out);
    write_csv(csv, outcome.rows);
  }
  if (!cfg.transcript_out.empty()) {
    std::ofstream tr(cfg.transcript_out);
    for (const auto& line : outcome.transcript) tr << dump_json(line, -1) << '\n';
  }
}

int run_command(const std::string& name, const ExperimentConfig& cfg) {
  try {
    if (name == "generate") {
      WeightedMultigraph g;
      run_generate(cfg, g);
      with_output(cfg.out, [&](std::ostream& os) { write_edge_list(os, g); });
      return 0;
    }
    if (name == "resist" && cfg.format == OutputFormat::Csv) {
      Rng rng = make_rng(cfg.seed, 0);
      const WeightedMultigraph g = generate(cfg.generator, rng);
      with_output(cfg.out, [&](std::ostream& os) { all_resistances(g).write_csv(os); });
      return 0;
    }
    RunOutcome outcome;
    if (name == "decompose") outcome = run_decompose(cfg);
    if (name == "sparsify") outcome = run_sparsify(cfg);
    if (name == "certify") outcome = run_certify(cfg);
    if (name == "resist") outcome = run_resist(cfg);
    if (name == "experiment") outcome = run_experiment(cfg);
    emit(cfg, outcome);
    return outcome.passed ? 0 : 1;
  } catch (const std::exception& e) {
    Json report;
    report["schema"] = kReportSchema;
    report["config"] = config_json(cfg, name);
    report["error"] = {{"type", dynamic_cast<const GraphError*>(&e) ? "graph" : "runtime"}, {"message", e.what()}};
    report["passed"] = false;
    if (cfg.format == OutputFormat::Json) {
      with_output(cfg.out, [&](std::ostream& os) { write_json(os, report); });
    }
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resistance sparsifiers from matching unions of expanders"};
  app.require_subcommand(1);
  Flags flags;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"generate", "Write a generated graph as an edge list"},
      {"decompose", "Decompose into perfect matchings or Hamiltonian cycles"},
      {"sparsify", "Build resistance sparsifiers and verify them"},
      {"certify", "Play the Cut-Weave game and certify expansion"},
      {"resist", "All-pairs effective resistances"},
      {"experiment", "Compare the sparsifier with independent edge sampling"}};

  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--graph", flags.graph,
                    "complete[:N] | random-regular[:N[:D]] | circulant:N:o1,o2 | hypercube[:DIM] | file:PATH");
    sub->add_option("--n", flags.n, "Vertex count (hypercube: dimension)");
    sub->add_option("--degree", flags.degree, "Degree for random-regular graphs");
    sub->add_option("--epsilon", flags.epsilon, "Target accuracy; d_target = ceil(c0 / epsilon)");
    sub->add_option("--d-target", flags.d_target, "Number of matchings to keep");
    sub->add_option("--c0", flags.c0, "Constant in d_target = ceil(c0 / epsilon)");
    sub->add_option("--seed", flags.seed, "Master seed (falls back to RESISTWEAVE_SEED, then 0)");
    sub->add_option("--trials", flags.trials, "Independent trials");
    sub->add_option("--pairs", flags.pairs, "Sampled vertex pairs when n > 300");
    sub->add_option("--round-constant", flags.round_constant, "C in the round cap ceil(C r ln^2 n)");
    sub->add_option("--weave-degree", flags.weave_degree, "Weave regularity r for certify (0 = default)");
    sub->add_option("--out", flags.out, "Output path (default stdout)");
    sub->add_option("--csv", flags.csv, "Also write per-pair errors as CSV");
    sub->add_option("--graph-out", flags.graph_out, "Write the first sparsifier as an edge list plus JSON sidecar");
    sub->add_option("--transcript", flags.transcript, "Write game rounds as JSON lines");
    sub->add_option("--format", flags.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  ExperimentConfig cfg;
  try {
    cfg = build_config(flags);
    if ((name == "sparsify" || name == "experiment") && !cfg.epsilon && !cfg.d_target) {
      throw ConfigError("give --epsilon or --d-target");
    }
  } catch (const std::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 2;
  }
  return run_command(name, cfg);
}
