#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "resistweave/graph.hpp"
#include "resistweave/report.hpp"
#include "resistweave/rng.hpp"

namespace resistweave {

/// Raised for configurations that are rejected before any work is done.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class GeneratorKind { Complete, RandomRegular, Circulant, Hypercube, File };

/// Textual form: "complete:N", "random-regular:N:D", "circulant:N:o1,o2,...",
/// "hypercube:DIM", "file:PATH". Missing numbers may come from --n/--degree.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Complete;
  std::size_t n = 0;  // vertex count; the dimension for hypercubes
  std::size_t degree = 0;
  std::vector<std::size_t> offsets;
  std::string path;

  std::string to_string() const;
};

GeneratorSpec parse_generator_spec(const std::string& text);

/// Builds the graph. Random-regular output is audited for simplicity and
/// regularity.
WeightedMultigraph generate(const GeneratorSpec& spec, Rng& rng);

/// Regular elements the weave player draws from: Walecki cycles for odd
/// complete graphs, a matching decomposition for bipartite graphs, and
/// matchings of the double cover otherwise.
struct GameElements {
  std::string kind;
  std::vector<WeightedMultigraph> graphs;
};

GameElements game_elements(const WeightedMultigraph& g);

enum class OutputFormat { Json, Csv };

struct ExperimentConfig {
  GeneratorSpec generator;
  std::optional<double> epsilon;
  std::optional<std::size_t> d_target;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::size_t pair_budget = 2000;
  double round_constant = 10.0;
  double c0 = 3.0;
  int weave_degree = 0;  // 0 picks a default from the element family
  std::string out;       // report path; empty writes to stdout
  std::string csv_out;   // per-pair errors
  std::string graph_out; // first trial's sparsifier
  std::string transcript_out;
  OutputFormat format = OutputFormat::Json;
};

/// Throws ConfigError on out-of-range fields.
void validate(const ExperimentConfig& cfg);

/// Seed from the flag, else RESISTWEAVE_SEED, else 0.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

struct CsvRow {
  std::size_t trial;
  VertexId u;
  VertexId v;
  double r_g;
  double r_h;
  double rel_err;
};

inline constexpr const char* kCsvHeader = "trial,u,v,R_G,R_H,rel_err";

struct RunOutcome {
  Json report;
  std::vector<CsvRow> rows;
  std::vector<Json> transcript;  // one object per game round
  bool passed = true;            // every hard assertion held
};

RunOutcome run_generate(const ExperimentConfig& cfg, WeightedMultigraph& graph);
RunOutcome run_decompose(const ExperimentConfig& cfg);
RunOutcome run_sparsify(const ExperimentConfig& cfg);
RunOutcome run_certify(const ExperimentConfig& cfg);
RunOutcome run_resist(const ExperimentConfig& cfg);
RunOutcome run_experiment(const ExperimentConfig& cfg);

/// Config echo shared by all reports.
Json config_json(const ExperimentConfig& cfg, const std::string& command);

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);

}  // namespace resistweave
