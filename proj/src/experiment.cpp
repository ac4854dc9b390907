#include "resistweave/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "resistweave/cutweave.hpp"
#include "resistweave/decompose.hpp"
#include "resistweave/generators.hpp"
#include "resistweave/io.hpp"
#include "resistweave/sparsify.hpp"
#include "resistweave/spectral.hpp"

namespace resistweave {

namespace {

std::size_t parse_count(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw ConfigError("");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("invalid " + what + ": '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double median_of(std::vector<double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

Json graph_summary(const WeightedMultigraph& g) {
  Json j;
  j["vertices"] = g.num_vertices();
  j["edges"] = g.num_edges();
  j["records"] = g.num_records();
  const double d = g.regular_degree();
  j["regular_degree"] = d >= 0.0 ? Json(d) : Json(nullptr);
  j["connected"] = g.is_connected();
  j["bipartite"] = g.is_bipartite();
  return j;
}

Json certificate_json(const ResistanceCertificate& c) {
  Json j;
  j["holds"] = c.holds;
  j["margin"] = c.margin;
  j["violations"] = c.violations;
  j["lambda2"] = c.lambda2;
  j["degree"] = c.degree;
  j["w_max"] = c.w_max;
  j["worst_pair"] = {c.worst.first, c.worst.second};
  return j;
}

Json error_json(const ErrorReport& r) {
  Json j;
  j["pairs"] = r.count();
  j["all_pairs"] = r.all_pairs;
  j["pair_seed"] = r.pair_seed;
  j["connected"] = r.connected;
  j["max"] = r.max;
  j["median"] = r.median;
  j["p95"] = r.p95;
  return j;
}

void append_rows(std::vector<CsvRow>& rows, std::size_t trial, const ErrorReport& r) {
  for (std::size_t i = 0; i < r.count(); ++i) {
    rows.push_back({trial, r.pairs[i].first, r.pairs[i].second, r.r_g[i], r.r_h[i], r.errors[i]});
  }
}

std::size_t target_degree(const ExperimentConfig& cfg) {
  return cfg.d_target ? *cfg.d_target : sparsifier_degree(*cfg.epsilon, cfg.c0);
}

WeightedMultigraph input_graph(const ExperimentConfig& cfg) {
  Rng rng = make_rng(cfg.seed, 0);
  return generate(cfg.generator, rng);
}

}  // namespace

GameElements game_elements(const WeightedMultigraph& g) {
  const std::size_t n = g.num_vertices();
  if (n >= 3 && n % 2 == 1 && g.num_edges() == n * (n - 1) / 2 && g.regular_degree() == static_cast<double>(n - 1) &&
      g.num_records() == g.num_edges()) {
    return {"walecki-cycles", walecki_decomposition(n).as_graphs()};
  }
  if (g.is_bipartite()) return {"matchings", matching_decomposition(g).as_graphs()};
  return {"double-cover-matchings", matching_decomposition(double_cover(g)).as_graphs()};
}

std::string GeneratorSpec::to_string() const {
  switch (kind) {
    case GeneratorKind::Complete:
      return "complete:" + std::to_string(n);
    case GeneratorKind::RandomRegular:
      return "random-regular:" + std::to_string(n) + ":" + std::to_string(degree);
    case GeneratorKind::Circulant: {
      std::string s = "circulant:" + std::to_string(n) + ":";
      for (std::size_t i = 0; i < offsets.size(); ++i) s += (i ? "," : "") + std::to_string(offsets[i]);
      return s;
    }
    case GeneratorKind::Hypercube:
      return "hypercube:" + std::to_string(n);
    case GeneratorKind::File:
      return "file:" + path;
  }
  return "";
}

GeneratorSpec parse_generator_spec(const std::string& text) {
  GeneratorSpec spec;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  const auto parts = rest.empty() ? std::vector<std::string>{} : split(rest, ':');

  if (kind == "file") {
    spec.kind = GeneratorKind::File;
    spec.path = rest;
    return spec;
  }
  if (kind == "complete") {
    spec.kind = GeneratorKind::Complete;
  } else if (kind == "random-regular") {
    spec.kind = GeneratorKind::RandomRegular;
  } else if (kind == "circulant") {
    spec.kind = GeneratorKind::Circulant;
  } else if (kind == "hypercube") {
    spec.kind = GeneratorKind::Hypercube;
  } else {
    throw ConfigError("unknown generator '" + kind + "'");
  }
  if (parts.size() > 2) throw ConfigError("too many fields in generator spec '" + text + "'");
  if (!parts.empty() && !parts[0].empty()) spec.n = parse_count(parts[0], "vertex count");
  if (parts.size() == 2) {
    if (spec.kind == GeneratorKind::Circulant) {
      for (const auto& o : split(parts[1], ',')) spec.offsets.push_back(parse_count(o, "circulant offset"));
    } else if (spec.kind == GeneratorKind::RandomRegular) {
      spec.degree = parse_count(parts[1], "degree");
    } else {
      throw ConfigError("generator '" + kind + "' takes one parameter");
    }
  }
  return spec;
}

WeightedMultigraph generate(const GeneratorSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case GeneratorKind::Complete:
      return complete_graph(spec.n);
    case GeneratorKind::RandomRegular: {
      WeightedMultigraph g = random_regular(spec.n, spec.degree, rng);
      if (g.regular_degree() != static_cast<double>(spec.degree) || g.has_self_loops() ||
          g.num_records() != g.num_edges()) {
        throw GraphError("random-regular audit failed");
      }
      return g;
    }
    case GeneratorKind::Circulant:
      return circulant(spec.n, spec.offsets);
    case GeneratorKind::Hypercube:
      return hypercube(spec.n);
    case GeneratorKind::File:
      return load_edge_list(spec.path);
  }
  throw ConfigError("unknown generator");
}

void validate(const ExperimentConfig& cfg) {
  const auto& g = cfg.generator;
  switch (g.kind) {
    case GeneratorKind::Complete:
    case GeneratorKind::Circulant:
      if (g.n < 2) throw ConfigError("--n must be at least 2");
      break;
    case GeneratorKind::RandomRegular:
      if (g.n < 2) throw ConfigError("--n must be at least 2");
      if (g.degree == 0 || g.degree >= g.n) throw ConfigError("--degree must lie in [1, n-1]");
      if ((g.n * g.degree) % 2 != 0) throw ConfigError("n * degree must be even");
      break;
    case GeneratorKind::Hypercube:
      if (g.n == 0 || g.n > 20) throw ConfigError("hypercube dimension must lie in [1, 20]");
      break;
    case GeneratorKind::File:
      if (g.path.empty()) throw ConfigError("file generator needs a path");
      break;
  }
  if (cfg.epsilon && !(*cfg.epsilon > 0.0 && *cfg.epsilon < 1.0)) throw ConfigError("--epsilon must lie in (0, 1)");
  if (cfg.d_target && *cfg.d_target == 0) throw ConfigError("--d-target must be positive");
  if (cfg.epsilon && cfg.d_target) throw ConfigError("give either --epsilon or --d-target, not both");
  if (cfg.trials == 0) throw ConfigError("--trials must be positive");
  if (cfg.pair_budget == 0) throw ConfigError("--pairs must be positive");
  if (!(cfg.round_constant > 0.0)) throw ConfigError("--round-constant must be positive");
  if (!(cfg.c0 > 0.0)) throw ConfigError("--c0 must be positive");
  if (cfg.weave_degree < 0) throw ConfigError("--weave-degree must be nonnegative");
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RESISTWEAVE_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(env, &pos, 0);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("RESISTWEAVE_SEED is not an unsigned integer: '") + env + "'");
  }
  return 0;
}

Json config_json(const ExperimentConfig& cfg, const std::string& command) {
  Json j;
  j["command"] = command;
  j["graph"] = cfg.generator.to_string();
  j["epsilon"] = cfg.epsilon ? Json(*cfg.epsilon) : Json(nullptr);
  j["d_target"] = cfg.d_target ? Json(*cfg.d_target) : Json(nullptr);
  j["c0"] = cfg.c0;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["pair_budget"] = cfg.pair_budget;
  j["round_constant"] = cfg.round_constant;
  j["weave_degree"] = cfg.weave_degree;
  return j;
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.trial << ',' << r.u << ',' << r.v << ',' << format_double(r.r_g) << ',' << format_double(r.r_h) << ','
        << format_double(r.rel_err) << '\n';
  }
}

RunOutcome run_generate(const ExperimentConfig& cfg, WeightedMultigraph& graph) {
  graph = input_graph(cfg);
  RunOutcome out;
  out.report["schema"] = kReportSchema;
  out.report["config"] = config_json(cfg, "generate");
  out.report["graph"] = graph_summary(graph);
  return out;
}

RunOutcome run_decompose(const ExperimentConfig& cfg) {
  const WeightedMultigraph g = input_graph(cfg);
  RunOutcome out;
  out.report["schema"] = kReportSchema;
  out.report["config"] = config_json(cfg, "decompose");
  out.report["graph"] = graph_summary(g);

  const GameElements el = game_elements(g);
  Json parts = Json::array();
  WeightedMultigraph total(el.graphs.empty() ? 0 : el.graphs.front().num_vertices());
  for (const auto& part : el.graphs) {
    Json edges = Json::array();
    for (const auto& e : part.edges()) edges.push_back({e.u, e.v});
    parts.push_back(std::move(edges));
    total = graph_sum(total, part);
  }
  const WeightedMultigraph host = el.kind == "double-cover-matchings" ? double_cover(g) : g;
  const bool exact = total == host;
  out.report["decomposition"] = {{"kind", el.kind}, {"parts", el.graphs.size()}, {"partition_exact", exact}};
  out.report["parts"] = std::move(parts);
  out.passed = exact;
  return out;
}

RunOutcome run_sparsify(const ExperimentConfig& cfg) {
  const WeightedMultigraph g = input_graph(cfg);
  const std::size_t d_target = target_degree(cfg);
  const double degree = g.regular_degree();
  if (degree < 0.0) throw GraphError("sparsify needs a regular input graph");
  if (d_target > static_cast<std::size_t>(degree)) {
    throw GraphError("d_target " + std::to_string(d_target) + " exceeds the degree " + format_double(degree));
  }

  RunOutcome out;
  out.report["schema"] = kReportSchema;
  out.report["config"] = config_json(cfg, "sparsify");
  out.report["graph"] = graph_summary(g);
  out.report["graph"]["lambda2"] = lambda2(g);

  const MatchingDecomposition decomposition = double_cover_decomposition(g);
  const ResistanceTable g_table = all_resistances(g);
  Json trials = Json::array();
  std::vector<double> max_errors;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Rng rng = make_rng(cfg.seed, t + 1);
    SparsifierResult res = resistance_sparsifier_with_degree(g, d_target, rng, &decomposition);
    Json tj;
    tj["trial"] = t;
    tj["d_target"] = d_target;
    tj["scale"] = res.scale;
    tj["edges"] = res.edge_count();
    tj["lambda2"] = res.lambda2;
    tj["resamples"] = res.resamples;
    tj["connected"] = res.connected;
    tj["matchings"] = res.matchings;
    if (!res.connected) {
      tj["error"] = {{"type", "disconnected"}, {"message", "sparsifier stayed disconnected after resampling"}};
      out.passed = false;
      trials.push_back(std::move(tj));
      continue;
    }
    const ResistanceTable h_table = all_resistances(res.graph);
    const ErrorReport rep = compare_tables(g_table, h_table, cfg.pair_budget, rng);
    res.attach(rep);
    const ResistanceCertificate cert = thm9_certificate(res.graph, &h_table);

    std::size_t light = 0, heavy = 0;
    bool weights_ok = true;
    for (const auto& e : res.graph.edges()) {
      if (std::abs(e.w - res.scale) <= 1e-12 * res.scale) {
        light += e.mult;
      } else if (std::abs(e.w - 2.0 * res.scale) <= 1e-12 * res.scale) {
        heavy += e.mult;
      } else {
        weights_ok = false;
      }
    }
    const double deg_err = [&] {
      double worst = 0.0;
      for (double d : res.graph.weighted_degrees()) worst = std::max(worst, std::abs(d - degree));
      return worst;
    }();
    const bool regular = deg_err <= 1e-9 * std::max(1.0, degree);

    tj["errors"] = error_json(rep);
    tj["thm9"] = certificate_json(cert);
    tj["weight_histogram"] = {{"scale", light}, {"twice_scale", heavy}};
    tj["max_degree_deviation"] = deg_err;
    tj["regular"] = regular;
    out.passed = out.passed && cert.holds && regular && weights_ok;
    max_errors.push_back(rep.max);
    append_rows(out.rows, t, rep);
    trials.push_back(std::move(tj));

    if (t == 0 && !cfg.graph_out.empty()) {
      save_edge_list(cfg.graph_out, res.graph);
      std::ofstream side(cfg.graph_out + ".json");
      Json sidecar;
      sidecar["schema"] = kReportSchema;
      sidecar["seed"] = cfg.seed;
      sidecar["d_target"] = d_target;
      sidecar["scale"] = res.scale;
      sidecar["lambda2"] = res.lambda2;
      sidecar["errors"] = error_json(rep);
      sidecar["matchings"] = res.matchings;
      write_json(side, sidecar);
    }
  }
  out.report["trials"] = std::move(trials);
  out.report["aggregate"] = {{"median_max_error", median_of(max_errors)},
                             {"worst_max_error", max_errors.empty() ? 0.0 : *std::max_element(max_errors.begin(), max_errors.end())}};
  out.report["passed"] = out.passed;
  return out;
}

RunOutcome run_certify(const ExperimentConfig& cfg) {
  const WeightedMultigraph g = input_graph(cfg);
  const GameElements el = game_elements(g);
  const std::size_t n = el.graphs.front().num_vertices();
  const double elem_degree = el.graphs.front().regular_degree();
  int r = cfg.weave_degree;
  if (r == 0) {
    const std::size_t per_side = set_cover_sample_count((n + 1) / 2, 0.5);
    r = static_cast<int>(std::lround(elem_degree) * std::min(el.graphs.size(), 2 * per_side));
  }
  const std::size_t cap = default_round_cap(n, r, cfg.round_constant);

  RunOutcome out;
  out.report["schema"] = kReportSchema;
  out.report["config"] = config_json(cfg, "certify");
  out.report["graph"] = graph_summary(g);
  out.report["game"] = {{"elements", el.kind},
                        {"element_count", el.graphs.size()},
                        {"vertices", n},
                        {"r", r},
                        {"round_cap", cap},
                        {"threshold", potential_threshold(n)}};

  Json trials = Json::array();
  std::size_t certified = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Rng rng = make_rng(cfg.seed, t + 1);
    const GameResult res = play_game(el.graphs, r, cap, rng);
    const auto& hist = res.state.history();
    bool monotone = true, strict = true;
    double stated_slack = std::numeric_limits<double>::infinity();
    double proven_slack = std::numeric_limits<double>::infinity();
    for (const auto& rec : hist) {
      monotone = monotone && rec.psi_after <= rec.psi_before + 1e-12;
      strict = strict && rec.psi_after < rec.psi_before;
      stated_slack = std::min(stated_slack, rec.drop() - rec.stated_bound());
      proven_slack = std::min(proven_slack, rec.drop() - rec.proven_bound());
      out.transcript.push_back({{"trial", t},
                                {"round", rec.round},
                                {"bisection_hash", rec.bisection_hash},
                                {"weave_edges", rec.weave_edges},
                                {"r", rec.r},
                                {"psi_before", rec.psi_before},
                                {"psi_after", rec.psi_after},
                                {"reduction_bound", rec.proven_bound()},
                                {"stated_reduction_bound", rec.stated_bound()}});
    }
    Json tj;
    tj["trial"] = t;
    tj["status"] = res.status;
    tj["certified"] = res.certified;
    tj["certified_expansion"] = res.certified_expansion;
    tj["rounds"] = res.state.round();
    tj["final_psi"] = res.state.psi();
    tj["psi_non_increasing"] = monotone;
    tj["psi_strictly_decreasing"] = strict;
    tj["min_slack_stated_bound"] = stated_slack;
    tj["min_slack_proven_bound"] = proven_slack;
    tj["fallback_rounds"] = res.fallback_rounds;
    tj["union_of_host_elements"] = res.fallback_rounds.empty();
    bool hard_ok = monotone && proven_slack >= -1e-9;
    if (res.certified && n <= 14) {
      const double phi = cheeger_bruteforce(res.state.union_graph()).phi;
      tj["bruteforce_phi"] = phi;
      hard_ok = hard_ok && phi >= res.certified_expansion - 1e-9;
    }
    tj["hard_assertions"] = hard_ok;
    out.passed = out.passed && hard_ok;
    certified += res.certified ? 1 : 0;
    trials.push_back(std::move(tj));
  }
  out.report["trials"] = std::move(trials);
  out.report["aggregate"] = {{"certified", certified}, {"trials", cfg.trials}};
  out.report["passed"] = out.passed;
  return out;
}

RunOutcome run_resist(const ExperimentConfig& cfg) {
  const WeightedMultigraph g = input_graph(cfg);
  if (!g.is_connected()) throw GraphError("resist needs a connected graph");
  const ResistanceTable table = all_resistances(g);
  RunOutcome out;
  out.report["schema"] = kReportSchema;
  out.report["config"] = config_json(cfg, "resist");
  out.report["graph"] = graph_summary(g);
  Json rows = Json::array();
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    for (VertexId v = u + 1; v < g.num_vertices(); ++v) rows.push_back({u, v, table(u, v)});
  }
  out.report["resistances"] = std::move(rows);
  if (g.regular_degree() > 0.0) out.report["thm9"] = certificate_json(thm9_certificate(g, &table));
  return out;
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  const WeightedMultigraph g = input_graph(cfg);
  const std::size_t d_target = target_degree(cfg);
  const std::size_t budget = d_target * g.num_vertices();

  RunOutcome out;
  out.report["schema"] = kReportSchema;
  out.report["config"] = config_json(cfg, "experiment");
  out.report["graph"] = graph_summary(g);
  out.report["edge_budget"] = budget;

  const MatchingDecomposition decomposition = double_cover_decomposition(g);
  const ResistanceTable g_table = all_resistances(g);
  std::vector<double> sparse_max, base_max;
  Json trials = Json::array();
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    Rng rng = make_rng(cfg.seed, t + 1);
    const SparsifierResult sp = resistance_sparsifier_with_degree(g, d_target, rng, &decomposition);
    const SparsifierResult base = independent_sample_baseline(g, budget, rng);
    // Both sparsifiers are scored on the same pairs.
    const std::uint64_t pair_seed = rng();
    Rng pr1(pair_seed), pr2(pair_seed);
    const ErrorReport sp_rep = verify_sparsifier(g_table, sp.graph, cfg.pair_budget, pr1);
    const ErrorReport base_rep = verify_sparsifier(g_table, base.graph, cfg.pair_budget, pr2);
    bool cert_ok = true;
    Json tj;
    tj["trial"] = t;
    tj["sparsifier"] = {{"edges", sp.edge_count()}, {"lambda2", sp.lambda2}, {"errors", error_json(sp_rep)}};
    if (sp.connected) {
      const ResistanceCertificate cert = thm9_certificate(sp.graph);
      tj["sparsifier"]["thm9"] = certificate_json(cert);
      cert_ok = cert.holds;
    }
    tj["baseline"] = {{"edges", base.edge_count()}, {"connected", base.connected}, {"errors", error_json(base_rep)}};
    out.passed = out.passed && cert_ok && sp.connected;
    sparse_max.push_back(sp_rep.max);
    base_max.push_back(base_rep.max);
    append_rows(out.rows, t, sp_rep);
    trials.push_back(std::move(tj));
  }
  const double ms = median_of(sparse_max);
  const double mb = median_of(base_max);
  out.report["trials"] = std::move(trials);
  out.report["aggregate"] = {{"median_max_error_sparsifier", ms},
                             {"median_max_error_baseline", mb},
                             {"sparsifier_better", ms < mb}};
  out.report["passed"] = out.passed;
  return out;
}

}  // namespace resistweave
