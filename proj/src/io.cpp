#include "resistweave/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace resistweave {

namespace {

// Next non-empty line with comments stripped; false at end of input.
bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void parse_error(std::size_t lineno, const std::string& what) {
  throw GraphError("edge list line " + std::to_string(lineno) + ": " + what);
}

bool read_block(std::istream& in, std::size_t& lineno, WeightedMultigraph& out) {
  std::string line;
  if (!next_content_line(in, line, lineno)) return false;
  std::istringstream header(line);
  long long n = -1, m = -1;
  if (!(header >> n >> m) || n < 0 || m < 0) parse_error(lineno, "expected header 'n m'");

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_content_line(in, line, lineno)) parse_error(lineno, "unexpected end of input");
    std::istringstream row(line);
    long long u = -1, v = -1, mult = 1;
    double w = 0.0;
    if (!(row >> u >> v >> w)) parse_error(lineno, "expected 'u v w [mult]'");
    if (!(row >> mult)) mult = 1;
    if (u < 0 || v < 0 || mult <= 0) parse_error(lineno, "negative id or non-positive multiplicity");
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w, static_cast<std::size_t>(mult)});
  }
  out = WeightedMultigraph(static_cast<std::size_t>(n), std::move(edges));
  return true;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

WeightedMultigraph read_edge_list(std::istream& in) {
  std::size_t lineno = 0;
  WeightedMultigraph g;
  if (!read_block(in, lineno, g)) throw GraphError("edge list: empty input");
  return g;
}

void write_edge_list(std::ostream& out, const WeightedMultigraph& g) {
  out << g.num_vertices() << ' ' << g.num_records() << '\n';
  for (const auto& e : g.edges()) {
    out << e.u << ' ' << e.v << ' ' << format_double(e.w);
    if (e.mult != 1) out << ' ' << e.mult;
    out << '\n';
  }
}

WeightedMultigraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_edge_list(in);
}

void save_edge_list(const std::string& path, const WeightedMultigraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_edge_list(out, g);
}

std::vector<WeightedMultigraph> read_edge_list_blocks(std::istream& in) {
  std::vector<WeightedMultigraph> blocks;
  std::size_t lineno = 0;
  WeightedMultigraph g;
  while (read_block(in, lineno, g)) blocks.push_back(std::move(g));
  return blocks;
}

void write_edge_list_blocks(std::ostream& out, const std::vector<WeightedMultigraph>& blocks) {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    out << "# block " << i << '\n';
    write_edge_list(out, blocks[i]);
  }
}

}  // namespace resistweave
