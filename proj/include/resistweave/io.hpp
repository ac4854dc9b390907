#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "resistweave/graph.hpp"

namespace resistweave {

// Edge-list text format:
//
//   # comment
//   n m
//   u v w [mult]      (m lines, zero-indexed, mult defaults to 1)
//
// Weights are written with 17 significant digits so a write/read round trip
// is bit-exact.

WeightedMultigraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const WeightedMultigraph& g);

WeightedMultigraph load_edge_list(const std::string& path);
void save_edge_list(const std::string& path, const WeightedMultigraph& g);

/// Several edge-list blocks back to back, e.g. one per matching or cycle.
std::vector<WeightedMultigraph> read_edge_list_blocks(std::istream& in);
void write_edge_list_blocks(std::ostream& out, const std::vector<WeightedMultigraph>& blocks);

/// printf("%.17g") formatting shared by every text and JSON writer.
std::string format_double(double x);

}  // namespace resistweave
