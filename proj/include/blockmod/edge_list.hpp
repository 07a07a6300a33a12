#pragma once

#include "blockmod/sbm.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace blockmod {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Whitespace-separated integer pairs, one undirected edge per line. Lines
/// whose first non-blank character is '#' are comments.
struct EdgeListOptions {
  bool one_based = true;
  /// Declared node count; inferred from the largest index when unset.
  std::optional<int> n;
};

Graph load_edge_list(std::istream& in, const EdgeListOptions& options = {});
Graph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options = {});

/// Writes "# nodes N" followed by one "i j" line per edge (i < j).
void write_edge_list(std::ostream& out, const Graph& graph, bool one_based = true);

/// Zachary's karate club network: 34 members, 78 friendship edges, 1-based.
std::string_view karate_club_edge_list();
Graph karate_club();

}  // namespace blockmod
