#include "blockmod/edge_list.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace blockmod {

namespace {

constexpr std::string_view kKarate = R"(# Zachary karate club, 34 nodes, 78 edges (1-based)
1 2
1 3
1 4
1 5
1 6
1 7
1 8
1 9
1 11
1 12
1 13
1 14
1 18
1 20
1 22
1 32
2 3
2 4
2 8
2 14
2 18
2 20
2 22
2 31
3 4
3 8
3 9
3 10
3 14
3 28
3 29
3 33
4 8
4 13
4 14
5 7
5 11
6 7
6 11
6 17
7 17
9 31
9 33
9 34
10 34
14 34
15 33
15 34
16 33
16 34
19 33
19 34
20 34
21 33
21 34
23 33
23 34
24 26
24 28
24 30
24 33
24 34
25 26
25 28
25 32
26 32
27 30
27 34
28 34
29 32
29 34
30 33
30 34
31 33
31 34
32 33
32 34
33 34
)";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

long long parse_index(std::string_view token, std::size_t line_no) {
  long long value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError("line " + std::to_string(line_no) + ": '" + std::string(token) +
                     "' is not an integer");
  return value;
}

}  // namespace

Graph load_edge_list(std::istream& in, const EdgeListOptions& options) {
  const long long base = options.one_based ? 1 : 0;
  std::vector<std::pair<NodeId, NodeId>> edges;
  long long max_index = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;

    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < content.size()) {
      const auto start = content.find_first_not_of(" \t", pos);
      if (start == std::string_view::npos) break;
      const auto stop = std::min(content.find_first_of(" \t", start), content.size());
      tokens.push_back(content.substr(start, stop - start));
      pos = stop;
    }
    if (tokens.size() != 2)
      throw ParseError("line " + std::to_string(line_no) + ": expected two node indices, found " +
                       std::to_string(tokens.size()) + " tokens");

    const long long i = parse_index(tokens[0], line_no) - base;
    const long long j = parse_index(tokens[1], line_no) - base;
    if (i < 0 || j < 0)
      throw ParseError("line " + std::to_string(line_no) + ": node index below " +
                       std::to_string(base));
    if (options.n && (i >= *options.n || j >= *options.n))
      throw ParseError("line " + std::to_string(line_no) + ": node index exceeds declared n = " +
                       std::to_string(*options.n));
    if (i > std::numeric_limits<NodeId>::max() - 1 || j > std::numeric_limits<NodeId>::max() - 1)
      throw ParseError("line " + std::to_string(line_no) + ": node index too large");
    if (i == j) throw ParseError("line " + std::to_string(line_no) + ": self-loop");
    edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    max_index = std::max({max_index, i, j});
  }
  if (in.bad()) throw ParseError("read error");
  const int n = options.n.value_or(static_cast<int>(max_index + 1));
  return Graph::from_edges(n, edges);
}

Graph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open edge list '" + path.string() + "'");
  return load_edge_list(in, options);
}

void write_edge_list(std::ostream& out, const Graph& graph, bool one_based) {
  const int base = one_based ? 1 : 0;
  out << "# nodes " << graph.n() << '\n';
  for (const auto& [i, j] : graph.edges()) out << i + base << ' ' << j + base << '\n';
}

std::string_view karate_club_edge_list() { return kKarate; }

Graph karate_club() {
  std::istringstream in{std::string(kKarate)};
  return load_edge_list(in, {.one_based = true, .n = 34});
}

}  // namespace blockmod
