#include "stageflow/graph.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "stageflow/error.hpp"
#include "stageflow/io_util.hpp"

namespace stageflow {

std::ostream& operator<<(std::ostream& os, NodeId node) { return os << node.value; }

TspInstance::TspInstance(int n, Cost large, NodeId origin)
    : n_(n), large_(large), origin_(origin) {
  if (n < 1) throw PreconditionError("instance needs at least one node");
  if (large < 0) throw PreconditionError("large cost must be non-negative");
  if (origin.value < 1 || origin.value > n) throw PreconditionError("origin outside instance");
  cost_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), large);
  for (int v = 1; v <= n; ++v) cost_[index(NodeId{v}, NodeId{v})] = 0;
}

void TspInstance::set_cost(NodeId i, NodeId j, Cost c) {
  if (!contains(i) || !contains(j)) throw PreconditionError("node outside instance");
  if (i == j) throw PreconditionError("diagonal entries are unused");
  if (c < 0) throw PreconditionError("costs must be non-negative");
  cost_[index(i, j)] = c;
}

HcpInstance::HcpInstance(int n) : n_(n) {
  if (n < 1) throw PreconditionError("graph needs at least one node");
  adjacency_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

bool HcpInstance::has_arc(NodeId i, NodeId j) const {
  if (i.value < 1 || i.value > n_ || j.value < 1 || j.value > n_) return false;
  return adjacency_[static_cast<std::size_t>(i.value - 1) * n_ + (j.value - 1)] != 0;
}

void HcpInstance::add_arc(NodeId i, NodeId j) {
  if (i.value < 1 || i.value > n_ || j.value < 1 || j.value > n_)
    throw PreconditionError("arc endpoint outside graph");
  if (i == j) throw PreconditionError("self-loops are not allowed");
  if (has_arc(i, j)) throw PreconditionError("duplicate arc");
  adjacency_[static_cast<std::size_t>(i.value - 1) * n_ + (j.value - 1)] = 1;
  arcs_.emplace_back(i, j);
}

int HcpInstance::degree(NodeId v) const {
  int d = 0;
  for (int u = 1; u <= n_; ++u)
    if (has_arc(v, NodeId{u}) || has_arc(NodeId{u}, v)) ++d;
  return d;
}

int HcpInstance::group_degree(NodeId v, const GroupRoles& roles) const {
  int d = 0;
  for (int u = 1; u <= n_; ++u) {
    NodeId w{u};
    if (!roles.is_group(w)) continue;
    if (has_arc(v, w) || has_arc(w, v)) ++d;
  }
  return d;
}

namespace {

int parse_int_field(std::string_view text, const std::string& source, int line, const char* what) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError(source, line, std::string("expected integer ") + what + ", got '" + std::string(text) + "'");
  if (value < INT32_MIN || value > INT32_MAX) throw ParseError(source, line, std::string(what) + " out of range");
  return static_cast<int>(value);
}

Cost parse_cost_field(std::string_view text, const std::string& source, int line) {
  Cost value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError(source, line, "expected integer cost, got '" + std::string(text) + "'");
  if (value < 0) throw ParseError(source, line, "negative cost");
  return value;
}

}  // namespace

TspInstance parse_tsp_instance(std::istream& in, const std::string& source_name, Cost default_large) {
  int n = 0;
  Cost large = default_large;
  int origin = 1;
  std::vector<std::tuple<int, int, Cost, int>> entries;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_comment(raw);
    if (line.empty()) continue;
    if (auto eq = line.find('='); eq != std::string_view::npos) {
      std::string_view key = trim(line.substr(0, eq));
      std::string_view value = trim(line.substr(eq + 1));
      if (!entries.empty()) throw ParseError(source_name, line_no, "header line after arc entries");
      if (key == "n") {
        if (n != 0) throw ParseError(source_name, line_no, "duplicate n= header");
        n = parse_int_field(value, source_name, line_no, "node count");
        if (n < 1) throw ParseError(source_name, line_no, "node count must be positive");
      } else if (key == "large") {
        large = parse_cost_field(value, source_name, line_no);
      } else if (key == "origin") {
        origin = parse_int_field(value, source_name, line_no, "origin");
      } else {
        throw ParseError(source_name, line_no, "unknown header key '" + std::string(key) + "'");
      }
      continue;
    }
    if (n == 0) throw ParseError(source_name, line_no, "missing n= header before arc entries");
    auto fields = split_ws(line);
    if (fields.size() != 3)
      throw ParseError(source_name, line_no, "expected '<i> <j> <cost>', got " + std::to_string(fields.size()) + " fields");
    int i = parse_int_field(fields[0], source_name, line_no, "tail node");
    int j = parse_int_field(fields[1], source_name, line_no, "head node");
    Cost c = parse_cost_field(fields[2], source_name, line_no);
    if (i < 1 || i > n || j < 1 || j > n)
      throw ParseError(source_name, line_no, "node out of range 1.." + std::to_string(n));
    if (i == j) throw ParseError(source_name, line_no, "diagonal entry " + std::to_string(i));
    entries.emplace_back(i, j, c, line_no);
  }
  if (n == 0) throw ParseError(source_name, line_no, "missing n= header");
  if (origin < 1 || origin > n) throw ParseError(source_name, line_no, "origin out of range");

  TspInstance instance(n, large, NodeId{origin});
  std::vector<int> seen(static_cast<std::size_t>(n) * n, 0);
  for (const auto& [i, j, c, at] : entries) {
    int& first = seen[static_cast<std::size_t>(i - 1) * n + (j - 1)];
    if (first != 0)
      throw ParseError(source_name, at,
                       "duplicate entry " + std::to_string(i) + " " + std::to_string(j) + " (first on line " +
                           std::to_string(first) + ")");
    first = at;
    instance.set_cost(NodeId{i}, NodeId{j}, c);
  }
  return instance;
}

TspInstance load_tsp_instance(const std::filesystem::path& path, Cost default_large) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file " + path.string());
  return parse_tsp_instance(in, path.string(), default_large);
}

void write_tsp_instance(std::ostream& out, const TspInstance& instance) {
  const int n = instance.size();
  out << "n=" << n << "\n";
  out << "large=" << instance.large() << "\n";
  if (instance.origin() != NodeId{1}) out << "origin=" << instance.origin() << "\n";
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      Cost c = instance.cost(NodeId{i}, NodeId{j});
      if (c != instance.large()) out << i << ' ' << j << ' ' << c << "\n";
    }
}

void save_tsp_instance(const std::filesystem::path& path, const TspInstance& instance) {
  std::ostringstream buffer;
  write_tsp_instance(buffer, instance);
  write_file_atomically(path, buffer.str());
}

}  // namespace stageflow
