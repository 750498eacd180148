#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "stageflow/error.hpp"
#include "stageflow/graph.hpp"
#include "stageflow/rational.hpp"
#include "support.hpp"

using namespace stageflow;

namespace {

TspInstance parse(const std::string& text) {
  std::istringstream in(text);
  return parse_tsp_instance(in, "test");
}

int parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("listed entries are set and the rest default to LARGE") {
  auto t = parse("n=51\n5 6 2\n");
  CHECK(t.cost(NodeId{5}, NodeId{6}) == 2);
  CHECK(t.cost(NodeId{6}, NodeId{5}) == 200);

  auto empty = parse("# nothing listed\nn=2\n");
  CHECK(empty.cost(NodeId{1}, NodeId{2}) == 200);
  CHECK(empty.cost(NodeId{2}, NodeId{1}) == 200);

  auto custom = parse("n=3\nlarge=50\n1 2 7  # trailing comment\n");
  CHECK(custom.large() == 50);
  CHECK(custom.cost(NodeId{2}, NodeId{3}) == 50);
  CHECK(custom.cost(NodeId{1}, NodeId{2}) == 7);
}

TEST_CASE("parse errors carry the offending line") {
  CHECK(parse_error_line("n=3\n1 2 1\n1 2 4\n") == 3);      // duplicate
  CHECK(parse_error_line("n=3\n\n1 4 1\n") == 3);           // out of range
  CHECK(parse_error_line("n=3\n2 2 1\n") == 2);             // diagonal
  CHECK(parse_error_line("1 2 1\n") == 1);                  // no header yet
  CHECK(parse_error_line("n=3\n1 2\n") == 2);               // missing cost
  CHECK(parse_error_line("n=3\n1 2 x\n") == 2);
  CHECK(parse_error_line("n=3\n1 2 -4\n") == 2);
  CHECK(parse_error_line("n=3\n1 2 1\nn=4\n") == 3);        // header after entries
  CHECK(parse_error_line("n=3\nwidth=4\n") == 2);
  CHECK(parse_error_line("") == 0);
  CHECK_THROWS_AS(load_tsp_instance("/nonexistent/instance.txt"), Error);
}

TEST_CASE("save and load round-trip random instances") {
  std::mt19937_64 rng(11);
  auto dir = std::filesystem::temp_directory_path() / "stageflow_graph_test";
  std::filesystem::create_directories(dir);
  for (int round = 0; round < 25; ++round) {
    const int n = 2 + static_cast<int>(rng() % 12);
    TspInstance t(n, 100 + static_cast<Cost>(rng() % 50));
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (i != j && rng() % 3 == 0) t.set_cost(NodeId{i}, NodeId{j}, static_cast<Cost>(rng() % 400));
    auto path = dir / "round.txt";
    save_tsp_instance(path, t);
    CHECK(load_tsp_instance(path) == t);
  }
  auto path = dir / "canonical.txt";
  save_tsp_instance(path, canonical_counterexample());
  auto back = load_tsp_instance(path);
  CHECK(back == canonical_counterexample());
  CHECK(back.cost(NodeId{51}, NodeId{1}) == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("canonical table matches the printed cost table") {
  auto printed = testing::read_printed_cost_table(STAGEFLOW_REFERENCE_TEXT);
  REQUIRE(printed.size() == 218);
  auto t = canonical_counterexample();
  CHECK(t.size() == 51);
  int mismatches = 0, listed = 0;
  for (int i = 1; i <= 51; ++i)
    for (int j = 1; j <= 51; ++j) {
      if (i == j) continue;
      auto it = printed.find({i, j});
      Cost want = it == printed.end() ? 200 : it->second;
      if (it != printed.end()) ++listed;
      if (t.cost(NodeId{i}, NodeId{j}) != want) ++mismatches;
    }
  CHECK(listed == 218);
  CHECK(mismatches == 0);
  CHECK(t.cost(NodeId{2}, NodeId{17}) == 1);
  CHECK(t.cost(NodeId{33}, NodeId{32}) == 2);
  CHECK(t.cost(NodeId{17}, NodeId{3}) == 200);
  CHECK(canonical_counterexample(500).cost(NodeId{17}, NodeId{3}) == 500);
}

TEST_CASE("group split weights sum to one") {
  auto t = canonical_counterexample();
  for (int g = 3; g <= 50; ++g) {
    Rational total = 0;
    for (int h = 3; h <= 50; ++h) {
      if (h == g) continue;
      Cost c = t.cost(NodeId{g}, NodeId{h});
      if (c == 1) total += Rational(1, 2);
      else if (c == 2) total += Rational(1, 4);
      else CHECK(c == 200);
    }
    CHECK_MESSAGE(total == 1, "group node " << g);
  }
}

TEST_CASE("seed graph shape") {
  auto seed = canonical_hcp_seed();
  CHECK(seed.size() == 23);
  auto roles = GroupRoles::standard(23);
  int group_arcs = 0;
  for (const auto& [i, j] : seed.arcs()) {
    CHECK(i != j);
    if (roles.is_group(i) && roles.is_group(j)) ++group_arcs;
  }
  CHECK(group_arcs > 0);
  for (int v = 3; v <= 22; ++v) {
    int d = seed.group_degree(NodeId{v}, roles);
    CHECK(d >= 2);
    CHECK(d <= 3);
    CHECK(seed.has_arc(NodeId{2}, NodeId{v}));
    CHECK(seed.has_arc(NodeId{v}, NodeId{23}));
  }
  CHECK(seed.has_arc(NodeId{1}, NodeId{2}));
  CHECK(seed.has_arc(NodeId{23}, NodeId{1}));
  CHECK_THROWS_AS(seed.add_arc(NodeId{1}, NodeId{2}), PreconditionError);
  CHECK_THROWS_AS(seed.add_arc(NodeId{4}, NodeId{4}), PreconditionError);
}

TEST_CASE("instance construction guards") {
  TspInstance t(3);
  CHECK_THROWS_AS(t.set_cost(NodeId{1}, NodeId{1}, 1), PreconditionError);
  CHECK_THROWS_AS(t.set_cost(NodeId{1}, NodeId{4}, 1), PreconditionError);
  CHECK_THROWS_AS(t.set_cost(NodeId{1}, NodeId{2}, -1), PreconditionError);
  CHECK_THROWS_AS(TspInstance(0), PreconditionError);
}
