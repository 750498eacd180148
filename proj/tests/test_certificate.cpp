#include <doctest.h>

#include <sstream>

#include "stageflow/certificate.hpp"
#include "stageflow/error.hpp"
#include "stageflow/verifier.hpp"
#include "support.hpp"

using namespace stageflow;

namespace {

StageArc arc(int i, int s, int j) { return StageArc{NodeId{i}, s, NodeId{j}}; }

// The certificate loops written out directly against the printed cost table:
// F on 1->2, F/48 from the source, F/96 or F/192 on group arcs at every
// internal stage, F/48 into the sink and F back to the origin.
SparseFlow reference_certificate(int last_internal) {
  auto printed = testing::read_printed_cost_table(STAGEFLOW_REFERENCE_TEXT);
  const Rational F = 192;
  SparseFlow x(F);
  x.set(arc(1, 1, 2), F);
  for (int g = 3; g <= 50; ++g) x.set(arc(2, 2, g), F / 48);
  for (int s = 3; s <= last_internal; ++s)
    for (const auto& [ij, c] : printed) {
      auto [i, j] = ij;
      if (i < 3 || i > 50 || j < 3 || j > 50) continue;
      x.set(arc(i, s, j), c == 1 ? F / 96 : F / 192);
    }
  for (int g = 3; g <= 50; ++g) x.set(arc(g, 50, 51), F / 48);
  x.set(arc(51, 51, 1), F);
  return x;
}

Rational reference_objective(const SparseFlow& x) {
  auto printed = testing::read_printed_cost_table(STAGEFLOW_REFERENCE_TEXT);
  Rational total = 0;
  for (const auto& [a, v] : x.entries()) total += v * printed.at({a.i.value, a.j.value});
  return total / x.flow_constant();
}

// Origin 1, source 2, group {3, 4, 5} joined pairwise by cost-1 links, sink 6.
TspInstance small_layout() {
  TspInstance t(6, 200);
  t.set_cost(NodeId{1}, NodeId{2}, 1);
  t.set_cost(NodeId{6}, NodeId{1}, 1);
  for (int g = 3; g <= 5; ++g) {
    t.set_cost(NodeId{2}, NodeId{g}, 1);
    t.set_cost(NodeId{g}, NodeId{6}, 3);
    for (int h = 3; h <= 5; ++h)
      if (g != h) t.set_cost(NodeId{g}, NodeId{h}, 1);
  }
  return t;
}

int parse_error_line(const std::string& text, int n_limit = 0) {
  std::istringstream in(text);
  try {
    parse_certificate(in, "cert", n_limit);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("certificate values") {
  auto t = canonical_counterexample();
  auto x = generate_x_certificate(t);
  CHECK(x.get(arc(1, 1, 2)) == 192);
  CHECK(x.get(arc(2, 2, 17)) == 4);
  CHECK(x.get(arc(5, 7, 6)) == 1);
  CHECK(x.get(arc(3, 7, 4)) == 2);
  CHECK(x.get(arc(17, 50, 51)) == 4);
  CHECK(x.get(arc(51, 51, 1)) == 192);
  CHECK(x.get(arc(3, 50, 4)) == 0);  // last internal stage is 49 in the repaired plan

  CHECK(x == reference_certificate(49));
  CHECK(generate_x_certificate(t, 192, StagePlan::AnnexC) == reference_certificate(50));
  CHECK(generate_x_certificate(t, 384).get(arc(5, 7, 6)) == 2);
  CHECK(generate_x_certificate(t, Rational(1)).get(arc(5, 7, 6)) == Rational(1, 192));
}

TEST_CASE("certificate objective and support") {
  auto t = canonical_counterexample();
  auto x = generate_x_certificate(t);
  auto obj = certificate_objective(x, t);
  CHECK(obj.per_unit == reference_objective(x));
  CHECK(obj.per_unit == Rational(259, 4));
  CHECK(obj.total == obj.per_unit * 192);
  CHECK(obj.max_support_cost == 3);
  CHECK(obj.large_support.empty());

  auto annex = generate_x_certificate(t, 192, StagePlan::AnnexC);
  CHECK(certificate_objective(annex, t).per_unit == reference_objective(annex));
  CHECK(certificate_objective(annex, t).per_unit == 66);

  CHECK(certificate_objective(SparseFlow(5), t).per_unit == 0);
  TspInstance tri(3, 200);
  tri.set_cost(NodeId{1}, NodeId{2}, 1);
  tri.set_cost(NodeId{2}, NodeId{3}, 1);
  tri.set_cost(NodeId{3}, NodeId{1}, 1);
  CHECK(certificate_objective(tour_flow({NodeId{1}, NodeId{2}, NodeId{3}}), tri).per_unit == 3);
}

TEST_CASE("structural preconditions") {
  TspInstance tiny(3, 200);
  CHECK_THROWS_AS(generate_x_certificate(tiny), PreconditionError);
  auto t = small_layout();
  CHECK_NOTHROW(check_certificate_structure(t));
  CHECK_THROWS_AS(generate_x_certificate(t, 0), PreconditionError);
  auto broken = t;
  broken.set_cost(NodeId{3}, NodeId{4}, 2);  // weights of node 3 now sum to 3/4
  CHECK_THROWS_AS(check_certificate_structure(broken), PreconditionError);
  auto no_return = t;
  no_return.set_cost(NodeId{6}, NodeId{1}, 200);
  CHECK_THROWS_AS(generate_x_certificate(no_return), PreconditionError);
}

TEST_CASE("group emission and visit mass") {
  auto t = canonical_counterexample();
  for (auto plan : {StagePlan::Repaired, StagePlan::AnnexC}) {
    auto x = generate_x_certificate(t, 192, plan);
    CHECK(check_group_emission(x, t, plan).uniform);
    auto without = group_visit_mass(x, t, false);
    auto with = group_visit_mass(x, t, true);
    REQUIRE(without.size() == 48);
    for (int g = 0; g < 48; ++g) {
      // repaired: 47 internal entries; annex-c: 48, the verbatim count
      CHECK(without[g] == (plan == StagePlan::Repaired ? 188 : 192));
      CHECK(with[g] == without[g] + 4);
    }
  }
  auto x = generate_x_certificate(t);
  x.set(arc(9, 20, 8), 0);
  auto e = check_group_emission(x, t, StagePlan::Repaired);
  CHECK_FALSE(e.uniform);
  CHECK(e.witness == std::make_pair(NodeId{9}, 20));
}

TEST_CASE("escape bound over group subsets") {
  auto t = canonical_counterexample();
  auto x = generate_x_certificate(t);
  auto e = check_escape_bound(x, t, 10, 4, 500, 17);
  CHECK(e.holds);
  CHECK(e.required == 4);
  CHECK(e.min_escape >= 4);
  CHECK(e.subsets_checked == 48 + 1128 + 17296 + 194580 + 500);
  // a pair or a triple of replacement nodes keeps most of its flow inside
  CHECK(e.min_escape == 4);
  CHECK_FALSE(e.witness.empty());

  auto cut = x;
  cut.set(arc(4, 10, 10), 0);  // the pair {3, 4} now leaks less
  CHECK_FALSE(check_escape_bound(cut, t, 10, 2, 0, 1).holds);
}

TEST_CASE("certificate files round-trip") {
  auto t = canonical_counterexample();
  auto x = generate_x_certificate(t);
  std::ostringstream os;
  write_certificate(os, x);
  std::istringstream in(os.str());
  auto back = parse_certificate(in, "mem", 51);
  CHECK(back.x == x);
  CHECK(back.y.entry_count() == 0);

  std::vector<NodeId> tour{NodeId{1}, NodeId{3}, NodeId{2}, NodeId{5}, NodeId{4}};
  auto y = lift_integral_tour(tour, 2);
  std::ostringstream os2;
  write_certificate(os2, tour_flow(tour, 2), y);
  std::istringstream in2(os2.str());
  auto back2 = parse_certificate(in2);
  CHECK(back2.x == tour_flow(tour, 2));
  CHECK(back2.y == y);

  std::ostringstream os3;
  write_certificate(os3, tour_flow(tour, 2), y, 1);
  std::istringstream in3(os3.str());
  CHECK(parse_certificate(in3).y.anchors().size() == 1);

  CHECK(parse_error_line("x 1 1 2 1\n") == 1);
  CHECK(parse_error_line("F=1\nx 1 1 2 1\nx 1 1 2 1\n") == 3);
  CHECK(parse_error_line("F=1\n# fine\nx 1 1 2\n") == 3);
  CHECK(parse_error_line("F=1\nx 1 1 52 1\n", 51) == 2);
  CHECK(parse_error_line("F=1\nx 1 1 2 1/0\n") == 2);
  CHECK(parse_error_line("F=1\nz 1 1 2 1\n") == 2);
  CHECK(parse_error_line("F=0\n") == 1);
  CHECK(parse_error_line("F=1\nF=2\n") == 2);
  CHECK(parse_error_line("F=1\ny 1 1 2 2 2 3 1\ny 1 1 2 2 2 3 1\n") == 3);
  CHECK(parse_error_line("") == 0);
  CHECK_THROWS_AS(load_certificate("/nonexistent/cert.txt"), Error);
}

TEST_CASE("transition lift") {
  SUBCASE("coincides with the product lift on integral tours") {
    for (int n = 3; n <= 6; ++n) {
      TspInstance t(n, 200);
      auto m = ModelSpec::for_instance(t, 5);
      testing::for_each_tour(n, [&](const std::vector<int>& order) {
        auto tour = testing::to_nodes(order);
        TransitionLift lift(tour_flow(tour, 5), m);
        CHECK(ConditionalFlowSet::materialize(lift) == lift_integral_tour(tour, 5));
      });
    }
  }
  SUBCASE("rejects x that is not BASE-feasible") {
    auto t = canonical_counterexample();
    auto m = certificate_model(t, 192);
    CHECK_THROWS_AS(TransitionLift(generate_x_certificate(t, 192, StagePlan::AnnexC), m), PreconditionError);
    SparseFlow bad(1);
    bad.set(arc(3, 3, 3), 1);
    CHECK_THROWS_AS(TransitionLift(bad, m), PreconditionError);
  }
  SUBCASE("universal anchor and a cost-2 anchor on the canonical certificate") {
    auto t = canonical_counterexample();
    auto m = certificate_model(t, 192);
    auto x = generate_x_certificate(t);
    TransitionLift lift(x, m);
    lift.visit(arc(1, 1, 2), [&](std::span<const FlowEntry> entries) {
      std::size_t expected = 0;
      for (const auto& [b, v] : x.entries()) expected += b.s != 1;
      CHECK(entries.size() == expected);
      for (const auto& e : entries) CHECK(e.value == x.get(e.probe));
    });
    lift.visit(arc(5, 7, 6), [&](std::span<const FlowEntry> entries) {
      std::vector<Rational> per_stage(52);
      for (const auto& e : entries) per_stage[e.probe.s] += e.value;
      for (int s = 1; s <= 51; ++s)
        if (s != 7) CHECK_MESSAGE(per_stage[s] == 1, "stage " << s);
    });
    bool empty = false;
    lift.visit(arc(3, 3, 3), [&](std::span<const FlowEntry> entries) { empty = entries.empty(); });
    CHECK(empty);
  }
}

TEST_CASE("proportional lift") {
  auto t = small_layout();
  auto x = generate_x_certificate(t, 192);
  ProportionalLift lift(x);
  auto y = ConditionalFlowSet::materialize(lift);
  for (const auto& [a, va] : x.entries())
    for (const auto& [b, vb] : x.entries())
      CHECK(y.get(a, b) == (a.s == b.s ? Rational(0) : va * vb / 192));
  CHECK(lift.rule() == "proportional");
  // Products of marginals do not conserve conditional flow; the transition
  // lift on the same x does.
  auto m = certificate_model(t, 192);
  CHECK(verify_family(m, x, &lift, Family::C7).violations > 0);
  TransitionLift transition(x, m);
  CHECK(verify_family(m, x, &transition, Family::C7).violations == 0);
}

TEST_CASE("symmetry check") {
  auto t = small_layout();
  auto m = certificate_model(t, 192);
  auto x = generate_x_certificate(t, 192);
  TransitionLift lift(x, m);
  auto clean = check_symmetry(lift);
  CHECK(clean.asymmetric_pairs == 0);
  CHECK(clean.max_asymmetry == 0);
  CHECK(clean.pairs_checked > 0);

  auto y = ConditionalFlowSet::materialize(lift);
  const StageArc a = arc(3, 3, 4), b = arc(4, 4, 5);
  REQUIRE(y.get(a, b) != 0);
  y.add(a, b, Rational(1, 7));
  auto dirty = check_symmetry(y);
  CHECK(dirty.asymmetric_pairs == 1);
  CHECK(dirty.max_asymmetry == Rational(1, 7));
  REQUIRE(dirty.witness);
  CHECK(((dirty.witness->first == a && dirty.witness->second == b) ||
         (dirty.witness->first == b && dirty.witness->second == a)));

  ConditionalFlowSet lonely;
  lonely.set(a, b, 2);
  auto one_sided = check_symmetry(lonely);
  CHECK(one_sided.asymmetric_pairs == 1);
  CHECK(one_sided.max_asymmetry == 2);

  auto none = check_symmetry(ConditionalFlowSet{});
  CHECK(none.pairs_checked == 0);
  CHECK(none.asymmetric_pairs == 0);
}
