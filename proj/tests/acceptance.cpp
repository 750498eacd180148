// Acceptance run: one PASS/FAIL line per criterion on stdout, details on the
// same line. Runs the full canonical verification, so expect a few minutes.

#include <chrono>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "invariance.hpp"
#include "stageflow/certificate.hpp"
#include "stageflow/error.hpp"
#include "stageflow/verifier.hpp"
#include "support.hpp"

using namespace stageflow;

namespace {

// Regression constants, frozen after the oracles produced them.
constexpr Cost kSeedOptimum = 620;
constexpr std::uint64_t kDirectedOptimalTours = 1000704;
const Rational kExpectedGap(2333, 4);

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::function<Outcome()>& body) {
  const auto started = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (!o.pass) ++failures;
  std::ostringstream line;
  line.precision(3);
  line << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << " [" << std::fixed << s
       << " s]";
  std::cout << line.str() << std::endl;
}

std::string approx(const Rational& r) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << r.get_d();
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

int main() {
  const auto seed = canonical_hcp_seed();
  const auto seed_tsp = hcp_to_tsp(seed, 1, kDefaultLargeCost);
  const auto canonical = canonical_counterexample();
  const Rational flow = kDefaultFlowConstant;
  const auto model = certificate_model(canonical, flow);

  criterion(1, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    auto h = hamiltonian_cycle_exists(seed, Budget::seconds(60));
    const double s = seconds_since(t0);
    std::ostringstream d;
    d << "seed hamiltonian cycle: " << to_string(h.answer) << " after " << h.nodes_explored << " search nodes";
    return Outcome{h.answer == HcpAnswer::No && s < 60, d.str()};
  });

  criterion(2, [&] {
    auto sol = held_karp(seed_tsp, Budget::seconds(600));
    if (!sol.tour) return Outcome{false, "Held-Karp did not finish in 10 min"};
    std::ostringstream d;
    d << "optimum " << sol.tour->value << " with " << sol.tour->large_arc_count << " LARGE arcs";
    return Outcome{sol.tour->large_arc_count == 3 && sol.tour->value == kSeedOptimum &&
                       is_tour(seed_tsp, sol.tour->order),
                   d.str()};
  });

  criterion(3, [&] {
    auto c = count_optimal_tours(seed_tsp);
    if (c.status != SolveStatus::Optimal) return Outcome{false, "count did not finish"};
    std::ostringstream d;
    d << "directed " << c.directed << ", undirected " << c.undirected << ", rotated " << c.rotated_assignments
      << "; above 2000000:";
    bool any = false;
    for (auto [name, v] : {std::pair{"directed", c.directed}, std::pair{"undirected", c.undirected},
                           std::pair{"rotated", c.rotated_assignments}})
      if (v > 2000000) {
        d << ' ' << name;
        any = true;
      }
    if (!any) d << " none";
    return Outcome{any && c.directed == kDirectedOptimalTours && !c.overflow, d.str()};
  });

  criterion(4, [&] {
    auto st = testing::check_split_invariance(20240611, 240);
    std::ostringstream d;
    d << st.instances << " random layouts (" << st.split2 << " pair splits, " << st.split3
      << " triple splits), failures " << st.failures;
    return Outcome{st.instances >= 200 && st.failures == 0, d.str()};
  });

  criterion(5, [&] {
    auto e = canonical_enlargement();
    int mismatches = 0;
    for (int i = 1; i <= canonical.size(); ++i)
      for (int j = 1; j <= canonical.size(); ++j)
        if (i != j && e.instance.cost(NodeId{i}, NodeId{j}) != canonical.cost(NodeId{i}, NodeId{j})) ++mismatches;
    // The printed table is read independently of the built-in copy.
    auto printed = testing::read_printed_cost_table(STAGEFLOW_REFERENCE_TEXT);
    int printed_mismatches = 0;
    for (const auto& [ij, c] : printed)
      if (e.instance.cost(NodeId{ij.first}, NodeId{ij.second}) != c) ++printed_mismatches;
    std::ostringstream d;
    d << e.instance.size() << " nodes, " << mismatches << " matrix mismatches, " << printed.size()
      << " printed entries with " << printed_mismatches << " mismatches";
    return Outcome{e.instance.size() == canonical.size() && mismatches == 0 && !printed.empty() &&
                       printed_mismatches == 0,
                   d.str()};
  });

  criterion(6, [&] {
    const std::vector<Family> x_level{Family::BASE, Family::C13};
    auto t0 = std::chrono::steady_clock::now();
    auto repaired = verify_streaming(model, generate_x_certificate(canonical, flow, StagePlan::Repaired), nullptr,
                                     x_level);
    const double s_repaired = seconds_since(t0);
    VerifyOptions all_witnesses;
    all_witnesses.witness_cap = 0;
    t0 = std::chrono::steady_clock::now();
    auto annex = verify_streaming(model, generate_x_certificate(canonical, flow, StagePlan::AnnexC), nullptr,
                                  all_families(), all_witnesses);
    const double s_annex = seconds_since(t0);
    const auto* base = annex.find(Family::BASE);
    bool stage50 = false;
    for (const auto& [key, res] : base->witnesses) stage50 |= key.stage == 50;
    std::ostringstream d;
    d << "repaired BASE violations " << repaired.find(Family::BASE)->violations << "; annex-c matrix";
    for (const auto& r : annex.families)
      d << ' ' << to_string(r.family) << '=' << (r.checked ? std::to_string(r.violations) : "n/a");
    d << ", stage-50 rows flagged: " << (stage50 ? "yes" : "no");
    return Outcome{repaired.all_satisfied(x_level) && base->violations > 0 && stage50 && s_repaired < 60 &&
                       s_annex < 60,
                   d.str()};
  });

  // Criteria 7, 8 and 11 share the canonical certificate and its lift.
  const auto x = generate_x_certificate(canonical, flow, StagePlan::Repaired);
  const auto objective = certificate_objective(x, canonical);
  std::optional<IntegralBound> bound;

  criterion(7, [&] {
    bound = enlargement_lower_bound(canonical, seed_tsp);
    auto report = verify_streaming(model, x, nullptr, {Family::BASE, Family::C13});
    auto v = full_verdict(report, objective, *bound);
    std::ostringstream d;
    d << "objective " << format_rational(objective.per_unit) << ", bound " << format_rational(bound->value)
      << ", gap " << format_rational(v.gap) << ", max support cost " << objective.max_support_cost
      << ", x-level verdict " << to_string(v.x_level.kind);
    return Outcome{objective.large_support.empty() && objective.max_support_cost == 3 &&
                       objective.per_unit < bound->value && v.gap == kExpectedGap &&
                       v.x_level.kind == VerdictKind::Refutes,
                   d.str()};
  });

  TransitionLift lift(x, model);

  criterion(8, [&] {
    auto report = verify_streaming(model, x, &lift, all_families());
    std::ostringstream d;
    std::vector<Family> bad;
    bool documented = true;
    for (const auto& r : report.families) {
      if (!r.checked) return Outcome{false, std::string(to_string(r.family)) + " was not checked"};
      if (r.violations == 0) continue;
      bad.push_back(r.family);
      documented &= r.min_abs_residual > 0 && !r.witnesses.empty();
      d << to_string(r.family) << " violated in " << r.violations << " of " << r.rows_checked
        << " rows, min |residual| " << format_rational(r.min_abs_residual) << " (~" << approx(r.min_abs_residual)
        << "), first " << to_string(r.witnesses.front().first) << "; ";
    }
    if (bad.empty()) d << "every family C6-C14 holds exactly under the " << lift.rule() << " lift";
    else d << "outcome documented, the remaining families hold";
    return Outcome{documented, d.str()};
  });

  criterion(9, [&] {
    std::mt19937_64 rng(7001);
    std::uint64_t tours = 0, exceptions = 0;
    for (int n = 3; n <= 6; ++n)
      for (int round = 0; round < 5; ++round) {
        auto t = testing::random_instance(rng, n, 30);
        auto brute = testing::brute_force(t);
        auto opt = exact_tsp(t);
        if (!opt.tour || opt.tour->value != brute.optimum) ++exceptions;
        auto b = exact_optimum_bound(*opt.tour, opt.method);
        auto m = ModelSpec::for_instance(t, 1);
        testing::for_each_tour(n, [&](const std::vector<int>& order) {
          auto tour = testing::to_nodes(order);
          auto tx = tour_flow(tour);
          auto ty = lift_integral_tour(tour);
          auto report = verify_streaming(m, tx, &ty, all_families());
          auto v = full_verdict(report, certificate_objective(tx, t), b);
          ++tours;
          if (!report.all_satisfied(all_families()) || v.full.kind != VerdictKind::DoesNotRefute ||
              v.x_level.kind != VerdictKind::DoesNotRefute)
            ++exceptions;
        });
      }
    std::ostringstream d;
    d << tours << " tours over 20 random instances with n 3..6, exceptions " << exceptions;
    return Outcome{tours == 5 * (2 + 6 + 24 + 120) && exceptions == 0, d.str()};
  });

  criterion(10, [&] {
    std::vector<NodeId> tour{NodeId{1}, NodeId{4}, NodeId{2}, NodeId{5}, NodeId{3}, NodeId{6}};
    TspInstance t(6, kDefaultLargeCost);
    for (std::size_t k = 0; k < tour.size(); ++k) t.set_cost(tour[k], tour[(k + 1) % tour.size()], 1);
    auto y = lift_integral_tour(tour);
    auto small = mutation_suite(t, ModelSpec::for_instance(t, 1, NodeId{6}), tour_flow(tour), &y);
    auto big = mutation_suite(canonical, model, x, nullptr);
    std::ostringstream d;
    int detected = 0, total = 0;
    for (const auto* r : {&small, &big})
      for (const auto& o : r->outcomes) {
        ++total;
        detected += o.detected;
        if (!o.detected) d << "missed " << o.target << " (" << o.change << "); ";
      }
    d << detected << " of " << total << " perturbations caught by their target family (lifted 6-tour: "
      << small.outcomes.size() << ", canonical x-level: " << big.outcomes.size() << ")";
    return Outcome{small.full_diagonal() && big.full_diagonal() && small.outcomes.size() == 11, d.str()};
  });

  criterion(11, [&] {
    auto s = check_symmetry(lift);
    std::ostringstream d;
    d << s.pairs_checked << " anchor/probe pairs, " << s.asymmetric_pairs << " asymmetric, max "
      << format_rational(s.max_asymmetry);
    return Outcome{s.pairs_checked > 0 && s.asymmetric_pairs == 0, d.str()};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria did not pass")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
