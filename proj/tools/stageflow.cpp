#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stageflow/certificate.hpp"
#include "stageflow/error.hpp"
#include "stageflow/io_util.hpp"
#include "stageflow/oracles.hpp"
#include "stageflow/reductions.hpp"
#include "stageflow/verifier.hpp"

namespace fs = std::filesystem;
using namespace stageflow;

namespace {

// Exit codes: 0 success (REFUTES for the pipeline), 1 ran but the outcome was
// negative or undecided, 2 bad input or a failed precondition.
constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;

struct RunConfig {
  std::string instance = "canonical";
  std::string flow_text = "192";
  Cost large = kDefaultLargeCost;
  std::string plan_text = "repaired";
  double budget = 300;
  int threads = 1;
  std::string out_dir = "stageflow-out";
  bool no_timestamp = false;

  Rational flow() const {
    Rational f;
    try {
      f = parse_rational(flow_text);
    } catch (const std::exception&) {
      throw Error("bad --flow-constant '" + flow_text + "'");
    }
    if (f <= 0) throw Error("--flow-constant must be positive");
    return f;
  }
  StagePlan plan() const {
    auto p = parse_stage_plan(plan_text);
    if (!p) throw Error("unknown --stage-plan '" + plan_text + "' (expected repaired or annex-c)");
    return *p;
  }
  Budget make_budget() const { return budget > 0 ? Budget::seconds(budget) : Budget{}; }
};

struct LoadedInstance {
  TspInstance tsp;
  std::string label;
  bool canonical = false;
};

// "canonical" is the 51-node table, "seed" the 23-node TSP of the HCP seed;
// anything else is an instance file.
LoadedInstance load_instance(const std::string& name, Cost large) {
  if (name == "canonical") return {canonical_counterexample(large), "canonical", true};
  if (name == "seed") return {hcp_to_tsp(canonical_hcp_seed(), 1, large), "seed", false};
  if (!fs::exists(name)) throw Error("instance file not found: " + name);
  return {load_tsp_instance(name, large), name, false};
}

std::string header(const RunConfig& cfg, const std::string& what) {
  std::string h;
  if (!cfg.no_timestamp) {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    h += std::string("# generated ") + buf + "\n";
  }
  h += "# " + what + "\n";
  return h;
}

fs::path out_path(const RunConfig& cfg, const std::string& file) {
  fs::create_directories(cfg.out_dir);
  return fs::path(cfg.out_dir) / file;
}

void note(const std::string& msg) { std::cerr << "stageflow: " << msg << std::endl; }

std::string tour_text(const TourResult& t) {
  std::ostringstream os;
  os << "value " << t.value << "\nlarge arcs " << t.large_arc_count << "\norder";
  for (NodeId v : t.order) os << ' ' << v;
  os << "\n";
  return os.str();
}

ModelSpec model_for(const TspInstance& t, const Rational& flow, bool generic) {
  return generic ? ModelSpec::for_instance(t, flow) : certificate_model(t, flow);
}

std::vector<Family> families_from(const std::vector<std::string>& names) {
  if (names.empty()) return all_families();
  std::vector<Family> out;
  for (const auto& n : names) {
    auto f = parse_family(n);
    if (!f) throw Error("unknown family '" + n + "'");
    out.push_back(*f);
  }
  return out;
}

// ---- solve / hcp --------------------------------------------------------

struct SolveArgs {
  std::string method = "auto";
  bool count = false;
  std::string out;
};

int cmd_solve(const RunConfig& cfg, const SolveArgs& args) {
  auto inst = load_instance(cfg.instance, cfg.large);
  SolveMethod method = SolveMethod::Auto;
  if (args.method == "held-karp") method = SolveMethod::HeldKarp;
  else if (args.method == "bnb") method = SolveMethod::BranchAndBound;
  else if (args.method != "auto") throw Error("unknown --method '" + args.method + "'");
  if (method == SolveMethod::HeldKarp && inst.tsp.size() > kHeldKarpMaxNodes)
    throw Error("Held-Karp is limited to " + std::to_string(kHeldKarpMaxNodes) + " nodes");

  auto sol = exact_tsp(inst.tsp, cfg.make_budget(), method, cfg.threads);
  std::ostringstream os;
  os << header(cfg, "tour for " + inst.label);
  os << "nodes " << inst.tsp.size() << "\nstatus " << to_string(sol.status) << "\nmethod " << sol.method << "\n";
  if (sol.tour) os << tour_text(*sol.tour);
  else if (sol.incumbent) os << "incumbent (not proven optimal)\n" << tour_text(*sol.incumbent);
  if (args.count && sol.status == SolveStatus::Optimal) {
    if (inst.tsp.size() > kHeldKarpMaxNodes) throw Error("tour counting is limited to Held-Karp sizes");
    auto c = count_optimal_tours(inst.tsp, cfg.make_budget());
    if (c.status == SolveStatus::Optimal)
      os << "optimal tours directed " << c.directed << "\noptimal tours undirected " << c.undirected
         << "\noptimal tours rotated " << c.rotated_assignments << (c.overflow ? " (saturated)" : "") << "\n";
    else
      os << "optimal tours: count timed out\n";
  }
  std::cout << os.str();
  if (!args.out.empty()) write_file_atomically(args.out, os.str());
  return sol.status == SolveStatus::Optimal ? kExitOk : kExitNegative;
}

HcpInstance hcp_graph(const std::string& name, Cost large) {
  if (name == "canonical") return canonical_hcp_seed();
  auto inst = load_instance(name, large);
  HcpInstance g(inst.tsp.size());
  for (int i = 1; i <= g.size(); ++i)
    for (int j = 1; j <= g.size(); ++j)
      if (i != j && !inst.tsp.is_large(NodeId{i}, NodeId{j})) g.add_arc(NodeId{i}, NodeId{j});
  return g;
}

int cmd_hcp(const RunConfig& cfg) {
  auto g = hcp_graph(cfg.instance, cfg.large);
  auto r = hamiltonian_cycle_exists(g, cfg.make_budget());
  std::cout << to_string(r.answer) << "\n";
  if (r.answer == HcpAnswer::Yes) {
    std::cout << "cycle";
    for (NodeId v : r.cycle) std::cout << ' ' << v;
    std::cout << "\n";
  }
  std::cout << "search nodes " << r.nodes_explored << "\n";
  return r.answer == HcpAnswer::Timeout ? kExitNegative : kExitOk;
}

// ---- certificate / lift ---------------------------------------------------

int cmd_certificate(const RunConfig& cfg) {
  auto inst = load_instance(cfg.instance, cfg.large);
  auto x = generate_x_certificate(inst.tsp, cfg.flow(), cfg.plan());
  auto obj = certificate_objective(x, inst.tsp);
  std::ostringstream os;
  os << header(cfg, std::string("x certificate, ") + to_string(cfg.plan()) + " plan, " + inst.label);
  write_certificate(os, x);
  auto path = out_path(cfg, "certificate.txt");
  write_file_atomically(path, os.str());
  std::cout << "support " << x.size() << "\nobjective per unit " << format_rational(obj.per_unit) << "\nobjective total "
            << format_rational(obj.total) << "\nmax support cost " << obj.max_support_cost << "\nwrote "
            << path.string() << "\n";
  return kExitOk;
}

struct LiftArgs {
  std::string certificate;
  std::optional<std::size_t> max_anchors;
  bool symmetry = false;
};

int cmd_lift(const RunConfig& cfg, const LiftArgs& args) {
  auto inst = load_instance(cfg.instance, cfg.large);
  SparseFlow x;
  if (args.certificate.empty()) x = generate_x_certificate(inst.tsp, cfg.flow(), cfg.plan());
  else x = load_certificate(args.certificate, inst.tsp.size()).x;
  auto m = certificate_model(inst.tsp, x.flow_constant());
  TransitionLift lift(x, m);
  std::ostringstream os;
  os << header(cfg, "x and transition-lift y certificate, " + inst.label);
  write_certificate(os, x, lift, args.max_anchors);
  auto path = out_path(cfg, "certificate_y.txt");
  write_file_atomically(path, os.str());
  std::cout << "anchors " << lift.anchors().size() << "\nwrote " << path.string() << "\n";
  if (args.symmetry) {
    auto s = check_symmetry(lift);
    std::cout << "symmetry pairs " << s.pairs_checked << " asymmetric " << s.asymmetric_pairs << " max "
              << format_rational(s.max_asymmetry) << "\n";
    if (s.asymmetric_pairs != 0) return kExitNegative;
  }
  return kExitOk;
}

// ---- verify / export -------------------------------------------------------

struct VerifyArgs {
  std::string certificate;
  std::vector<std::string> families;
  bool lift = false;
  bool materialize = false;
  bool generic = false;
  bool all_witnesses = false;
};

int cmd_verify(const RunConfig& cfg, const VerifyArgs& args) {
  auto inst = load_instance(cfg.instance, cfg.large);
  auto cert = load_certificate(args.certificate, inst.tsp.size());
  auto m = model_for(inst.tsp, cert.x.flow_constant(), args.generic);
  auto families = families_from(args.families);
  VerifyOptions opts;
  if (args.all_witnesses) opts.witness_cap = 0;

  const bool have_y = cert.y.entry_count() != 0;
  std::unique_ptr<TransitionLift> lift;
  if (!have_y && args.lift) lift = std::make_unique<TransitionLift>(cert.x, m);
  const ConditionalFlowSource* y = have_y ? static_cast<const ConditionalFlowSource*>(&cert.y) : lift.get();

  ConstraintReport report;
  if (args.materialize) {
    std::optional<ConditionalFlowSet> stored;
    if (lift) stored = ConditionalFlowSet::materialize(*lift);
    report = verify_materialized(m, cert.x, have_y ? &cert.y : (stored ? &*stored : nullptr), families, opts);
  } else {
    for (Family f : families) report.families.push_back(verify_family(m, cert.x, y, f, opts));
  }
  render_text(std::cout, report);
  render_machine(std::cout, report);
  for (const auto& r : report.families)
    if (r.checked && r.violations != 0) return kExitNegative;
  return kExitOk;
}

struct ExportArgs {
  bool full = false;
  std::vector<std::string> families;
  std::string out;
  std::string dump_rows;
  bool generic = false;
};

int cmd_export(const RunConfig& cfg, const ExportArgs& args) {
  auto inst = load_instance(cfg.instance, cfg.large);
  auto m = model_for(inst.tsp, cfg.flow(), args.generic);
  std::vector<Family> families;
  if (!args.families.empty()) families = families_from(args.families);
  else if (args.full) families = all_families();
  else families = {Family::BASE, Family::C13};
  ExportOptions opts;
  opts.mode = args.full ? ExportMode::Full : ExportMode::XOnly;

  std::ostringstream os;
  export_lp(os, inst.tsp, m, families, opts);
  fs::path path = args.out.empty() ? out_path(cfg, "model.lp") : fs::path(args.out);
  write_file_atomically(path, os.str());
  std::cout << "wrote " << path.string() << "\n";
  if (!args.dump_rows.empty()) {
    std::ostringstream rows;
    for (Family f : families)
      for_each_family_row(m, f, [&](const LinearRow& r) { rows << dump_row(r) << "\n"; });
    write_file_atomically(args.dump_rows, rows.str());
    std::cout << "wrote " << args.dump_rows << "\n";
  }
  return kExitOk;
}

// ---- pipeline / report -----------------------------------------------------

struct PipelineArgs {
  double bnb_seconds = 10;
  bool skip_count = false;
  bool skip_lift = false;
  bool skip_symmetry = false;
};

struct PlanRun {
  SparseFlow x;
  ObjectiveSummary objective;
  ConstraintReport report;
  std::optional<SymmetryReport> symmetry;
  std::string lift_note;
};

// Certificate, lift and verification for one stage plan.
PlanRun run_plan(const TspInstance& t, const Rational& flow, StagePlan plan, bool lift_y, bool symmetry) {
  PlanRun run;
  run.x = generate_x_certificate(t, flow, plan);
  run.objective = certificate_objective(run.x, t);
  auto m = certificate_model(t, flow);
  const std::vector<Family> x_level{Family::BASE, Family::C13};
  auto xr = verify_streaming(m, run.x, nullptr, x_level);
  const bool base_ok = xr.find(Family::BASE)->satisfied();
  if (lift_y && base_ok) {
    TransitionLift lift(run.x, m);
    run.report = verify_streaming(m, run.x, &lift, all_families());
    if (symmetry) run.symmetry = check_symmetry(lift);
    run.lift_note = "transition lift";
  } else {
    run.lift_note = !lift_y ? "lift skipped on request" : "lift needs a BASE-feasible x";
    run.report = verify_streaming(m, run.x, nullptr, all_families());
    for (auto& r : run.report.families)
      if (!r.checked) r.skipped_reason = run.lift_note;
  }
  return run;
}

int cmd_pipeline(const RunConfig& cfg, const PipelineArgs& args) {
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - started).count(); };

  auto inst = load_instance(cfg.instance, cfg.large);
  const Rational flow = cfg.flow();
  const StagePlan plan = cfg.plan();
  std::ostringstream rep;
  rep << header(cfg, "refutation report for " + inst.label);
  rep << "instance " << inst.label << ", " << inst.tsp.size() << " nodes, LARGE " << cfg.large << ", F "
      << format_rational(flow) << ", stage plan " << to_string(plan) << "\n\n";

  std::optional<IntegralBound> bound;
  if (inst.canonical) {
    auto seed = canonical_hcp_seed();
    auto seed_tsp = hcp_to_tsp(seed, 1, cfg.large);
    rep << "[seed]\n";
    auto h = hamiltonian_cycle_exists(seed, cfg.make_budget());
    rep << "hamiltonian cycle in the " << seed.size() << "-node seed: " << to_string(h.answer) << "\n";
    note("seed HCP " + std::string(to_string(h.answer)) + " after " + std::to_string(elapsed()) + " s");

    auto sol = held_karp(seed_tsp, cfg.make_budget());
    if (sol.tour) {
      rep << "seed TSP optimum " << sol.tour->value << " with " << sol.tour->large_arc_count << " LARGE arcs\n";
      rep << "optimal order";
      for (NodeId v : sol.tour->order) rep << ' ' << v;
      rep << "\n";
    } else {
      rep << "seed TSP: Held-Karp timed out\n";
    }
    if (sol.tour && !args.skip_count) {
      auto c = count_optimal_tours(seed_tsp, cfg.make_budget());
      if (c.status == SolveStatus::Optimal)
        rep << "optimal tours: directed " << c.directed << ", undirected " << c.undirected << ", rotated "
            << c.rotated_assignments << "\n";
      else
        rep << "optimal tours: count timed out\n";
    }
    note("seed oracles done after " + std::to_string(elapsed()) + " s");

    rep << "\n[enlargement]\n";
    auto e = canonical_enlargement(cfg.large);
    rep << "enlarged seed equals the " << inst.tsp.size()
        << "-node table: " << (e.instance == inst.tsp ? "yes" : "NO") << "\n";
    try {
      bound = enlargement_lower_bound(inst.tsp, seed_tsp, cfg.make_budget());
    } catch (const Error& err) {
      rep << "no enlargement bound: " << err.what() << "\n";
    }
  }

  rep << "\n[oracle]\n";
  const bool small = inst.tsp.size() <= kHeldKarpMaxNodes;
  if (small || args.bnb_seconds > 0) {
    Budget b = small ? cfg.make_budget() : Budget::seconds(std::min(args.bnb_seconds, cfg.budget));
    auto sol = exact_tsp(inst.tsp, b, SolveMethod::Auto, cfg.threads);
    if (sol.tour) {
      rep << sol.method << " closed: optimum " << sol.tour->value << "\n";
      bound = exact_optimum_bound(*sol.tour, sol.method);
    } else {
      rep << sol.method << " stopped at its budget";
      if (sol.incumbent) rep << ", best tour found " << sol.incumbent->value;
      rep << "\n";
    }
  }
  if (bound) {
    rep << "integral " << (bound->exact ? "optimum " : "lower bound ") << format_rational(bound->value) << "\n";
    for (const auto& p : bound->provenance) rep << "  - " << p << "\n";
  } else {
    rep << "no certified integral bound\n";
  }
  note("oracle stage done after " + std::to_string(elapsed()) + " s");

  rep << "\n[certificate]\n";
  std::optional<PlanRun> run;
  try {
    check_certificate_structure(inst.tsp);
    run = run_plan(inst.tsp, flow, plan, !args.skip_lift, !args.skip_symmetry);
  } catch (const PreconditionError& err) {
    rep << "no fractional certificate: " << err.what() << "\n\nverdict: DOES-NOT-REFUTE\n";
    std::ostringstream verdict;
    verdict << header(cfg, "verdict for " + inst.label);
    verdict << "verdict scope=x-level result=DOES-NOT-REFUTE reason=no-certificate\n";
    save_tsp_instance(out_path(cfg, "instance.txt"), inst.tsp);
    write_file_atomically(out_path(cfg, "report.txt"), rep.str());
    write_file_atomically(out_path(cfg, "verdict.txt"), verdict.str());
    std::cout << rep.str();
    return kExitNegative;
  }
  note("verification done after " + std::to_string(elapsed()) + " s");

  rep << "support " << run->x.size() << " arcs, rule " << run->lift_note << "\n";
  rep << "\n[verification]\n";
  render_text(rep, run->report);
  if (run->symmetry)
    rep << "symmetry: " << run->symmetry->pairs_checked << " pairs, " << run->symmetry->asymmetric_pairs
        << " asymmetric, max " << format_rational(run->symmetry->max_asymmetry) << "\n";

  const auto x_level = run->report.find(Family::BASE)->satisfied() && run->report.find(Family::C13)->satisfied();
  if (x_level) {
    rep << "\n[mutations]\n";
    render_mutations(rep, mutation_suite(inst.tsp, certificate_model(inst.tsp, flow), run->x, nullptr));
  }

  std::ostringstream verdict;
  verdict << header(cfg, "verdict for " + inst.label);
  render_machine(verdict, run->report);
  int code = kExitNegative;
  rep << "\n[verdict]\n";
  if (bound) {
    auto v = full_verdict(run->report, run->objective, *bound);
    render_verdict_text(rep, v);
    render_verdict_machine(verdict, v);
    if (v.x_level.kind == VerdictKind::Refutes && v.no_large_support) code = kExitOk;
  } else {
    rep << "objective per unit " << format_rational(run->objective.per_unit)
        << "; without an integral bound no verdict is possible\n";
    verdict << "verdict scope=x-level result=PARTIAL reason=no-bound\n";
  }

  std::ostringstream cert;
  cert << header(cfg, std::string("x certificate, ") + to_string(plan) + " plan");
  write_certificate(cert, run->x);
  save_tsp_instance(out_path(cfg, "instance.txt"), inst.tsp);
  write_file_atomically(out_path(cfg, "certificate.txt"), cert.str());
  write_file_atomically(out_path(cfg, "report.txt"), rep.str());
  write_file_atomically(out_path(cfg, "verdict.txt"), verdict.str());
  std::cout << rep.str();
  note("artifacts in " + cfg.out_dir + " after " + std::to_string(elapsed()) + " s");
  return code;
}

std::string cell(const FamilyResidual* r) {
  if (!r || !r->checked) return "n/a";
  if (r->violations == 0) return "ok";
  return std::to_string(r->violations) + " (max " + format_rational(r->max_abs_residual) + ")";
}

// Residual matrix of both stage plans side by side.
int cmd_report(const RunConfig& cfg, bool x_only) {
  auto inst = load_instance(cfg.instance, cfg.large);
  const Rational flow = cfg.flow();
  auto annex = run_plan(inst.tsp, flow, StagePlan::AnnexC, !x_only, false);
  auto repaired = run_plan(inst.tsp, flow, StagePlan::Repaired, !x_only, false);

  std::ostringstream os;
  os << header(cfg, "stage plan comparison for " + inst.label);
  os << "objective per unit: annex-c " << format_rational(annex.objective.per_unit) << ", repaired "
     << format_rational(repaired.objective.per_unit) << "\n";
  os << "family  annex-c                 repaired                differs\n";
  for (Family f : all_families()) {
    auto a = cell(annex.report.find(f));
    auto b = cell(repaired.report.find(f));
    std::string fam = to_string(f);
    fam.resize(8, ' ');
    std::string ac = a;
    if (ac.size() < 24) ac.resize(24, ' ');
    std::string bc = b;
    if (bc.size() < 24) bc.resize(24, ' ');
    os << fam << ac << bc << (a == b ? "" : "*") << "\n";
  }
  if (const auto* base = annex.report.find(Family::BASE); base && base->violations != 0) {
    os << "annex-c BASE witnesses:\n";
    for (const auto& [key, res] : base->witnesses)
      os << "  " << to_string(key) << " residual " << format_rational(res) << "\n";
  }
  auto path = out_path(cfg, "plan_matrix.txt");
  write_file_atomically(path, os.str());
  std::cout << os.str();
  return kExitOk;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stageflow: builds, checks and reports the staged-flow counterexample"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  RunConfig cfg;
  app.add_option("--instance", cfg.instance, "instance file, 'canonical' (51 nodes) or 'seed' (23 nodes)");
  app.add_option("--flow-constant", cfg.flow_text, "flow constant F, integer or num/den");
  app.add_option("--large-cost", cfg.large, "cost of a LARGE arc")->check(CLI::PositiveNumber);
  app.add_option("--stage-plan", cfg.plan_text, "repaired or annex-c");
  app.add_option("--budget", cfg.budget, "seconds per oracle call, 0 for none")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", cfg.threads, "worker threads for branch and bound")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", cfg.out_dir, "directory for artifacts");
  app.add_flag("--no-timestamp", cfg.no_timestamp, "omit the timestamp line from artifacts");

  PipelineArgs pipe;
  auto* pipeline = app.add_subcommand("pipeline", "seed, enlarge, oracle, certificate, lift, verify, verdict");
  pipeline->add_option("--bnb-seconds", pipe.bnb_seconds, "branch and bound allowance on large instances, 0 skips");
  pipeline->add_flag("--skip-count", pipe.skip_count, "do not count optimal seed tours");
  pipeline->add_flag("--skip-lift", pipe.skip_lift, "verify x-level families only");
  pipeline->add_flag("--skip-symmetry", pipe.skip_symmetry, "do not check y symmetry");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "exact TSP");
  solve->add_option("target", cfg.instance, "instance (same as --instance)");
  solve->add_option("--method", solve_args.method, "auto, held-karp or bnb");
  solve->add_flag("--count", solve_args.count, "count optimal tours under each convention");
  solve->add_option("--out", solve_args.out, "also write the report here");

  auto* hcp = app.add_subcommand("hcp", "Hamiltonian cycle search");
  hcp->add_option("target", cfg.instance, "'canonical' for the seed graph, or an instance file");

  auto* certificate = app.add_subcommand("certificate", "write the x certificate");

  LiftArgs lift_args;
  std::size_t max_anchors = 0;
  auto* lift = app.add_subcommand("lift", "write x with the transition-lift y");
  lift->add_option("--certificate", lift_args.certificate, "x certificate to lift (default: generate)");
  auto* max_opt = lift->add_option("--max-anchors", max_anchors, "write y for the first N anchors only");
  lift->add_flag("--symmetry", lift_args.symmetry, "also check y symmetry");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "check a certificate file family by family");
  verify->add_option("--certificate", verify_args.certificate, "certificate file")->required();
  verify->add_option("--family", verify_args.families, "family to check (repeatable, default all)");
  verify->add_flag("--lift", verify_args.lift, "lift x when the file carries no y");
  verify->add_flag("--materialize", verify_args.materialize, "evaluate explicit rows (small n only)");
  verify->add_flag("--generic", verify_args.generic, "model without a designated sink");
  verify->add_flag("--all-witnesses", verify_args.all_witnesses, "list every violated row");

  ExportArgs export_args;
  bool x_only_flag = false;
  auto* exp = app.add_subcommand("export", "CPLEX LP export");
  exp->add_flag("--x-only", x_only_flag, "x variables with BASE and bounds (default)");
  exp->add_flag("--full", export_args.full, "x and y variables, all families (small n only)");
  exp->add_option("--family", export_args.families, "family to export (repeatable)");
  exp->add_option("--out", export_args.out, "LP file path");
  exp->add_option("--dump-rows", export_args.dump_rows, "also write the rows in audit form");
  exp->add_flag("--generic", export_args.generic, "model without a designated sink");

  bool report_x_only = false;
  auto* report = app.add_subcommand("report", "residual matrix of both stage plans");
  report->add_flag("--x-only", report_x_only, "skip the lift");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "stageflow: error: " << one_line(e.what()) << std::endl;
    return kExitInput;
  }

  try {
    if (x_only_flag && export_args.full) throw Error("--x-only and --full exclude each other");
    if (*max_opt) lift_args.max_anchors = max_anchors;
    if (*solve) return cmd_solve(cfg, solve_args);
    if (*hcp) return cmd_hcp(cfg);
    if (*certificate) return cmd_certificate(cfg);
    if (*lift) return cmd_lift(cfg, lift_args);
    if (*verify) return cmd_verify(cfg, verify_args);
    if (*exp) return cmd_export(cfg, export_args);
    if (*report) return cmd_report(cfg, report_x_only);
    return cmd_pipeline(cfg, pipe);
  } catch (const std::exception& e) {
    std::cerr << "stageflow: error: " << one_line(e.what()) << std::endl;
    return kExitInput;
  }
}
