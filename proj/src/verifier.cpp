#include "stageflow/verifier.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "stageflow/error.hpp"

namespace stageflow {

bool FamilyResidual::operator==(const FamilyResidual& o) const {
  if (family != o.family || checked != o.checked || rows_checked != o.rows_checked || violations != o.violations ||
      max_abs_residual != o.max_abs_residual || min_abs_residual != o.min_abs_residual ||
      witnesses.size() != o.witnesses.size())
    return false;
  for (std::size_t k = 0; k < witnesses.size(); ++k)
    if (witnesses[k].first != o.witnesses[k].first || witnesses[k].second != o.witnesses[k].second) return false;
  return true;
}

const FamilyResidual* ConstraintReport::find(Family f) const {
  for (const auto& r : families)
    if (r.family == f) return &r;
  return nullptr;
}

bool ConstraintReport::all_satisfied(const std::vector<Family>& scope) const {
  for (Family f : scope) {
    const auto* r = find(f);
    if (!r || !r->satisfied()) return false;
  }
  return true;
}

std::vector<Family> all_families() { return {std::begin(kAllFamilies), std::end(kAllFamilies)}; }

namespace {

bool needs_y(Family f) { return !is_x_level(f); }

class Tally {
 public:
  Tally(Family f, std::size_t cap) : cap_(cap) { result_.family = f; }

  void row(const RowKey& key, const Rational& residual) {
    if (residual == 0) return;
    ++result_.violations;
    Rational a = abs_value(residual);
    if (a > result_.max_abs_residual) result_.max_abs_residual = a;
    if (result_.min_abs_residual == 0 || a < result_.min_abs_residual) result_.min_abs_residual = a;
    witnesses_.emplace(key, residual);
    if (cap_ != 0 && witnesses_.size() > cap_) witnesses_.erase(std::prev(witnesses_.end()));
  }

  FamilyResidual finish(std::uint64_t rows) {
    result_.rows_checked = rows;
    result_.witnesses.assign(witnesses_.begin(), witnesses_.end());
    return result_;
  }

 private:
  std::size_t cap_;
  FamilyResidual result_;
  std::map<RowKey, Rational> witnesses_;
};

FamilyResidual unchecked(Family f, std::string reason) {
  FamilyResidual r;
  r.family = f;
  r.checked = false;
  r.skipped_reason = std::move(reason);
  return r;
}

bool in_cube(const ModelSpec& m, const StageArc& a) {
  return a.i.value >= 1 && a.i.value <= m.n && a.j.value >= 1 && a.j.value <= m.n && a.s >= 1 && a.s <= m.n;
}

void check_inputs(const ModelSpec& m, const SparseFlow& x) {
  if (m.n < 3) throw PreconditionError("staged model needs at least 3 nodes");
  for (const auto& [a, v] : x.entries())
    if (!in_cube(m, a)) throw PreconditionError("x entry " + to_string(a) + " outside the index cube");
}

Rational residual_of(Relation rel, const Rational& lhs, const Rational& rhs) {
  Rational d = lhs - rhs;
  switch (rel) {
    case Relation::Eq: return d;
    case Relation::Ge: return d < 0 ? d : Rational(0);
    case Relation::Le: return d > 0 ? d : Rational(0);
  }
  return d;
}

RowKey key_for(Family f) {
  RowKey k;
  k.family = f;
  return k;
}

void stream_base(const ModelSpec& m, const SparseFlow& x, Tally& tally) {
  std::map<std::pair<int, int>, Rational> in, out;
  Rational leave = 0, back = 0;
  for (const auto& [a, v] : x.entries()) {
    if (!is_valid_x(m, a)) continue;
    in[{a.s, a.j.value}] += v;
    out[{a.s, a.i.value}] += v;
    if (a.s == 1 && a.i == m.origin) leave += v;
    if (a.s == m.n && a.j == m.origin) back += v;
  }
  RowKey key = key_for(Family::BASE);
  tally.row(key, leave - m.flow);

  std::set<std::pair<int, int>> rows;
  for (const auto& [cell, v] : in)
    if (cell.first <= m.n - 1) rows.insert(cell);
  for (const auto& [cell, v] : out)
    if (cell.first >= 2) rows.insert({cell.first - 1, cell.second});
  for (const auto& [s, k] : rows) {
    key.part = 1;
    key.stage = s;
    key.node = k;
    Rational lhs = 0;
    if (auto it = in.find({s, k}); it != in.end()) lhs += it->second;
    if (auto it = out.find({s + 1, k}); it != out.end()) lhs -= it->second;
    tally.row(key, lhs);
  }
  key = key_for(Family::BASE);
  key.part = 2;
  tally.row(key, back - m.flow);
}

void stream_x_domain(const ModelSpec& m, const SparseFlow& x, Tally& tally) {
  RowKey key = key_for(Family::C13);
  for (const auto& [a, v] : x.entries()) {
    key.probe = a;
    tally.row(key, residual_of(is_valid_x(m, a) ? Relation::Ge : Relation::Eq, v, 0));
  }
}

// Per-anchor evaluation of the conditional families.
class AnchorPass {
 public:
  AnchorPass(const ModelSpec& m, const SparseFlow& x, const std::vector<Family>& wanted, std::size_t cap)
      : m_(m), x_(x), n_(m.n), width_(static_cast<std::size_t>(m.n) + 1) {
    for (Family f : wanted)
      if (needs_y(f)) tallies_.emplace(f, Tally(f, cap));
    in_.resize(static_cast<std::size_t>(n_ + 2) * width_);
    out_.resize(in_.size());
    used_.assign(in_.size(), 0);
    total_.resize(static_cast<std::size_t>(n_) + 2);
    node_in_.resize(width_);
  }

  bool wants(Family f) const { return tallies_.count(f) != 0; }

  void anchor(const StageArc& a, std::span<const FlowEntry> entries) {
    if (wants(Family::C14)) {
      RowKey key = key_for(Family::C14);
      key.anchor = a;
      for (const auto& e : entries) {
        if (!in_cube(m_, e.probe)) throw PreconditionError("y entry " + to_string(e.probe) + " outside the index cube");
        key.probe = e.probe;
        tallies_.at(Family::C14).row(key, residual_of(is_valid_y(m_, a, e.probe) ? Relation::Ge : Relation::Eq,
                                                      e.value, 0));
      }
    }
    if (!is_valid_x(m_, a)) return;
    const Rational xa = x_.get(a);
    if (xa == 0 && entries.empty()) return;

    for (const auto& e : entries) {
      if (!is_valid_y(m_, a, e.probe)) continue;
      const StageArc& b = e.probe;
      cell(in_, b.s, b.j.value) += e.value;
      cell(out_, b.s, b.i.value) += e.value;
      total_[b.s] += e.value;
      node_in_[b.j.value] += e.value;
      if (a.s == 1) {
        if (b.s == 2) {
          c6_total_ += e.value;
          c6_in_[b] += e.value;
        }
        c12_in_[b] += e.value;
      }
      if (a.s == 2 && b.s == 3 && b.i == a.j) c6_out_[a] += e.value;
    }

    conservation(a, xa, entries, true);
    conservation(a, xa, entries, false);
    stage_totals(a, xa);
    visits(a, xa);

    // Reset the scratch cells this anchor touched.
    for (std::size_t c : touched_) {
      in_[c] = 0;
      out_[c] = 0;
      used_[c] = 0;
    }
    touched_.clear();
    for (auto& t : total_) t = 0;
    for (auto& v : node_in_) v = 0;
  }

  void close(std::map<Family, FamilyResidual>& out) {
    if (wants(Family::C6)) {
      Tally& t = tallies_.at(Family::C6);
      t.row(key_for(Family::C6), c6_total_ - m_.flow);
      std::set<StageArc> probes;
      for (const auto& [b, v] : c6_in_) probes.insert(b);
      for (const auto& [b, v] : c6_out_) probes.insert(b);
      RowKey key = key_for(Family::C6);
      key.part = 1;
      for (const auto& b : probes) {
        key.probe = b;
        t.row(key, lookup(c6_in_, b) - lookup(c6_out_, b));
      }
    }
    if (wants(Family::C12)) {
      Tally& t = tallies_.at(Family::C12);
      std::set<StageArc> probes;
      for (const auto& [b, v] : c12_in_) probes.insert(b);
      for (const auto& [b, v] : x_.entries())
        if (b.s >= 2 && is_valid_x(m_, b)) probes.insert(b);
      RowKey key = key_for(Family::C12);
      for (const auto& b : probes) {
        key.probe = b;
        t.row(key, lookup(c12_in_, b) - x_.get(b));
      }
    }
    for (auto& [f, t] : tallies_) out.emplace(f, t.finish(family_row_count(m_, f)));
  }

 private:
  Rational& cell(std::vector<Rational>& grid, int stage, int node) {
    const std::size_t c = static_cast<std::size_t>(stage) * width_ + static_cast<std::size_t>(node);
    if (!used_[c]) {
      used_[c] = 1;
      touched_.push_back(c);
    }
    return grid[c];
  }
  const Rational& peek(const std::vector<Rational>& grid, int stage, int node) const {
    return grid[static_cast<std::size_t>(stage) * width_ + static_cast<std::size_t>(node)];
  }
  static Rational lookup(const std::map<StageArc, Rational>& m, const StageArc& b) {
    auto it = m.find(b);
    return it == m.end() ? Rational(0) : it->second;
  }

  // Rows (r, k) of C7 (after) or C8 (before) that can be nonzero.
  void conservation(const StageArc& a, const Rational& xa, std::span<const FlowEntry> entries, bool after) {
    const Family f = after ? Family::C7 : Family::C8;
    if (!wants(f)) return;
    std::vector<std::pair<int, int>> rows;
    for (const auto& e : entries) {
      if (!is_valid_y(m_, a, e.probe)) continue;
      const StageArc& b = e.probe;
      if (after && b.s > a.s) {
        if (b.s <= n_ - 1) rows.emplace_back(b.s, b.j.value);
        rows.emplace_back(b.s - 1, b.i.value);
      } else if (!after && b.s < a.s) {
        rows.emplace_back(b.s, b.j.value);
        if (b.s >= 2) rows.emplace_back(b.s - 1, b.i.value);
      }
    }
    if (after && a.s <= n_ - 1) rows.emplace_back(a.s, a.j.value);
    if (!after && a.s >= 2) rows.emplace_back(a.s - 1, a.i.value);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

    Tally& t = tallies_.at(f);
    RowKey key = key_for(f);
    key.anchor = a;
    for (const auto& [r, k] : rows) {
      Rational lhs = 0;
      if (r == a.s) lhs = k == a.j.value ? xa : Rational(0);
      else lhs = peek(in_, r, k);
      if (r + 1 == a.s) lhs -= k == a.i.value ? xa : Rational(0);
      else lhs -= peek(out_, r + 1, k);
      key.stage = r;
      key.node = k;
      t.row(key, lhs);
    }
  }

  void stage_totals(const StageArc& a, const Rational& xa) {
    for (Family f : {Family::C9, Family::C10}) {
      if (!wants(f)) continue;
      Tally& t = tallies_.at(f);
      RowKey key = key_for(f);
      key.anchor = a;
      const int lo = f == Family::C9 ? a.s + 1 : 1;
      const int hi = f == Family::C9 ? n_ : a.s - 1;
      for (int r = lo; r <= hi; ++r) {
        key.stage = r;
        t.row(key, total_[r] - xa);
      }
    }
  }

  void visits(const StageArc& a, const Rational& xa) {
    if (!wants(Family::C11)) return;
    Tally& t = tallies_.at(Family::C11);
    RowKey key = key_for(Family::C11);
    key.anchor = a;
    for (int k = 1; k <= n_; ++k) {
      key.node = k;
      t.row(key, k == a.j.value ? node_in_[k] : Rational(node_in_[k] - xa));
    }
  }

  const ModelSpec& m_;
  const SparseFlow& x_;
  int n_;
  std::size_t width_;
  std::map<Family, Tally> tallies_;
  std::vector<Rational> in_, out_;
  std::vector<char> used_;
  std::vector<std::size_t> touched_;
  std::vector<Rational> total_;
  std::vector<Rational> node_in_;
  Rational c6_total_;
  std::map<StageArc, Rational> c6_in_, c6_out_, c12_in_;
};

}  // namespace

ConstraintReport verify_streaming(const ModelSpec& m, const SparseFlow& x, const ConditionalFlowSource* y,
                                  const std::vector<Family>& families, const VerifyOptions& options) {
  check_inputs(m, x);
  std::map<Family, FamilyResidual> done;
  for (Family f : families) {
    if (f == Family::BASE) {
      Tally t(f, options.witness_cap);
      stream_base(m, x, t);
      done.emplace(f, t.finish(family_row_count(m, f)));
    } else if (f == Family::C13) {
      Tally t(f, options.witness_cap);
      stream_x_domain(m, x, t);
      done.emplace(f, t.finish(family_row_count(m, f)));
    }
  }

  std::vector<Family> y_families;
  for (Family f : families)
    if (needs_y(f)) y_families.push_back(f);
  if (!y_families.empty()) {
    if (!y) {
      for (Family f : y_families) done.emplace(f, unchecked(f, "no conditional flows supplied"));
    } else {
      AnchorPass pass(m, x, y_families, options.witness_cap);
      std::set<StageArc> anchors;
      for (const auto& a : y->anchors()) anchors.insert(a);
      for (const auto& [a, v] : x.entries()) anchors.insert(a);
      for (const auto& a : anchors) {
        if (!in_cube(m, a)) throw PreconditionError("y anchor " + to_string(a) + " outside the index cube");
        y->visit(a, [&](std::span<const FlowEntry> entries) { pass.anchor(a, entries); });
      }
      pass.close(done);
    }
  }

  ConstraintReport report;
  for (Family f : kAllFamilies)
    if (auto it = done.find(f); it != done.end()) report.families.push_back(it->second);
  return report;
}

FamilyResidual verify_family(const ModelSpec& m, const SparseFlow& x, const ConditionalFlowSource* y, Family f,
                             const VerifyOptions& options) {
  return verify_streaming(m, x, y, {f}, options).families.front();
}

ConstraintReport verify_materialized(const ModelSpec& m, const SparseFlow& x, const ConditionalFlowSet* y,
                                     const std::vector<Family>& families, const VerifyOptions& options) {
  check_inputs(m, x);
  if (m.n > options.materialize_cap)
    throw PreconditionError("row materialization is capped at n <= " + std::to_string(options.materialize_cap));
  if (y)
    y->for_each([&](const StageArc& a, std::span<const FlowEntry> entries) {
      if (!in_cube(m, a)) throw PreconditionError("y anchor " + to_string(a) + " outside the index cube");
      for (const auto& e : entries)
        if (!in_cube(m, e.probe)) throw PreconditionError("y entry " + to_string(e.probe) + " outside the index cube");
    });

  ConstraintReport report;
  for (Family f : kAllFamilies) {
    if (std::find(families.begin(), families.end(), f) == families.end()) continue;
    if (needs_y(f) && !y) {
      report.families.push_back(unchecked(f, "no conditional flows supplied"));
      continue;
    }
    Tally t(f, options.witness_cap);
    std::uint64_t rows = 0;
    for_each_family_row(m, f, [&](const LinearRow& row) {
      ++rows;
      Rational lhs = 0;
      for (const auto& term : row.terms)
        lhs += term.coeff * (term.var.is_y() ? y->get(term.var.a, *term.var.b) : x.get(term.var.a));
      t.row(row.key, residual_of(row.relation, lhs, row.rhs));
    });
    report.families.push_back(t.finish(rows));
  }
  return report;
}

IntegralBound exact_optimum_bound(const TourResult& optimum, const std::string& method) {
  IntegralBound b;
  b.value = Rational(optimum.value);
  b.exact = true;
  b.provenance.push_back("exact optimum " + std::to_string(optimum.value) + " by " + method);
  return b;
}

IntegralBound enlargement_lower_bound(const TspInstance& enlarged, const TspInstance& seed_tsp, Budget budget) {
  auto k = min_large_arcs(seed_tsp, budget);
  if (!k) throw Error("budget exhausted while counting the seed's unavoidable large arcs");
  Cost cheapest = enlarged.large();
  for (int i = 1; i <= enlarged.size(); ++i)
    for (int j = 1; j <= enlarged.size(); ++j)
      if (i != j) cheapest = std::min(cheapest, enlarged.cost(NodeId{i}, NodeId{j}));
  const int n = enlarged.size();
  IntegralBound b;
  b.value = Rational(static_cast<long>(*k) * enlarged.large() + static_cast<long>(n - *k) * cheapest);
  b.provenance.push_back("seed needs " + std::to_string(*k) + " large arcs in every tour (Held-Karp on 0/1 costs, " +
                         std::to_string(seed_tsp.size()) + " nodes)");
  b.provenance.push_back("node splitting preserves the least number of large arcs (seeded property test)");
  b.provenance.push_back("the other " + std::to_string(n - *k) + " arcs cost at least " + std::to_string(cheapest));
  return b;
}

const char* to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::Refutes: return "REFUTES";
    case VerdictKind::DoesNotRefute: return "DOES-NOT-REFUTE";
    case VerdictKind::Partial: return "PARTIAL";
  }
  return "?";
}

namespace {

ScopeVerdict judge(std::string name, std::vector<Family> scope, const ConstraintReport& report,
                   const ObjectiveSummary& objective, const IntegralBound& bound) {
  ScopeVerdict v;
  v.scope = std::move(name);
  v.families = std::move(scope);
  for (Family f : v.families) {
    const auto* r = report.find(f);
    if (!r || !r->checked) v.unchecked.push_back(f);
    else if (r->violations != 0) v.violated.push_back(f);
    else v.satisfied.push_back(f);
  }
  if (!v.violated.empty() || !v.unchecked.empty()) {
    v.kind = VerdictKind::Partial;
    std::string d;
    for (Family f : v.violated) {
      const auto* r = report.find(f);
      d += std::string(d.empty() ? "" : "; ") + to_string(f) + " violated in " + std::to_string(r->violations) +
           " rows, min |residual| " + format_rational(r->min_abs_residual) + ", max " +
           format_rational(r->max_abs_residual);
    }
    for (Family f : v.unchecked) {
      const auto* r = report.find(f);
      d += std::string(d.empty() ? "" : "; ") + to_string(f) + " unchecked" +
           (r && !r->skipped_reason.empty() ? " (" + r->skipped_reason + ")" : "");
    }
    v.details = d;
  } else if (objective.per_unit < bound.value) {
    v.kind = VerdictKind::Refutes;
    v.details = "every family holds and the objective is below the integral bound";
  } else {
    v.kind = VerdictKind::DoesNotRefute;
    v.details = "every family holds but the objective does not undercut the integral bound";
  }
  return v;
}

}  // namespace

RefutationVerdict full_verdict(const ConstraintReport& report, const ObjectiveSummary& objective,
                               const IntegralBound& bound) {
  if (bound.provenance.empty()) throw PreconditionError("integral bound carries no oracle provenance");
  RefutationVerdict v;
  v.objective = objective;
  v.bound = bound;
  v.gap = bound.value - objective.per_unit;
  v.no_large_support = objective.large_support.empty();
  v.x_level = judge("x-level", {Family::BASE, Family::C13}, report, objective, bound);
  v.full = judge("full", all_families(), report, objective, bound);
  return v;
}

bool MutationReport::full_diagonal() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const MutationOutcome& o) { return o.detected; });
}

namespace {

std::optional<StageArc> first_probe_at(const ConditionalFlowSet& y, const StageArc& a, int stage) {
  std::optional<StageArc> found;
  y.visit(a, [&](std::span<const FlowEntry> entries) {
    for (const auto& e : entries)
      if (e.probe.s == stage) {
        found = e.probe;
        return;
      }
  });
  return found;
}

}  // namespace

MutationReport mutation_suite(const TspInstance& t, const ModelSpec& m, const SparseFlow& x,
                              const ConditionalFlowSet* y) {
  const auto families = y ? all_families() : std::vector<Family>{Family::BASE, Family::C13};
  const auto baseline = verify_streaming(m, x, y, families);
  for (const auto& r : baseline.families)
    if (!r.satisfied())
      throw PreconditionError(std::string("mutation suite needs a passing baseline; ") + to_string(r.family) +
                              " fails");

  MutationReport report;
  auto run = [&](std::string name, std::string target, std::string change, const SparseFlow& mx,
                 const ConditionalFlowSet* my) {
    MutationOutcome o{std::move(name), std::move(target), std::move(change), {}, false};
    for (const auto& r : verify_streaming(m, mx, my, families).families)
      if (r.checked && r.violations != 0) o.flagged.push_back(to_string(r.family));
    if (!certificate_objective(mx, t).large_support.empty()) o.flagged.push_back("LARGE");
    o.detected = std::find(o.flagged.begin(), o.flagged.end(), o.target) != o.flagged.end();
    report.outcomes.push_back(std::move(o));
  };
  const Rational one = 1;

  // x-level catalog.
  std::optional<StageArc> stage2;
  for (const auto& [a, v] : x.entries())
    if (a.s == 2 && is_valid_x(m, a)) {
      stage2 = a;
      break;
    }
  if (stage2) {
    SparseFlow mx = x;
    mx.add(*stage2, one);
    run("x+1 on a stage-2 arc", "BASE", "x" + to_string(*stage2) + " += 1", mx, y);
  }
  {
    const int k = stage2 ? stage2->i.value : (m.origin.value % m.n) + 1;
    StageArc loop{NodeId{k}, 2, NodeId{k}};
    SparseFlow mx = x;
    mx.set(loop, one);
    run("self-loop injected", "C13", "x" + to_string(loop) + " = 1", mx, y);
  }
  {
    std::optional<StageArc> large;
    for (int s = 1; s <= m.n && !large; ++s)
      for (int i = 1; i <= m.n && !large; ++i)
        for (int j = 1; j <= m.n && !large; ++j) {
          StageArc a{NodeId{i}, s, NodeId{j}};
          if (is_valid_x(m, a) && t.is_large(a.i, a.j)) large = a;
        }
    if (large) {
      SparseFlow mx = x;
      mx.add(*large, one);
      run("flow on a LARGE arc", "LARGE", "x" + to_string(*large) + " += 1", mx, y);
    }
  }
  if (!y) return report;

  // Conditional catalog around the first stage-1 anchor.
  std::optional<StageArc> a1;
  for (const auto& [a, v] : x.entries())
    if (a.s == 1 && is_valid_x(m, a)) {
      a1 = a;
      break;
    }
  if (!a1) throw PreconditionError("mutation suite needs a stage-1 arc in the support");
  auto a2 = first_probe_at(*y, *a1, 2);
  auto a3 = first_probe_at(*y, *a1, 3);
  auto last = first_probe_at(*y, *a1, m.n);
  if (!a2 || !a3 || !last) throw PreconditionError("mutation suite needs conditional flow at stages 2, 3 and n");

  auto with_y = [&](const std::function<void(ConditionalFlowSet&)>& change) {
    ConditionalFlowSet my = *y;
    change(my);
    return my;
  };
  auto pair_str = [](const StageArc& a, const StageArc& b) { return "y" + to_string(a) + to_string(b); };

  {
    auto my = with_y([&](ConditionalFlowSet& s) { s.add(*a1, *a2, one); });
    run("stage 1/2 pair +1", "C6", pair_str(*a1, *a2) + " += 1", x, &my);
  }
  {
    auto my = with_y([&](ConditionalFlowSet& s) { s.add(*a1, *last, one); });
    run("later probe +1", "C7", pair_str(*a1, *last) + " += 1", x, &my);
  }
  {
    auto my = with_y([&](ConditionalFlowSet& s) { s.add(*last, *a1, one); });
    run("earlier probe +1", "C8", pair_str(*last, *a1) + " += 1", x, &my);
  }
  {
    auto my = with_y([&](ConditionalFlowSet& s) { s.set(*a1, *a2, 0); });
    run("later entry zeroed", "C9", pair_str(*a1, *a2) + " = 0", x, &my);
  }
  {
    auto my = with_y([&](ConditionalFlowSet& s) { s.set(*a2, *a1, 0); });
    run("earlier entry zeroed", "C10", pair_str(*a2, *a1) + " = 0", x, &my);
  }
  {
    StageArc extra = *a2;
    for (int i = 1; i <= m.n && extra == *a2; ++i)
      for (int j = 1; j <= m.n; ++j) {
        StageArc b{NodeId{i}, 2, NodeId{j}};
        if (b != *a2 && is_valid_x(m, b) && y->get(*a1, b) == 0) {
          extra = b;
          break;
        }
      }
    auto my = with_y([&](ConditionalFlowSet& s) { s.add(*a1, extra, one); });
    run("extra visit +1", "C11", pair_str(*a1, extra) + " += 1", x, &my);
  }
  {
    auto my = with_y([&](ConditionalFlowSet& s) { s.add(*a1, *a3, one); });
    run("stage-1 anchored entry +1", "C12", pair_str(*a1, *a3) + " += 1", x, &my);
  }
  {
    StageArc same{a2->j, a2->s, a2->i};
    auto my = with_y([&](ConditionalFlowSet& s) { s.set(*a2, same, one); });
    run("same-stage pair injected", "C14", pair_str(*a2, same) + " = 1", x, &my);
  }
  return report;
}

}  // namespace stageflow
