#include <ostream>

#include "stageflow/verifier.hpp"

namespace stageflow {

void render_text(std::ostream& out, const ConstraintReport& report) {
  for (const auto& r : report.families) {
    out << to_string(r.family) << "  " << describe(r.family) << "\n";
    if (!r.checked) {
      out << "  not checked: " << r.skipped_reason << "\n";
      continue;
    }
    out << "  rows " << r.rows_checked << ", violations " << r.violations;
    if (r.violations != 0)
      out << ", max |residual| " << format_rational(r.max_abs_residual) << ", min |residual| "
          << format_rational(r.min_abs_residual);
    out << "\n";
    for (const auto& [key, residual] : r.witnesses)
      out << "    " << to_string(key) << " residual " << format_rational(residual) << "\n";
  }
}

void render_machine(std::ostream& out, const ConstraintReport& report) {
  for (const auto& r : report.families) {
    if (!r.checked) {
      out << "family=" << to_string(r.family) << " rows=n/a violations=n/a max=n/a\n";
      continue;
    }
    out << "family=" << to_string(r.family) << " rows=" << r.rows_checked << " violations=" << r.violations
        << " max=" << format_rational(r.max_abs_residual) << "\n";
  }
}

namespace {

std::string family_list(const std::vector<Family>& fs) {
  std::string s;
  for (Family f : fs) s += std::string(s.empty() ? "" : ",") + to_string(f);
  return s.empty() ? "-" : s;
}

void scope_text(std::ostream& out, const ScopeVerdict& v) {
  out << "verdict (" << v.scope << "): " << to_string(v.kind) << "\n";
  out << "  satisfied: " << family_list(v.satisfied) << "\n";
  if (!v.violated.empty()) out << "  violated:  " << family_list(v.violated) << "\n";
  if (!v.unchecked.empty()) out << "  unchecked: " << family_list(v.unchecked) << "\n";
  out << "  " << v.details << "\n";
}

}  // namespace

void render_verdict_text(std::ostream& out, const RefutationVerdict& v) {
  out << "objective per unit flow: " << format_rational(v.objective.per_unit) << " (total "
      << format_rational(v.objective.total) << ")\n";
  out << "max support cost: " << v.objective.max_support_cost
      << (v.no_large_support ? ", no LARGE arc in support\n" : ", LARGE arcs in support\n");
  out << "integral " << (v.bound.exact ? "optimum: " : "lower bound: ") << format_rational(v.bound.value) << "\n";
  for (const auto& p : v.bound.provenance) out << "  - " << p << "\n";
  out << "gap: " << format_rational(v.gap) << "\n";
  scope_text(out, v.x_level);
  scope_text(out, v.full);
}

void render_verdict_machine(std::ostream& out, const RefutationVerdict& v) {
  out << "objective=" << format_rational(v.objective.per_unit) << " bound=" << format_rational(v.bound.value)
      << " bound_exact=" << (v.bound.exact ? "yes" : "no") << " gap=" << format_rational(v.gap)
      << " max_support_cost=" << v.objective.max_support_cost << "\n";
  for (const ScopeVerdict* s : {&v.x_level, &v.full})
    out << "verdict scope=" << s->scope << " result=" << to_string(s->kind) << " violated=" << family_list(s->violated)
        << " unchecked=" << family_list(s->unchecked) << "\n";
}

void render_mutations(std::ostream& out, const MutationReport& r) {
  for (const auto& o : r.outcomes) {
    std::string flagged;
    for (const auto& f : o.flagged) flagged += (flagged.empty() ? "" : ",") + f;
    out << (o.detected ? "detected " : "MISSED   ") << o.target << "  " << o.change << "  flagged by "
        << (flagged.empty() ? "-" : flagged) << "\n";
  }
}

}  // namespace stageflow
