#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stageflow/certificate.hpp"
#include "stageflow/flows.hpp"
#include "stageflow/lp_model.hpp"
#include "stageflow/oracles.hpp"

namespace stageflow {

// Residual of a row: 0 when satisfied, otherwise lhs - rhs (for >= rows the
// negative shortfall).
struct FamilyResidual {
  Family family = Family::BASE;
  bool checked = true;
  std::string skipped_reason;
  std::uint64_t rows_checked = 0;
  std::uint64_t violations = 0;
  Rational max_abs_residual;
  Rational min_abs_residual;  // smallest nonzero |residual|, 0 when none
  std::vector<std::pair<RowKey, Rational>> witnesses;  // first in row order

  bool satisfied() const { return checked && violations == 0; }
  bool operator==(const FamilyResidual& o) const;
};

struct ConstraintReport {
  std::vector<FamilyResidual> families;  // in Family order

  const FamilyResidual* find(Family f) const;
  bool all_satisfied(const std::vector<Family>& scope) const;
};

struct VerifyOptions {
  std::size_t witness_cap = 10;  // 0 keeps every violated row
  int materialize_cap = 12;      // largest n for row materialization
};

// Streams every requested family. y may be null, in which case families that
// mention y are reported as unchecked.
ConstraintReport verify_streaming(const ModelSpec& m, const SparseFlow& x, const ConditionalFlowSource* y,
                                  const std::vector<Family>& families, const VerifyOptions& options = {});

FamilyResidual verify_family(const ModelSpec& m, const SparseFlow& x, const ConditionalFlowSource* y, Family f,
                             const VerifyOptions& options = {});

// Builds each row explicitly and evaluates it. Requires n <= materialize_cap.
ConstraintReport verify_materialized(const ModelSpec& m, const SparseFlow& x, const ConditionalFlowSet* y,
                                     const std::vector<Family>& families, const VerifyOptions& options = {});

std::vector<Family> all_families();

// Lower (or exact) integral optimum with the sources that certify it.
struct IntegralBound {
  Rational value;
  bool exact = false;
  std::vector<std::string> provenance;
};

IntegralBound exact_optimum_bound(const TourResult& optimum, const std::string& method);

// Every tour of an enlarged instance keeps at least the seed's minimum number
// of large arcs, and every other arc costs at least the cheapest non-large arc.
IntegralBound enlargement_lower_bound(const TspInstance& enlarged, const TspInstance& seed_tsp, Budget budget = {});

enum class VerdictKind { Refutes, DoesNotRefute, Partial };
const char* to_string(VerdictKind v);

struct ScopeVerdict {
  std::string scope;
  std::vector<Family> families;
  std::vector<Family> satisfied, violated, unchecked;
  VerdictKind kind = VerdictKind::Partial;
  std::string details;
};

struct RefutationVerdict {
  ObjectiveSummary objective;
  IntegralBound bound;
  Rational gap;  // bound - per-unit objective
  bool no_large_support = true;
  ScopeVerdict x_level;  // BASE and C13
  ScopeVerdict full;     // every family
};

RefutationVerdict full_verdict(const ConstraintReport& report, const ObjectiveSummary& objective,
                               const IntegralBound& bound);

struct MutationOutcome {
  std::string name;
  std::string target;  // family id, or LARGE for the support check
  std::string change;
  std::vector<std::string> flagged;
  bool detected = false;
};

struct MutationReport {
  std::vector<MutationOutcome> outcomes;
  bool full_diagonal() const;
};

// Single-entry perturbations aimed at each family. Without y only the
// x-level part of the catalog runs.
MutationReport mutation_suite(const TspInstance& t, const ModelSpec& m, const SparseFlow& x,
                              const ConditionalFlowSet* y);

void render_text(std::ostream& out, const ConstraintReport& report);
void render_machine(std::ostream& out, const ConstraintReport& report);
void render_verdict_text(std::ostream& out, const RefutationVerdict& v);
void render_verdict_machine(std::ostream& out, const RefutationVerdict& v);
void render_mutations(std::ostream& out, const MutationReport& r);

}  // namespace stageflow
