#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stageflow/flows.hpp"
#include "stageflow/graph.hpp"
#include "stageflow/lp_model.hpp"

namespace stageflow {

inline constexpr int kDefaultFlowConstant = 192;

// annex-c: internal stages 3..n-1 with the sink hop also at n-1 (as printed).
// repaired: internal stages 3..n-2, sink hop at n-1, return at n.
enum class StagePlan { AnnexC, Repaired };

const char* to_string(StagePlan plan);
std::optional<StagePlan> parse_stage_plan(std::string_view text);

// Layout checks for the source/group/sink construction. Throws
// PreconditionError naming the first structural requirement that fails.
void check_certificate_structure(const TspInstance& t);

// Model shape used for certificates of the source/group/sink layout: the last
// node is the sink.
ModelSpec certificate_model(const TspInstance& t, const Rational& flow);

SparseFlow generate_x_certificate(const TspInstance& t, const Rational& flow = kDefaultFlowConstant,
                                  StagePlan plan = StagePlan::Repaired);

struct ObjectiveSummary {
  Rational total;     // sum cost * x
  Rational per_unit;  // total / F
  Cost max_support_cost = 0;
  std::vector<StageArc> large_support;  // support arcs priced at LARGE
};

ObjectiveSummary certificate_objective(const SparseFlow& x, const TspInstance& t);

// Integral tour as x (F on every tour arc at its position) and its product
// lift y(a, b) = F for every pair of tour arcs at distinct stages.
SparseFlow tour_flow(const std::vector<NodeId>& tour, const Rational& flow = 1);
ConditionalFlowSet lift_integral_tour(const std::vector<NodeId>& tour, const Rational& flow = 1);

// y(a, b) = x(a) * x(b) / F over support pairs at distinct stages.
class ProportionalLift : public ConditionalFlowSource {
 public:
  explicit ProportionalLift(const SparseFlow& x);
  std::vector<StageArc> anchors() const override;
  void visit(const StageArc& anchor, const Visitor& fn) const override;
  std::string rule() const override { return "proportional"; }

 private:
  const SparseFlow& x_;
  std::vector<StageArc> support_;
};

// Conditions x on one anchor arc and propagates the anchor's mass through x
// as a stage-indexed Markov chain: forward with out-share kernels after the
// anchor, backward with in-share kernels before it. On a BASE-feasible x the
// two directions give the same joint value, so the lift is symmetric, and on
// an integral tour it coincides with the product lift.
class TransitionLift : public ConditionalFlowSource {
 public:
  TransitionLift(const SparseFlow& x, const ModelSpec& m);
  ~TransitionLift() override;
  TransitionLift(const TransitionLift&) = delete;
  TransitionLift& operator=(const TransitionLift&) = delete;

  std::vector<StageArc> anchors() const override;
  void visit(const StageArc& anchor, const Visitor& fn) const override;
  std::string rule() const override { return "transition"; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Certificate text: "F=<num>/<den>", "x i s j <num>/<den>", "y i s j k r t <num>/<den>".
struct CertificateFile {
  SparseFlow x;
  ConditionalFlowSet y;
};

void write_certificate(std::ostream& out, const SparseFlow& x);
// Writes x and then y entries for at most `max_anchors` anchors (all when unset).
void write_certificate(std::ostream& out, const SparseFlow& x, const ConditionalFlowSource& y,
                       std::optional<std::size_t> max_anchors = std::nullopt);
CertificateFile parse_certificate(std::istream& in, const std::string& source_name = "<stream>", int n_limit = 0);
CertificateFile load_certificate(const std::filesystem::path& path, int n_limit = 0);

// Structural facts about a group-layout certificate at one internal stage.
struct EmissionCheck {
  bool uniform = true;  // every group node emits exactly F/G at every internal stage
  std::optional<std::pair<NodeId, int>> witness;
};
EmissionCheck check_group_emission(const SparseFlow& x, const TspInstance& t, StagePlan plan);

// Total inflow into each group node summed over stages; `with_source` adds
// the stage-2 hop from the source.
std::vector<Rational> group_visit_mass(const SparseFlow& x, const TspInstance& t, bool with_source);

struct EscapeCheck {
  std::uint64_t subsets_checked = 0;
  Rational min_escape;  // least flow leaving a proper group subset at the stage
  std::vector<NodeId> witness;
  Rational required;  // F / G
  bool holds = true;
};

// For every group subset S with |S| <= max_size, and `samples` random larger
// proper subsets, the flow leaving S at `stage` must be at least F/G.
EscapeCheck check_escape_bound(const SparseFlow& x, const TspInstance& t, int stage, int max_size, int samples,
                               std::uint64_t seed);

}  // namespace stageflow
