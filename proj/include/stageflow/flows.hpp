#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stageflow/lp_model.hpp"
#include "stageflow/rational.hpp"

namespace stageflow {

// x assignment: exact values on stage arcs, zero elsewhere.
class SparseFlow {
 public:
  SparseFlow() = default;
  explicit SparseFlow(Rational flow_constant) : flow_(std::move(flow_constant)) {}

  const Rational& flow_constant() const { return flow_; }
  void set_flow_constant(Rational f) { flow_ = std::move(f); }

  void set(const StageArc& a, const Rational& value);  // zero erases
  void add(const StageArc& a, const Rational& value);
  Rational get(const StageArc& a) const;
  bool contains(const StageArc& a) const { return entries_.count(a) != 0; }

  const std::map<StageArc, Rational>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool operator==(const SparseFlow&) const = default;

 private:
  Rational flow_{1};
  std::map<StageArc, Rational> entries_;
};

struct FlowEntry {
  StageArc probe;
  Rational value;
};

// y assignment, organised per anchor arc. Implementations may compute the
// entries of an anchor on demand; probes arrive in ascending order.
class ConditionalFlowSource {
 public:
  using Visitor = std::function<void(std::span<const FlowEntry>)>;

  virtual ~ConditionalFlowSource() = default;
  virtual std::vector<StageArc> anchors() const = 0;  // ascending
  virtual void visit(const StageArc& anchor, const Visitor& fn) const = 0;
  virtual std::string rule() const = 0;

  // Visits every anchor in ascending order.
  void for_each(const std::function<void(const StageArc&, std::span<const FlowEntry>)>& fn) const;
};

// Fully stored y.
class ConditionalFlowSet : public ConditionalFlowSource {
 public:
  explicit ConditionalFlowSet(std::string rule = "explicit") : rule_(std::move(rule)) {}

  static ConditionalFlowSet materialize(const ConditionalFlowSource& source);

  void set(const StageArc& anchor, const StageArc& probe, const Rational& value);  // zero erases
  void add(const StageArc& anchor, const StageArc& probe, const Rational& value);
  Rational get(const StageArc& anchor, const StageArc& probe) const;
  std::uint64_t entry_count() const;

  std::vector<StageArc> anchors() const override;
  void visit(const StageArc& anchor, const Visitor& fn) const override;
  std::string rule() const override { return rule_; }

  bool operator==(const ConditionalFlowSet& other) const { return data_ == other.data_; }

 private:
  std::string rule_;
  std::map<StageArc, std::map<StageArc, Rational>> data_;
};

struct SymmetryReport {
  std::uint64_t pairs_checked = 0;  // unordered {a, b} pairs with a stored side
  std::uint64_t asymmetric_pairs = 0;
  Rational max_asymmetry;
  std::optional<std::pair<StageArc, StageArc>> witness;  // first pair attaining the maximum
  std::uint64_t peak_pending = 0;
};

// Compares y(a, b) with y(b, a) over every stored entry; a missing side counts
// as zero.
SymmetryReport check_symmetry(const ConditionalFlowSource& y);

}  // namespace stageflow
