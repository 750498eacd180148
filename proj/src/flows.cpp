#include "stageflow/flows.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>

namespace stageflow {

void SparseFlow::set(const StageArc& a, const Rational& value) {
  if (value == 0) entries_.erase(a);
  else entries_[a] = value;
}

void SparseFlow::add(const StageArc& a, const Rational& value) {
  if (value == 0) return;
  auto [it, inserted] = entries_.try_emplace(a, value);
  if (inserted) return;
  it->second += value;
  if (it->second == 0) entries_.erase(it);
}

Rational SparseFlow::get(const StageArc& a) const {
  auto it = entries_.find(a);
  return it == entries_.end() ? Rational(0) : it->second;
}

void ConditionalFlowSource::for_each(
    const std::function<void(const StageArc&, std::span<const FlowEntry>)>& fn) const {
  for (const auto& a : anchors()) visit(a, [&](std::span<const FlowEntry> entries) { fn(a, entries); });
}

ConditionalFlowSet ConditionalFlowSet::materialize(const ConditionalFlowSource& source) {
  ConditionalFlowSet out(source.rule());
  source.for_each([&](const StageArc& a, std::span<const FlowEntry> entries) {
    auto& row = out.data_[a];
    for (const auto& e : entries)
      if (e.value != 0) row.emplace_hint(row.end(), e.probe, e.value);
    if (row.empty()) out.data_.erase(a);
  });
  return out;
}

void ConditionalFlowSet::set(const StageArc& anchor, const StageArc& probe, const Rational& value) {
  if (value != 0) {
    data_[anchor][probe] = value;
    return;
  }
  auto it = data_.find(anchor);
  if (it == data_.end()) return;
  it->second.erase(probe);
  if (it->second.empty()) data_.erase(it);
}

void ConditionalFlowSet::add(const StageArc& anchor, const StageArc& probe, const Rational& value) {
  set(anchor, probe, get(anchor, probe) + value);
}

Rational ConditionalFlowSet::get(const StageArc& anchor, const StageArc& probe) const {
  auto it = data_.find(anchor);
  if (it == data_.end()) return 0;
  auto jt = it->second.find(probe);
  return jt == it->second.end() ? Rational(0) : jt->second;
}

std::uint64_t ConditionalFlowSet::entry_count() const {
  std::uint64_t total = 0;
  for (const auto& [a, row] : data_) total += row.size();
  return total;
}

std::vector<StageArc> ConditionalFlowSet::anchors() const {
  std::vector<StageArc> out;
  out.reserve(data_.size());
  for (const auto& [a, row] : data_) out.push_back(a);
  return out;
}

void ConditionalFlowSet::visit(const StageArc& anchor, const Visitor& fn) const {
  std::vector<FlowEntry> entries;
  if (auto it = data_.find(anchor); it != data_.end()) {
    entries.reserve(it->second.size());
    for (const auto& [p, v] : it->second) entries.push_back(FlowEntry{p, v});
  }
  fn(entries);
}

namespace {

// Arc ids are packed so an ordered pair fits one 64-bit key.
std::uint64_t pack(const StageArc& a) {
  return (static_cast<std::uint64_t>(a.i.value) << 42) | (static_cast<std::uint64_t>(a.s) << 21) |
         static_cast<std::uint64_t>(a.j.value);
}

StageArc unpack(std::uint64_t v) {
  constexpr std::uint64_t mask = (std::uint64_t{1} << 21) - 1;
  return StageArc{NodeId{static_cast<int>(v >> 42)}, static_cast<int>((v >> 21) & mask),
                  NodeId{static_cast<int>(v & mask)}};
}

struct PairHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
    std::uint64_t h = p.first * 0x9E3779B97F4A7C15ull ^ (p.second + 0x7F4A7C159E3779B9ull + (p.first << 6));
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

}  // namespace

SymmetryReport check_symmetry(const ConditionalFlowSource& y) {
  // Anchors in stage order: by the time an anchor is visited, every pair whose
  // other side lies at an earlier stage is already pending and can be closed.
  auto anchors = y.anchors();
  std::stable_sort(anchors.begin(), anchors.end(), [](const StageArc& a, const StageArc& b) {
    return std::tie(a.s, a.i, a.j) < std::tie(b.s, b.i, b.j);
  });

  SymmetryReport report;
  using Key = std::pair<std::uint64_t, std::uint64_t>;
  std::unordered_map<Key, Rational, PairHash> pending;

  auto record = [&](const StageArc& a, const StageArc& b, const Rational& diff) {
    ++report.pairs_checked;
    if (diff == 0) return;
    ++report.asymmetric_pairs;
    Rational d = abs_value(diff);
    if (!report.witness || d > report.max_asymmetry) {
      report.max_asymmetry = d;
      report.witness = std::make_pair(a, b);
    }
  };

  for (const auto& a : anchors) {
    const std::uint64_t ka = pack(a);
    y.visit(a, [&](std::span<const FlowEntry> entries) {
      for (const auto& e : entries) {
        const std::uint64_t kb = pack(e.probe);
        auto it = pending.find(Key{kb, ka});
        if (it != pending.end()) {
          record(e.probe, a, it->second - e.value);
          pending.erase(it);
        } else {
          pending.emplace(Key{ka, kb}, e.value);
        }
      }
    });
    report.peak_pending = std::max<std::uint64_t>(report.peak_pending, pending.size());
  }
  // Entries whose mirror was never stored.
  std::vector<std::pair<Key, Rational>> rest(pending.begin(), pending.end());
  std::sort(rest.begin(), rest.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  for (const auto& [key, value] : rest) record(unpack(key.first), unpack(key.second), value);
  return report;
}

}  // namespace stageflow
