#include "stageflow/certificate.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "stageflow/error.hpp"
#include "stageflow/io_util.hpp"

namespace stageflow {

const char* to_string(StagePlan plan) { return plan == StagePlan::AnnexC ? "annex-c" : "repaired"; }

std::optional<StagePlan> parse_stage_plan(std::string_view text) {
  if (text == "annex-c") return StagePlan::AnnexC;
  if (text == "repaired") return StagePlan::Repaired;
  return std::nullopt;
}

namespace {

constexpr int kSourceNode = 2;

Rational split_weight(Cost c) {
  if (c == 1) return Rational(1, 2);
  if (c == 2) return Rational(1, 4);
  return 0;
}

std::string node_str(int v) { return std::to_string(v); }

int last_internal_stage(int n, StagePlan plan) { return plan == StagePlan::AnnexC ? n - 1 : n - 2; }

}  // namespace

void check_certificate_structure(const TspInstance& t) {
  const int n = t.size();
  if (n < 5) throw PreconditionError("certificate construction needs origin, source, sink and at least 2 group nodes");
  if (t.origin() != NodeId{1}) throw PreconditionError("certificate construction expects node 1 as origin");
  auto small = [&](int i, int j) { return !t.is_large(NodeId{i}, NodeId{j}); };
  if (!small(1, kSourceNode)) throw PreconditionError("origin -> source arc is LARGE");
  if (!small(n, 1)) throw PreconditionError("sink -> origin arc is LARGE");
  for (int g = 3; g < n; ++g) {
    if (!small(kSourceNode, g)) throw PreconditionError("source -> " + node_str(g) + " arc is LARGE");
    if (!small(g, n)) throw PreconditionError(node_str(g) + " -> sink arc is LARGE");
    Rational total = 0;
    for (int h = 3; h < n; ++h) {
      if (h == g || !small(g, h)) continue;
      Cost c = t.cost(NodeId{g}, NodeId{h});
      if (c != 1 && c != 2)
        throw PreconditionError("group arc " + node_str(g) + " -> " + node_str(h) + " has cost " +
                                std::to_string(c) + "; only 1 and 2 carry split weights");
      total += split_weight(c);
    }
    if (total != 1)
      throw PreconditionError("split weights out of group node " + node_str(g) + " sum to " + format_rational(total) +
                              ", need 1");
  }
}

ModelSpec certificate_model(const TspInstance& t, const Rational& flow) {
  return ModelSpec::for_instance(t, flow, NodeId{t.size()});
}

SparseFlow generate_x_certificate(const TspInstance& t, const Rational& flow, StagePlan plan) {
  if (flow <= 0) throw PreconditionError("flow constant must be positive");
  check_certificate_structure(t);
  const int n = t.size();
  const int group = n - 3;
  const Rational share = flow / group;

  SparseFlow x(flow);
  x.set(StageArc{NodeId{1}, 1, NodeId{kSourceNode}}, flow);
  for (int g = 3; g < n; ++g) x.set(StageArc{NodeId{kSourceNode}, 2, NodeId{g}}, share);
  for (int s = 3; s <= last_internal_stage(n, plan); ++s)
    for (int g = 3; g < n; ++g)
      for (int h = 3; h < n; ++h) {
        if (g == h || t.is_large(NodeId{g}, NodeId{h})) continue;
        x.set(StageArc{NodeId{g}, s, NodeId{h}}, share * split_weight(t.cost(NodeId{g}, NodeId{h})));
      }
  for (int g = 3; g < n; ++g) x.set(StageArc{NodeId{g}, n - 1, NodeId{n}}, share);
  x.set(StageArc{NodeId{n}, n, NodeId{1}}, flow);
  return x;
}

ObjectiveSummary certificate_objective(const SparseFlow& x, const TspInstance& t) {
  ObjectiveSummary out;
  for (const auto& [a, v] : x.entries()) {
    if (!t.contains(a.i) || !t.contains(a.j)) throw PreconditionError("flow arc outside instance: " + to_string(a));
    const Cost c = a.i == a.j ? 0 : t.cost(a.i, a.j);
    out.total += v * c;
    out.max_support_cost = std::max(out.max_support_cost, c);
    if (a.i != a.j && t.is_large(a.i, a.j)) out.large_support.push_back(a);
  }
  out.per_unit = out.total / x.flow_constant();
  return out;
}

SparseFlow tour_flow(const std::vector<NodeId>& tour, const Rational& flow) {
  SparseFlow x(flow);
  const int n = static_cast<int>(tour.size());
  for (int k = 0; k < n; ++k) x.set(StageArc{tour[k], k + 1, tour[(k + 1) % n]}, flow);
  return x;
}

ConditionalFlowSet lift_integral_tour(const std::vector<NodeId>& tour, const Rational& flow) {
  ConditionalFlowSet y("product");
  SparseFlow x = tour_flow(tour, flow);
  for (const auto& [a, va] : x.entries())
    for (const auto& [b, vb] : x.entries())
      if (a.s != b.s) y.set(a, b, va * vb / flow);
  return y;
}

ProportionalLift::ProportionalLift(const SparseFlow& x) : x_(x) {
  for (const auto& [a, v] : x.entries()) support_.push_back(a);
}

std::vector<StageArc> ProportionalLift::anchors() const { return support_; }

void ProportionalLift::visit(const StageArc& anchor, const Visitor& fn) const {
  std::vector<FlowEntry> entries;
  const Rational xa = x_.get(anchor);
  if (xa != 0) {
    const Rational scale = xa / x_.flow_constant();
    for (const auto& [b, vb] : x_.entries())
      if (b.s != anchor.s) entries.push_back(FlowEntry{b, scale * vb});
  }
  fn(entries);
}

struct TransitionLift::Impl {
  int n = 0;
  std::vector<StageArc> support;
  std::vector<Rational> value;
  std::vector<std::vector<std::size_t>> by_stage;
  std::vector<Rational> forward;   // x(c) / outflow of c's tail at c's stage
  std::vector<Rational> backward;  // x(c) / inflow of c's head at c's stage

  // Scratch reused across visits.
  mutable std::vector<Rational> buffer;
  mutable std::vector<char> touched;
  mutable std::vector<std::size_t> touched_list;
  mutable std::vector<Rational> mass, next_mass;

  void propagate(std::size_t anchor, bool ahead) const {
    const StageArc& a = support[anchor];
    for (auto& m : mass) m = 0;
    mass[(ahead ? a.j : a.i).value] = value[anchor];
    const int first = ahead ? a.s + 1 : a.s - 1;
    const int step = ahead ? 1 : -1;
    for (int r = first; r >= 1 && r <= n; r += step) {
      for (auto& m : next_mass) m = 0;
      bool any = false;
      for (std::size_t c : by_stage[r]) {
        const StageArc& arc = support[c];
        const Rational& m = mass[(ahead ? arc.i : arc.j).value];
        if (m == 0) continue;
        Rational v = m * (ahead ? forward[c] : backward[c]);
        next_mass[(ahead ? arc.j : arc.i).value] += v;
        buffer[c] = std::move(v);
        if (!touched[c]) {
          touched[c] = 1;
          touched_list.push_back(c);
        }
        any = true;
      }
      if (!any) break;
      std::swap(mass, next_mass);
    }
  }
};

TransitionLift::TransitionLift(const SparseFlow& x, const ModelSpec& m) : impl_(std::make_unique<Impl>()) {
  Impl& d = *impl_;
  d.n = m.n;
  d.by_stage.resize(static_cast<std::size_t>(m.n) + 2);
  std::vector<std::vector<Rational>> out(static_cast<std::size_t>(m.n) + 2,
                                         std::vector<Rational>(static_cast<std::size_t>(m.n) + 1));
  auto in = out;
  for (const auto& [a, v] : x.entries()) {
    if (!is_valid_x(m, a)) throw PreconditionError("lift needs a valid support; got invalid arc " + to_string(a));
    if (v < 0) throw PreconditionError("lift needs non-negative flow; x" + to_string(a) + " < 0");
    d.by_stage[a.s].push_back(d.support.size());
    d.support.push_back(a);
    d.value.push_back(v);
    out[a.s][a.i.value] += v;
    in[a.s][a.j.value] += v;
  }
  // BASE conservation is what makes forward and backward kernels agree.
  for (int s = 1; s < m.n; ++s)
    for (int k = 1; k <= m.n; ++k)
      if (in[s][k] != out[s + 1][k])
        throw PreconditionError("lift needs a BASE-feasible x; node " + std::to_string(k) + " stage " +
                                std::to_string(s) + " has inflow " + format_rational(in[s][k]) + " and next outflow " +
                                format_rational(out[s + 1][k]));
  for (std::size_t c = 0; c < d.support.size(); ++c) {
    const StageArc& a = d.support[c];
    d.forward.push_back(d.value[c] / out[a.s][a.i.value]);
    d.backward.push_back(d.value[c] / in[a.s][a.j.value]);
  }
  d.buffer.resize(d.support.size());
  d.touched.assign(d.support.size(), 0);
  d.mass.resize(static_cast<std::size_t>(m.n) + 1);
  d.next_mass.resize(static_cast<std::size_t>(m.n) + 1);
}

TransitionLift::~TransitionLift() = default;

std::vector<StageArc> TransitionLift::anchors() const { return impl_->support; }

void TransitionLift::visit(const StageArc& anchor, const Visitor& fn) const {
  const Impl& d = *impl_;
  auto it = std::lower_bound(d.support.begin(), d.support.end(), anchor);
  if (it == d.support.end() || *it != anchor) {
    fn({});
    return;
  }
  const auto index = static_cast<std::size_t>(it - d.support.begin());
  d.propagate(index, true);
  d.propagate(index, false);
  std::sort(d.touched_list.begin(), d.touched_list.end());
  std::vector<FlowEntry> entries;
  entries.reserve(d.touched_list.size());
  for (std::size_t c : d.touched_list) {
    if (d.buffer[c] != 0) entries.push_back(FlowEntry{d.support[c], d.buffer[c]});
    d.buffer[c] = 0;
    d.touched[c] = 0;
  }
  d.touched_list.clear();
  fn(entries);
}

void write_certificate(std::ostream& out, const SparseFlow& x) {
  out << "F=" << format_rational(x.flow_constant()) << "\n";
  for (const auto& [a, v] : x.entries())
    out << "x " << a.i.value << ' ' << a.s << ' ' << a.j.value << ' ' << format_rational(v) << "\n";
}

void write_certificate(std::ostream& out, const SparseFlow& x, const ConditionalFlowSource& y,
                       std::optional<std::size_t> max_anchors) {
  write_certificate(out, x);
  std::size_t written = 0;
  for (const auto& a : y.anchors()) {
    if (max_anchors && written == *max_anchors) break;
    ++written;
    y.visit(a, [&](std::span<const FlowEntry> entries) {
      for (const auto& e : entries)
        out << "y " << a.i.value << ' ' << a.s << ' ' << a.j.value << ' ' << e.probe.i.value << ' ' << e.probe.s
            << ' ' << e.probe.j.value << ' ' << format_rational(e.value) << "\n";
    });
  }
}

CertificateFile parse_certificate(std::istream& in, const std::string& source_name, int n_limit) {
  CertificateFile cert;
  bool have_flow = false;
  std::set<std::pair<StageArc, StageArc>> seen_y;
  std::string raw;
  int line_no = 0;
  auto index = [&](std::string_view text, const char* what) {
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(std::string(text), &used);
      if (used != text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(source_name, line_no, std::string("expected integer ") + what + ", got '" + std::string(text) + "'");
    }
    if (v < 1 || (n_limit > 0 && v > n_limit))
      throw ParseError(source_name, line_no, std::string(what) + " " + std::to_string(v) + " out of range");
    return v;
  };
  auto value = [&](std::string_view text) {
    try {
      return parse_rational(text);
    } catch (const std::exception&) {
      throw ParseError(source_name, line_no, "bad rational '" + std::string(text) + "'");
    }
  };
  auto arc = [&](const std::vector<std::string_view>& f, std::size_t at) {
    return StageArc{NodeId{index(f[at], "node")}, index(f[at + 1], "stage"), NodeId{index(f[at + 2], "node")}};
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_comment(raw);
    if (line.empty()) continue;
    if (line.substr(0, 2) == "F=") {
      if (have_flow) throw ParseError(source_name, line_no, "duplicate F= header");
      Rational f = value(trim(line.substr(2)));
      if (f <= 0) throw ParseError(source_name, line_no, "flow constant must be positive");
      cert.x.set_flow_constant(f);
      have_flow = true;
      continue;
    }
    if (!have_flow) throw ParseError(source_name, line_no, "missing F= header before entries");
    auto fields = split_ws(line);
    if (fields[0] == "x") {
      if (fields.size() != 5) throw ParseError(source_name, line_no, "x line needs 'x i s j value'");
      StageArc a = arc(fields, 1);
      if (cert.x.contains(a)) throw ParseError(source_name, line_no, "duplicate x entry " + to_string(a));
      Rational v = value(fields[4]);
      if (v == 0) continue;
      cert.x.set(a, v);
    } else if (fields[0] == "y") {
      if (fields.size() != 8) throw ParseError(source_name, line_no, "y line needs 'y i s j k r t value'");
      StageArc a = arc(fields, 1), b = arc(fields, 4);
      if (!seen_y.emplace(a, b).second)
        throw ParseError(source_name, line_no, "duplicate y entry " + to_string(a) + " " + to_string(b));
      cert.y.set(a, b, value(fields[7]));
    } else {
      throw ParseError(source_name, line_no, "unknown record '" + std::string(fields[0]) + "'");
    }
  }
  if (!have_flow) throw ParseError(source_name, line_no, "missing F= header");
  return cert;
}

CertificateFile load_certificate(const std::filesystem::path& path, int n_limit) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open certificate file " + path.string());
  return parse_certificate(in, path.string(), n_limit);
}

EmissionCheck check_group_emission(const SparseFlow& x, const TspInstance& t, StagePlan plan) {
  const int n = t.size();
  const Rational share = x.flow_constant() / (n - 3);
  EmissionCheck out;
  for (int s = 3; s <= last_internal_stage(n, plan) && out.uniform; ++s)
    for (int g = 3; g < n; ++g) {
      Rational total = 0;
      for (int h = 3; h < n; ++h) total += x.get(StageArc{NodeId{g}, s, NodeId{h}});
      if (total != share) {
        out.uniform = false;
        out.witness = std::make_pair(NodeId{g}, s);
        break;
      }
    }
  return out;
}

std::vector<Rational> group_visit_mass(const SparseFlow& x, const TspInstance& t, bool with_source) {
  const int n = t.size();
  std::vector<Rational> mass(static_cast<std::size_t>(n - 3));
  for (const auto& [a, v] : x.entries()) {
    if (a.j.value < 3 || a.j.value >= n) continue;
    if (a.i.value == kSourceNode && !with_source) continue;
    mass[a.j.value - 3] += v;
  }
  return mass;
}

EscapeCheck check_escape_bound(const SparseFlow& x, const TspInstance& t, int stage, int max_size, int samples,
                               std::uint64_t seed) {
  const int n = t.size();
  const int group = n - 3;
  EscapeCheck out;
  out.required = x.flow_constant() / group;

  // Work in integer multiples of the common denominator.
  mpz_class scale = out.required.get_den();
  std::vector<std::vector<Rational>> w(group, std::vector<Rational>(group));
  std::vector<Rational> emit(group);
  for (int g = 0; g < group; ++g) {
    for (int h = 0; h < group; ++h) {
      if (g == h) continue;
      w[g][h] = x.get(StageArc{NodeId{g + 3}, stage, NodeId{h + 3}});
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), w[g][h].get_den_mpz_t());
    }
    for (int v = 1; v <= n; ++v) emit[g] += x.get(StageArc{NodeId{g + 3}, stage, NodeId{v}});
  }
  auto to_int = [&](const Rational& r) {
    Rational scaled = r * scale;
    if (scaled.get_den() != 1 || !scaled.get_num().fits_slong_p())
      throw PreconditionError("escape check needs values that fit machine integers");
    return static_cast<std::int64_t>(scaled.get_num().get_si());
  };
  std::vector<std::vector<std::int64_t>> link(group, std::vector<std::int64_t>(group));
  std::vector<std::int64_t> out_of(group);
  for (int g = 0; g < group; ++g) {
    out_of[g] = to_int(emit[g]);
    for (int h = 0; h < group; ++h) link[g][h] = to_int(w[g][h]) + to_int(w[h][g]);
  }
  const std::int64_t required = to_int(out.required);
  std::int64_t best = INT64_MAX;
  std::vector<int> best_set, chosen;

  auto consider = [&](std::int64_t escape) {
    ++out.subsets_checked;
    if (escape < best) {
      best = escape;
      best_set = chosen;
    }
  };
  // Leaving flow of S = sum of emissions minus flow on arcs inside S.
  auto extend = [&](auto&& self, int start, std::int64_t escape) -> void {
    for (int v = start; v < group; ++v) {
      std::int64_t inside = 0;
      for (int u : chosen) inside += link[u][v];
      std::int64_t next = escape + out_of[v] - inside;
      chosen.push_back(v);
      consider(next);
      if (static_cast<int>(chosen.size()) < max_size && static_cast<int>(chosen.size()) < group - 1)
        self(self, v + 1, next);
      chosen.pop_back();
    }
  };
  extend(extend, 0, 0);

  std::mt19937_64 rng(seed);
  for (int k = 0; k < samples && group > max_size + 1; ++k) {
    std::uniform_int_distribution<int> size_dist(max_size + 1, group - 1);
    std::vector<int> all(group);
    for (int g = 0; g < group; ++g) all[g] = g;
    std::shuffle(all.begin(), all.end(), rng);
    chosen.assign(all.begin(), all.begin() + size_dist(rng));
    std::sort(chosen.begin(), chosen.end());
    std::int64_t escape = 0;
    for (std::size_t a = 0; a < chosen.size(); ++a) {
      escape += out_of[chosen[a]];
      for (std::size_t b = 0; b < a; ++b) escape -= link[chosen[a]][chosen[b]];
    }
    consider(escape);
  }
  chosen.clear();

  out.min_escape = Rational(mpz_class(best)) / scale;
  for (int g : best_set) out.witness.push_back(NodeId{g + 3});
  out.holds = best >= required;
  return out;
}

}  // namespace stageflow
