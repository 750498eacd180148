#include "stageflow/lp_model.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "stageflow/error.hpp"

namespace stageflow {

std::ostream& operator<<(std::ostream& os, const StageArc& a) {
  return os << '(' << a.i.value << ',' << a.s << ',' << a.j.value << ')';
}

std::string to_string(const StageArc& a) {
  std::ostringstream os;
  os << a;
  return os.str();
}

const char* to_string(Family f) {
  switch (f) {
    case Family::BASE: return "BASE";
    case Family::C6: return "C6";
    case Family::C7: return "C7";
    case Family::C8: return "C8";
    case Family::C9: return "C9";
    case Family::C10: return "C10";
    case Family::C11: return "C11";
    case Family::C12: return "C12";
    case Family::C13: return "C13";
    case Family::C14: return "C14";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view text) {
  for (Family f : kAllFamilies)
    if (text == to_string(f)) return f;
  return std::nullopt;
}

const char* describe(Family f) {
  switch (f) {
    case Family::BASE: return "x conservation: F leaves the origin, stage-s inflow meets stage-(s+1) outflow, F returns";
    case Family::C6: return "stage 1/2 pair flow totals F; stage 2/3 pair flow is preserved";
    case Family::C7: return "conditional conservation at stages after the anchor";
    case Family::C8: return "conditional conservation at stages before the anchor";
    case Family::C9: return "conditional stage totals after the anchor equal x(anchor)";
    case Family::C10: return "conditional stage totals before the anchor equal x(anchor)";
    case Family::C11: return "conditional flow enters every node with total x(anchor)";
    case Family::C12: return "stage-1 anchored conditional flow equals x (z collapsed onto y)";
    case Family::C13: return "invalid x variables are zero, valid ones non-negative";
    case Family::C14: return "invalid y variables are zero, valid ones non-negative";
  }
  return "?";
}

bool is_x_level(Family f) { return f == Family::BASE || f == Family::C13; }

ModelSpec ModelSpec::for_instance(const TspInstance& t, Rational flow, std::optional<NodeId> sink) {
  ModelSpec m;
  m.n = t.size();
  m.origin = t.origin();
  m.sink = sink;
  m.flow = std::move(flow);
  return m;
}

bool is_valid_x(const ModelSpec& m, const StageArc& a) {
  const int n = m.n;
  if (a.i.value < 1 || a.i.value > n || a.j.value < 1 || a.j.value > n || a.s < 1 || a.s > n) return false;
  if (a.i == a.j) return false;
  const bool from_origin = a.i == m.origin;
  const bool to_origin = a.j == m.origin;
  // Stage 1 leaves the origin and stage n returns to it, nothing else does.
  if (from_origin != (a.s == 1)) return false;
  if (to_origin != (a.s == n)) return false;
  if (m.sink && a.i == *m.sink && !(a.s == n && to_origin)) return false;
  return true;
}

bool is_valid_y(const ModelSpec& m, const StageArc& anchor, const StageArc& probe) {
  return anchor.s != probe.s && is_valid_x(m, anchor) && is_valid_x(m, probe);
}

std::vector<StageArc> enumerate_x_variables(const TspInstance& t, const ModelSpec& m,
                                            const EnumerateOptions& options) {
  std::vector<StageArc> out;
  for (int i = 1; i <= m.n; ++i)
    for (int s = 1; s <= m.n; ++s)
      for (int j = 1; j <= m.n; ++j) {
        StageArc a{NodeId{i}, s, NodeId{j}};
        if (!is_valid_x(m, a)) continue;
        if (options.exclude_large && t.is_large(a.i, a.j)) continue;
        out.push_back(a);
      }
  return out;
}

std::string Variable::name() const {
  std::ostringstream os;
  os << (b ? "y_" : "x_") << a.i.value << '_' << a.s << '_' << a.j.value;
  if (b) os << '_' << b->i.value << '_' << b->s << '_' << b->j.value;
  return os.str();
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::Eq: return "=";
    case Relation::Le: return "<=";
    case Relation::Ge: return ">=";
  }
  return "?";
}

std::string to_string(const RowKey& key) {
  std::ostringstream os;
  os << to_string(key.family) << '[';
  switch (key.family) {
    case Family::BASE:
      if (key.part == 0) os << "source";
      else if (key.part == 2) os << "return";
      else os << "s=" << key.stage << " k=" << key.node;
      break;
    case Family::C6:
      if (key.part == 0) os << "total";
      else os << "b=" << key.probe;
      break;
    case Family::C7:
    case Family::C8:
      os << "a=" << key.anchor << " r=" << key.stage << " k=" << key.node;
      break;
    case Family::C9:
    case Family::C10:
      os << "a=" << key.anchor << " r=" << key.stage;
      break;
    case Family::C11:
      os << "a=" << key.anchor << " k=" << key.node;
      break;
    case Family::C12:
      os << "b=" << key.probe;
      break;
    case Family::C13:
      os << "x=" << key.probe;
      break;
    case Family::C14:
      os << "a=" << key.anchor << " b=" << key.probe;
      break;
  }
  os << ']';
  return os.str();
}

namespace {

void check_spec(const ModelSpec& m) {
  if (m.n < 3) throw PreconditionError("staged model needs at least 3 nodes");
  if (m.origin.value < 1 || m.origin.value > m.n) throw PreconditionError("origin outside model");
  if (m.flow <= 0) throw PreconditionError("flow constant must be positive");
}

// Valid arcs grouped by stage, in ascending (i, j) order.
struct StageIndex {
  explicit StageIndex(const ModelSpec& m) : by_stage(static_cast<std::size_t>(m.n) + 1) {
    for (int i = 1; i <= m.n; ++i)
      for (int s = 1; s <= m.n; ++s)
        for (int j = 1; j <= m.n; ++j) {
          StageArc a{NodeId{i}, s, NodeId{j}};
          if (is_valid_x(m, a)) {
            by_stage[s].push_back(a);
            all.push_back(a);
          }
        }
  }
  std::vector<std::vector<StageArc>> by_stage;
  std::vector<StageArc> all;  // ascending (i, s, j)
};

Variable xv(const StageArc& a) { return Variable{a, std::nullopt}; }
Variable yv(const StageArc& a, const StageArc& b) { return Variable{a, b}; }

class RowBuilder {
 public:
  RowBuilder(Family f, const RowSink& sink) : sink_(sink) { row_.key.family = f; }

  RowKey& key() { return row_.key; }
  void term(const Variable& v, const Rational& c) { row_.terms.push_back(Term{v, c}); }
  void emit(Relation rel, const Rational& rhs) {
    std::sort(row_.terms.begin(), row_.terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    // Merge duplicates, drop zero coefficients.
    std::vector<Term> merged;
    for (auto& t : row_.terms) {
      if (!merged.empty() && merged.back().var == t.var) merged.back().coeff += t.coeff;
      else merged.push_back(std::move(t));
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Term& t) { return t.coeff == 0; }),
                 merged.end());
    row_.terms = std::move(merged);
    row_.relation = rel;
    row_.rhs = rhs;
    sink_(row_);
    Family f = row_.key.family;
    row_ = LinearRow{};
    row_.key.family = f;
  }

 private:
  const RowSink& sink_;
  LinearRow row_;
};

void base_rows(const ModelSpec& m, const StageIndex& idx, const RowSink& sink) {
  RowBuilder b(Family::BASE, sink);
  const int n = m.n;
  b.key().part = 0;
  for (const auto& a : idx.by_stage[1])
    if (a.i == m.origin) b.term(xv(a), 1);
  b.emit(Relation::Eq, m.flow);

  for (int s = 1; s < n; ++s)
    for (int k = 1; k <= n; ++k) {
      b.key().part = 1;
      b.key().stage = s;
      b.key().node = k;
      for (const auto& a : idx.by_stage[s])
        if (a.j.value == k) b.term(xv(a), 1);
      for (const auto& a : idx.by_stage[s + 1])
        if (a.i.value == k) b.term(xv(a), -1);
      b.emit(Relation::Eq, 0);
    }

  b.key().part = 2;
  for (const auto& a : idx.by_stage[n])
    if (a.j == m.origin) b.term(xv(a), 1);
  b.emit(Relation::Eq, m.flow);
}

void c6_rows(const ModelSpec& m, const StageIndex& idx, const RowSink& sink) {
  RowBuilder b(Family::C6, sink);
  b.key().part = 0;
  for (const auto& a : idx.by_stage[1])
    for (const auto& p : idx.by_stage[2]) b.term(yv(a, p), 1);
  b.emit(Relation::Eq, m.flow);

  for (const auto& p : idx.by_stage[2]) {
    b.key().part = 1;
    b.key().probe = p;
    for (const auto& a : idx.by_stage[1]) b.term(yv(a, p), 1);
    for (const auto& c : idx.by_stage[3])
      if (c.i == p.j) b.term(yv(p, c), -1);
    b.emit(Relation::Eq, 0);
  }
}

// C7 (after == true) and C8: conservation of the anchor's conditional flow.
void conservation_rows(const ModelSpec& m, const StageIndex& idx, bool after, const RowSink& sink) {
  RowBuilder b(after ? Family::C7 : Family::C8, sink);
  const int n = m.n;
  for (const auto& a : idx.all) {
    const int lo = after ? a.s : 1;
    const int hi = after ? n - 1 : a.s - 1;
    for (int r = lo; r <= hi; ++r)
      for (int k = 1; k <= n; ++k) {
        b.key().anchor = a;
        b.key().stage = r;
        b.key().node = k;
        if (r == a.s) {
          if (a.j.value == k) b.term(xv(a), 1);
        } else {
          for (const auto& h : idx.by_stage[r])
            if (h.j.value == k) b.term(yv(a, h), 1);
        }
        if (r + 1 == a.s) {
          if (a.i.value == k) b.term(xv(a), -1);
        } else {
          for (const auto& t : idx.by_stage[r + 1])
            if (t.i.value == k) b.term(yv(a, t), -1);
        }
        b.emit(Relation::Eq, 0);
      }
  }
}

void total_rows(const ModelSpec& m, const StageIndex& idx, bool after, const RowSink& sink) {
  RowBuilder b(after ? Family::C9 : Family::C10, sink);
  for (const auto& a : idx.all) {
    const int lo = after ? a.s + 1 : 1;
    const int hi = after ? m.n : a.s - 1;
    for (int r = lo; r <= hi; ++r) {
      b.key().anchor = a;
      b.key().stage = r;
      for (const auto& p : idx.by_stage[r]) b.term(yv(a, p), 1);
      b.term(xv(a), -1);
      b.emit(Relation::Eq, 0);
    }
  }
}

void visit_rows(const ModelSpec& m, const StageIndex& idx, const RowSink& sink) {
  RowBuilder b(Family::C11, sink);
  for (const auto& a : idx.all)
    for (int k = 1; k <= m.n; ++k) {
      b.key().anchor = a;
      b.key().node = k;
      for (int r = 1; r <= m.n; ++r) {
        if (r == a.s) continue;
        for (const auto& p : idx.by_stage[r])
          if (p.j.value == k) b.term(yv(a, p), 1);
      }
      if (a.j.value != k) b.term(xv(a), -1);
      b.emit(Relation::Eq, 0);
    }
}

void linkage_rows(const ModelSpec& m, const StageIndex& idx, const RowSink& sink) {
  RowBuilder b(Family::C12, sink);
  for (const auto& p : idx.all) {
    if (p.s < 2) continue;
    b.key().probe = p;
    for (const auto& a : idx.by_stage[1]) b.term(yv(a, p), 1);
    b.term(xv(p), -1);
    b.emit(Relation::Eq, 0);
  }
  (void)m;
}

template <typename Fn>
void for_each_cube(int n, Fn&& fn) {
  for (int i = 1; i <= n; ++i)
    for (int s = 1; s <= n; ++s)
      for (int j = 1; j <= n; ++j) fn(StageArc{NodeId{i}, s, NodeId{j}});
}

void x_domain_rows(const ModelSpec& m, const RowSink& sink) {
  RowBuilder b(Family::C13, sink);
  for_each_cube(m.n, [&](const StageArc& a) {
    b.key().probe = a;
    b.term(xv(a), 1);
    b.emit(is_valid_x(m, a) ? Relation::Ge : Relation::Eq, 0);
  });
}

void y_domain_rows(const ModelSpec& m, const RowSink& sink) {
  RowBuilder b(Family::C14, sink);
  for_each_cube(m.n, [&](const StageArc& a) {
    for_each_cube(m.n, [&](const StageArc& p) {
      b.key().anchor = a;
      b.key().probe = p;
      b.term(yv(a, p), 1);
      b.emit(is_valid_y(m, a, p) ? Relation::Ge : Relation::Eq, 0);
    });
  });
}

}  // namespace

void for_each_base_row(const ModelSpec& m, const RowSink& sink) {
  check_spec(m);
  base_rows(m, StageIndex(m), sink);
}

std::vector<LinearRow> build_base_rows(const ModelSpec& m) {
  std::vector<LinearRow> rows;
  for_each_base_row(m, [&](const LinearRow& r) { rows.push_back(r); });
  return rows;
}

void for_each_family_row(const ModelSpec& m, Family f, const RowSink& sink) {
  check_spec(m);
  if (f == Family::C13) return x_domain_rows(m, sink);
  if (f == Family::C14) return y_domain_rows(m, sink);
  StageIndex idx(m);
  switch (f) {
    case Family::BASE: return base_rows(m, idx, sink);
    case Family::C6: return c6_rows(m, idx, sink);
    case Family::C7: return conservation_rows(m, idx, true, sink);
    case Family::C8: return conservation_rows(m, idx, false, sink);
    case Family::C9: return total_rows(m, idx, true, sink);
    case Family::C10: return total_rows(m, idx, false, sink);
    case Family::C11: return visit_rows(m, idx, sink);
    case Family::C12: return linkage_rows(m, idx, sink);
    default: break;
  }
  throw PreconditionError("unknown constraint family");
}

std::uint64_t family_row_count(const ModelSpec& m, Family f) {
  check_spec(m);
  const auto n = static_cast<std::uint64_t>(m.n);
  const std::uint64_t cube = n * n * n;
  if (f == Family::BASE) return 2 + (n - 1) * n;
  if (f == Family::C13) return cube;
  if (f == Family::C14) return cube * cube;

  std::vector<std::uint64_t> per_stage(n + 1, 0);
  for_each_cube(m.n, [&](const StageArc& a) {
    if (is_valid_x(m, a)) ++per_stage[a.s];
  });
  std::uint64_t total = 0;
  for (std::uint64_t s = 1; s <= n; ++s) {
    const std::uint64_t v = per_stage[s];
    switch (f) {
      case Family::C7: total += v * (n - s) * n; break;
      case Family::C8: total += v * (s - 1) * n; break;
      case Family::C9: total += v * (n - s); break;
      case Family::C10: total += v * (s - 1); break;
      case Family::C11: total += v * n; break;
      case Family::C12: total += s >= 2 ? v : 0; break;
      default: break;
    }
  }
  if (f == Family::C6) return 1 + per_stage[2];
  return total;
}

std::string dump_row(const LinearRow& row) {
  std::ostringstream os;
  os << to_string(row.key) << '|';
  bool first = true;
  for (const auto& t : row.terms) {
    if (!first) os << ' ';
    first = false;
    os << (t.coeff >= 0 ? "+" : "") << format_rational(t.coeff) << '*' << t.var.name();
  }
  os << '|' << to_string(row.relation) << '|' << format_rational(row.rhs);
  return os.str();
}

}  // namespace stageflow
