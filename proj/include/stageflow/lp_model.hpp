#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stageflow/graph.hpp"
#include "stageflow/rational.hpp"

namespace stageflow {

// Arc i -> j traversed at stage s. Ordered lexicographically on (i, s, j).
struct StageArc {
  NodeId i;
  int s = 0;
  NodeId j;

  constexpr auto operator<=>(const StageArc&) const = default;
};

std::ostream& operator<<(std::ostream& os, const StageArc& a);
std::string to_string(const StageArc& a);

enum class Family { BASE, C6, C7, C8, C9, C10, C11, C12, C13, C14 };

inline constexpr Family kAllFamilies[] = {Family::BASE, Family::C6,  Family::C7,  Family::C8,  Family::C9,
                                          Family::C10,  Family::C11, Family::C12, Family::C13, Family::C14};

const char* to_string(Family f);
std::optional<Family> parse_family(std::string_view text);
const char* describe(Family f);
// Families whose rows only mention x variables.
bool is_x_level(Family f);

// Shape of the staged model: n stages over n nodes, flow constant F injected
// at the origin. The sink, when set, may only be left towards the origin at
// the last stage.
struct ModelSpec {
  int n = 0;
  NodeId origin{1};
  std::optional<NodeId> sink;
  Rational flow = 1;

  static ModelSpec for_instance(const TspInstance& t, Rational flow = 1, std::optional<NodeId> sink = std::nullopt);
};

// The validity filter. Arcs failing it are the model's invalid variables and
// must carry zero flow.
bool is_valid_x(const ModelSpec& m, const StageArc& a);
bool is_valid_y(const ModelSpec& m, const StageArc& anchor, const StageArc& probe);

struct EnumerateOptions {
  bool exclude_large = false;  // drop arcs whose cost is LARGE
};

std::vector<StageArc> enumerate_x_variables(const TspInstance& t, const ModelSpec& m,
                                            const EnumerateOptions& options = {});

// A model variable: x(a) or y(a, b).
struct Variable {
  StageArc a;
  std::optional<StageArc> b;

  auto operator<=>(const Variable&) const = default;
  bool is_y() const { return b.has_value(); }
  std::string name() const;  // x_i_s_j or y_i_s_j_k_r_t
};

enum class Relation { Eq, Le, Ge };
const char* to_string(Relation r);

// Identifies a row inside its family. Unused fields stay zero; rows of a
// family are produced in ascending key order.
struct RowKey {
  Family family = Family::BASE;
  StageArc anchor;
  int part = 0;
  int stage = 0;
  int node = 0;
  StageArc probe;

  auto operator<=>(const RowKey&) const = default;
};

std::string to_string(const RowKey& key);

struct Term {
  Variable var;
  Rational coeff;
};

struct LinearRow {
  RowKey key;
  std::vector<Term> terms;  // sorted by variable, no duplicates
  Relation relation = Relation::Eq;
  Rational rhs;
};

using RowSink = std::function<void(const LinearRow&)>;

void for_each_base_row(const ModelSpec& m, const RowSink& sink);
std::vector<LinearRow> build_base_rows(const ModelSpec& m);

// Streams the rows of one family in key order. C13 and C14 range over the
// whole index cube so that invalid variables get their zero rows.
void for_each_family_row(const ModelSpec& m, Family f, const RowSink& sink);

// Number of rows for_each_family_row would produce, without producing them.
std::uint64_t family_row_count(const ModelSpec& m, Family f);

// Row text for audits: family|lhs-terms|relation|rhs
std::string dump_row(const LinearRow& row);

enum class ExportMode { XOnly, Full };

struct ExportOptions {
  ExportMode mode = ExportMode::XOnly;
  int full_cap = 12;  // largest n allowed in Full mode
};

// CPLEX LP text. Invalid variables are never emitted: they are fixed at zero by
// absence, and the C13/C14 non-negativity rows become the default bounds.
void export_lp(std::ostream& out, const TspInstance& t, const ModelSpec& m, const std::vector<Family>& families,
               const ExportOptions& options = {});
void export_lp_file(const std::filesystem::path& path, const TspInstance& t, const ModelSpec& m,
                    const std::vector<Family>& families, const ExportOptions& options = {});

}  // namespace stageflow
