#include <ostream>
#include <set>
#include <sstream>

#include "stageflow/error.hpp"
#include "stageflow/io_util.hpp"
#include "stageflow/lp_model.hpp"

namespace stageflow {

namespace {

constexpr int kTermsPerLine = 8;

void write_terms(std::ostream& out, const std::vector<Term>& terms) {
  int on_line = 0;
  bool first = true;
  for (const auto& t : terms) {
    if (on_line == kTermsPerLine) {
      out << "\n   ";
      on_line = 0;
    }
    const bool negative = t.coeff < 0;
    if (!first || negative) out << (negative ? " - " : " + ");
    else out << ' ';
    out << format_decimal(abs_value(t.coeff)) << ' ' << t.var.name();
    first = false;
    ++on_line;
  }
}

}  // namespace

void export_lp(std::ostream& out, const TspInstance& t, const ModelSpec& m, const std::vector<Family>& families,
               const ExportOptions& options) {
  if (m.n != t.size()) throw PreconditionError("model size does not match the instance");
  if (options.mode == ExportMode::Full && m.n > options.full_cap)
    throw PreconditionError("full export is capped at n <= " + std::to_string(options.full_cap) + ", instance has n = " +
                            std::to_string(m.n));
  for (Family f : families)
    if (options.mode == ExportMode::XOnly && !is_x_level(f))
      throw PreconditionError(std::string("family ") + to_string(f) + " needs y variables; use full mode");

  const auto xs = enumerate_x_variables(t, m);
  out << "\\ staged-flow model n=" << m.n << " F=" << format_decimal(m.flow) << " mode="
      << (options.mode == ExportMode::Full ? "full" : "x-only") << "\n";
  out << "Minimize\n obj:";
  std::vector<Term> objective;
  for (const auto& a : xs) objective.push_back(Term{Variable{a, std::nullopt}, Rational(t.cost(a.i, a.j))});
  write_terms(out, objective);
  out << "\nSubject To\n";

  std::set<Variable> y_vars;
  for (Family f : families) {
    if (f == Family::C13 || f == Family::C14) continue;  // expressed through bounds
    std::uint64_t counter = 0;
    for_each_family_row(m, f, [&](const LinearRow& row) {
      ++counter;
      if (row.terms.empty()) return;
      out << ' ' << to_string(f) << '_' << counter << ':';
      write_terms(out, row.terms);
      out << ' ' << to_string(row.relation) << ' ' << format_decimal(row.rhs) << "\n";
      if (options.mode == ExportMode::Full)
        for (const auto& term : row.terms)
          if (term.var.is_y()) y_vars.insert(term.var);
    });
  }

  out << "Bounds\n";
  for (const auto& a : xs) out << ' ' << Variable{a, std::nullopt}.name() << " >= 0\n";
  for (const auto& v : y_vars) out << ' ' << v.name() << " >= 0\n";
  out << "End\n";
}

void export_lp_file(const std::filesystem::path& path, const TspInstance& t, const ModelSpec& m,
                    const std::vector<Family>& families, const ExportOptions& options) {
  std::ostringstream buffer;
  export_lp(buffer, t, m, families, options);
  write_file_atomically(path, buffer.str());
}

}  // namespace stageflow
