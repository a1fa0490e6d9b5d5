#pragma once

#include <string>
#include <vector>

#include "recon/embed.hpp"
#include "recon/sat.hpp"

namespace recon::layout {

struct AuxVar {
  int clause = 0;    // base clause index
  int member = 0;    // position within the clause
  int base_var = 0;  // 0-based base variable it guards
};

/// Base formula rewritten with one auxiliary variable per (clause, member):
/// per positive clause, implications (y => x) plus an all-positive OR clause
/// over the y's; negative clauses mirrored.
struct ExpandedFormula {
  sat::CnfFormula base;
  sat::CnfFormula full;  // variables: base vars then aux vars
  std::vector<AuxVar> aux;
  std::vector<std::vector<int>> clause_aux;      // base clause -> aux var ids (0-based)
  std::vector<std::vector<int>> implication_of;  // base clause -> clause ids in `full`
  std::vector<int> or_clause_of;                 // base clause -> or-clause id in `full`

  int aux_index(int clause, int member) const;
};

ExpandedFormula expand_aux_variables(const sat::CnfFormula& base);

/// Canonical lift: each auxiliary copies its base variable.
sat::Assignment lift_assignment(const ExpandedFormula& ef, const sat::Assignment& base);

enum class RowKind { Primary, Aux, OrSegment };
enum class ColumnKind { Implication, OrLink };

struct Row {
  RowKind kind = RowKind::Primary;
  int y = 0;
  int x1 = 0, x2 = 0;
  bool positive = true;  // clause sign (aux / or rows)
  int var = -1;          // primary: base var; aux: aux var id
  int clause = -1;
  int member = -1;
};

struct Column {
  ColumnKind kind = ColumnKind::Implication;
  int x = 0;
  int y1 = 0, y2 = 0;  // y1 < y2
  int clause = -1, member = -1;
  bool positive = true;
  int base_var = -1;  // implication columns only
};

struct Crossing {
  int column = 0;
  int row = 0;
  bool attach = false;  // endpoint incidence rather than a proper crossing
};

/// Geometric intermediate representation: abstract integer rows/columns.
struct SegmentRepresentation {
  std::vector<Row> rows;
  std::vector<Column> columns;
  std::vector<Crossing> crossings;
  std::vector<int> var_order;  // base variable per stack position (bottom-up)
  int primary_row(int position) const;  // row index of primary at stack position
  int row_at(RowKind kind, int clause, int member) const;
};

struct LayoutInputs {
  embed::EmbeddedFormula embedded;  // monotone formula + curve
  ExpandedFormula expanded;
};

SegmentRepresentation build_segment_representation(const embed::EmbeddedFormula& ef,
                                                   const ExpandedFormula& xf);

/// Same construction with the variable stacking order supplied directly
/// (used for single-sign formulas that need no separating curve).
SegmentRepresentation build_segment_representation_with_order(
    const sat::CnfFormula& formula, const ExpandedFormula& xf,
    const std::vector<int>& var_order);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_representation(const SegmentRepresentation& sr);

std::string representation_to_json_text(const SegmentRepresentation& sr);
SegmentRepresentation representation_from_json_text(const std::string& text);

}  // namespace recon::layout
