#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace recon::sat {

/// CNF with 1..3 literals per clause. Literals are DIMACS-style nonzero
/// integers: +v / -v with 1-based variable v.
struct CnfFormula {
  int variable_count = 0;
  std::vector<std::vector<int>> clauses;
};

using Assignment = std::vector<bool>;

void validate_formula(const CnfFormula& f);

bool satisfies(const CnfFormula& f, const Assignment& a);

bool check_monotone(const CnfFormula& f);

/// True iff the clause is all-positive (throws on mixed-sign clauses).
bool clause_positive(const std::vector<int>& clause);

/// BFS over satisfying assignments differing in one variable.
bool reconfig_reachable(const CnfFormula& f, const Assignment& a0, const Assignment& a1,
                        int var_cap = 24);

/// Independent oracle: union-find over the full satisfying set.
bool reconfig_reachable_unionfind(const CnfFormula& f, const Assignment& a0,
                                  const Assignment& a1, int var_cap = 24);

std::vector<Assignment> enumerate_satisfying(const CnfFormula& f, int var_cap = 24);

std::uint32_t assignment_mask(const Assignment& a);
Assignment assignment_from_mask(std::uint32_t m, int n);

std::string to_dimacs(const CnfFormula& f);
CnfFormula from_dimacs(const std::string& text);

}  // namespace recon::sat
