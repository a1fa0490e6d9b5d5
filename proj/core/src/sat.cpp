#include "recon/sat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "recon/errors.hpp"

namespace recon::sat {

void validate_formula(const CnfFormula& f) {
  if (f.variable_count < 0) throw ContractError("negative variable count");
  for (const auto& c : f.clauses) {
    if (c.empty() || c.size() > 3) throw ContractError("clause width must be 1..3");
    std::set<int> vars;
    for (int lit : c) {
      if (lit == 0) throw ContractError("zero literal");
      int v = std::abs(lit);
      if (v > f.variable_count) throw ContractError("literal out of range");
      if (!vars.insert(v).second) throw ContractError("clause repeats a variable");
    }
  }
}

bool satisfies(const CnfFormula& f, const Assignment& a) {
  if (static_cast<int>(a.size()) != f.variable_count)
    throw ContractError("assignment length mismatch");
  for (const auto& c : f.clauses) {
    bool sat = false;
    for (int lit : c) {
      bool val = a[std::abs(lit) - 1];
      if ((lit > 0) == val) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

bool clause_positive(const std::vector<int>& clause) {
  bool pos = clause.front() > 0;
  for (int lit : clause)
    if ((lit > 0) != pos) throw ContractError("clause has mixed signs");
  return pos;
}

bool check_monotone(const CnfFormula& f) {
  for (const auto& c : f.clauses) {
    bool pos = c.front() > 0;
    for (int lit : c)
      if ((lit > 0) != pos) return false;
  }
  return true;
}

std::uint32_t assignment_mask(const Assignment& a) {
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i]) m |= (1u << i);
  return m;
}

Assignment assignment_from_mask(std::uint32_t m, int n) {
  Assignment a(n);
  for (int i = 0; i < n; ++i) a[i] = (m >> i) & 1;
  return a;
}

namespace {

struct MaskFormula {
  // Clause satisfied iff (pos & a) != 0 || (neg & ~a) != 0.
  std::vector<std::uint32_t> pos, neg;
};

MaskFormula compile(const CnfFormula& f) {
  MaskFormula m;
  for (const auto& c : f.clauses) {
    std::uint32_t p = 0, n = 0;
    for (int lit : c) {
      std::uint32_t bit = 1u << (std::abs(lit) - 1);
      (lit > 0 ? p : n) |= bit;
    }
    m.pos.push_back(p);
    m.neg.push_back(n);
  }
  return m;
}

bool sat_mask(const MaskFormula& mf, std::uint32_t a) {
  for (std::size_t i = 0; i < mf.pos.size(); ++i)
    if (!((mf.pos[i] & a) || (mf.neg[i] & ~a))) return false;
  return true;
}

void check_caps(const CnfFormula& f, int var_cap) {
  validate_formula(f);
  if (f.variable_count > var_cap)
    throw ResourceLimitError("variable count " + std::to_string(f.variable_count) +
                             " exceeds cap " + std::to_string(var_cap));
  if (f.variable_count > 31) throw ResourceLimitError("mask oracle limited to 31 variables");
}

}  // namespace

bool reconfig_reachable(const CnfFormula& f, const Assignment& a0, const Assignment& a1,
                        int var_cap) {
  check_caps(f, var_cap);
  if (!satisfies(f, a0) || !satisfies(f, a1))
    throw ContractError("endpoints must satisfy the formula");
  int n = f.variable_count;
  std::uint32_t s = assignment_mask(a0), t = assignment_mask(a1);
  if (s == t) return true;
  MaskFormula mf = compile(f);
  std::vector<bool> seen(1ull << n, false);
  std::queue<std::uint32_t> q;
  seen[s] = true;
  q.push(s);
  while (!q.empty()) {
    std::uint32_t cur = q.front();
    q.pop();
    for (int i = 0; i < n; ++i) {
      std::uint32_t nxt = cur ^ (1u << i);
      if (seen[nxt] || !sat_mask(mf, nxt)) continue;
      if (nxt == t) return true;
      seen[nxt] = true;
      q.push(nxt);
    }
  }
  return false;
}

bool reconfig_reachable_unionfind(const CnfFormula& f, const Assignment& a0,
                                  const Assignment& a1, int var_cap) {
  check_caps(f, var_cap);
  if (!satisfies(f, a0) || !satisfies(f, a1))
    throw ContractError("endpoints must satisfy the formula");
  int n = f.variable_count;
  MaskFormula mf = compile(f);
  std::uint64_t total = 1ull << n;
  std::vector<std::int32_t> parent(total, -1);  // -1: unsatisfying / unseen
  std::vector<std::uint32_t> sats;
  for (std::uint64_t a = 0; a < total; ++a)
    if (sat_mask(mf, static_cast<std::uint32_t>(a))) {
      parent[a] = static_cast<std::int32_t>(a);
      sats.push_back(static_cast<std::uint32_t>(a));
    }
  std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
    while (parent[x] != static_cast<std::int32_t>(x)) {
      parent[x] = parent[parent[x]];
      x = static_cast<std::uint32_t>(parent[x]);
    }
    return x;
  };
  for (std::uint32_t a : sats)
    for (int i = 0; i < n; ++i) {
      std::uint32_t b = a ^ (1u << i);
      if (b < a || parent[b] < 0) continue;
      std::uint32_t ra = find(a), rb = find(b);
      if (ra != rb) parent[ra] = static_cast<std::int32_t>(rb);
    }
  return find(assignment_mask(a0)) == find(assignment_mask(a1));
}

std::vector<Assignment> enumerate_satisfying(const CnfFormula& f, int var_cap) {
  check_caps(f, var_cap);
  MaskFormula mf = compile(f);
  std::vector<Assignment> out;
  std::uint64_t total = 1ull << f.variable_count;
  for (std::uint64_t a = 0; a < total; ++a)
    if (sat_mask(mf, static_cast<std::uint32_t>(a)))
      out.push_back(assignment_from_mask(static_cast<std::uint32_t>(a), f.variable_count));
  return out;
}

std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream os;
  os << "p cnf " << f.variable_count << " " << f.clauses.size() << "\n";
  for (const auto& c : f.clauses) {
    for (int lit : c) os << lit << " ";
    os << "0\n";
  }
  return os.str();
}

CnfFormula from_dimacs(const std::string& text) {
  CnfFormula f;
  std::istringstream is(text);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, cnf;
      int nc;
      ls >> p >> cnf >> f.variable_count >> nc;
      header = true;
      continue;
    }
    std::vector<int> clause;
    int lit;
    while (ls >> lit) {
      if (lit == 0) break;
      clause.push_back(lit);
    }
    if (!clause.empty()) f.clauses.push_back(clause);
  }
  if (!header) throw ContractError("missing DIMACS header");
  validate_formula(f);
  return f;
}

}  // namespace recon::sat
