#pragma once

#include <optional>
#include <vector>

#include "chainfix/rational.hpp"

namespace chainfix {

// Exact rational linear programs: minimize c.x subject to A x <= b and
// E x = f, variables free. Solved by two-phase simplex with Bland's rule,
// so termination is guaranteed and all results are exact.
struct LinearProgram {
  int n = 0;
  std::vector<std::vector<Rat>> A;
  std::vector<Rat> b;
  std::vector<std::vector<Rat>> E;
  std::vector<Rat> f;
  std::vector<Rat> c;

  explicit LinearProgram(int vars) : n(vars), c(vars, Rat(0)) {}
  void leq(std::vector<Rat> row, Rat rhs);
  void eq(std::vector<Rat> row, Rat rhs);
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  Rat value;
  std::vector<Rat> x;
};

LPResult lp_solve(const LinearProgram& lp);

bool lp_feasible(const LinearProgram& lp);
std::optional<std::vector<Rat>> lp_point(const LinearProgram& lp);

}  // namespace chainfix
