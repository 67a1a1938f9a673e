#include "chainfix/lp.hpp"

#include <algorithm>

namespace chainfix {

void LinearProgram::leq(std::vector<Rat> row, Rat rhs) {
  CFX_INPUT(static_cast<int>(row.size()) == n, "constraint arity mismatch");
  A.push_back(std::move(row));
  b.push_back(std::move(rhs));
}

void LinearProgram::eq(std::vector<Rat> row, Rat rhs) {
  CFX_INPUT(static_cast<int>(row.size()) == n, "constraint arity mismatch");
  E.push_back(std::move(row));
  f.push_back(std::move(rhs));
}

namespace {

// Dense tableau simplex on the standard form min c.z, M z = h, z >= 0.
// Bland's rule throughout. Returns false from phase steps on unboundedness.
struct Tableau {
  int m = 0, n = 0;
  std::vector<std::vector<Rat>> T;  // m rows of n coefficients
  std::vector<Rat> rhs;             // m entries, kept >= 0
  std::vector<Rat> cost;            // reduced costs, n entries
  Rat neg_obj;                      // -(current objective)
  std::vector<int> basis;           // per row, basic column

  void price_out(int row) {
    int col = basis[row];
    if (cost[col] == 0) return;
    Rat factor = cost[col];
    for (int j = 0; j < n; ++j) {
      Rat t = cost[j] - factor * T[row][j];
      cost[j] = t;
    }
    Rat t = neg_obj - factor * rhs[row];
    neg_obj = t;
  }

  void pivot(int row, int col) {
    Rat p = T[row][col];
    for (int j = 0; j < n; ++j) {
      Rat t = T[row][j] / p;
      T[row][j] = t;
    }
    Rat t0 = rhs[row] / p;
    rhs[row] = t0;
    for (int i = 0; i < m; ++i) {
      if (i == row || T[i][col] == 0) continue;
      Rat factor = T[i][col];
      for (int j = 0; j < n; ++j) {
        Rat t = T[i][j] - factor * T[row][j];
        T[i][j] = t;
      }
      Rat t1 = rhs[i] - factor * rhs[row];
      rhs[i] = t1;
    }
    if (cost[col] != 0) {
      Rat factor = cost[col];
      for (int j = 0; j < n; ++j) {
        Rat t = cost[j] - factor * T[row][j];
        cost[j] = t;
      }
      Rat t2 = neg_obj - factor * rhs[row];
      neg_obj = t2;
    }
    basis[row] = col;
  }

  // true on optimality, false on unboundedness
  bool run(const std::vector<bool>* banned) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < n; ++j) {
        if (banned && (*banned)[j]) continue;
        if (cost[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Rat best;
      for (int i = 0; i < m; ++i) {
        if (T[i][enter] <= 0) continue;
        Rat ratio = rhs[i] / T[i][enter];
        if (leave < 0 || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LPResult lp_solve(const LinearProgram& lp) {
  int n = lp.n;
  int mA = static_cast<int>(lp.A.size());
  int mE = static_cast<int>(lp.E.size());
  int m = mA + mE;
  // columns: x+ (n), x- (n), slacks (mA), artificials (m)
  int cols = 2 * n + mA + m;
  Tableau tb;
  tb.m = m;
  tb.n = cols;
  tb.T.assign(m, std::vector<Rat>(cols, Rat(0)));
  tb.rhs.assign(m, Rat(0));
  tb.basis.assign(m, 0);
  for (int i = 0; i < m; ++i) {
    const std::vector<Rat>& row = (i < mA) ? lp.A[i] : lp.E[i - mA];
    Rat rhs = (i < mA) ? lp.b[i] : lp.f[i - mA];
    for (int j = 0; j < n; ++j) {
      tb.T[i][j] = row[j];
      tb.T[i][n + j] = -row[j];
    }
    if (i < mA) tb.T[i][2 * n + i] = 1;
    if (rhs < 0) {
      for (int j = 0; j < 2 * n + mA; ++j) {
        Rat t = -tb.T[i][j];
        tb.T[i][j] = t;
      }
      Rat t = -rhs;
      rhs = t;
    }
    tb.rhs[i] = rhs;
    tb.T[i][2 * n + mA + i] = 1;
    tb.basis[i] = 2 * n + mA + i;
  }

  // phase 1: minimize sum of artificials
  tb.cost.assign(cols, Rat(0));
  for (int i = 0; i < m; ++i) tb.cost[2 * n + mA + i] = 1;
  tb.neg_obj = 0;
  for (int i = 0; i < m; ++i) tb.price_out(i);
  bool ok = tb.run(nullptr);
  CFX_CHECK(ok, "phase-1 objective is bounded by construction");
  if (tb.neg_obj != 0) return {LPStatus::Infeasible, Rat(0), {}};

  // drive remaining artificials out of the basis or drop redundant rows
  std::vector<bool> banned(cols, false);
  for (int i = 0; i < m; ++i) banned[2 * n + mA + i] = true;
  for (int i = 0; i < m; ++i) {
    if (tb.basis[i] < 2 * n + mA) continue;
    int col = -1;
    for (int j = 0; j < 2 * n + mA; ++j)
      if (tb.T[i][j] != 0) {
        col = j;
        break;
      }
    if (col >= 0) tb.pivot(i, col);
    // otherwise the row is 0 = 0 and stays parked on its artificial
  }

  // phase 2
  tb.cost.assign(cols, Rat(0));
  for (int j = 0; j < n; ++j) {
    tb.cost[j] = lp.c[j];
    tb.cost[n + j] = -lp.c[j];
  }
  tb.neg_obj = 0;
  for (int i = 0; i < m; ++i) tb.price_out(i);
  if (!tb.run(&banned)) return {LPStatus::Unbounded, Rat(0), {}};

  LPResult res;
  res.status = LPStatus::Optimal;
  Rat v = -tb.neg_obj;
  res.value = v;
  res.x.assign(n, Rat(0));
  for (int i = 0; i < m; ++i) {
    int col = tb.basis[i];
    if (col < n) {
      Rat t = res.x[col] + tb.rhs[i];
      res.x[col] = t;
    } else if (col < 2 * n) {
      Rat t = res.x[col - n] - tb.rhs[i];
      res.x[col - n] = t;
    }
  }
  return res;
}

bool lp_feasible(const LinearProgram& lp) {
  LinearProgram probe = lp;
  probe.c.assign(probe.n, Rat(0));
  return lp_solve(probe).status == LPStatus::Optimal;
}

std::optional<std::vector<Rat>> lp_point(const LinearProgram& lp) {
  LinearProgram probe = lp;
  probe.c.assign(probe.n, Rat(0));
  LPResult r = lp_solve(probe);
  if (r.status != LPStatus::Optimal) return std::nullopt;
  return r.x;
}

}  // namespace chainfix
