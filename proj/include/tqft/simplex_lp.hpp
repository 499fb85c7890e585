#pragma once

#include <vector>

#include "tqft/rational.hpp"

namespace tqft {

// Exact rational simplex for  max c.x  s.t.  A x = b, x >= 0.
// Two-phase with Bland's rule.  On infeasibility, `farkas` holds a vector y
// with y.A <= 0 componentwise and y.b > 0.
struct LPResult {
    bool feasible = false;
    bool bounded = true;
    Rat objective = 0;
    std::vector<Rat> x;
    std::vector<Rat> farkas;
};

LPResult solve_lp_max(const std::vector<Rat>& c,
                      const std::vector<std::vector<Rat>>& A,
                      const std::vector<Rat>& b);

// Exact row reduction utilities.
// Returns rank; if `nullspace` is non-null, fills a basis of ker(A).
int rational_rank(std::vector<std::vector<Rat>> A,
                  std::vector<std::vector<Rat>>* nullspace = nullptr);

// Solve A x = b exactly; returns false if inconsistent.  On success x is one
// solution (free variables set to 0).
bool rational_solve(std::vector<std::vector<Rat>> A, std::vector<Rat> b, std::vector<Rat>* x);

}  // namespace tqft
