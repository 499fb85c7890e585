#include "tqft/simplex_lp.hpp"

#include <algorithm>
#include <cassert>

namespace tqft {

namespace {

// Tableau simplex, minimizing.  Columns 0..n-1 are structural, the objective
// lives in row m.  basis[i] is the column basic in row i.
struct Tableau {
    int m, n;
    std::vector<std::vector<Rat>> t;  // (m+1) x (n+1), last col = rhs
    std::vector<int> basis;

    void pivot(int pr, int pc) {
        Rat piv = t[pr][pc];
        for (auto& v : t[pr]) v /= piv;
        for (int i = 0; i <= m; ++i) {
            if (i == pr || t[i][pc] == 0) continue;
            Rat f = t[i][pc];
            for (int j = 0; j <= n; ++j) t[i][j] -= f * t[pr][j];
        }
        basis[pr] = pc;
    }

    // Bland's rule; returns false if unbounded.
    bool run(const std::vector<bool>& allowed) {
        for (;;) {
            int pc = -1;
            for (int j = 0; j < n; ++j)
                if (allowed[j] && t[m][j] < 0) {
                    pc = j;
                    break;
                }
            if (pc < 0) return true;
            int pr = -1;
            for (int i = 0; i < m; ++i) {
                if (t[i][pc] <= 0) continue;
                if (pr < 0 || t[i][n] / t[i][pc] < t[pr][n] / t[pr][pc] ||
                    (t[i][n] / t[i][pc] == t[pr][n] / t[pr][pc] && basis[i] < basis[pr]))
                    pr = i;
            }
            if (pr < 0) return false;
            pivot(pr, pc);
        }
    }
};

}  // namespace

LPResult solve_lp_max(const std::vector<Rat>& c,
                      const std::vector<std::vector<Rat>>& A,
                      const std::vector<Rat>& b) {
    const int m = static_cast<int>(A.size());
    const int nv = static_cast<int>(c.size());
    Tableau tb;
    tb.m = m;
    tb.n = nv + m;  // structural + artificial
    tb.t.assign(m + 1, std::vector<Rat>(tb.n + 1, 0));
    tb.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        Rat s = (b[i] < 0) ? -1 : 1;
        for (int j = 0; j < nv; ++j) tb.t[i][j] = s * A[i][j];
        tb.t[i][nv + i] = 1;
        tb.t[i][tb.n] = s * b[i];
        tb.basis[i] = nv + i;
    }
    // phase 1: minimize sum of artificials
    for (int j = 0; j <= tb.n; ++j) {
        Rat s = 0;
        for (int i = 0; i < m; ++i) s += tb.t[i][j];
        tb.t[m][j] = (j >= nv && j < tb.n) ? Rat(0) : -s;
    }
    std::vector<bool> allowed(tb.n, true);
    tb.run(allowed);  // phase 1 is always bounded

    LPResult res;
    if (tb.t[m][tb.n] != 0) {
        // infeasible: recover Farkas vector from the phase-1 cost row under
        // the artificial columns (reduced cost of artificial i = 1 - y_i
        // up to the row sign flips applied above)
        res.feasible = false;
        res.farkas.assign(m, 0);
        for (int i = 0; i < m; ++i) {
            Rat yi = Rat(1) - tb.t[m][nv + i];
            res.farkas[i] = (b[i] < 0) ? -yi : yi;
        }
        return res;
    }
    // drive remaining artificials out of the basis where possible
    for (int i = 0; i < m; ++i) {
        if (tb.basis[i] < nv) continue;
        int pc = -1;
        for (int j = 0; j < nv; ++j)
            if (tb.t[i][j] != 0) {
                pc = j;
                break;
            }
        if (pc >= 0) tb.pivot(i, pc);
        // else: redundant row, keep the artificial basic at value 0
    }
    // phase 2: minimize -c.x over structural columns
    for (int j = 0; j <= tb.n; ++j) tb.t[m][j] = 0;
    for (int j = 0; j < nv; ++j) tb.t[m][j] = -c[j];
    for (int i = 0; i < m; ++i) {
        if (tb.t[m][tb.basis[i]] == 0) continue;
        Rat f = tb.t[m][tb.basis[i]];
        for (int j = 0; j <= tb.n; ++j) tb.t[m][j] -= f * tb.t[i][j];
    }
    for (int j = nv; j < tb.n; ++j) allowed[j] = false;
    bool bounded = tb.run(allowed);

    res.feasible = true;
    res.bounded = bounded;
    res.x.assign(nv, 0);
    for (int i = 0; i < m; ++i)
        if (tb.basis[i] < nv) res.x[tb.basis[i]] = tb.t[i][tb.n];
    res.objective = 0;
    for (int j = 0; j < nv; ++j) res.objective += c[j] * res.x[j];
    return res;
}

int rational_rank(std::vector<std::vector<Rat>> A, std::vector<std::vector<Rat>>* nullspace) {
    if (A.empty()) return 0;
    const int m = static_cast<int>(A.size());
    const int n = static_cast<int>(A[0].size());
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < n && r < m; ++c) {
        int pr = -1;
        for (int i = r; i < m; ++i)
            if (A[i][c] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        std::swap(A[r], A[pr]);
        Rat piv = A[r][c];
        for (int j = 0; j < n; ++j) A[r][j] /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == r || A[i][c] == 0) continue;
            Rat f = A[i][c];
            for (int j = 0; j < n; ++j) A[i][j] -= f * A[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    if (nullspace) {
        nullspace->clear();
        std::vector<bool> is_pivot(n, false);
        for (int c : pivot_col) is_pivot[c] = true;
        for (int c = 0; c < n; ++c) {
            if (is_pivot[c]) continue;
            std::vector<Rat> v(n, 0);
            v[c] = 1;
            for (int i = 0; i < r; ++i) v[pivot_col[i]] = -A[i][c];
            nullspace->push_back(std::move(v));
        }
    }
    return r;
}

bool rational_solve(std::vector<std::vector<Rat>> A, std::vector<Rat> b, std::vector<Rat>* x) {
    const int m = static_cast<int>(A.size());
    const int n = m ? static_cast<int>(A[0].size()) : 0;
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < n && r < m; ++c) {
        int pr = -1;
        for (int i = r; i < m; ++i)
            if (A[i][c] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        std::swap(A[r], A[pr]);
        std::swap(b[r], b[pr]);
        Rat piv = A[r][c];
        for (int j = 0; j < n; ++j) A[r][j] /= piv;
        b[r] /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == r || A[i][c] == 0) continue;
            Rat f = A[i][c];
            for (int j = 0; j < n; ++j) A[i][j] -= f * A[r][j];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (int i = r; i < m; ++i)
        if (b[i] != 0) return false;
    x->assign(n, 0);
    for (int i = 0; i < r; ++i) (*x)[pivot_col[i]] = b[i];
    return true;
}

}  // namespace tqft
