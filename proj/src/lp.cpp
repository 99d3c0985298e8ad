#include "crnlyap/lp.hpp"

#include <stdexcept>

namespace crnlyap {

namespace {

// Internal standard form: A x = b, b >= 0, x_j >= 0 except free structurals.
// Columns: [structurals | slacks | artificials].
struct Tableau {
    int m = 0;               // constraint rows
    int n_struct = 0;        // structural variables (original order)
    int n_total = 0;         // structurals + slacks + artificials
    int art_begin = 0;       // first artificial column
    std::vector<Vec> t;      // m rows of n_total + 1 (last = rhs)
    Vec cost;                // reduced-cost row, n_total + 1 (last = -objval)
    std::vector<int> basis;  // basic variable per row
    std::vector<bool> is_free;
    std::vector<bool> eligible;  // may enter the basis

    void pivot(int r, int c) {
        Rational inv = 1 / t[r][c];
        for (auto& x : t[r]) x *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == r || is_zero(t[i][c])) continue;
            Rational f = t[i][c];
            for (int j = 0; j <= n_total; ++j) t[i][j] -= f * t[r][j];
        }
        if (!is_zero(cost[c])) {
            Rational f = cost[c];
            for (int j = 0; j <= n_total; ++j) cost[j] -= f * t[r][j];
        }
        basis[r] = c;
    }

    // Minimizing simplex with Bland's rule. Returns false on unboundedness,
    // filling enter_col / enter_dir for ray extraction.
    bool run(int& enter_col, int& enter_dir) {
        for (;;) {
            int col = -1, dir = 0;
            for (int j = 0; j < n_total; ++j) {
                if (!eligible[j]) continue;
                bool basic = false;
                for (int i = 0; i < m; ++i)
                    if (basis[i] == j) { basic = true; break; }
                if (basic) continue;
                if (sign(cost[j]) < 0) { col = j; dir = 1; break; }
                if (is_free[j] && sign(cost[j]) > 0) { col = j; dir = -1; break; }
            }
            if (col < 0) return true;  // optimal
            int row = -1;
            Rational best;
            for (int i = 0; i < m; ++i) {
                if (is_free[basis[i]]) continue;  // no lower bound, never blocks
                Rational step = Rational(dir) * t[i][col];
                if (sign(step) <= 0) continue;
                Rational ratio = t[i][n_total] / step;
                if (row < 0 || ratio < best ||
                    (ratio == best && basis[i] < basis[row])) {
                    row = i;
                    best = ratio;
                }
            }
            if (row < 0) {
                enter_col = col;
                enter_dir = dir;
                return false;
            }
            pivot(row, col);
        }
    }
};

}  // namespace

LpOutcome solve(const LinearProgram& lp) {
    const int nv = lp.num_vars();
    if (int(lp.bounds.size()) != nv || int(lp.rel.size()) != lp.num_rows() ||
        int(lp.b.size()) != lp.num_rows() ||
        (lp.objective && int(lp.objective->size()) != nv))
        throw std::invalid_argument("LinearProgram dimension mismatch");

    // Expand interval bounds into rows: x >= lo, x <= hi (variable order).
    std::vector<Vec> rows;
    std::vector<Rel> rels;
    Vec rhs;
    for (int i = 0; i < lp.num_rows(); ++i) {
        rows.push_back(lp.A.row(i));
        rels.push_back(lp.rel[i]);
        rhs.push_back(lp.b[i]);
    }
    for (int j = 0; j < nv; ++j) {
        if (lp.bounds[j].kind != BoundKind::Interval) continue;
        Vec e(nv, Rational(0));
        e[j] = 1;
        rows.push_back(e);
        rels.push_back(Rel::Ge);
        rhs.push_back(lp.bounds[j].lo);
        rows.push_back(e);
        rels.push_back(Rel::Le);
        rhs.push_back(lp.bounds[j].hi);
    }
    const int m = int(rows.size());
    int n_slack = 0;
    for (Rel r : rels)
        if (r != Rel::Eq) ++n_slack;

    Tableau tab;
    tab.m = m;
    tab.n_struct = nv;
    tab.art_begin = nv + n_slack;
    tab.n_total = nv + n_slack + m;
    tab.is_free.assign(tab.n_total, false);
    for (int j = 0; j < nv; ++j)
        tab.is_free[j] = lp.bounds[j].kind != BoundKind::NonNeg;
    tab.eligible.assign(tab.n_total, true);
    for (int j = tab.art_begin; j < tab.n_total; ++j) tab.eligible[j] = false;

    std::vector<int> row_flip(m, 1);
    tab.t.assign(m, Vec(tab.n_total + 1, Rational(0)));
    int slack = nv;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < nv; ++j) tab.t[i][j] = rows[i][j];
        Rational b = rhs[i];
        if (rels[i] == Rel::Le) tab.t[i][slack++] = 1;
        else if (rels[i] == Rel::Ge) tab.t[i][slack++] = -1;
        if (sign(b) < 0) {
            row_flip[i] = -1;
            for (int j = 0; j < tab.n_total; ++j) tab.t[i][j] = -tab.t[i][j];
            b = -b;
        }
        tab.t[i][tab.art_begin + i] = 1;
        tab.t[i][tab.n_total] = b;
        tab.basis.push_back(tab.art_begin + i);
    }

    // Phase 1: minimize the artificial sum.
    tab.cost.assign(tab.n_total + 1, Rational(0));
    for (int j = tab.art_begin; j < tab.n_total; ++j) tab.cost[j] = 1;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= tab.n_total; ++j) tab.cost[j] -= tab.t[i][j];

    int ec = -1, ed = 0;
    tab.run(ec, ed);  // phase 1 is bounded below by 0
    Rational phase1 = -tab.cost[tab.n_total];
    if (sign(phase1) > 0) {
        // Infeasible. Multipliers pi_k = 1 - redcost(artificial k); the
        // original-row certificate is y_i = -flip_i * pi_i.
        LpOutcome out;
        out.status = LpStatus::Infeasible;
        out.farkas.resize(m);
        for (int i = 0; i < m; ++i) {
            Rational pi = Rational(1) - tab.cost[tab.art_begin + i];
            out.farkas[i] = Rational(-row_flip[i]) * pi;
        }
        return out;
    }

    // Drive leftover artificials out of the basis; drop redundant rows.
    for (int i = 0; i < tab.m;) {
        if (tab.basis[i] < tab.art_begin) { ++i; continue; }
        int col = -1;
        for (int j = 0; j < tab.art_begin; ++j)
            if (!is_zero(tab.t[i][j])) { col = j; break; }
        if (col >= 0) {
            tab.pivot(i, col);
            ++i;
        } else {
            tab.t.erase(tab.t.begin() + i);
            tab.basis.erase(tab.basis.begin() + i);
            --tab.m;
        }
    }

    // Phase 2.
    Vec c2(tab.n_total + 1, Rational(0));
    if (lp.objective) {
        for (int j = 0; j < nv; ++j)
            c2[j] = lp.maximize ? -(*lp.objective)[j] : (*lp.objective)[j];
    }
    tab.cost = c2;
    for (int i = 0; i < tab.m; ++i) {
        if (is_zero(c2[tab.basis[i]])) continue;
        Rational f = c2[tab.basis[i]];
        for (int j = 0; j <= tab.n_total; ++j) tab.cost[j] -= f * tab.t[i][j];
    }

    auto extract_struct = [&](const std::vector<int>& basis,
                              const std::vector<Vec>& t) {
        Vec x(nv, Rational(0));
        for (int i = 0; i < int(basis.size()); ++i)
            if (basis[i] < nv) x[basis[i]] = t[i][tab.n_total];
        return x;
    };

    if (!lp.objective) {
        LpOutcome out;
        out.status = LpStatus::Feasible;
        out.witness = extract_struct(tab.basis, tab.t);
        return out;
    }

    bool bounded = tab.run(ec, ed);
    LpOutcome out;
    out.witness = extract_struct(tab.basis, tab.t);
    if (bounded) {
        out.status = LpStatus::Feasible;
        Rational val = -tab.cost[tab.n_total];
        out.optimal = lp.maximize ? -val : val;
    } else {
        out.status = LpStatus::Unbounded;
        Vec ray(nv, Rational(0));
        if (ec < nv) ray[ec] = ed;
        for (int i = 0; i < tab.m; ++i)
            if (tab.basis[i] < nv) ray[tab.basis[i]] = Rational(-ed) * tab.t[i][ec];
        out.ray = ray;
    }
    return out;
}

bool verify_certificate(const LinearProgram& lp, const LpOutcome& outcome) {
    const int nv = lp.num_vars();

    auto point_ok = [&](const Vec& x) {
        if (int(x.size()) != nv) return false;
        for (int i = 0; i < lp.num_rows(); ++i) {
            Rational lhs = dot(lp.A.row(i), x);
            int s = sign(lhs - lp.b[i]);
            if (lp.rel[i] == Rel::Le && s > 0) return false;
            if (lp.rel[i] == Rel::Ge && s < 0) return false;
            if (lp.rel[i] == Rel::Eq && s != 0) return false;
        }
        for (int j = 0; j < nv; ++j) {
            const auto& bd = lp.bounds[j];
            if (bd.kind == BoundKind::NonNeg && sign(x[j]) < 0) return false;
            if (bd.kind == BoundKind::Interval && (x[j] < bd.lo || x[j] > bd.hi))
                return false;
        }
        return true;
    };

    switch (outcome.status) {
        case LpStatus::Feasible: {
            if (!point_ok(outcome.witness)) return false;
            if (lp.objective && outcome.optimal &&
                dot(*lp.objective, outcome.witness) != *outcome.optimal)
                return false;
            return true;
        }
        case LpStatus::Infeasible: {
            // Reconstruct the expanded row list (intervals become rows).
            std::vector<Vec> rows;
            std::vector<Rel> rels;
            Vec rhs;
            for (int i = 0; i < lp.num_rows(); ++i) {
                rows.push_back(lp.A.row(i));
                rels.push_back(lp.rel[i]);
                rhs.push_back(lp.b[i]);
            }
            for (int j = 0; j < nv; ++j) {
                if (lp.bounds[j].kind != BoundKind::Interval) continue;
                Vec e(nv, Rational(0));
                e[j] = 1;
                rows.push_back(e);
                rels.push_back(Rel::Ge);
                rhs.push_back(lp.bounds[j].lo);
                rows.push_back(e);
                rels.push_back(Rel::Le);
                rhs.push_back(lp.bounds[j].hi);
            }
            const auto& y = outcome.farkas;
            if (y.size() != rows.size()) return false;
            for (size_t i = 0; i < rows.size(); ++i) {
                if (rels[i] == Rel::Le && sign(y[i]) < 0) return false;
                if (rels[i] == Rel::Ge && sign(y[i]) > 0) return false;
            }
            Vec z(nv, Rational(0));
            Rational yb = 0;
            for (size_t i = 0; i < rows.size(); ++i) {
                for (int j = 0; j < nv; ++j) z[j] += y[i] * rows[i][j];
                yb += y[i] * rhs[i];
            }
            for (int j = 0; j < nv; ++j) {
                if (lp.bounds[j].kind == BoundKind::NonNeg) {
                    if (sign(z[j]) < 0) return false;
                } else if (!is_zero(z[j])) {
                    return false;  // free within the expanded system
                }
            }
            return sign(yb) < 0;
        }
        case LpStatus::Unbounded: {
            if (!lp.objective) return false;
            if (!point_ok(outcome.witness)) return false;
            const auto& r = outcome.ray;
            if (int(r.size()) != nv) return false;
            for (int i = 0; i < lp.num_rows(); ++i) {
                Rational d = dot(lp.A.row(i), r);
                if (lp.rel[i] == Rel::Le && sign(d) > 0) return false;
                if (lp.rel[i] == Rel::Ge && sign(d) < 0) return false;
                if (lp.rel[i] == Rel::Eq && !is_zero(d)) return false;
            }
            for (int j = 0; j < nv; ++j) {
                if (lp.bounds[j].kind == BoundKind::NonNeg && sign(r[j]) < 0)
                    return false;
                if (lp.bounds[j].kind == BoundKind::Interval && !is_zero(r[j]))
                    return false;
            }
            Rational gain = dot(*lp.objective, r);
            return lp.maximize ? sign(gain) > 0 : sign(gain) < 0;
        }
    }
    return false;
}

std::optional<Vec> strict_cone_interior(const Mat& M) {
    const int nu = M.cols();
    // Variables: r (free, nu of them), t (free). Rows: M r - t*1 >= 0; t <= 1.
    LinearProgram lp;
    lp.A = Mat(M.rows() + 1, nu + 1);
    for (int i = 0; i < M.rows(); ++i) {
        for (int j = 0; j < nu; ++j) lp.A(i, j) = M(i, j);
        lp.A(i, nu) = -1;
        lp.rel.push_back(Rel::Ge);
        lp.b.push_back(0);
    }
    lp.A(M.rows(), nu) = 1;
    lp.rel.push_back(Rel::Le);
    lp.b.push_back(1);
    lp.bounds.assign(nu + 1, VarBound::free());
    Vec obj(nu + 1, Rational(0));
    obj[nu] = 1;
    lp.objective = obj;
    lp.maximize = true;

    LpOutcome out = solve(lp);
    if (out.status != LpStatus::Feasible || !out.optimal || sign(*out.optimal) <= 0)
        return std::nullopt;
    Vec r(out.witness.begin(), out.witness.begin() + nu);
    return r;
}

}  // namespace crnlyap
