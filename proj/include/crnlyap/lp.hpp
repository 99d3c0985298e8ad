#pragma once

#include <optional>
#include <vector>

#include "crnlyap/linalg.hpp"

namespace crnlyap {

enum class Rel { Le, Eq, Ge };

enum class BoundKind { Free, NonNeg, Interval };

struct VarBound {
    BoundKind kind = BoundKind::NonNeg;
    Rational lo, hi;  // used for Interval only

    static VarBound free() { return {BoundKind::Free, 0, 0}; }
    static VarBound nonneg() { return {BoundKind::NonNeg, 0, 0}; }
    static VarBound interval(Rational lo, Rational hi) {
        return {BoundKind::Interval, std::move(lo), std::move(hi)};
    }
};

// A x (rel) b with per-variable bounds and an optional linear objective.
// Interval bounds are handled as two extra rows appended after the explicit
// ones, in variable order (x >= lo first, then x <= hi); Farkas certificates
// cover those rows too.
struct LinearProgram {
    Mat A;
    std::vector<Rel> rel;
    Vec b;
    std::vector<VarBound> bounds;
    std::optional<Vec> objective;
    bool maximize = true;

    int num_vars() const { return A.cols(); }
    int num_rows() const { return A.rows(); }
};

enum class LpStatus { Feasible, Infeasible, Unbounded };

struct LpOutcome {
    LpStatus status = LpStatus::Infeasible;
    Vec witness;  // Feasible / Unbounded: a point satisfying every constraint
    Vec farkas;   // Infeasible: row multipliers proving inconsistency
    Vec ray;      // Unbounded: improving feasible direction
    std::optional<Rational> optimal;
};

// Exact two-phase simplex with Bland's rule. Deterministic; free variables
// are kept in original coordinates (no +/- splitting).
LpOutcome solve(const LinearProgram& lp);

// Re-substitutes the outcome's witness / Farkas vector / ray into the
// program, independent of the solver path. True iff it checks out exactly.
bool verify_certificate(const LinearProgram& lp, const LpOutcome& outcome);

// Witness r with M r >> 0 componentwise (via max t s.t. Mr >= t*1, t <= 1),
// or nullopt when the open cone is empty.
std::optional<Vec> strict_cone_interior(const Mat& M);

}  // namespace crnlyap
