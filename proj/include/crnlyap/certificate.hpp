#pragma once

#include <optional>
#include <vector>

#include "crnlyap/network.hpp"

namespace crnlyap {

enum class CertForm { General, Convex };

// Piecewise linear in rates function. Convex form: Vt(r) = ||C r||_inf.
// General form: Vt(r) = |c_k^T r| on the regions of the partition of H,
// with the row-to-region pairing recovered by the checker.
struct PwlrCertificate {
    Mat C;  // rows c_k, k = 1..m/2
    CertForm form = CertForm::Convex;
    Mat H;  // General form only
};

// Geometry of the extended row set {c_1..c_K, -c_K..-c_1}: extended index e
// denotes c_e for e < K and -c_{2K-1-e} otherwise, so that e and 2K-1-e are
// opposite. The max-region of e is {r : (c_e - c_l)^T r >= 0 for all l}.
struct ConvexGeometry {
    int K = 0;
    std::vector<std::optional<Vec>> witness;  // per extended index, interior
                                              // point of its max-region

    int mirror(int e) const { return 2 * K - 1 - e; }
    int num_extended() const { return 2 * K; }
};

Vec extended_row(const Mat& C, int e);
ConvexGeometry convex_geometry(const Mat& C);

// Shared facet between the max-regions of extended rows e and l?
bool convex_adjacent(const Mat& C, int e, int l);

// Merge rows that are parallel up to sign, keeping the largest magnitude
// (|a c| and |c| jointly reduce to the bigger scale under a max); zero rows
// dropped. Order of first appearance is preserved.
Mat dedupe_rows_keep_scale(const std::vector<Vec>& rows, int cols);

// Convex certificate for V(x) = ||diag(xi) Gamma R(x)||_1: one row per
// nonempty sign region of the weighted rows xi_i gamma_i. Throws on xi = 0.
PwlrCertificate l1_candidate(const Vec& xi, const Mat& gamma);

// Convex certificate for V(r) = sum_t |d_t^T r| (terms as rows).
PwlrCertificate sum_abs_candidate(const std::vector<Vec>& terms, int cols);

}  // namespace crnlyap
