#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "crnlyap/linalg.hpp"

namespace crnlyap {

struct Region {
    int index = 0;
    std::vector<int> signature;          // +/-1 per row of H
    std::vector<int> reduced_signature;  // +/-1 per row of the reduced matrix
    Vec interior_witness;                // Sigma_k H . witness >> 0 exactly
};

// Conic partition of rate space induced by the rows of H: region k is
// {r : Sigma_k H r >= 0}. Regions come in opposite pairs, region m-1-k
// being the negation of region k.
struct Partition {
    Mat H;
    std::optional<Vec> mu;  // positive kernel vector of H, when one exists

    // Parallel rows of H collapse onto one canonical (primitive, first
    // nonzero positive) reduced row; h_i is a positive multiple of
    // row_sign[i] * reduced.row(row_to_reduced[i]).
    Mat reduced;
    std::vector<int> row_to_reduced;
    std::vector<int> row_sign;

    std::vector<Region> regions;

    struct Neighbor {
        int k, j;      // ordered pair of regions at reduced Hamming distance 1
        int switched;  // the single differing reduced-row index, s_k(j)
    };
    std::vector<Neighbor> neighbors;

    int num_regions() const { return int(regions.size()); }

    // Reduced-row indices switched towards some neighbor of k: s_k(N_k).
    std::vector<int> switched_rows(int k) const;
    std::optional<int> switched_row(int k, int j) const;
};

// Enumerates all reduced signatures, keeping those whose cone has nonempty
// interior, and pairs opposite regions. When check_kernel_against is given,
// ker H = ker(*check_kernel_against) is validated exactly. Throws
// std::invalid_argument on zero rows / kernel mismatch / more than
// max_reduced_rows distinct row directions.
Partition build_partition(const Mat& H, const Mat* check_kernel_against = nullptr,
                          int max_reduced_rows = 20);

// All region indices k with Sigma_k H r >= 0; never empty.
std::vector<int> locate(const Partition& partition, const Vec& r);

// Partition of H = [Gamma; Hhat] together with the map q from each refined
// region to the sign region (partition of Gamma alone) containing it.
struct RefinedPartition {
    Partition partition;
    Partition sign_regions;
    std::vector<int> q;  // refined region index -> sign region index
};

// Requires ker Gamma <= ker Hhat so that ker H = ker Gamma.
RefinedPartition refine_with_sign_regions(const Mat& gamma, const Mat& hhat);

// Runs fn(i) for i in [0, count) across worker threads; thread count honours
// the CRNLYAP_THREADS environment variable (defaults to the hardware count).
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace crnlyap
