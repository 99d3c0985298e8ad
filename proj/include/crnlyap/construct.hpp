#pragma once

#include <optional>
#include <string>

#include "crnlyap/checker.hpp"

namespace crnlyap {

enum class Method { LP, Iterative, MaxMin, MaxMinReversible };

struct ConstructionOutcome {
    Method method = Method::LP;
    std::optional<PwlrCertificate> certificate;
    CheckReport report;       // self-check of the returned certificate
    std::string diagnostics;  // failure reason / iteration trace
    Vec farkas;               // LP method: infeasibility certificate
    std::string c2_status;    // LP method: "resolved" or "unresolved"

    // MaxMin claims
    bool common_ancestor_claim = false;  // LaSalle interior condition holds
    bool conservative_claim = false;     // persistence / global stability

    std::vector<int> iteration_rows;  // Iterative: row count per round

    bool success() const { return certificate.has_value(); }
};

// Joint feasibility LP over a refined partition of [Gamma; Hhat] (Hhat may
// be null for H = Gamma). Partitions with more than max_regions half-regions
// are refused with a diagnostic rather than ground to a halt.
ConstructionOutcome construct_lp(const ReactionNetwork& net, const Mat* hhat = nullptr,
                                 bool want_convex = true, int max_regions = 32,
                                 int c2_retries = 5);

// Row-augmentation iteration, standard settings C0 = Gamma rows.
ConstructionOutcome construct_iterative(const ReactionNetwork& net,
                                        const Mat* C0 = nullptr, int max_iter = 20);

// Max-min function over the kernel weights (single kernel direction, unique
// output reaction per species).
ConstructionOutcome construct_maxmin(const ReactionNetwork& net);

// Max-min extension allowing reverses of reactions that are the only input
// of all their products.
ConstructionOutcome construct_maxmin_reversible(const ReactionNetwork& net);

}  // namespace crnlyap
