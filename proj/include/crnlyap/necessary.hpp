#pragma once

#include <optional>
#include <string>

#include "crnlyap/graph.hpp"
#include "crnlyap/partition.hpp"

namespace crnlyap {

// Sign regions of rate space (partition by the signs of Gamma r) together
// with the per-region diagonal sign-constraint matrices B_k. Zero rows of
// Gamma (untouched species, never reactants) are left out of the partition.
struct SignRegions {
    Partition partition;
    std::vector<int> row_species;     // partition row -> species index
    std::vector<std::vector<int>> b;  // per region: diagonal of B_k (+1/0/-1)
    std::vector<int> inflow;          // reactions without reactants
};

SignRegions sign_regions(const ReactionNetwork& net);

struct Theorem8Result {
    struct RegionResult {
        int region = 0;
        bool feasible = false;         // literal zeta != 0 reading
        bool strict_feasible = false;  // additionally zeta^T B_k != 0
        Vec zeta;
    };
    bool pass = true;         // literal reading over all regions
    bool strict_pass = true;  // stronger reading
    std::vector<RegionResult> regions;
};

// Per sign region, existence of zeta != 0 with zeta^T B_k U = 0 and
// zeta_j >= 0 off the inflow set.
Theorem8Result check_theorem8(const ReactionNetwork& net);

// First critical deadlock in siphon order, if any.
std::optional<Siphon> check_critical_deadlock(const ReactionNetwork& net);

enum class P0Verdict { RobustlyP0, Counterexample, Inconclusive };

struct P0Result {
    P0Verdict verdict = P0Verdict::Inconclusive;
    std::vector<int> minor;  // species subset of the offending principal minor
    // Counterexample Jacobian pattern: dR_j/dx_i value per (reaction, species).
    std::vector<std::tuple<int, int, double>> witness;
    double minor_value = 0.0;  // numeric re-verification of the minor
    std::string detail;
};

// Symbolic principal minors of -Gamma dR/dx under the A3 sign pattern:
// robustly P0 when every coefficient is nonnegative, otherwise a sampled
// counterexample or inconclusive.
P0Result p0_structural(const ReactionNetwork& net, int n_cap = 10);

struct NecessaryReport {
    Theorem8Result theorem8;
    std::optional<Siphon> deadlock;
    P0Result p0;

    bool refuted() const {
        return !theorem8.pass || deadlock.has_value() ||
               p0.verdict == P0Verdict::Counterexample;
    }
};

NecessaryReport check_necessary(const ReactionNetwork& net);

}  // namespace crnlyap
