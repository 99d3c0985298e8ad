#pragma once

#include <set>
#include <vector>

#include "crnlyap/network.hpp"

namespace crnlyap {

struct Siphon {
    std::vector<int> members;  // sorted species indices
    bool is_deadlock = false;
    bool is_critical = false;
};

// All minimal nonempty siphons, ordered lexicographically by member set.
// is_critical means no conservation law d >= 0, d != 0 is supported inside.
// Throws std::runtime_error past species_cap (enumeration is exponential).
std::vector<Siphon> siphons(const ReactionNetwork& net, int species_cap = 20);

// Output-reaction set Lambda(P): reactions consuming some species of P.
std::vector<int> output_reactions(const ReactionNetwork& net,
                                  const std::vector<int>& members);

// Reverse reachability of reaction j over the species/reaction bipartite
// digraph; contains j itself only when a directed cycle returns to it.
std::set<int> ancestors(const ReactionNetwork& net, int j);

// For every critical siphon P: drop P's species, drop Lambda(P), strip P
// from surviving product complexes; applied recursively, duplicates merged.
std::vector<ReactionNetwork> critical_subnetworks(const ReactionNetwork& net);

// Same, keeping the index maps back into the original network.
struct Subnetwork {
    ReactionNetwork net;
    std::vector<int> species_of;   // subnetwork species -> original index
    std::vector<int> reaction_of;  // subnetwork reaction -> original index
};
std::vector<Subnetwork> critical_subnetworks_mapped(const ReactionNetwork& net);

}  // namespace crnlyap
