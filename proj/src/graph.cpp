#include "crnlyap/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "crnlyap/lp.hpp"

namespace crnlyap {

namespace {

using Bits = std::uint32_t;

// A reaction violates siphon-hood of P when it feeds P without draining it.
int find_violation(const ReactionNetwork& net, Bits P) {
    for (int j = 0; j < net.num_reactions(); ++j) {
        const Reaction& r = net.reactions[j];
        bool feeds = false, drains = false;
        for (const auto& [i, b] : r.products)
            if (P >> i & 1) { feeds = true; break; }
        if (!feeds) continue;
        for (const auto& [i, a] : r.reactants)
            if (P >> i & 1) { drains = true; break; }
        if (!drains) return j;
    }
    return -1;
}

void saturate(const ReactionNetwork& net, Bits P, std::unordered_set<Bits>& seen,
              std::vector<Bits>& found) {
    if (!seen.insert(P).second) return;
    int j = find_violation(net, P);
    if (j < 0) {
        found.push_back(P);
        return;
    }
    // Must drain through some reactant of the violating reaction; branch.
    for (const auto& [i, a] : net.reactions[j].reactants)
        if (!(P >> i & 1)) saturate(net, P | (Bits(1) << i), seen, found);
    // No reactants (inflow 0 -> ...) leaves no way to repair: dead branch.
}

// Conservation law d >= 0, d != 0, d^T Gamma = 0 supported inside P?
bool covered_by_conservation(const Mat& gamma, const std::vector<int>& members) {
    const int m = int(members.size());
    Mat A(gamma.cols(), m);  // rows: (d^T Gamma)_j = 0 over d restricted to P
    for (int j = 0; j < gamma.cols(); ++j)
        for (int k = 0; k < m; ++k) A(j, k) = gamma(members[k], j);
    for (int pin = 0; pin < m; ++pin) {
        LinearProgram lp;
        lp.A = A;
        lp.rel.assign(gamma.cols(), Rel::Eq);
        lp.b.assign(gamma.cols(), Rational(0));
        Vec pin_row(m, Rational(0));
        pin_row[pin] = 1;
        lp.A.append_row(pin_row);
        lp.rel.push_back(Rel::Ge);
        lp.b.push_back(Rational(1));
        lp.bounds.assign(m, VarBound::nonneg());
        if (solve(lp).status == LpStatus::Feasible) return true;
    }
    return false;
}

}  // namespace

std::vector<int> output_reactions(const ReactionNetwork& net,
                                  const std::vector<int>& members) {
    std::vector<int> out;
    for (int j = 0; j < net.num_reactions(); ++j)
        for (const auto& [i, a] : net.reactions[j].reactants)
            if (std::binary_search(members.begin(), members.end(), i)) {
                out.push_back(j);
                break;
            }
    return out;
}

std::vector<Siphon> siphons(const ReactionNetwork& net, int species_cap) {
    const int n = net.num_species();
    if (n > species_cap)
        throw std::runtime_error("siphon enumeration capped at " +
                                 std::to_string(species_cap) + " species");
    std::unordered_set<Bits> seen;
    std::vector<Bits> found;
    for (int s = 0; s < n; ++s) saturate(net, Bits(1) << s, seen, found);

    // Keep inclusion-minimal sets only.
    std::vector<Bits> minimal;
    for (Bits p : found) {
        bool min = true;
        for (Bits q : found)
            if (q != p && (q & p) == q) { min = false; break; }
        if (min && std::find(minimal.begin(), minimal.end(), p) == minimal.end())
            minimal.push_back(p);
    }

    Mat gamma = stoichiometry(net);
    std::vector<Siphon> out;
    for (Bits p : minimal) {
        Siphon s;
        for (int i = 0; i < n; ++i)
            if (p >> i & 1) s.members.push_back(i);
        s.is_deadlock =
            int(output_reactions(net, s.members).size()) == net.num_reactions();
        s.is_critical = !covered_by_conservation(gamma, s.members);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(),
              [](const Siphon& a, const Siphon& b) { return a.members < b.members; });
    return out;
}

std::set<int> ancestors(const ReactionNetwork& net, int j) {
    const int n = net.num_species();
    std::vector<std::vector<int>> producers(n);  // species -> reactions feeding it
    for (int k = 0; k < net.num_reactions(); ++k)
        for (const auto& [i, b] : net.reactions[k].products) producers[i].push_back(k);

    std::set<int> anc;
    std::vector<bool> species_seen(n, false);
    std::deque<int> frontier;  // species whose producers are ancestors
    for (const auto& [i, a] : net.reactions[j].reactants) {
        species_seen[i] = true;
        frontier.push_back(i);
    }
    while (!frontier.empty()) {
        int i = frontier.front();
        frontier.pop_front();
        for (int k : producers[i]) {
            if (!anc.insert(k).second) continue;
            for (const auto& [i2, a] : net.reactions[k].reactants)
                if (!species_seen[i2]) {
                    species_seen[i2] = true;
                    frontier.push_back(i2);
                }
        }
    }
    return anc;
}

namespace {

Subnetwork remove_siphon(const ReactionNetwork& net, const std::vector<int>& P) {
    std::vector<int> lambda = output_reactions(net, P);
    std::vector<bool> drop_species(net.num_species(), false);
    for (int i : P) drop_species[i] = true;
    std::vector<int> new_index(net.num_species(), -1);
    Subnetwork out;
    ReactionNetwork& sub = out.net;
    for (int i = 0; i < net.num_species(); ++i)
        if (!drop_species[i]) {
            new_index[i] = sub.num_species();
            sub.species.push_back(net.species[i]);
            out.species_of.push_back(i);
        }
    std::vector<int> new_rxn(net.num_reactions(), -1);
    for (int j = 0; j < net.num_reactions(); ++j) {
        if (std::binary_search(lambda.begin(), lambda.end(), j)) continue;
        Reaction r;
        for (const auto& [i, a] : net.reactions[j].reactants)
            r.reactants[new_index[i]] = a;  // reactants never meet P (j not in Lambda)
        for (const auto& [i, b] : net.reactions[j].products)
            if (!drop_species[i]) r.products[new_index[i]] = b;
        if (r.reactants.empty() && r.products.empty()) continue;
        new_rxn[j] = sub.num_reactions();
        r.reverse_of = net.reactions[j].reverse_of;  // remapped below
        sub.reactions.push_back(std::move(r));
        out.reaction_of.push_back(j);
    }
    for (auto& r : sub.reactions) {
        if (!r.reverse_of) continue;
        int mapped = new_rxn[*r.reverse_of];
        if (mapped >= 0)
            r.reverse_of = mapped;
        else
            r.reverse_of.reset();
    }
    return out;
}

void collect_subnetworks(const ReactionNetwork& net, const std::vector<int>& species_of,
                         const std::vector<int>& reaction_of,
                         std::set<std::string>& keys, std::vector<Subnetwork>& out) {
    for (const Siphon& s : siphons(net)) {
        if (!s.is_critical) continue;
        Subnetwork sub = remove_siphon(net, s.members);
        if (sub.net.reactions.empty()) continue;
        // Compose the maps so indices always refer to the root network.
        for (int& i : sub.species_of) i = species_of[i];
        for (int& j : sub.reaction_of) j = reaction_of[j];
        if (!keys.insert(to_crn(sub.net)).second) continue;
        out.push_back(sub);
        collect_subnetworks(sub.net, sub.species_of, sub.reaction_of, keys, out);
    }
}

}  // namespace

std::vector<Subnetwork> critical_subnetworks_mapped(const ReactionNetwork& net) {
    std::set<std::string> keys;
    std::vector<Subnetwork> out;
    std::vector<int> id_species(net.num_species()), id_rxn(net.num_reactions());
    for (int i = 0; i < net.num_species(); ++i) id_species[i] = i;
    for (int j = 0; j < net.num_reactions(); ++j) id_rxn[j] = j;
    collect_subnetworks(net, id_species, id_rxn, keys, out);
    return out;
}

std::vector<ReactionNetwork> critical_subnetworks(const ReactionNetwork& net) {
    std::vector<ReactionNetwork> out;
    for (Subnetwork& s : critical_subnetworks_mapped(net)) out.push_back(std::move(s.net));
    return out;
}

}  // namespace crnlyap
