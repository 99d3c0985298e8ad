#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnlyap/network.hpp"

namespace crnlyap::testing {

inline Rational random_rational(std::mt19937& gen, int lo = -5, int hi = 5,
                                int max_den = 4) {
    std::uniform_int_distribution<int> num(lo, hi);
    std::uniform_int_distribution<int> den(1, max_den);
    Rational q(num(gen), den(gen));
    q.canonicalize();
    return q;
}

inline Mat random_matrix(std::mt19937& gen, int rows, int cols, int lo = -5,
                         int hi = 5) {
    Mat A(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) A(i, j) = random_rational(gen, lo, hi);
    return A;
}

// Random nonzero integer matrix with no zero rows (partition-friendly).
inline Mat random_partition_matrix(std::mt19937& gen, int rows, int cols) {
    std::uniform_int_distribution<int> entry(-3, 3);
    Mat A(rows, cols);
    for (int i = 0; i < rows; ++i) {
        bool nonzero = false;
        while (!nonzero) {
            for (int j = 0; j < cols; ++j) {
                A(i, j) = entry(gen);
                if (!is_zero(A(i, j))) nonzero = true;
            }
        }
    }
    return A;
}

// Small random network respecting the no-autocatalysis rule: every species
// appears on at most one side of each reaction.
inline ReactionNetwork random_network(std::mt19937& gen, int max_species = 4,
                                      int max_reactions = 4) {
    std::uniform_int_distribution<int> nspec(2, max_species);
    std::uniform_int_distribution<int> nreac(2, max_reactions);
    std::uniform_int_distribution<int> coef(1, 2);
    std::uniform_int_distribution<int> role(0, 2);  // 0 skip, 1 reactant, 2 product
    ReactionNetwork net;
    const int n = nspec(gen);
    for (int i = 0; i < n; ++i) net.species.push_back("X" + std::to_string(i + 1));
    const int nu = nreac(gen);
    for (int j = 0; j < nu; ++j) {
        Reaction r;
        while (r.reactants.empty() && r.products.empty()) {
            r.reactants.clear();
            r.products.clear();
            for (int i = 0; i < n; ++i) {
                switch (role(gen)) {
                    case 1: r.reactants[i] = coef(gen); break;
                    case 2: r.products[i] = coef(gen); break;
                    default: break;
                }
            }
        }
        net.reactions.push_back(std::move(r));
    }
    return net;
}

// Enzymatic chain of length n: substrates X1..X_{n+1}, complexes C1..Cn,
// enzymes E1..En, with Xi + Ei -> Ci, Ci -> X_{i+1} + Ei, X_{i+1} -> Xi.
inline ReactionNetwork chain_network(int n) {
    ReactionNetwork net;
    for (int i = 1; i <= n + 1; ++i) net.species.push_back("X" + std::to_string(i));
    for (int i = 1; i <= n; ++i) net.species.push_back("C" + std::to_string(i));
    for (int i = 1; i <= n; ++i) net.species.push_back("E" + std::to_string(i));
    auto X = [&](int i) { return i - 1; };
    auto C = [&](int i) { return n + i; };
    auto E = [&](int i) { return 2 * n + 1 + i - 1; };
    for (int i = 1; i <= n; ++i) {
        Reaction bind;
        bind.reactants = {{X(i), 1}, {E(i), 1}};
        bind.products = {{C(i), 1}};
        net.reactions.push_back(bind);
        Reaction release;
        release.reactants = {{C(i), 1}};
        release.products = {{X(i + 1), 1}, {E(i), 1}};
        net.reactions.push_back(release);
        Reaction back;
        back.reactants = {{X(i + 1), 1}};
        back.products = {{X(i), 1}};
        net.reactions.push_back(back);
    }
    return net;
}

inline std::string networks_dir() {
#ifdef CRNLYAP_NETWORKS_DIR
    return CRNLYAP_NETWORKS_DIR;
#else
    return "networks";
#endif
}

inline ReactionNetwork load_fixture(const std::string& name) {
    std::ifstream in(networks_dir() + "/" + name);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_network(ss.str());
}

}  // namespace crnlyap::testing
