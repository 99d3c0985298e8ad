#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crnlyap/linalg.hpp"

namespace crnlyap {

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(int line, int column, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", col " +
                             std::to_string(column) + ": " + what),
          line(line),
          column(column) {}
};

struct Reaction {
    std::map<int, int> reactants;  // species index -> alpha > 0
    std::map<int, int> products;   // species index -> beta > 0
    std::optional<int> reverse_of;  // mutual link between a reversible pair
};

struct ReactionNetwork {
    std::vector<std::string> species;
    std::vector<Reaction> reactions;
    std::string source;

    int num_species() const { return int(species.size()); }
    int num_reactions() const { return int(reactions.size()); }

    // The second member of a reversible pair (the forward one comes first).
    bool is_reverse(int j) const {
        return reactions[j].reverse_of && *reactions[j].reverse_of < j;
    }
};

// .crn text: one reaction per line, "coef Species + ... -> ..." with "<->"
// for reversible pairs, "0" for the empty complex, "#" comments and an
// optional "species: A B C" header fixing the species order.
ReactionNetwork parse_network(const std::string& text);

std::string to_crn(const ReactionNetwork& net);

// n x nu integer matrix with entry (i,j) = beta_ij - alpha_ij.
Mat stoichiometry(const ReactionNetwork& net);

// Strictly positive kernel vector of A (exists iff the strict LP is
// feasible); components are exact rationals.
std::optional<Vec> positive_vector_in_kernel(const Mat& A);

struct ConservationLaws {
    std::vector<Vec> basis;  // basis of the left kernel of Gamma
    bool conservative = false;
    Vec positive_witness;  // d >> 0 with d^T Gamma = 0, when conservative
};

ConservationLaws conservation_laws(const Mat& gamma);

// Network with one species and one output reaction per digraph node, so
// that the stoichiometry equals -L^T after clearing denominators.
ReactionNetwork laplacian_to_crn(const Mat& laplacian);

}  // namespace crnlyap
