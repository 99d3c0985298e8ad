#include "crnlyap/network.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "crnlyap/lp.hpp"

namespace crnlyap {

namespace {

struct LineScanner {
    const std::string& s;
    int line;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    int col() const { return int(pos) + 1; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(line, col(), msg);
    }
};

bool is_name_start(char c) { return std::isalpha(unsigned(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(unsigned(c)) || c == '_'; }

// complex: "0" or "coef Name + coef Name + ..."
std::map<std::string, int> parse_complex(LineScanner& sc) {
    std::map<std::string, int> terms;
    bool first = true;
    for (;;) {
        sc.skip_ws();
        if (sc.done()) {
            if (first) sc.fail("empty complex (use '0')");
            sc.fail("trailing '+'");
        }
        int coef = 1;
        if (std::isdigit(unsigned(sc.s[sc.pos]))) {
            size_t start = sc.pos;
            while (sc.pos < sc.s.size() && std::isdigit(unsigned(sc.s[sc.pos]))) ++sc.pos;
            coef = std::stoi(sc.s.substr(start, sc.pos - start));
            sc.skip_ws();
        }
        if (sc.pos < sc.s.size() && is_name_start(sc.s[sc.pos])) {
            size_t start = sc.pos;
            while (sc.pos < sc.s.size() && is_name_char(sc.s[sc.pos])) ++sc.pos;
            std::string name = sc.s.substr(start, sc.pos - start);
            if (coef <= 0) sc.fail("zero stoichiometric coefficient");
            terms[name] += coef;
        } else if (coef == 0 && first) {
            // bare "0": the empty complex
            sc.skip_ws();
            if (sc.pos < sc.s.size() && sc.s[sc.pos] == '+')
                sc.fail("'0' cannot be combined with species");
            return terms;
        } else {
            sc.fail("expected species name");
        }
        first = false;
        sc.skip_ws();
        if (sc.pos < sc.s.size() && sc.s[sc.pos] == '+') {
            ++sc.pos;
            continue;
        }
        return terms;
    }
}

}  // namespace

ReactionNetwork parse_network(const std::string& text) {
    ReactionNetwork net;
    std::map<std::string, int> index;
    bool explicit_species = false;

    auto species_id = [&](const std::string& name, LineScanner& sc) {
        auto it = index.find(name);
        if (it != index.end()) return it->second;
        if (explicit_species)
            sc.fail("unknown species '" + name + "' (not in species: header)");
        int id = net.num_species();
        index[name] = id;
        net.species.push_back(name);
        return id;
    };

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        LineScanner sc{raw, lineno};
        if (sc.done()) continue;

        if (raw.compare(sc.pos, 8, "species:") == 0) {
            sc.pos += 8;
            explicit_species = true;
            for (;;) {
                sc.skip_ws();
                if (sc.done()) break;
                if (!is_name_start(raw[sc.pos])) sc.fail("expected species name");
                size_t start = sc.pos;
                while (sc.pos < raw.size() && is_name_char(raw[sc.pos])) ++sc.pos;
                std::string name = raw.substr(start, sc.pos - start);
                if (index.count(name)) sc.fail("duplicate species '" + name + "'");
                index[name] = net.num_species();
                net.species.push_back(name);
            }
            continue;
        }

        auto lhs_terms = parse_complex(sc);
        sc.skip_ws();
        bool reversible = false;
        if (raw.compare(sc.pos, 3, "<->") == 0) {
            reversible = true;
            sc.pos += 3;
        } else if (raw.compare(sc.pos, 2, "->") == 0) {
            sc.pos += 2;
        } else {
            sc.fail("expected '->' or '<->'");
        }
        auto rhs_terms = parse_complex(sc);
        if (!sc.done()) sc.fail("unexpected trailing input");

        if (lhs_terms.empty() && rhs_terms.empty())
            sc.fail("reactant and product complexes cannot both be empty");

        Reaction fwd;
        for (const auto& [name, c] : lhs_terms) fwd.reactants[species_id(name, sc)] = c;
        for (const auto& [name, c] : rhs_terms) fwd.products[species_id(name, sc)] = c;
        for (const auto& [i, a] : fwd.reactants)
            if (fwd.products.count(i))
                sc.fail("autocatalytic species '" + net.species[i] +
                        "' (appears as both reactant and product)");

        int fwd_idx = net.num_reactions();
        net.reactions.push_back(fwd);
        if (reversible) {
            Reaction rev;
            rev.reactants = fwd.products;
            rev.products = fwd.reactants;
            rev.reverse_of = fwd_idx;
            net.reactions[fwd_idx].reverse_of = fwd_idx + 1;
            net.reactions.push_back(rev);
        }
    }
    if (net.reactions.empty() && net.species.empty())
        throw ParseError(lineno ? lineno : 1, 1, "no reactions in input");
    return net;
}

namespace {

std::string format_complex(const ReactionNetwork& net, const std::map<int, int>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [i, c] : terms) {
        if (!first) out += " + ";
        if (c != 1) out += std::to_string(c) + " ";
        out += net.species[i];
        first = false;
    }
    return out;
}

}  // namespace

std::string to_crn(const ReactionNetwork& net) {
    std::string out = "species:";
    for (const auto& s : net.species) out += " " + s;
    out += "\n";
    for (int j = 0; j < net.num_reactions(); ++j) {
        const Reaction& r = net.reactions[j];
        if (r.reverse_of && *r.reverse_of < j) continue;  // printed with forward
        out += format_complex(net, r.reactants);
        out += r.reverse_of ? " <-> " : " -> ";
        out += format_complex(net, r.products);
        out += "\n";
    }
    return out;
}

Mat stoichiometry(const ReactionNetwork& net) {
    Mat g(net.num_species(), net.num_reactions());
    for (int j = 0; j < net.num_reactions(); ++j) {
        for (const auto& [i, a] : net.reactions[j].reactants) g(i, j) -= a;
        for (const auto& [i, b] : net.reactions[j].products) g(i, j) += b;
    }
    return g;
}

std::optional<Vec> positive_vector_in_kernel(const Mat& A) {
    std::vector<Vec> basis = kernel_basis(A);
    if (basis.empty()) return std::nullopt;
    // Coordinates y over the basis; want (sum_k y_k u_k) >> 0.
    Mat M(A.cols(), int(basis.size()));
    for (int j = 0; j < A.cols(); ++j)
        for (int k = 0; k < int(basis.size()); ++k) M(j, k) = basis[k][j];
    auto y = strict_cone_interior(M);
    if (!y) return std::nullopt;
    return mat_vec(M, *y);
}

ConservationLaws conservation_laws(const Mat& gamma) {
    ConservationLaws out;
    out.basis = left_kernel_basis(gamma);
    auto w = positive_vector_in_kernel(gamma.transposed());
    if (w) {
        out.conservative = true;
        out.positive_witness = primitive_keep_sign(*w);
    }
    return out;
}

ReactionNetwork laplacian_to_crn(const Mat& laplacian) {
    const int n = laplacian.rows();
    if (laplacian.cols() != n) throw std::invalid_argument("Laplacian must be square");
    mpz_class den_lcm = 1;
    for (int i = 0; i < n; ++i) {
        Rational rowsum = 0;
        for (int j = 0; j < n; ++j) {
            rowsum += laplacian(i, j);
            if (i != j && sign(laplacian(i, j)) > 0)
                throw std::invalid_argument("not a Laplacian: positive off-diagonal");
            mpz_class l;
            mpz_lcm(l.get_mpz_t(), den_lcm.get_mpz_t(),
                    laplacian(i, j).get_den().get_mpz_t());
            den_lcm = l;
        }
        if (!is_zero(rowsum))
            throw std::invalid_argument("not a Laplacian: nonzero row sum");
    }
    ReactionNetwork net;
    for (int i = 0; i < n; ++i) net.species.push_back("X" + std::to_string(i + 1));
    Rational scale(den_lcm);
    for (int j = 0; j < n; ++j) {
        Rational diag = scale * laplacian(j, j);
        if (is_zero(diag)) continue;  // isolated node, no output reaction
        Reaction r;
        r.reactants[j] = int(diag.get_num().get_si());
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            Rational w = -scale * laplacian(j, i);
            if (sign(w) > 0) r.products[i] = int(w.get_num().get_si());
        }
        net.reactions.push_back(r);
    }
    return net;
}

}  // namespace crnlyap
