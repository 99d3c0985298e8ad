#include "crnlyap/construct.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "crnlyap/lp.hpp"
#include "crnlyap/necessary.hpp"

namespace crnlyap {

namespace {

std::vector<std::set<int>> reactant_sets(const ReactionNetwork& net) {
    std::vector<std::set<int>> M(net.num_reactions());
    for (int j = 0; j < net.num_reactions(); ++j)
        for (const auto& [i, a] : net.reactions[j].reactants) M[j].insert(i);
    return M;
}

int shared_sign(const Vec& c, int i, const std::vector<std::set<int>>& M) {
    int nu = 0;
    for (int j = 0; j < int(c.size()); ++j) {
        if (is_zero(c[j]) || !M[j].count(i)) continue;
        int s = sign(c[j]);
        if (nu == 0)
            nu = s;
        else if (s != nu)
            return 0;
    }
    return nu;
}

// Eq-style diagonal sign constraints for a sign region: +1 for inflows, 0
// when the region mixes reactant signs, else the negated common sign.
std::vector<int> b_diagonal(const ReactionNetwork& net, const std::vector<int>& signature) {
    std::vector<int> b(net.num_reactions(), 0);
    for (int j = 0; j < net.num_reactions(); ++j) {
        const auto& reactants = net.reactions[j].reactants;
        if (reactants.empty()) {
            b[j] = 1;
            continue;
        }
        int common = 0;
        bool mixed = false;
        for (const auto& [i, a] : reactants) {
            int s = signature[i];
            if (common == 0)
                common = s;
            else if (s != common)
                mixed = true;
        }
        b[j] = mixed ? 0 : -common;
    }
    return b;
}

PwlrCertificate make_convex(const Mat& C) {
    PwlrCertificate cert;
    cert.form = CertForm::Convex;
    std::vector<Vec> rows;
    for (int k = 0; k < C.rows(); ++k) rows.push_back(C.row(k));
    cert.C = dedupe_rows_keep_scale(rows, C.cols());
    return cert;
}

// Final gate of every method: the checker must confirm the certificate.
bool self_check(ConstructionOutcome& out, const ReactionNetwork& net,
                PwlrCertificate cert) {
    CheckReport rep = check_certificate(cert, net);
    out.report = rep;
    if (!rep.conditions_pass) {
        out.diagnostics += (out.diagnostics.empty() ? "" : "; ");
        out.diagnostics += "self-check failed";
        return false;
    }
    out.certificate = std::move(cert);
    return true;
}

}  // namespace

ConstructionOutcome construct_lp(const ReactionNetwork& net, const Mat* hhat,
                                 bool want_convex, int max_regions, int c2_retries) {
    ConstructionOutcome out;
    out.method = Method::LP;
    Mat gamma = stoichiometry(net);
    const int nu = gamma.cols();
    if (!positive_vector_in_kernel(gamma)) {
        out.diagnostics = "no strictly positive kernel vector (kernel assumption fails)";
        return out;
    }
    RefinedPartition ref = refine_with_sign_regions(gamma, hhat ? *hhat : Mat(0, nu));
    const Partition& part = ref.partition;
    const int half = part.num_regions() / 2;
    const int p = part.H.rows();
    if (half > max_regions) {
        out.diagnostics = "partition too large (" + std::to_string(half) +
                          " half-regions, cap " + std::to_string(max_regions) + ")";
        return out;
    }
    std::vector<std::vector<int>> b_of_sign;
    for (const Region& s : ref.sign_regions.regions)
        b_of_sign.push_back(b_diagonal(net, s.signature));
    std::set<int> inflow;
    for (int j = 0; j < net.num_reactions(); ++j)
        if (net.reactions[j].reactants.empty()) inflow.insert(j);

    // Deduplicated continuity constraints: ordered pairs (k,j), k < j, with
    // k in the first half and the mirrored pair not already enumerated.
    const int m = part.num_regions();
    struct Pair { int k, j, switched, eta_var; };
    std::vector<Pair> pairs;
    for (const auto& nb : part.neighbors) {
        if (nb.k >= nb.j || nb.k >= half) continue;
        if (m - 1 - nb.j < nb.k) continue;  // mirror pair comes first
        pairs.push_back({nb.k, nb.j, nb.switched, 0});
    }

    // Variable layout: c (half*nu, free), xi (half*p, >=0),
    // zeta (half*nu, >=0 off inflows), eta (one per pair), joint slack t.
    const int c0 = 0, xi0 = half * nu, zeta0 = xi0 + half * p;
    const int eta0 = zeta0 + half * nu;
    const int tvar = eta0 + int(pairs.size());
    const int nvars = tvar + 1;
    for (size_t t = 0; t < pairs.size(); ++t) pairs[t].eta_var = eta0 + int(t);

    LinearProgram lp;
    lp.A = Mat(0, nvars);
    auto c_var = [&](int k, int j) { return c0 + k * nu + j; };
    auto add_row = [&](const Vec& row, Rel rel, Rational rhs) {
        lp.A.append_row(row);
        lp.rel.push_back(rel);
        lp.b.push_back(std::move(rhs));
    };
    // Coefficient of c_l[j] in the expression for region index l (mirror
    // rows carry a minus sign).
    auto c_coef = [&](Vec& row, int l, int j, const Rational& w) {
        if (l < half)
            row[c_var(l, j)] += w;
        else
            row[c_var(m - 1 - l, j)] -= w;
    };

    for (int k = 0; k < half; ++k) {
        const Region& reg = part.regions[k];
        for (int j = 0; j < nu; ++j) {
            Vec row(nvars, Rational(0));  // c_k = xi_k^T Sigma_k H
            row[c_var(k, j)] = 1;
            for (int t = 0; t < p; ++t)
                row[xi0 + k * p + t] = Rational(-reg.signature[t]) * part.H(t, j);
            add_row(row, Rel::Eq, 0);
        }
        const std::vector<int>& b = b_of_sign[ref.q[k]];
        for (int j = 0; j < nu; ++j) {
            Vec row(nvars, Rational(0));  // c_k = zeta_k^T B_{q_k}
            row[c_var(k, j)] = 1;
            row[zeta0 + k * nu + j] = Rational(-b[j]);
            add_row(row, Rel::Eq, 0);
        }
        Vec row(nvars, Rational(0));  // joint strictness: 1^T xi_k >= t
        for (int t = 0; t < p; ++t) row[xi0 + k * p + t] = 1;
        row[tvar] = -1;
        add_row(row, Rel::Ge, 0);
    }
    {
        Vec row(nvars, Rational(0));
        row[tvar] = 1;
        add_row(row, Rel::Le, 1);
    }
    for (const Pair& pr : pairs) {
        Vec h = part.reduced.row(pr.switched);
        int sig = part.regions[pr.k].reduced_signature[pr.switched];
        for (int j = 0; j < nu; ++j) {
            Vec row(nvars, Rational(0));  // c_k - c_j = eta sigma h
            c_coef(row, pr.k, j, 1);
            c_coef(row, pr.j, j, -1);
            row[pr.eta_var] = Rational(-sig) * h[j];
            add_row(row, Rel::Eq, 0);
        }
    }

    lp.bounds.assign(nvars, VarBound::free());
    for (int t = xi0; t < zeta0; ++t) lp.bounds[t] = VarBound::nonneg();
    for (int k = 0; k < half; ++k)
        for (int j = 0; j < nu; ++j)
            if (!inflow.count(j)) lp.bounds[zeta0 + k * nu + j] = VarBound::nonneg();
    if (want_convex)
        for (size_t t = 0; t < pairs.size(); ++t) lp.bounds[eta0 + t] = VarBound::nonneg();

    // Joint max-t: the strict conditions hold iff the optimum is positive
    // (cone: any positive-t point scales to t = 1).
    {
        Vec obj(nvars, Rational(0));
        obj[tvar] = 1;
        lp.objective = obj;
    }
    LpOutcome maxed = solve(lp);
    if (maxed.status != LpStatus::Feasible || !maxed.optimal ||
        sign(*maxed.optimal) <= 0) {
        // Harvest a Farkas certificate from the equivalent t >= 1 program.
        LinearProgram hard = lp;
        hard.objective.reset();
        Vec row(nvars, Rational(0));
        row[tvar] = 1;
        hard.A.append_row(row);
        hard.rel.push_back(Rel::Ge);
        hard.b.push_back(1);
        LpOutcome sol = solve(hard);
        out.farkas = sol.farkas;
        out.diagnostics = verify_certificate(hard, sol)
                              ? "linear program infeasible (Farkas verified)"
                              : "linear program infeasible";
        return out;
    }

    // Pin t away from zero for the rank retries (valid by cone scaling).
    {
        Vec row(nvars, Rational(0));
        row[tvar] = 1;
        lp.A.append_row(row);
        lp.rel.push_back(Rel::Ge);
        lp.b.push_back(1);
    }
    std::mt19937 rng(20240817);
    Mat C(half, nu);
    for (int attempt = 0; attempt <= c2_retries; ++attempt) {
        LpOutcome sol;
        if (attempt == 0) {
            sol = maxed;
        } else {
            // Push towards a different vertex: minimize a fresh positive
            // combination of the xi variables (bounded, deterministic).
            Vec obj(nvars, Rational(0));
            std::uniform_int_distribution<int> coef(1, 97);
            for (int t = xi0; t < zeta0; ++t) obj[t] = rat(-coef(rng));
            lp.objective = obj;
            sol = solve(lp);
            if (sol.status != LpStatus::Feasible) continue;
        }
        for (int k = 0; k < half; ++k)
            for (int j = 0; j < nu; ++j) C(k, j) = sol.witness[c_var(k, j)];
        if (kernel_equal(C, gamma)) {
            out.c2_status = "resolved";
            break;
        }
        out.c2_status = "unresolved";
    }
    if (out.c2_status != "resolved") {
        out.diagnostics = "feasible but rank condition unresolved after retries";
        return out;
    }
    if (want_convex) {
        self_check(out, net, make_convex(C));
    } else {
        PwlrCertificate cert;
        cert.form = CertForm::General;
        cert.C = C;
        cert.H = part.H;
        self_check(out, net, std::move(cert));
    }
    return out;
}

ConstructionOutcome construct_iterative(const ReactionNetwork& net, const Mat* C0,
                                        int max_iter) {
    ConstructionOutcome out;
    out.method = Method::Iterative;
    Mat gamma = stoichiometry(net);
    auto M = reactant_sets(net);

    // |c| = |-c|: keep one representative per sign pair, exact scales intact
    // (scale matters to the fixpoint; parallel rows are only merged at the end).
    auto canon_sign = [](const Vec& v) {
        for (const auto& q : v) {
            if (sign(q) > 0) return v;
            if (sign(q) < 0) return -v;
        }
        return v;
    };
    std::set<Vec> rows;
    auto add_to = [&](std::set<Vec>& target, const Vec& v) {
        if (!is_zero_vec(v)) target.insert(canon_sign(v));
    };
    auto add = [&](const Vec& v) { add_to(rows, v); };
    if (C0) {
        for (const Vec& v : kernel_basis(gamma))
            if (!is_zero_vec(mat_vec(*C0, v)))
                throw std::invalid_argument("ker Gamma not contained in ker C0");
        for (int i = 0; i < C0->rows(); ++i) add(C0->row(i));
    } else {
        for (int i = 0; i < gamma.rows(); ++i) add(gamma.row(i));
    }
    if (rows.empty()) throw std::invalid_argument("empty starting matrix");

    bool fixpoint = false;
    for (int round = 1; round <= max_iter; ++round) {
        std::set<Vec> next = rows;
        for (const Vec& c : rows) {
            for (int i = 0; i < gamma.rows(); ++i) {
                bool touches = false;
                for (int j = 0; j < int(c.size()); ++j)
                    if (!is_zero(c[j]) && M[j].count(i)) { touches = true; break; }
                if (!touches) continue;
                int nu = shared_sign(c, i, M);
                if (nu != 0) {
                    add_to(next, c + Rational(nu) * gamma.row(i));
                } else {
                    // Mixed signs leave the permissible half-space ambiguous;
                    // cover both, which pins the region to the hyperplane.
                    add_to(next, c + gamma.row(i));
                    add_to(next, c - gamma.row(i));
                }
            }
        }
        out.iteration_rows.push_back(int(next.size()));
        if (next == rows) {
            fixpoint = true;
            break;
        }
        rows = std::move(next);
    }
    if (!fixpoint) {
        out.diagnostics =
            "did not terminate in " + std::to_string(max_iter) + " rounds";
        return out;
    }
    // linearly dependent pairs collapse onto the dominating scale
    Mat C = dedupe_rows_keep_scale(std::vector<Vec>(rows.begin(), rows.end()),
                                   gamma.cols());
    if (!kernel_equal(C, gamma)) {
        out.diagnostics = "fixpoint reached but kernel condition fails";
        return out;
    }
    self_check(out, net, make_convex(C));
    return out;
}

namespace {

// Theorem hypotheses shared by the two max-min constructions.
std::optional<Vec> maxmin_kernel_direction(const Mat& gamma, std::string& why) {
    auto basis = kernel_basis(gamma);
    if (basis.size() != 1) {
        why = "kernel dimension is " + std::to_string(basis.size()) + ", need 1";
        return std::nullopt;
    }
    for (int i = 0; i < gamma.rows(); ++i) {
        int negatives = 0;
        for (int j = 0; j < gamma.cols(); ++j)
            if (sign(gamma(i, j)) < 0) ++negatives;
        if (negatives != 1) {
            why = "species row " + std::to_string(i) + " has " +
                  std::to_string(negatives) + " negative entries, need exactly 1";
            return std::nullopt;
        }
    }
    Vec v = basis[0];
    bool pos = true, neg = true;
    for (const auto& x : v) {
        if (sign(x) <= 0) pos = false;
        if (sign(x) >= 0) neg = false;
    }
    if (neg) v = -v;
    if (!pos && !neg) {
        why = "kernel direction is not strictly positive";
        return std::nullopt;
    }
    return v;
}

Mat maxmin_rows(const std::vector<Vec>& terms, int cols) {
    Mat C(0, cols);
    for (size_t q = 0; q < terms.size(); ++q)
        for (size_t s = q + 1; s < terms.size(); ++s) C.append_row(terms[q] - terms[s]);
    return C;
}

void evaluate_claims(ConstructionOutcome& out, const ReactionNetwork& net) {
    bool common = true;
    std::vector<std::set<int>> anc;
    for (int j = 0; j < net.num_reactions(); ++j) anc.push_back(ancestors(net, j));
    for (int j = 0; j < net.num_reactions() && common; ++j)
        for (int l = j; l < net.num_reactions() && common; ++l) {
            bool inter = false;
            for (int a : anc[j])
                if (anc[l].count(a)) { inter = true; break; }
            common = inter;
        }
    out.common_ancestor_claim = common;
    out.conservative_claim = conservation_laws(stoichiometry(net)).conservative;
}

}  // namespace

ConstructionOutcome construct_maxmin(const ReactionNetwork& net) {
    ConstructionOutcome out;
    out.method = Method::MaxMin;
    Mat gamma = stoichiometry(net);
    std::string why;
    auto v = maxmin_kernel_direction(gamma, why);
    if (!v) {
        out.diagnostics = "hypothesis failure: " + why;
        return out;
    }
    const int nu = gamma.cols();
    std::vector<Vec> terms;
    for (int q = 0; q < nu; ++q) {
        Vec e(nu, Rational(0));
        e[q] = 1 / (*v)[q];
        terms.push_back(std::move(e));
    }
    evaluate_claims(out, net);
    PwlrCertificate cert;
    cert.form = CertForm::Convex;
    cert.C = maxmin_rows(terms, nu);
    self_check(out, net, std::move(cert));
    return out;
}

ConstructionOutcome construct_maxmin_reversible(const ReactionNetwork& net) {
    ConstructionOutcome out;
    out.method = Method::MaxMinReversible;
    const int nu = net.num_reactions();

    // Skeleton: drop the reverse half of each reversible pair.
    std::vector<int> skeleton;  // skeleton index -> original reaction
    for (int j = 0; j < nu; ++j)
        if (!net.is_reverse(j)) skeleton.push_back(j);
    ReactionNetwork skel;
    skel.species = net.species;
    for (int j : skeleton) {
        Reaction r = net.reactions[j];
        r.reverse_of.reset();
        skel.reactions.push_back(std::move(r));
    }
    Mat gamma_s = stoichiometry(skel);
    std::string why;
    auto v = maxmin_kernel_direction(gamma_s, why);
    if (!v) {
        out.diagnostics = "skeleton hypothesis failure: " + why;
        return out;
    }

    // Reversibility is only allowed for reactions that are the sole input of
    // every product species (within the skeleton).
    std::vector<std::set<int>> producers(net.num_species());
    for (size_t q = 0; q < skeleton.size(); ++q)
        for (const auto& [i, b] : skel.reactions[q].products) producers[i].insert(int(q));
    for (size_t q = 0; q < skeleton.size(); ++q) {
        const Reaction& orig = net.reactions[skeleton[q]];
        if (!orig.reverse_of) continue;
        for (const auto& [i, b] : skel.reactions[q].products)
            if (producers[i].size() > 1) {
                out.diagnostics = "reversible reaction " + std::to_string(skeleton[q]) +
                                  " is not the only input of species " + net.species[i];
                return out;
            }
    }

    std::vector<Vec> terms;
    for (size_t q = 0; q < skeleton.size(); ++q) {
        Vec t(nu, Rational(0));
        Rational w = 1 / (*v)[q];
        t[skeleton[q]] = w;
        const auto& rev = net.reactions[skeleton[q]].reverse_of;
        if (rev) t[*rev] = -w;  // chi = 1 for reactions with an added reverse
        terms.push_back(std::move(t));
    }
    evaluate_claims(out, net);
    PwlrCertificate cert;
    cert.form = CertForm::Convex;
    cert.C = maxmin_rows(terms, nu);
    self_check(out, net, std::move(cert));
    return out;
}

}  // namespace crnlyap
