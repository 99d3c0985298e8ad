#include "crnlyap/checker.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "crnlyap/lp.hpp"

namespace crnlyap {

namespace {

// Reactant species of each reaction (the alpha pattern).
std::vector<std::set<int>> reactant_sets(const ReactionNetwork& net) {
    std::vector<std::set<int>> M(net.num_reactions());
    for (int j = 0; j < net.num_reactions(); ++j)
        for (const auto& [i, a] : net.reactions[j].reactants) M[j].insert(i);
    return M;
}

// Species appearing as reactants of reactions in supp(c).
std::vector<int> reactant_species_of_row(const Vec& c,
                                         const std::vector<std::set<int>>& M) {
    std::set<int> I;
    for (int j = 0; j < int(c.size()); ++j)
        if (!is_zero(c[j])) I.insert(M[j].begin(), M[j].end());
    return {I.begin(), I.end()};
}

// Shared weak sign of {c_j : j in supp(c), i reactant of j}; 0 when the
// signs mix (condition a) fails), +1/-1 otherwise.
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

// Feasibility of c^T = xi^T Sigma_k H, xi >= 0, 1^T xi >= 1.
std::optional<Vec> solve_c1(const Partition& part, const std::vector<int>& signature,
                            const Vec& c) {
    const int p = part.H.rows(), nu = part.H.cols();
    LinearProgram lp;
    lp.A = Mat(nu + 1, p);
    for (int j = 0; j < nu; ++j)
        for (int t = 0; t < p; ++t) lp.A(j, t) = Rational(signature[t]) * part.H(t, j);
    for (int t = 0; t < p; ++t) lp.A(nu, t) = 1;
    lp.rel.assign(nu, Rel::Eq);
    lp.rel.push_back(Rel::Ge);
    lp.b = c;
    lp.b.push_back(Rational(1));
    lp.bounds.assign(p, VarBound::nonneg());
    LpOutcome out = solve(lp);
    if (out.status != LpStatus::Feasible) return std::nullopt;
    return out.witness;
}

// Equality-feasibility of sum_l lambda_l cols[l] = target with lambda >= 0,
// restricted to the allowed column indices.
std::optional<std::vector<std::pair<int, Rational>>> solve_conic(
    const std::vector<Vec>& cols, const std::vector<int>& allowed, const Vec& target) {
    const int nu = int(target.size());
    LinearProgram lp;
    lp.A = Mat(nu, int(allowed.size()));
    for (int j = 0; j < nu; ++j)
        for (size_t t = 0; t < allowed.size(); ++t) lp.A(j, int(t)) = cols[allowed[t]][j];
    lp.rel.assign(nu, Rel::Eq);
    lp.b = target;
    lp.bounds.assign(allowed.size(), VarBound::nonneg());
    LpOutcome out = solve(lp);
    if (out.status != LpStatus::Feasible) return std::nullopt;
    std::vector<std::pair<int, Rational>> sparse;
    for (size_t t = 0; t < allowed.size(); ++t)
        if (!is_zero(out.witness[t])) sparse.emplace_back(allowed[t], out.witness[t]);
    return sparse;
}

std::vector<std::pair<int, Rational>> greedy_prune(
    const std::vector<Vec>& cols, std::vector<std::pair<int, Rational>> lambda,
    const Vec& target) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t drop = 0; drop < lambda.size(); ++drop) {
            std::vector<int> allowed;
            for (size_t t = 0; t < lambda.size(); ++t)
                if (t != drop) allowed.push_back(lambda[t].first);
            auto smaller = solve_conic(cols, allowed, target);
            if (smaller) {
                lambda = std::move(*smaller);
                changed = true;
                break;
            }
        }
    }
    return lambda;
}

// LaSalle closure: regions reachable from {k} through the L map, and the
// reactant species they collect.
std::vector<int> lasalle_closure(int k, const std::function<std::vector<int>(int)>& L,
                                 const std::function<std::vector<int>(int)>& I) {
    std::set<int> regions{k};
    std::vector<int> frontier{k};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int l : frontier)
            for (int t : L(l))
                if (regions.insert(t).second) next.push_back(t);
        frontier = std::move(next);
    }
    std::set<int> species;
    for (int l : regions) {
        auto si = I(l);
        species.insert(si.begin(), si.end());
    }
    return {species.begin(), species.end()};
}

bool rowspace_membership(const Mat& gamma, const std::vector<int>& ibar, const Vec& c) {
    if (ibar.empty()) return is_zero_vec(c);
    Mat sub(0, gamma.cols());
    for (int i : ibar) sub.append_row(gamma.row(i));
    return in_rowspace(sub, c);
}

// ---------------------------------------------------------------------------
// General-form engine: assignment inference (C1), then C3/C4/LaSalle on it.

struct GeneralEngine {
    const PwlrCertificate& cert;
    const Mat& gamma;
    Partition part;
    int half = 0;  // m/2
    std::vector<std::set<int>> M;

    struct Cand {
        int row, sgn;
        Vec xi;
    };
    std::vector<std::vector<Cand>> feasible;  // per half-region

    bool c1 = false, c3 = false, convex_flag = false;
    std::vector<int> row_of, sign_of;
    std::vector<Vec> xi;
    std::vector<std::tuple<int, int, Rational>> eta;

    bool c4 = false;
    std::vector<C4Witness> witnesses;
    // per half-region: reachable full-region set L_k and reactants I_k
    std::vector<std::vector<int>> Lk, Ik;

    GeneralEngine(const PwlrCertificate& cert, const Mat& gamma,
                  const ReactionNetwork* net)
        : cert(cert), gamma(gamma), part(build_partition(cert.H)) {
        half = part.num_regions() / 2;
        if (net) M = reactant_sets(*net);
    }

    Vec assigned_row(int region) const {  // any full region index
        if (region >= half) return -assigned_row(part.num_regions() - 1 - region);
        return Rational(sign_of[region]) * cert.C.row(row_of[region]);
    }

    void compute_feasible() {
        feasible.assign(half, {});
        for (int k = 0; k < half; ++k)
            for (int row = 0; row < cert.C.rows(); ++row)
                for (int sgn : {1, -1}) {
                    Vec c = Rational(sgn) * cert.C.row(row);
                    auto w = solve_c1(part, part.regions[k].signature, c);
                    if (w) feasible[k].push_back({row, sgn, std::move(*w)});
                }
    }

    // C3 on a tentative assignment; fills eta/convex_flag when it passes.
    bool c3_consistent(bool record) {
        std::vector<std::tuple<int, int, Rational>> found;
        bool convex = true;
        for (const auto& nb : part.neighbors) {
            Vec d = assigned_row(nb.k) - assigned_row(nb.j);
            Vec h = part.reduced.row(nb.switched);
            Rational e = 0;
            if (!is_zero_vec(d)) {
                int j0 = 0;
                while (is_zero(h[j0])) ++j0;
                e = d[j0] / h[j0];
                if (d != e * h) return false;
            }
            if (sign(e) * part.regions[nb.k].reduced_signature[nb.switched] < 0)
                convex = false;
            if (record) found.emplace_back(nb.k, nb.j, e);
        }
        if (record) {
            eta = std::move(found);
            convex_flag = convex;
        }
        return true;
    }

    bool backtrack(int k, std::vector<bool>& used, bool require_c3, long& budget) {
        if (k == half) {
            if (!require_c3) return true;
            return c3_consistent(false);
        }
        for (const Cand& cand : feasible[k]) {
            if (used[cand.row]) continue;
            if (--budget < 0) return false;
            used[cand.row] = true;
            row_of[k] = cand.row;
            sign_of[k] = cand.sgn;
            xi[k] = cand.xi;
            if (backtrack(k + 1, used, require_c3, budget)) return true;
            used[cand.row] = false;
        }
        return false;
    }

    // Infers the row-to-region pairing; C1 passes if some bijection exists,
    // C3 if one of them also satisfies the continuity identities.
    void infer_assignment() {
        row_of.assign(half, -1);
        sign_of.assign(half, 1);
        xi.assign(half, {});
        if (cert.C.rows() != half) return;  // row count mismatch: C1 fails
        compute_feasible();
        std::vector<bool> used(cert.C.rows(), false);
        long budget = 200000;
        if (backtrack(0, used, /*require_c3=*/true, budget)) {
            c1 = true;
            c3 = true;
            c3_consistent(true);
            return;
        }
        used.assign(cert.C.rows(), false);
        budget = 200000;
        c1 = backtrack(0, used, /*require_c3=*/false, budget);
    }

    void run_c4() {
        if (!c1) return;
        c4 = true;
        Lk.assign(half, {});
        Ik.assign(half, {});
        for (int k = 0; k < half; ++k) {
            Vec c = assigned_row(k);
            Ik[k] = reactant_species_of_row(c, M);
            std::vector<int> facet_rows = part.switched_rows(k);
            std::vector<Vec> cols(part.reduced.rows());
            for (int t : facet_rows)
                cols[t] = Rational(part.regions[k].reduced_signature[t]) *
                          part.reduced.row(t);
            std::set<int> reach;
            for (int i : Ik[k]) {
                int nu = shared_sign(c, i, M);
                if (nu == 0) { c4 = false; continue; }
                auto lam = solve_conic(cols, facet_rows, Rational(-nu) * gamma.row(i));
                if (!lam) { c4 = false; continue; }
                C4Witness w;
                w.k = k;
                w.species = i;
                w.nu = nu;
                w.lambda = std::move(*lam);
                for (const auto& [t, v] : w.lambda)
                    for (const auto& nb : part.neighbors)
                        if (nb.k == k && nb.switched == t) reach.insert(nb.j);
                witnesses.push_back(std::move(w));
            }
            Lk[k] = {reach.begin(), reach.end()};
        }
    }

    // C5i over the full region set, using the mirror symmetry of L and I.
    bool lasalle(std::vector<std::vector<int>>& ibar_out) {
        const int m = part.num_regions();
        auto I = [&](int l) { return Ik[l < half ? l : m - 1 - l]; };
        auto L = [&](int l) {
            if (l < half) return Lk[l];
            std::vector<int> mirrored;
            for (int t : Lk[m - 1 - l]) mirrored.push_back(m - 1 - t);
            return mirrored;
        };
        bool ok = true;
        ibar_out.clear();
        for (int k = 0; k < half; ++k) {
            std::vector<int> ibar = lasalle_closure(k, L, I);
            if (int(ibar.size()) != gamma.rows()) ok = false;
            ibar_out.push_back(std::move(ibar));
        }
        return ok;
    }
};

// ---------------------------------------------------------------------------
// Convex engine: C2' / C4' and the relaxed LaSalle condition C5'i.

struct ConvexEngine {
    const PwlrCertificate& cert;
    const Mat& gamma;
    std::vector<std::set<int>> M;
    int K;

    bool c2p = false, c4p = false;
    std::vector<C4Witness> witnesses;
    std::vector<std::vector<int>> Lk, Ik;  // per row, extended-index L sets

    ConvexEngine(const PwlrCertificate& cert, const Mat& gamma,
                 const ReactionNetwork& net)
        : cert(cert), gamma(gamma), M(reactant_sets(net)), K(cert.C.rows()) {}

    void run_conditions() {
        c2p = check_C2(cert.C, gamma);
        c4p = true;
        Lk.assign(K, {});
        Ik.assign(K, {});
        for (int k = 0; k < K; ++k) {
            Vec ck = cert.C.row(k);
            Ik[k] = reactant_species_of_row(ck, M);
            std::vector<Vec> cols(2 * K);
            std::vector<int> allowed;
            for (int l = 0; l < 2 * K; ++l) {
                if (l == k) continue;
                Vec d = ck - extended_row(cert.C, l);
                if (is_zero_vec(d)) continue;
                cols[l] = std::move(d);
                allowed.push_back(l);
            }
            std::set<int> reach;
            for (int i : Ik[k]) {
                int nu = shared_sign(ck, i, M);
                if (nu == 0) { c4p = false; continue; }
                Vec target = Rational(-nu) * gamma.row(i);
                auto lam = solve_conic(cols, allowed, target);
                if (!lam) { c4p = false; continue; }
                C4Witness w;
                w.k = k;
                w.species = i;
                w.nu = nu;
                w.lambda = greedy_prune(cols, std::move(*lam), target);
                for (const auto& [l, v] : w.lambda) reach.insert(l);
                witnesses.push_back(std::move(w));
            }
            Lk[k] = {reach.begin(), reach.end()};
        }
    }

    // C5i, relaxed per row to C5'i (c_k in the rowspace of Gamma_Ibar).
    bool lasalle(std::vector<std::vector<int>>& ibar_out,
                 std::vector<std::string>& notes) {
        auto I = [&](int e) { return Ik[e < K ? e : 2 * K - 1 - e]; };
        auto L = [&](int e) {
            if (e < K) return Lk[e];
            std::vector<int> mirrored;
            for (int t : Lk[2 * K - 1 - e]) mirrored.push_back(2 * K - 1 - t);
            return mirrored;
        };
        bool ok = true;
        ibar_out.clear();
        for (int k = 0; k < K; ++k) {
            std::vector<int> ibar = lasalle_closure(k, L, I);
            bool full = int(ibar.size()) == gamma.rows();
            if (!full && !rowspace_membership(gamma, ibar, cert.C.row(k))) {
                notes.push_back("LaSalle fails for row " + std::to_string(k));
                ok = false;
            }
            ibar_out.push_back(std::move(ibar));
        }
        return ok;
    }
};

void run_general(const PwlrCertificate& cert, const ReactionNetwork& net,
                 const Mat& gamma, CheckReport& rep) {
    if (!kernel_equal(cert.H, gamma)) {
        rep.notes.push_back("ker H differs from ker Gamma");
        return;
    }
    GeneralEngine eng(cert, gamma, &net);
    if (!eng.part.mu) rep.notes.push_back("H has no strictly positive kernel vector");
    eng.infer_assignment();
    rep.c1 = eng.c1;
    rep.c3 = eng.c3;
    rep.convex_flag = eng.convex_flag;
    rep.region_row = eng.row_of;
    rep.region_sign = eng.sign_of;
    rep.xi = eng.xi;
    rep.eta = eng.eta;
    rep.c2 = check_C2(cert.C, gamma);
    if (rep.c1) {
        eng.run_c4();
        rep.c4 = eng.c4;
        rep.c4_witnesses = eng.witnesses;
        if (rep.c4) rep.lasalle_interior_pass = eng.lasalle(rep.ibar);
    }
    rep.conditions_pass = rep.c1 && rep.c2 && rep.c3 && rep.c4;
}

void run_convex(const PwlrCertificate& cert, const ReactionNetwork& net,
                const Mat& gamma, CheckReport& rep) {
    ConvexEngine eng(cert, gamma, net);
    eng.run_conditions();
    rep.c2prime = eng.c2p;
    rep.c4prime = eng.c4p;
    rep.c4_witnesses = eng.witnesses;
    if (!positive_vector_in_kernel(cert.C))
        rep.notes.push_back("ker C has no strictly positive vector");
    if (rep.c4prime) rep.lasalle_interior_pass = eng.lasalle(rep.ibar, rep.notes);
    rep.conditions_pass = rep.c2prime && rep.c4prime;
}

void run_conditions(const PwlrCertificate& cert, const ReactionNetwork& net,
                    CheckReport& rep) {
    Mat gamma = stoichiometry(net);
    rep.form = cert.form;
    if (cert.form == CertForm::General)
        run_general(cert, net, gamma, rep);
    else
        run_convex(cert, net, gamma, rep);
}

void run_subnetworks(const PwlrCertificate& cert, const ReactionNetwork& net,
                     const ReanalyzeFn& reanalyze, CheckReport& rep) {
    rep.lasalle_pass = rep.lasalle_interior_pass;
    for (const Subnetwork& sub : critical_subnetworks_mapped(net)) {
        std::string name = "subnetwork {";
        for (size_t i = 0; i < sub.net.species.size(); ++i)
            name += (i ? "," : "") + sub.net.species[i];
        name += "}";
        bool ok = false;
        try {
            PwlrCertificate projected = project_certificate(cert, sub.reaction_of);
            CheckReport subrep;
            run_conditions(projected, sub.net, subrep);
            ok = subrep.conditions_pass && subrep.lasalle_interior_pass;
            if (ok) {
                rep.subnetwork_log.push_back(name + ": projected certificate passes");
                continue;
            }
        } catch (const std::invalid_argument&) {
            // projection degenerated; fall through to re-analysis
        }
        if (reanalyze && reanalyze(sub.net)) {
            rep.subnetwork_log.push_back(name + ": re-analyzed from scratch, passes");
            ok = true;
        }
        if (!ok) {
            rep.subnetwork_log.push_back(name + ": LaSalle condition fails");
            rep.lasalle_pass = false;
        }
    }
}

}  // namespace

bool check_C2(const Mat& C, const Mat& gamma) { return kernel_equal(C, gamma); }

CheckReport check_C1(const PwlrCertificate& cert, const Partition& partition) {
    CheckReport rep;
    rep.form = cert.form;
    PwlrCertificate tmp = cert;
    tmp.H = partition.H;
    GeneralEngine eng(tmp, partition.H, nullptr);
    eng.infer_assignment();
    rep.c1 = eng.c1;
    rep.region_row = eng.row_of;
    rep.region_sign = eng.sign_of;
    rep.xi = eng.xi;
    return rep;
}

CheckReport check_C3(const PwlrCertificate& cert, const Partition& partition) {
    CheckReport rep = check_C1(cert, partition);
    PwlrCertificate tmp = cert;
    tmp.H = partition.H;
    GeneralEngine eng(tmp, partition.H, nullptr);
    eng.infer_assignment();
    rep.c3 = eng.c3;
    rep.convex_flag = eng.convex_flag;
    rep.eta = eng.eta;
    return rep;
}

CheckReport check_C4(const PwlrCertificate& cert, const Partition& partition,
                     const ReactionNetwork& net) {
    CheckReport rep;
    rep.form = cert.form;
    Mat gamma = stoichiometry(net);
    PwlrCertificate tmp = cert;
    tmp.H = partition.H;
    GeneralEngine eng(tmp, gamma, &net);
    eng.infer_assignment();
    rep.c1 = eng.c1;
    if (eng.c1) {
        eng.run_c4();
        rep.c4 = eng.c4;
        rep.c4_witnesses = eng.witnesses;
    }
    return rep;
}

CheckReport check_convex(const PwlrCertificate& cert, const ReactionNetwork& net) {
    CheckReport rep;
    Mat gamma = stoichiometry(net);
    rep.form = CertForm::Convex;
    run_convex(cert, net, gamma, rep);
    return rep;
}

CheckReport lasalle_interior(const PwlrCertificate& cert, const ReactionNetwork& net) {
    CheckReport rep;
    run_conditions(cert, net, rep);
    return rep;
}

CheckReport lasalle_full(const PwlrCertificate& cert, const ReactionNetwork& net,
                         const ReanalyzeFn& reanalyze) {
    CheckReport rep;
    run_conditions(cert, net, rep);
    run_subnetworks(cert, net, reanalyze, rep);
    return rep;
}

CheckReport check_certificate(const PwlrCertificate& cert, const ReactionNetwork& net,
                              const ReanalyzeFn& reanalyze) {
    CheckReport rep = lasalle_full(cert, net, reanalyze);
    rep.pass = rep.conditions_pass && rep.lasalle_pass;
    return rep;
}

Rational evaluate(const PwlrCertificate& cert, const Vec& r) {
    if (cert.form == CertForm::Convex) {
        Rational best = 0;
        for (int k = 0; k < cert.C.rows(); ++k) {
            Rational v = rational_abs(dot(cert.C.row(k), r));
            if (v > best) best = v;
        }
        return best;
    }
    PwlrCertificate tmp = cert;
    GeneralEngine eng(tmp, cert.H, nullptr);
    eng.infer_assignment();
    if (!eng.c1)
        throw std::logic_error("certificate rows cannot be matched to regions");
    std::vector<int> hits = locate(eng.part, r);
    if (hits.empty()) throw std::logic_error("partition does not cover the point");
    std::optional<Rational> value;
    for (int l : hits) {
        Rational v = rational_abs(dot(eng.assigned_row(l), r));
        if (value && *value != v)
            throw std::logic_error("linear pieces disagree on a shared boundary");
        value = v;
    }
    return *value;
}

PwlrCertificate project_certificate(const PwlrCertificate& cert,
                                    const std::vector<int>& reaction_of) {
    PwlrCertificate out;
    out.form = cert.form;
    std::vector<Vec> rows;
    for (int k = 0; k < cert.C.rows(); ++k) {
        Vec full = cert.C.row(k);
        Vec sub(reaction_of.size());
        for (size_t j = 0; j < reaction_of.size(); ++j) sub[j] = full[reaction_of[j]];
        rows.push_back(std::move(sub));
    }
    out.C = dedupe_rows_keep_scale(rows, int(reaction_of.size()));
    if (out.C.rows() == 0)
        throw std::invalid_argument("certificate vanishes on the subnetwork");
    if (cert.form == CertForm::General) {
        std::vector<Vec> hrows;
        for (int t = 0; t < cert.H.rows(); ++t) {
            Vec full = cert.H.row(t);
            Vec sub(reaction_of.size());
            for (size_t j = 0; j < reaction_of.size(); ++j) sub[j] = full[reaction_of[j]];
            if (!is_zero_vec(sub)) hrows.push_back(std::move(sub));
        }
        if (hrows.empty())
            throw std::invalid_argument("partition matrix vanishes on the subnetwork");
        out.H = Mat::from_rows(hrows, int(reaction_of.size()));
    }
    return out;
}

}  // namespace crnlyap
