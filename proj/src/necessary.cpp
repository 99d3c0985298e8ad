#include "crnlyap/necessary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "crnlyap/lp.hpp"

namespace crnlyap {

SignRegions sign_regions(const ReactionNetwork& net) {
    SignRegions sr;
    Mat gamma = stoichiometry(net);
    Mat G(0, gamma.cols());
    for (int i = 0; i < gamma.rows(); ++i) {
        if (is_zero_vec(gamma.row(i))) continue;
        G.append_row(gamma.row(i));
        sr.row_species.push_back(i);
    }
    for (int j = 0; j < net.num_reactions(); ++j)
        if (net.reactions[j].reactants.empty()) sr.inflow.push_back(j);
    if (G.rows() == 0) return sr;
    sr.partition = build_partition(G);

    std::vector<int> species_to_row(net.num_species(), -1);
    for (size_t t = 0; t < sr.row_species.size(); ++t)
        species_to_row[sr.row_species[t]] = int(t);
    for (const Region& reg : sr.partition.regions) {
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
                // Reactant species always move (alpha > 0, AG1), so they have
                // a nonzero stoichiometry row and a sign in every region.
                int s = reg.signature[species_to_row[i]];
                if (common == 0)
                    common = s;
                else if (s != common)
                    mixed = true;
            }
            b[j] = mixed ? 0 : -common;
        }
        sr.b.push_back(std::move(b));
    }
    return sr;
}

Theorem8Result check_theorem8(const ReactionNetwork& net) {
    Theorem8Result res;
    SignRegions sr = sign_regions(net);
    Mat gamma = stoichiometry(net);
    auto basis = kernel_basis(gamma);
    const int nu = net.num_reactions();
    if (sr.partition.num_regions() == 0 || basis.empty()) return res;  // vacuous

    std::vector<bool> is_inflow(nu, false);
    for (int j : sr.inflow) is_inflow[j] = true;

    // zeta^T B_k U = 0, zeta >= 0 off the inflow set, zeta != 0 enforced by
    // pinning one coordinate away from zero at a time.
    auto feasible = [&](const std::vector<int>& b, bool strict, Vec& out_zeta) {
        LinearProgram lp;
        lp.A = Mat(0, nu);
        for (const Vec& u : basis) {
            Vec row(nu, Rational(0));
            for (int j = 0; j < nu; ++j) row[j] = Rational(b[j]) * u[j];
            lp.A.append_row(row);
            lp.rel.push_back(Rel::Eq);
            lp.b.push_back(0);
        }
        lp.bounds.assign(nu, VarBound::nonneg());
        for (int j : sr.inflow) lp.bounds[j] = VarBound::free();
        for (int j = 0; j < nu; ++j) {
            if (strict && b[j] == 0) continue;  // pin only where zeta^T B_k sees it
            for (int dir : {+1, -1}) {
                if (dir < 0 && !is_inflow[j]) continue;
                LinearProgram pinned = lp;
                Vec pin(nu, Rational(0));
                pin[j] = 1;
                pinned.A.append_row(pin);
                pinned.rel.push_back(dir > 0 ? Rel::Ge : Rel::Le);
                pinned.b.push_back(dir > 0 ? Rational(1) : Rational(-1));
                LpOutcome sol = solve(pinned);
                if (sol.status == LpStatus::Feasible) {
                    out_zeta = sol.witness;
                    return true;
                }
            }
        }
        return false;
    };

    const int half = sr.partition.num_regions() / 2;
    for (int k = 0; k < half; ++k) {
        Theorem8Result::RegionResult rr;
        rr.region = k;
        Vec zeta;
        rr.strict_feasible = feasible(sr.b[k], true, zeta);
        rr.feasible = rr.strict_feasible || feasible(sr.b[k], false, zeta);
        rr.zeta = zeta;
        res.pass = res.pass && rr.feasible;
        res.strict_pass = res.strict_pass && rr.strict_feasible;
        res.regions.push_back(std::move(rr));
    }
    return res;
}

std::optional<Siphon> check_critical_deadlock(const ReactionNetwork& net) {
    for (const Siphon& s : siphons(net))
        if (s.is_deadlock && s.is_critical) return s;
    return std::nullopt;
}

namespace {

// Multilinear integer polynomial in the Jacobian variables v_(j,i); a
// monomial is the sorted list of variable ids, one per matrix column.
using Monomial = std::vector<int>;
using Poly = std::map<Monomial, Rational>;

Poly poly_mul_entry(const Poly& p, const std::vector<std::pair<int, Rational>>& entry) {
    Poly out;
    for (const auto& [mono, coef] : p)
        for (const auto& [var, w] : entry) {
            Monomial m = mono;
            m.insert(std::lower_bound(m.begin(), m.end(), var), var);
            Rational c = coef * w;
            auto it = out.find(m);
            if (it == out.end())
                out.emplace(std::move(m), std::move(c));
            else {
                it->second += c;
                if (is_zero(it->second)) out.erase(it);
            }
        }
    return out;
}

void poly_add(Poly& p, const Poly& q, const Rational& s) {
    for (const auto& [mono, coef] : q) {
        auto it = p.find(mono);
        if (it == p.end())
            p.emplace(mono, s * coef);
        else {
            it->second += s * coef;
            if (is_zero(it->second)) p.erase(it);
        }
    }
}

}  // namespace

P0Result p0_structural(const ReactionNetwork& net, int n_cap) {
    P0Result res;
    const int n = net.num_species();
    const int nu = net.num_reactions();
    if (n > n_cap) {
        res.detail = "symbolic minors skipped: " + std::to_string(n) +
                     " species exceed the cap of " + std::to_string(n_cap);
        return res;
    }
    Mat gamma = stoichiometry(net);

    // Entry (s,t) of -Gamma dR/dx as a linear form: sum over reactions j with
    // t a reactant of j of -Gamma(s,j) * v_(j,t). Variable id = j*n + t.
    std::vector<std::vector<std::vector<std::pair<int, Rational>>>> entry(
        n, std::vector<std::vector<std::pair<int, Rational>>>(n));
    for (int j = 0; j < nu; ++j)
        for (const auto& [t, a] : net.reactions[j].reactants)
            for (int s = 0; s < n; ++s)
                if (!is_zero(gamma(s, j)))
                    entry[s][t].push_back({j * n + t, -gamma(s, j)});

    struct NegMonomial {
        std::vector<int> minor;
        Monomial mono;
    };
    std::vector<NegMonomial> negatives;
    bool all_nonneg = true;

    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> S;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) S.push_back(i);
        const int d = int(S.size());
        // det via DP over used-column subsets, expanding row by row.
        int full = (1 << d) - 1;
        std::unordered_map<int, Poly> memo;
        memo[0] = {{Monomial{}, Rational(1)}};
        std::vector<int> order(full + 1);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [](int a, int b) { return __builtin_popcount(a) < __builtin_popcount(b); });
        for (int sub : order) {
            auto it = memo.find(sub);
            if (it == memo.end()) continue;
            int row = __builtin_popcount(sub);
            if (row == d) continue;
            int sign_flip = 0;
            for (int c = 0; c < d; ++c) {
                if (sub & (1 << c)) continue;
                const auto& e = entry[S[row]][S[c]];
                ++sign_flip;
                if (e.empty()) continue;
                Poly term = poly_mul_entry(it->second, e);
                poly_add(memo[sub | (1 << c)], term,
                         (sign_flip % 2 == 1) ? Rational(1) : Rational(-1));
            }
        }
        const Poly& det = memo[full];
        for (const auto& [mono, coef] : det)
            if (sign(coef) < 0) {
                all_nonneg = false;
                negatives.push_back({S, mono});
            }
    }
    if (all_nonneg) {
        res.verdict = P0Verdict::RobustlyP0;
        res.detail = "every principal minor has nonnegative coefficients";
        return res;
    }

    // Try to realize a negative minor: the support variables of a negative
    // monomial grow like t^d while every other monomial misses at least one
    // of them, so large t drives the minor negative when one exists.
    for (const NegMonomial& nm : negatives) {
        std::vector<bool> in_support(nu * n, false);
        for (int var : nm.mono) in_support[var] = true;
        for (long long t = 2; t <= (1 << 20); t *= 2) {
            std::map<int, Rational> assign;
            for (int s : nm.minor)
                for (int c : nm.minor)
                    for (const auto& [var, w] : entry[s][c])
                        assign.emplace(var,
                                       in_support[var] ? Rational(long(t)) : Rational(1));
            // exact minor value at the assignment
            Mat Msub(int(nm.minor.size()), int(nm.minor.size()));
            for (size_t a = 0; a < nm.minor.size(); ++a)
                for (size_t b = 0; b < nm.minor.size(); ++b) {
                    Rational val = 0;
                    for (const auto& [var, w] : entry[nm.minor[a]][nm.minor[b]])
                        val += w * assign.at(var);
                    Msub(int(a), int(b)) = val;
                }
            // exact determinant by fraction-free elimination on the small block
            Mat E = Msub;
            Rational det = 1;
            bool singular = false;
            for (int c = 0; c < E.rows(); ++c) {
                int piv = -1;
                for (int r = c; r < E.rows(); ++r)
                    if (!is_zero(E(r, c))) { piv = r; break; }
                if (piv < 0) { singular = true; break; }
                if (piv != c) {
                    for (int cc = 0; cc < E.cols(); ++cc) std::swap(E(piv, cc), E(c, cc));
                    det = -det;
                }
                det *= E(c, c);
                for (int r = c + 1; r < E.rows(); ++r) {
                    Rational f = E(r, c) / E(c, c);
                    for (int cc = c; cc < E.cols(); ++cc) E(r, cc) -= f * E(c, cc);
                }
            }
            if (singular || sign(det) >= 0) continue;

            // numeric re-verification of the same minor
            int dd = int(nm.minor.size());
            std::vector<std::vector<double>> Md(dd, std::vector<double>(dd, 0.0));
            for (int a = 0; a < dd; ++a)
                for (int b = 0; b < dd; ++b) Md[a][b] = to_double(Msub(a, b));
            double num_det = 1.0;
            for (int c = 0; c < dd; ++c) {
                int piv = c;
                for (int r = c + 1; r < dd; ++r)
                    if (std::fabs(Md[r][c]) > std::fabs(Md[piv][c])) piv = r;
                if (std::fabs(Md[piv][c]) == 0.0) { num_det = 0.0; break; }
                if (piv != c) {
                    std::swap(Md[piv], Md[c]);
                    num_det = -num_det;
                }
                num_det *= Md[c][c];
                for (int r = c + 1; r < dd; ++r) {
                    double f = Md[r][c] / Md[c][c];
                    for (int cc = c; cc < dd; ++cc) Md[r][cc] -= f * Md[c][cc];
                }
            }
            if (num_det >= -1e-9) continue;

            res.verdict = P0Verdict::Counterexample;
            res.minor = nm.minor;
            res.minor_value = num_det;
            for (const auto& [var, val] : assign)
                res.witness.push_back({var / n, var % n, to_double(val)});
            res.detail = "principal minor attains a negative value under the sign pattern";
            return res;
        }
    }
    res.detail = "negative coefficients found but no sampled counterexample";
    return res;
}

NecessaryReport check_necessary(const ReactionNetwork& net) {
    NecessaryReport rep;
    rep.theorem8 = check_theorem8(net);
    rep.deadlock = check_critical_deadlock(net);
    rep.p0 = p0_structural(net);
    return rep;
}

}  // namespace crnlyap
