#include "crnlyap/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "crnlyap/checker.hpp"

namespace crnlyap {

namespace {

// ---------------------------------------------------------------- expressions

struct ExprParser {
    const std::string& s;
    size_t pos = 0;
    const std::vector<std::string>& species;

    using Fn = std::function<double(const std::vector<double>&)>;

    explicit ExprParser(const std::string& text, const std::vector<std::string>& sp)
        : s(text), species(sp) {}

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("rate expression: " + what + " at offset " +
                                    std::to_string(pos) + " in \"" + s + "\"");
    }

    Fn parse() {
        Fn e = expr();
        skip();
        if (pos != s.size()) fail("trailing input");
        return e;
    }

    Fn expr() {
        Fn left = term();
        for (;;) {
            if (eat('+')) {
                Fn right = term();
                left = [left, right](const std::vector<double>& x) {
                    return left(x) + right(x);
                };
            } else if (eat('-')) {
                Fn right = term();
                left = [left, right](const std::vector<double>& x) {
                    return left(x) - right(x);
                };
            } else {
                return left;
            }
        }
    }

    Fn term() {
        Fn left = factor();
        for (;;) {
            if (eat('*')) {
                Fn right = factor();
                left = [left, right](const std::vector<double>& x) {
                    return left(x) * right(x);
                };
            } else if (eat('/')) {
                Fn right = factor();
                left = [left, right](const std::vector<double>& x) {
                    return left(x) / right(x);
                };
            } else {
                return left;
            }
        }
    }

    Fn factor() {
        if (eat('-')) {
            Fn inner = factor();
            return [inner](const std::vector<double>& x) { return -inner(x); };
        }
        Fn base = atom();
        if (eat('^')) {
            Fn exp = factor();  // right associative
            return [base, exp](const std::vector<double>& x) {
                return std::pow(base(x), exp(x));
            };
        }
        return base;
    }

    Fn atom() {
        skip();
        if (pos >= s.size()) fail("unexpected end");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            Fn inner = expr();
            if (!eat(')')) fail("missing ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t end;
            double val = std::stod(s.substr(pos), &end);
            pos += end;
            return [val](const std::vector<double>&) { return val; };
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                                      s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            for (size_t i = 0; i < species.size(); ++i)
                if (species[i] == name) {
                    return [i](const std::vector<double>& x) { return x[i]; };
                }
            if (name.size() >= 2 && name[0] == 'x') {
                int idx = std::atoi(name.c_str() + 1) - 1;
                if (idx >= 0 && idx < int(species.size()))
                    return [idx](const std::vector<double>& x) { return x[idx]; };
            }
            fail("unknown identifier '" + name + "'");
        }
        fail("unexpected character");
    }
};

double lookup(const std::vector<std::map<int, double>>& table, int j, int i,
              double fallback) {
    if (j >= int(table.size())) return fallback;
    auto it = table[j].find(i);
    return it == table[j].end() ? fallback : it->second;
}

using RateFn = std::function<std::vector<double>(const std::vector<double>&)>;

RateFn compile(const ReactionNetwork& net, const Kinetics& kin) {
    const int nu = net.num_reactions();
    auto need_k = [&](const std::vector<double>& k) {
        if (int(k.size()) != nu)
            throw std::invalid_argument("kinetics: expected " + std::to_string(nu) +
                                        " rate constants, got " + std::to_string(k.size()));
        for (double v : k)
            if (!(v > 0)) throw std::invalid_argument("kinetics: rate constants must be positive");
    };
    if (const auto* ma = std::get_if<MassAction>(&kin)) {
        need_k(ma->k);
        auto k = ma->k;
        auto reactions = net.reactions;
        return [k, reactions, nu](const std::vector<double>& x) {
            std::vector<double> R(nu);
            for (int j = 0; j < nu; ++j) {
                double r = k[j];
                for (const auto& [i, a] : reactions[j].reactants)
                    for (int e = 0; e < a; ++e) r *= x[i];
                R[j] = r;
            }
            return R;
        };
    }
    if (const auto* mm = std::get_if<MichaelisMenten>(&kin)) {
        need_k(mm->k);
        auto k = mm->k;
        auto a_tab = mm->a;
        auto reactions = net.reactions;
        return [k, a_tab, reactions, nu](const std::vector<double>& x) {
            std::vector<double> R(nu);
            for (int j = 0; j < nu; ++j) {
                double r = k[j];
                for (const auto& [i, alpha] : reactions[j].reactants) {
                    double a = lookup(a_tab, j, i, 1.0);
                    r *= std::pow(x[i] / (a + x[i]), alpha);
                }
                R[j] = r;
            }
            return R;
        };
    }
    if (const auto* hl = std::get_if<Hill>(&kin)) {
        need_k(hl->k);
        auto k = hl->k;
        auto a_tab = hl->a;
        auto n_tab = hl->n;
        auto reactions = net.reactions;
        return [k, a_tab, n_tab, reactions, nu](const std::vector<double>& x) {
            std::vector<double> R(nu);
            for (int j = 0; j < nu; ++j) {
                double r = k[j];
                for (const auto& [i, alpha] : reactions[j].reactants) {
                    double a = lookup(a_tab, j, i, 1.0);
                    double n = lookup(n_tab, j, i, 1.0);
                    double xn = std::pow(x[i], n);
                    r *= std::pow(xn / (a + xn), alpha);
                }
                R[j] = r;
            }
            return R;
        };
    }
    const auto& tab = std::get<Tabulated>(kin);
    if (int(tab.expressions.size()) != nu)
        throw std::invalid_argument("kinetics: expected " + std::to_string(nu) +
                                    " rate expressions");
    std::vector<ExprParser::Fn> fns;
    for (const std::string& e : tab.expressions)
        fns.push_back(ExprParser(e, net.species).parse());
    return [fns, nu](const std::vector<double>& x) {
        std::vector<double> R(nu);
        for (int j = 0; j < nu; ++j) R[j] = fns[j](x);
        return R;
    };
}

std::vector<double> gamma_doubles(const Mat& gamma, std::vector<int>& shape) {
    shape = {gamma.rows(), gamma.cols()};
    std::vector<double> g(size_t(gamma.rows()) * gamma.cols());
    for (int i = 0; i < gamma.rows(); ++i)
        for (int j = 0; j < gamma.cols(); ++j)
            g[size_t(i) * gamma.cols() + j] = to_double(gamma(i, j));
    return g;
}

}  // namespace

std::vector<double> rates(const ReactionNetwork& net, const Kinetics& kin,
                          const std::vector<double>& x) {
    if (int(x.size()) != net.num_species())
        throw std::invalid_argument("rates: state dimension mismatch");
    return compile(net, kin)(x);
}

std::string validate_kinetics(const ReactionNetwork& net, const Kinetics& kin) {
    const int n = net.num_species();
    const int nu = net.num_reactions();
    RateFn fn;
    try {
        fn = compile(net, kin);
    } catch (const std::exception& e) {
        return e.what();
    }
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.1, 5.0);
    for (int probe = 0; probe < 20; ++probe) {
        std::vector<double> x(n);
        for (double& v : x) v = dist(rng);
        std::vector<double> R = fn(x);
        for (int j = 0; j < nu; ++j)
            if (!(R[j] >= -1e-12) || !std::isfinite(R[j]))
                return "rate " + std::to_string(j + 1) + " negative or non-finite";
        // finite-difference Jacobian signs against the reactant pattern
        for (int i = 0; i < n; ++i) {
            double h = 1e-6 * std::max(1.0, x[i]);
            std::vector<double> xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            std::vector<double> Rp = fn(xp), Rm = fn(xm);
            for (int j = 0; j < nu; ++j) {
                double d = (Rp[j] - Rm[j]) / (2 * h);
                bool reactant = net.reactions[j].reactants.count(i) > 0;
                if (reactant && d < -1e-6)
                    return "rate " + std::to_string(j + 1) + " decreasing in reactant " +
                           net.species[i];
                if (!reactant && std::fabs(d) > 1e-6)
                    return "rate " + std::to_string(j + 1) + " depends on non-reactant " +
                           net.species[i];
            }
        }
        // zero reactant forces zero rate
        for (int j = 0; j < nu; ++j)
            for (const auto& [i, a] : net.reactions[j].reactants) {
                std::vector<double> xz = x;
                xz[i] = 0.0;
                if (std::fabs(fn(xz)[j]) > 1e-9)
                    return "rate " + std::to_string(j + 1) + " nonzero with " +
                           net.species[i] + " = 0";
            }
    }
    return "";
}

Trajectory integrate(const ReactionNetwork& net, const Kinetics& kin,
                     const std::vector<double>& x0, const SimControls& controls) {
    Trajectory traj;
    const int n = net.num_species();
    if (int(x0.size()) != n) {
        traj.diagnostics = "initial state dimension mismatch";
        return traj;
    }
    for (double v : x0)
        if (v < 0) {
            traj.diagnostics = "negative initial state";
            return traj;
        }
    std::string bad = validate_kinetics(net, kin);
    if (!bad.empty()) {
        traj.diagnostics = "kinetics validation: " + bad;
        return traj;
    }
    RateFn fn = compile(net, kin);
    Mat gamma = stoichiometry(net);
    std::vector<int> shape;
    std::vector<double> g = gamma_doubles(gamma, shape);
    auto deriv = [&](const std::vector<double>& x, std::vector<double>& R) {
        R = fn(x);
        std::vector<double> dx(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < int(R.size()); ++j) dx[i] += g[size_t(i) * R.size() + j] * R[j];
        return dx;
    };
    for (const Vec& d : conservation_laws(gamma).basis) traj.laws.push_back(d);

    // Dormand-Prince 4(5) tableau.
    static const double A[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static const double B4[7] = {5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                                 -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    std::vector<double> x = x0;
    double t = 0.0;
    double h = controls.t_end / (100.0 * controls.samples);
    const double hmin = controls.t_end * 1e-14;
    int streak = 0;

    auto record = [&](double tt, const std::vector<double>& xx) {
        std::vector<double> R = fn(xx);
        traj.times.push_back(tt);
        traj.states.push_back(xx);
        traj.reaction_rates.push_back(R);
        std::vector<double> cons;
        for (const Vec& d : traj.laws) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += to_double(d[i]) * xx[i];
            cons.push_back(s);
        }
        traj.conserved.push_back(std::move(cons));
        double gr = 0, rn = 0;
        std::vector<double> dummyR;
        std::vector<double> dx = deriv(xx, dummyR);
        for (double v : dx) gr = std::max(gr, std::fabs(v));
        for (double v : R) rn = std::max(rn, std::fabs(v));
        if (gr < 1e-9 * (1.0 + rn)) {
            if (++streak >= 10 && !traj.equilibrium_time)
                traj.equilibrium_time = traj.times[traj.times.size() - 10];
        } else {
            streak = 0;
        }
    };

    record(0.0, x);
    for (int s = 1; s <= controls.samples; ++s) {
        double target = controls.t_end * double(s) / controls.samples;
        while (t < target) {
            double hs = std::min(h, target - t);
            // one attempted RK step
            std::vector<std::vector<double>> K(7);
            std::vector<double> Rtmp;
            K[0] = deriv(x, Rtmp);
            bool finite = true;
            std::vector<double> x5(n), x4(n);
            for (int stage = 1; stage < 7; ++stage) {
                std::vector<double> xs = x;
                for (int i = 0; i < n; ++i)
                    for (int prev = 0; prev < stage; ++prev)
                        xs[i] += hs * A[stage][prev] * K[prev][i];
                K[stage] = deriv(xs, Rtmp);
            }
            for (int i = 0; i < n; ++i) {
                double acc5 = 0, acc4 = 0;
                for (int stage = 0; stage < 6; ++stage) acc5 += A[6][stage] * K[stage][i];
                for (int stage = 0; stage < 7; ++stage) acc4 += B4[stage] * K[stage][i];
                x5[i] = x[i] + hs * acc5;
                x4[i] = x[i] + hs * acc4;
                if (!std::isfinite(x5[i])) finite = false;
            }
            bool negative = false;
            for (double v : x5)
                if (v < -1e-10) negative = true;
            double err = 0.0;
            if (finite) {
                for (int i = 0; i < n; ++i) {
                    double scale = controls.atol +
                                   controls.rtol * std::max(std::fabs(x[i]), std::fabs(x5[i]));
                    double e = (x5[i] - x4[i]) / scale;
                    err += e * e;
                }
                err = std::sqrt(err / n);
            }
            if (!finite || negative || err > 1.0) {
                h = hs * (finite && !negative
                              ? std::max(0.2, 0.9 * std::pow(err, -0.25))
                              : 0.5);
                if (h < hmin) {
                    double mag = 0;
                    for (double v : x) mag = std::max(mag, std::fabs(v));
                    traj.diagnostics = mag > 1e8
                                           ? "step underflow: trajectory blow-up"
                                           : "step underflow";
                    return traj;
                }
                continue;
            }
            t += hs;
            x = x5;
            h = hs * std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-12), -0.2)));
        }
        record(target, x);
        if (traj.equilibrium_time) break;
    }
    traj.ok = true;
    return traj;
}

std::vector<double> certificate_values(const PwlrCertificate& cert,
                                       const Trajectory& traj) {
    std::vector<double> V;
    if (cert.form == CertForm::Convex) {
        std::vector<std::vector<double>> Cd(cert.C.rows(),
                                            std::vector<double>(cert.C.cols()));
        for (int k = 0; k < cert.C.rows(); ++k)
            for (int j = 0; j < cert.C.cols(); ++j) Cd[k][j] = to_double(cert.C(k, j));
        for (const auto& R : traj.reaction_rates) {
            double v = 0;
            for (const auto& row : Cd) {
                double s = 0;
                for (size_t j = 0; j < R.size(); ++j) s += row[j] * R[j];
                v = std::max(v, std::fabs(s));
            }
            V.push_back(v);
        }
        return V;
    }
    for (const auto& R : traj.reaction_rates) {
        Vec r(R.size());
        for (size_t j = 0; j < R.size(); ++j) r[j] = Rational(R[j]);
        V.push_back(to_double(evaluate(cert, r)));
    }
    return V;
}

MonitorReport monitor_certificate(const PwlrCertificate& cert, const Trajectory& traj) {
    MonitorReport rep;
    if (!traj.reaction_rates.empty() &&
        cert.C.cols() != int(traj.reaction_rates.front().size()))
        throw std::invalid_argument("certificate/trajectory dimension mismatch");
    std::vector<double> V = certificate_values(cert, traj);
    if (V.empty()) return rep;
    rep.v0 = V.front();
    rep.pass = true;
    double slack = 1e-7 * std::max(1.0, rep.v0);
    for (size_t i = 0; i + 1 < V.size(); ++i) {
        rep.max_increment = std::max(rep.max_increment, V[i + 1] - V[i]);
        if (V[i + 1] > V[i] + slack) rep.pass = false;
    }
    return rep;
}

bool consensus_check(const Trajectory& traj,
                     const std::function<double(int, double)>& F, double tol) {
    if (traj.states.empty()) return false;
    const auto& x = traj.states.back();
    double lo = F(0, x[0]), hi = lo;
    for (size_t i = 1; i < x.size(); ++i) {
        double v = F(int(i), x[i]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo < tol;
}

std::string trajectory_csv(const ReactionNetwork& net, const Trajectory& traj,
                           const std::vector<double>* V) {
    std::string out = "t";
    for (int i = 0; i < net.num_species(); ++i) out += ",x" + std::to_string(i + 1);
    if (V) out += ",V";
    for (size_t l = 0; l < traj.laws.size(); ++l)
        out += ",conserved_" + std::to_string(l + 1);
    out += "\n";
    char buf[64];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof(buf), ",%.17g", v);
        out += buf;
    };
    for (size_t s = 0; s < traj.times.size(); ++s) {
        std::snprintf(buf, sizeof(buf), "%.17g", traj.times[s]);
        out += buf;
        for (double v : traj.states[s]) emit(v);
        if (V) emit((*V)[s]);
        for (double v : traj.conserved[s]) emit(v);
        out += "\n";
    }
    return out;
}

}  // namespace crnlyap
