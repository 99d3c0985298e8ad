#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crnlyap/certificate.hpp"
#include "crnlyap/network.hpp"

namespace crnlyap {

// R_j(x) = k_j prod x_i^alpha_ij
struct MassAction {
    std::vector<double> k;
};

// R_j(x) = k_j prod (x_i / (a_ij + x_i))^alpha_ij; a defaults to 1.
struct MichaelisMenten {
    std::vector<double> k;
    std::vector<std::map<int, double>> a;  // per reaction: species -> a_ij
};

// R_j(x) = k_j prod (x_i^n_ij / (a_ij + x_i^n_ij))^alpha_ij.
struct Hill {
    std::vector<double> k;
    std::vector<std::map<int, double>> a;  // defaults to 1
    std::vector<std::map<int, double>> n;  // defaults to 1
};

// One arithmetic expression per reaction over the species concentrations
// (species names or x1..xn; operators + - * / ^ and parentheses).
struct Tabulated {
    std::vector<std::string> expressions;
};

using Kinetics = std::variant<MassAction, MichaelisMenten, Hill, Tabulated>;

std::vector<double> rates(const ReactionNetwork& net, const Kinetics& kin,
                          const std::vector<double>& x);

// Monotonicity/sign checks (nonnegative rates, zero on zero reactants,
// finite-difference Jacobian matching the reactant pattern) at deterministic
// random positive points. Empty string when the kinetics is admissible.
std::string validate_kinetics(const ReactionNetwork& net, const Kinetics& kin);

struct SimControls {
    double t_end = 100.0;
    double atol = 1e-9;
    double rtol = 1e-7;
    int samples = 400;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> reaction_rates;
    std::vector<Vec> laws;                       // conservation-law directions
    std::vector<std::vector<double>> conserved;  // per sample: d^T x per law
    std::optional<double> equilibrium_time;      // sustained ||Gamma R|| ~ 0
    bool ok = false;
    std::string diagnostics;
};

// Adaptive embedded Runge-Kutta 4(5); steps pushing a state below -1e-10
// are rejected and halved rather than clipped.
Trajectory integrate(const ReactionNetwork& net, const Kinetics& kin,
                     const std::vector<double>& x0, const SimControls& controls = {});

// V(t) = Vtilde(R(x(t))) per sample.
std::vector<double> certificate_values(const PwlrCertificate& cert,
                                       const Trajectory& traj);

struct MonitorReport {
    bool pass = false;
    double v0 = 0.0;
    double max_increment = 0.0;  // largest V(t_{i+1}) - V(t_i)
};

// Pass iff V never increases by more than 1e-7 * max(1, V(t_0)).
MonitorReport monitor_certificate(const PwlrCertificate& cert, const Trajectory& traj);

// max_i F(i, x_i(t_end)) - min_i F(i, x_i(t_end)) < tol
bool consensus_check(const Trajectory& traj,
                     const std::function<double(int, double)>& F, double tol);

// Header t,x1..xn,V[,conserved_1..]; 17 significant digits.
std::string trajectory_csv(const ReactionNetwork& net, const Trajectory& traj,
                           const std::vector<double>* V = nullptr);

}  // namespace crnlyap
