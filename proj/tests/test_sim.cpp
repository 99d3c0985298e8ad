#include <cmath>
#include <random>

#include "crnlyap/sim.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace crnlyap;
using namespace crnlyap::testing;

namespace {

const std::vector<double> kFutileK = {33.2, 83.97, 37.17, 82.82, 17.65, 12.95,
                                      87.99, 4.41,  68.67, 73.38, 43.72, 37.98};
const std::vector<double> kFutileX0 = {5.88, 8.78, 4.69, 4.37, 7.46, 4.68,
                                       8.61, 4.67, 4.98, 4.87, 2.29};

}  // namespace

TEST_CASE("kinetics validation accepts the built-in families") {
    ReactionNetwork net = load_fixture("network1.crn");
    CHECK(validate_kinetics(net, MassAction{{1, 2, 3}}).empty());
    CHECK(validate_kinetics(net, MichaelisMenten{{1, 2, 3}, {}}).empty());
    Hill hill;
    hill.k = {1, 0.5, 0.25};
    CHECK(validate_kinetics(net, hill).empty());
    CHECK(validate_kinetics(net, Tabulated{{"x1", "x2^2", "x3*x4"}}).empty());
}

TEST_CASE("kinetics validation rejects bad rate laws") {
    ReactionNetwork net = load_fixture("network1.crn");
    CHECK_FALSE(validate_kinetics(net, MassAction{{1, -2, 3}}).empty());
    CHECK_FALSE(validate_kinetics(net, MassAction{{1, 2}}).empty());
    // wrong monotonicity: rate of reaction 1 decreasing in its reactant
    CHECK_FALSE(validate_kinetics(net, Tabulated{{"1/(1+x1)", "x2^2", "x3*x4"}})
                    .empty());
    // nonzero rate at zero reactant concentration
    CHECK_FALSE(validate_kinetics(net, Tabulated{{"1+x1", "x2^2", "x3*x4"}})
                    .empty());
}

TEST_CASE("tabulated expressions match mass action") {
    ReactionNetwork net = load_fixture("network1.crn");
    std::vector<double> x = {1.3, 0.7, 2.1, 0.4};
    auto ma = rates(net, MassAction{{2, 1, 0.5}}, x);
    auto tab = rates(net, Tabulated{{"2*X1", "X2^2", "0.5*X3*X4"}}, x);
    REQUIRE(ma.size() == 3);
    for (int j = 0; j < 3; ++j) CHECK(ma[j] == doctest::Approx(tab[j]).epsilon(1e-12));
}

TEST_CASE("mass-action equilibrium is an exact fixed point") {
    ReactionNetwork net = load_fixture("network1.crn");
    Mat gamma = stoichiometry(net);
    // all rates equal 1 at x = (1,1,1,1), and Gamma (1,1,1) = 0
    auto r = rates(net, MassAction{{1, 1, 1}}, {1, 1, 1, 1});
    double norm = 0;
    for (int i = 0; i < gamma.rows(); ++i) {
        double acc = 0;
        for (int j = 0; j < gamma.cols(); ++j) acc += to_double(gamma(i, j)) * r[j];
        norm = std::max(norm, std::fabs(acc));
    }
    CHECK(norm <= 1e-12);
}

TEST_CASE("a network without reactions yields a constant trajectory") {
    ReactionNetwork net;
    net.species = {"X1"};
    Trajectory traj = integrate(net, MassAction{{}}, {1.5}, {});
    CHECK(traj.ok);
    CHECK(traj.states.front()[0] == 1.5);
    CHECK(traj.states.back()[0] == 1.5);
}

TEST_CASE("hill kinetics run converges with constant conserved projections") {
    ReactionNetwork net = load_fixture("network1.crn");
    Hill hill;
    hill.k = {1, 0.5, 0.25};
    SimControls sc;
    sc.t_end = 100;
    Trajectory traj = integrate(net, hill, {1, 2, 7, 2}, sc);
    REQUIRE(traj.ok);
    CHECK(traj.equilibrium_time.has_value());
    REQUIRE(traj.conserved.size() == traj.times.size());
    REQUIRE_FALSE(traj.laws.empty());
    for (size_t s = 0; s < traj.times.size(); ++s)
        for (size_t l = 0; l < traj.laws.size(); ++l)
            CHECK(std::fabs(traj.conserved[s][l] - traj.conserved[0][l]) <=
                  1e-6 * (1 + std::fabs(traj.conserved[0][l])));
    // the class invariants x1+x3 and x1+x2+2x4 for this start are 8 and 7
    double m1 = traj.states.back()[0] + traj.states.back()[2];
    double m2 = traj.states.back()[0] + traj.states.back()[1] +
                2 * traj.states.back()[3];
    CHECK(m1 == doctest::Approx(8.0).epsilon(1e-6));
    CHECK(m2 == doctest::Approx(7.0).epsilon(1e-6));
}

TEST_CASE("certificate value decreases along the hill trajectory") {
    ReactionNetwork net = load_fixture("network1.crn");
    Hill hill;
    hill.k = {1, 0.5, 0.25};
    Trajectory traj = integrate(net, hill, {1, 2, 7, 2}, {});
    REQUIRE(traj.ok);
    PwlrCertificate cert;
    cert.form = CertForm::Convex;
    cert.C = Mat{{1, -1, 0}, {0, 1, -1}, {-1, 0, 1}};
    MonitorReport rep = monitor_certificate(cert, traj);
    CHECK(rep.pass);
}

TEST_CASE("quantitative equilibrium of the inflow example") {
    ReactionNetwork net = load_fixture("example4.crn");
    SimControls sc;
    sc.t_end = 100;
    Trajectory traj = integrate(net, MassAction{{1, 1, 1}}, {2, 1, 1}, sc);
    REQUIRE(traj.ok);
    // equilibrium from the rate balance k1 x3 = k3 x1 x2 = k2 and the class
    // invariant x1 + x3 = 3: x = (2, 1/2, 1)
    const auto& xe = traj.states.back();
    CHECK(std::fabs(xe[0] - 2.0) <= 1e-4);
    CHECK(std::fabs(xe[1] - 0.5) <= 1e-4);
    CHECK(std::fabs(xe[2] - 1.0) <= 1e-4);
}

TEST_CASE("the inflow example grows without bound below the threshold") {
    ReactionNetwork net = load_fixture("example4.crn");
    SimControls sc;
    sc.t_end = 2500;
    sc.samples = 500;
    Trajectory traj = integrate(
        net, MassAction{{1, 1, 1}}, {1.0 / 3, 1.0 / 6, 1.0 / 6}, sc);
    REQUIRE(traj.ok);
    double peak = 0;
    for (const auto& x : traj.states)
        for (double v : x) peak = std::max(peak, v);
    CHECK(peak > 1e3);
}

TEST_CASE("michaelis-menten futile cycle run") {
    ReactionNetwork net = load_fixture("futile_cycle.crn");
    MichaelisMenten mm;
    mm.k = kFutileK;
    SimControls sc;
    sc.t_end = 200;
    sc.rtol = 1e-9;
    sc.atol = 1e-11;
    Trajectory traj = integrate(net, mm, kFutileX0, sc);
    REQUIRE(traj.ok);
    REQUIRE(traj.equilibrium_time.has_value());
    CHECK(*traj.equilibrium_time < 200);
    PwlrCertificate cert =
        l1_candidate(Vec{2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1}, stoichiometry(net));
    MonitorReport rep = monitor_certificate(cert, traj);
    CHECK(rep.pass);
}

TEST_CASE("blow-up is diagnosed instead of silently clipped") {
    // autocatalytic fixture built directly: X2 -> X1 + 2 X2 with rate x2^2
    // escapes in finite time (x2' = x2^2)
    ReactionNetwork net;
    net.species = {"X1", "X2"};
    net.reactions.resize(1);
    net.reactions[0].reactants = {{1, 1}};
    net.reactions[0].products = {{0, 1}, {1, 2}};
    SimControls sc;
    sc.t_end = 10;
    Trajectory traj = integrate(net, Tabulated{{"X2^2"}}, {0.0, 1.0}, sc);
    CHECK_FALSE(traj.ok);
    CHECK(traj.diagnostics.find("blow-up") != std::string::npos);
}

TEST_CASE("csv output shape") {
    ReactionNetwork net = load_fixture("example4.crn");
    SimControls sc;
    sc.t_end = 1;
    sc.samples = 4;
    Trajectory traj = integrate(net, MassAction{{1, 1, 1}}, {2, 1, 1}, sc);
    REQUIRE(traj.ok);
    std::string csv = trajectory_csv(net, traj);
    CHECK(csv.substr(0, csv.find('\n')) == "t,x1,x2,x3,conserved_1");
    PwlrCertificate cert;
    cert.form = CertForm::Convex;
    cert.C = Mat{{1, -1, 0}, {0, 1, -1}, {-1, 0, 1}};
    std::vector<double> V = certificate_values(cert, traj);
    std::string csv_v = trajectory_csv(net, traj, &V);
    CHECK(csv_v.substr(0, csv_v.find('\n')) == "t,x1,x2,x3,V,conserved_1");
    CHECK(trajectory_csv(net, traj) == csv);  // deterministic formatting
}

TEST_CASE("consensus on a single node is trivial") {
    Mat L{{0}};
    ReactionNetwork net = laplacian_to_crn(L);
    Trajectory traj = integrate(net, MassAction{{}}, {2.0}, {});
    REQUIRE(traj.ok);
    CHECK(consensus_check(traj, [](int, double s) { return s; }, 1e-9));
}

TEST_CASE("ring consensus under identity and cubic nonlinearities") {
    Mat L{{1, -1, 0}, {0, 1, -1}, {-1, 0, 1}};
    ReactionNetwork net = laplacian_to_crn(L);
    std::mt19937 gen(9);
    std::uniform_real_distribution<double> x0d(0.2, 3.0);
    for (int cubic = 0; cubic < 2; ++cubic) {
        Tabulated tab;
        for (int j = 1; j <= 3; ++j)
            tab.expressions.push_back("x" + std::to_string(j) +
                                      (cubic ? "^3" : ""));
        std::vector<double> x0 = {x0d(gen), x0d(gen), x0d(gen)};
        SimControls sc;
        sc.t_end = 50;
        Trajectory traj = integrate(net, tab, x0, sc);
        REQUIRE(traj.ok);
        auto F = [&](int, double s) { return cubic ? s * s * s : s; };
        CHECK(consensus_check(traj, F, 1e-6));
    }
}
