#include <random>
#include <sstream>

#include "crnlyap/lp.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace crnlyap;
using namespace crnlyap::testing;

namespace {

std::string outcome_string(const LpOutcome& out) {
    std::ostringstream ss;
    ss << int(out.status) << ";";
    for (const auto& q : out.witness) ss << to_string(q) << ",";
    ss << ";";
    for (const auto& q : out.farkas) ss << to_string(q) << ",";
    ss << ";";
    if (out.optimal) ss << to_string(*out.optimal);
    return ss.str();
}

LinearProgram random_lp(std::mt19937& gen) {
    std::uniform_int_distribution<int> dims(1, 4);
    std::uniform_int_distribution<int> relpick(0, 2);
    std::uniform_int_distribution<int> boundpick(0, 1);
    std::uniform_int_distribution<int> want_obj(0, 1);
    LinearProgram lp;
    int n = dims(gen), m = dims(gen);
    lp.A = random_matrix(gen, m, n, -4, 4);
    for (int i = 0; i < m; ++i) {
        lp.rel.push_back(Rel(relpick(gen)));
        lp.b.push_back(random_rational(gen, -4, 4));
    }
    for (int j = 0; j < n; ++j)
        lp.bounds.push_back(boundpick(gen) ? VarBound::nonneg() : VarBound::free());
    if (want_obj(gen)) {
        Vec c;
        for (int j = 0; j < n; ++j) c.push_back(random_rational(gen, -3, 3));
        lp.objective = c;
        lp.maximize = boundpick(gen) == 1;
    }
    return lp;
}

}  // namespace

TEST_CASE("feasible system with witness") {
    LinearProgram lp;
    lp.A = Mat{{1, 1}, {1, -1}};
    lp.rel = {Rel::Le, Rel::Ge};
    lp.b = {4, 0};
    lp.bounds = {VarBound::nonneg(), VarBound::nonneg()};
    LpOutcome out = solve(lp);
    CHECK(out.status == LpStatus::Feasible);
    CHECK(verify_certificate(lp, out));
}

TEST_CASE("infeasible system yields a verified Farkas certificate") {
    // x >= 1 together with x <= 0
    LinearProgram lp;
    lp.A = Mat{{1}, {1}};
    lp.rel = {Rel::Ge, Rel::Le};
    lp.b = {1, 0};
    lp.bounds = {VarBound::free()};
    LpOutcome out = solve(lp);
    CHECK(out.status == LpStatus::Infeasible);
    CHECK_FALSE(out.farkas.empty());
    CHECK(verify_certificate(lp, out));
}

TEST_CASE("optimization reaches the exact optimum") {
    // max x + y st x + 2y <= 4, x <= 3, x,y >= 0 -> (3, 1/2), value 7/2
    LinearProgram lp;
    lp.A = Mat{{1, 2}, {1, 0}};
    lp.rel = {Rel::Le, Rel::Le};
    lp.b = {4, 3};
    lp.bounds = {VarBound::nonneg(), VarBound::nonneg()};
    lp.objective = Vec{1, 1};
    LpOutcome out = solve(lp);
    REQUIRE(out.status == LpStatus::Feasible);
    REQUIRE(out.optimal.has_value());
    CHECK(*out.optimal == Rational(7, 2));
    CHECK(verify_certificate(lp, out));
}

TEST_CASE("unbounded detection with improving ray") {
    LinearProgram lp;
    lp.A = Mat{{1, -1}};
    lp.rel = {Rel::Le};
    lp.b = {1};
    lp.bounds = {VarBound::nonneg(), VarBound::nonneg()};
    lp.objective = Vec{0, 1};
    LpOutcome out = solve(lp);
    CHECK(out.status == LpStatus::Unbounded);
    CHECK(verify_certificate(lp, out));
}

TEST_CASE("tampered witness fails verification") {
    LinearProgram lp;
    lp.A = Mat{{1, 1}};
    lp.rel = {Rel::Eq};
    lp.b = {2};
    lp.bounds = {VarBound::nonneg(), VarBound::nonneg()};
    LpOutcome out = solve(lp);
    REQUIRE(out.status == LpStatus::Feasible);
    out.witness[0] += 1;
    CHECK_FALSE(verify_certificate(lp, out));
}

TEST_CASE("strict cone interior") {
    Mat id{{1, 0}, {0, 1}};
    auto w = strict_cone_interior(id);
    REQUIRE(w.has_value());
    CHECK(sign((*w)[0]) > 0);
    CHECK(sign((*w)[1]) > 0);
    Mat opposed{{1, 0}, {-1, 0}};
    CHECK_FALSE(strict_cone_interior(opposed).has_value());
}

TEST_CASE("determinism: identical programs, identical outcomes") {
    std::mt19937 gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        LinearProgram lp = random_lp(gen);
        CHECK(outcome_string(solve(lp)) == outcome_string(solve(lp)));
    }
}

TEST_CASE("random LP soundness: every outcome verifies") {
    std::mt19937 gen(1234);
    int feasible = 0, infeasible = 0, unbounded = 0;
    for (int trial = 0; trial < 300; ++trial) {
        LinearProgram lp = random_lp(gen);
        LpOutcome out = solve(lp);
        CHECK(verify_certificate(lp, out));
        switch (out.status) {
            case LpStatus::Feasible: ++feasible; break;
            case LpStatus::Infeasible: ++infeasible; break;
            case LpStatus::Unbounded: ++unbounded; break;
        }
    }
    CHECK(feasible > 0);
    CHECK(infeasible > 0);
}

TEST_CASE("duality: primal and dual optima agree exactly") {
    // max c^T x st Ax <= b, x >= 0  vs  min b^T y st A^T y >= c, y >= 0
    std::mt19937 gen(77);
    int both = 0;
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2, m = 2;
        Mat A = random_matrix(gen, m, n, -3, 3);
        Vec b, c;
        for (int i = 0; i < m; ++i) b.push_back(random_rational(gen, 0, 4));
        for (int j = 0; j < n; ++j) c.push_back(random_rational(gen, -3, 3));

        LinearProgram primal;
        primal.A = A;
        primal.rel = {Rel::Le, Rel::Le};
        primal.b = b;
        primal.bounds = {VarBound::nonneg(), VarBound::nonneg()};
        primal.objective = c;
        primal.maximize = true;

        LinearProgram dual;
        dual.A = A.transposed();
        dual.rel = {Rel::Ge, Rel::Ge};
        dual.b = c;
        dual.bounds = {VarBound::nonneg(), VarBound::nonneg()};
        dual.objective = b;
        dual.maximize = false;

        LpOutcome po = solve(primal), dout = solve(dual);
        if (po.status == LpStatus::Feasible && po.optimal &&
            dout.status == LpStatus::Feasible && dout.optimal) {
            CHECK(*po.optimal == *dout.optimal);
            ++both;
        }
    }
    CHECK(both > 10);
}
