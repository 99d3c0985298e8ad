#include <algorithm>
#include <random>
#include <set>

#include "crnlyap/lp.hpp"
#include "crnlyap/partition.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace crnlyap;
using namespace crnlyap::testing;

namespace {

bool strictly_inside(const Mat& H, const std::vector<int>& sig, const Vec& r) {
    Vec hr = mat_vec(H, r);
    for (size_t i = 0; i < hr.size(); ++i)
        if (sign(hr[i]) * sig[i] <= 0) return false;
    return true;
}

}  // namespace

TEST_CASE("partition of the three-reaction example network") {
    ReactionNetwork net = load_fixture("network1.crn");
    Mat gamma = stoichiometry(net);
    Partition part = build_partition(gamma, &gamma);

    CHECK(part.reduced.rows() == 3);  // rows 1 and 3 are antiparallel
    CHECK(part.num_regions() == 6);
    CHECK(part.neighbors.size() == 12);
    REQUIRE(part.mu.has_value());
    for (const auto& q : *part.mu) CHECK(sign(q) > 0);

    // the six surviving full signatures printed for this example
    std::set<std::vector<int>> expect = {
        {1, 1, -1, -1},  {1, -1, -1, 1},  {1, -1, -1, -1},
        {-1, -1, 1, 1},  {-1, 1, 1, -1},  {-1, 1, 1, 1}};
    std::set<std::vector<int>> got;
    for (const Region& reg : part.regions) got.insert(reg.signature);
    CHECK(got == expect);

    // symmetry pairing and strict interior witnesses
    for (int k = 0; k < part.num_regions(); ++k) {
        const Region& reg = part.regions[k];
        const Region& opp = part.regions[part.num_regions() - 1 - k];
        for (size_t i = 0; i < reg.signature.size(); ++i)
            CHECK(reg.signature[i] == -opp.signature[i]);
        CHECK(strictly_inside(gamma, reg.signature, reg.interior_witness));
    }
}

TEST_CASE("two half-spaces from a single row") {
    Mat H{{1, -1}};
    Partition part = build_partition(H);
    CHECK(part.num_regions() == 2);
    CHECK(part.regions[0].signature == std::vector<int>{1});
    CHECK(part.regions[1].signature == std::vector<int>{-1});
}

TEST_CASE("build_partition rejects bad inputs") {
    Mat zero_row{{0, 0}, {1, 1}};
    CHECK_THROWS_AS(build_partition(zero_row), std::invalid_argument);
    Mat H{{1, -1, 0}};
    Mat gamma{{-1, 0, 1}, {1, -2, 1}, {1, 0, -1}, {0, 1, -1}};
    CHECK_THROWS_AS(build_partition(H, &gamma), std::invalid_argument);
}

TEST_CASE("locate") {
    ReactionNetwork net = load_fixture("network1.crn");
    Mat gamma = stoichiometry(net);
    Partition part = build_partition(gamma);
    for (const Region& reg : part.regions) {
        auto hits = locate(part, reg.interior_witness);
        CHECK(hits == std::vector<int>{reg.index});
    }
    // kernel vectors land in every region
    CHECK(locate(part, Vec{1, 1, 1}).size() == size_t(part.num_regions()));
    // a generic vector: verify membership by direct multiplication
    Vec r{1, 1, 0};
    for (int k : locate(part, r)) {
        Vec hr = mat_vec(part.H, r);
        for (size_t i = 0; i < hr.size(); ++i)
            CHECK(sign(hr[i]) * part.regions[k].signature[i] >= 0);
    }
}

TEST_CASE("refinement with sign regions") {
    ReactionNetwork net = load_fixture("network1.crn");
    Mat gamma = stoichiometry(net);
    RefinedPartition plain = refine_with_sign_regions(gamma, Mat(0, 3));
    CHECK(plain.partition.num_regions() == 6);
    for (int k = 0; k < plain.partition.num_regions(); ++k) CHECK(plain.q[k] == k);

    ReactionNetwork ex5 = load_fixture("example5.crn");
    Mat g5 = stoichiometry(ex5);
    Mat hhat{{1, 0, 0, -1}};
    RefinedPartition refined = refine_with_sign_regions(g5, hhat);
    CHECK(refined.partition.num_regions() >=
          refined.sign_regions.num_regions());
    // each refined region sits inside its assigned sign region
    for (size_t k = 0; k < refined.q.size(); ++k) {
        const Region& fine = refined.partition.regions[k];
        const Region& coarse = refined.sign_regions.regions[refined.q[k]];
        for (int i = 0; i < g5.rows(); ++i)
            CHECK(fine.signature[i] == coarse.signature[i]);
    }

    Mat bad_hhat{{1, 0, 0, 0}};
    ReactionNetwork n1 = load_fixture("network1.crn");
    CHECK_THROWS_AS(
        refine_with_sign_regions(stoichiometry(n1), bad_hhat),
        std::invalid_argument);
}

TEST_CASE("partition properties on random matrices") {
    std::mt19937 gen(2024);
    std::uniform_int_distribution<int> rows(1, 4), cols(2, 4);
    int built = 0;
    while (built < 100) {
        Mat H = random_partition_matrix(gen, rows(gen), cols(gen));
        Partition part = build_partition(H);
        ++built;
        const int m = part.num_regions();
        REQUIRE(m >= 2);
        for (int k = 0; k < m; ++k) {
            const Region& reg = part.regions[k];
            // symmetry
            for (size_t i = 0; i < reg.signature.size(); ++i)
                CHECK(reg.signature[i] ==
                      -part.regions[m - 1 - k].signature[i]);
            // witness strictly interior
            CHECK(strictly_inside(H, reg.signature, reg.interior_witness));
            // positivity: a strictly positive point lies in the region when
            // a positive kernel direction exists
            if (part.mu) {
                Vec shifted = reg.interior_witness;
                Rational t = 1;
                for (size_t i = 0; i < shifted.size(); ++i) {
                    Rational need = -shifted[i] / (*part.mu)[i];
                    if (need >= t) t = need + 1;
                }
                for (size_t i = 0; i < shifted.size(); ++i)
                    shifted[i] += t * (*part.mu)[i];
                bool positive = true;
                for (const auto& q : shifted)
                    if (sign(q) <= 0) positive = false;
                CHECK(positive);
                Vec hs = mat_vec(H, shifted);
                for (size_t i = 0; i < hs.size(); ++i)
                    CHECK(sign(hs[i]) * reg.signature[i] >= 0);
            }
        }
        // covering: random vectors always land somewhere
        for (int probe = 0; probe < 10; ++probe) {
            Vec r;
            for (int j = 0; j < H.cols(); ++j)
                r.push_back(random_rational(gen, -6, 6));
            auto hits = locate(part, r);
            CHECK_FALSE(hits.empty());
            if (hits.size() >= 2) {
                // shared points satisfy the boundary equalities of the
                // differing reduced rows
                const Region& a = part.regions[hits[0]];
                const Region& b = part.regions[hits[1]];
                for (int t = 0; t < part.reduced.rows(); ++t)
                    if (a.reduced_signature[t] != b.reduced_signature[t])
                        CHECK(is_zero(dot(part.reduced.row(t), r)));
            }
        }
    }
}

TEST_CASE("neighbor facets have relative-interior witnesses") {
    ReactionNetwork net = load_fixture("network1.crn");
    Mat gamma = stoichiometry(net);
    Partition part = build_partition(gamma);
    for (const Partition::Neighbor& nb : part.neighbors) {
        const Region& reg = part.regions[nb.k];
        const int pt = part.reduced.rows();
        // LP: strict interior of the facet where the switched row vanishes
        LinearProgram lp;
        lp.A = Mat(0, gamma.cols());
        lp.rel.clear();
        lp.b.clear();
        for (int t = 0; t < pt; ++t) {
            Vec row = Rational(reg.reduced_signature[t]) * part.reduced.row(t);
            if (t == nb.switched) {
                lp.A.append_row(row);
                lp.rel.push_back(Rel::Eq);
                lp.b.push_back(0);
            } else {
                lp.A.append_row(row);
                lp.rel.push_back(Rel::Ge);
                lp.b.push_back(1);  // scaled strictness (cone)
            }
        }
        lp.bounds.assign(gamma.cols(), VarBound::free());
        CHECK(solve(lp).status == LpStatus::Feasible);
    }
}
