#include <random>

#include "crnlyap/linalg.hpp"
#include "crnlyap/network.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace crnlyap;
using namespace crnlyap::testing;

TEST_CASE("matrix and vector basics") {
    Mat A{{1, 2}, {3, 4}};
    CHECK(A.rows() == 2);
    CHECK(A.cols() == 2);
    CHECK(A(1, 0) == Rational(3));
    CHECK(A.row(1) == Vec{3, 4});
    Mat At = A.transposed();
    CHECK(At(0, 1) == Rational(3));
    CHECK(mat_vec(A, Vec{1, 1}) == Vec{3, 7});
    CHECK(vec_mat(Vec{1, 1}, A) == Vec{4, 6});
    CHECK(mat_mul(A, At) == Mat{{5, 11}, {11, 25}});
    CHECK(dot(Vec{1, 2, 3}, Vec{3, 2, 1}) == Rational(10));
    CHECK(is_zero_vec(Vec{0, 0}));
    CHECK_FALSE(is_zero_vec(Vec{0, 1}));
}

TEST_CASE("rank and kernels") {
    Mat gamma{{-1, 0, 1}, {1, -2, 1}, {1, 0, -1}, {0, 1, -1}};
    CHECK(rank(gamma) == 2);
    auto basis = kernel_basis(gamma);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0] == Vec{1, 1, 1});
    CHECK(is_zero_vec(mat_vec(gamma, basis[0])));

    Mat column{{-1}, {1}};
    CHECK(kernel_basis(column).empty());

    Mat eq15{{-1, 1, 0}, {-1, 0, 1}};
    auto b15 = kernel_basis(eq15);
    REQUIRE(b15.size() == 1);
    CHECK(b15[0] == Vec{1, 1, 1});

    auto left = left_kernel_basis(gamma);
    REQUIRE(left.size() == 2);
    for (const Vec& d : left) CHECK(is_zero_vec(vec_mat(d, gamma)));
}

TEST_CASE("solve_linear and rowspace membership") {
    Mat A{{1, 1}, {1, -1}};
    auto x = solve_linear(A, Vec{3, 1});
    REQUIRE(x.has_value());
    CHECK(mat_vec(A, *x) == Vec{3, 1});

    Mat singular{{1, 1}, {2, 2}};
    CHECK_FALSE(solve_linear(singular, Vec{1, 1}).has_value());

    Mat R{{1, 0, -1}, {0, 1, -1}};
    CHECK(in_rowspace(R, Vec{2, 3, -5}));
    CHECK_FALSE(in_rowspace(R, Vec{1, 1, 1}));
}

TEST_CASE("kernel_equal") {
    Mat gamma{{-1, 0, 1}, {1, -2, 1}, {1, 0, -1}, {0, 1, -1}};
    Mat C{{1, -1, 0}, {0, 1, -1}, {-1, 0, 1}};
    CHECK(kernel_equal(gamma, C));
    Mat single{{1, -1, 0}};
    CHECK_FALSE(kernel_equal(gamma, single));
}

TEST_CASE("primitive scaling") {
    CHECK(primitive(Vec{Rational(-2, 3), Rational(4, 3)}) == Vec{1, -2});
    CHECK(primitive(Vec{0, 0}) == Vec{0, 0});
    CHECK(primitive_keep_sign(Vec{Rational(-2, 3), Rational(4, 3)}) == Vec{-1, 2});
}

TEST_CASE("kernel bases are exact on random matrices") {
    std::mt19937 gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        Mat A = random_matrix(gen, 3, 4);
        auto basis = kernel_basis(A);
        CHECK(int(basis.size()) == A.cols() - rank(A));
        for (const Vec& v : basis) {
            CHECK_FALSE(is_zero_vec(v));
            CHECK(is_zero_vec(mat_vec(A, v)));
        }
    }
}
