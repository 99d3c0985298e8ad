#pragma once

#include <cassert>
#include <initializer_list>
#include <optional>
#include <vector>

#include "crnlyap/rational.hpp"

namespace crnlyap {

// Dense exact-rational matrix, row major.
class Mat {
  public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}
    Mat(std::initializer_list<std::initializer_list<long>> init);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const Rational& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    Vec row(int i) const;
    void set_row(int i, const Vec& v);
    void append_row(const Vec& v);

    Mat transposed() const;

    bool operator==(const Mat& other) const = default;

    static Mat from_rows(const std::vector<Vec>& rows, int cols);

  private:
    int rows_, cols_;
    std::vector<Rational> a_;
};

Vec operator+(const Vec& x, const Vec& y);
Vec operator-(const Vec& x, const Vec& y);
Vec operator*(const Rational& s, const Vec& x);
Vec operator-(const Vec& x);
Rational dot(const Vec& x, const Vec& y);
bool is_zero_vec(const Vec& v);

// A * x
Vec mat_vec(const Mat& A, const Vec& x);
// x^T A
Vec vec_mat(const Vec& x, const Mat& A);
Mat mat_mul(const Mat& A, const Mat& B);

int rank(const Mat& A);

// Basis of {x : Ax = 0}, each vector scaled to a primitive integer vector
// with first nonzero entry positive. Deterministic given A.
std::vector<Vec> kernel_basis(const Mat& A);

// Basis of {d : d^T A = 0}.
std::vector<Vec> left_kernel_basis(const Mat& A);

// Any solution of Ax = b, or nullopt when inconsistent.
std::optional<Vec> solve_linear(const Mat& A, const Vec& b);

// True iff v lies in the row space of A.
bool in_rowspace(const Mat& A, const Vec& v);

// True iff ker A = ker B (same column count required).
bool kernel_equal(const Mat& A, const Mat& B);

// Scale v so entries are coprime integers and the first nonzero entry is
// positive. Zero vectors are returned unchanged.
Vec primitive(const Vec& v);
// Same but only clears denominators / common factors, keeping the sign.
Vec primitive_keep_sign(const Vec& v);

}  // namespace crnlyap
