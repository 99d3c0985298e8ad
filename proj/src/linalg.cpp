#include "crnlyap/linalg.hpp"

#include <stdexcept>

namespace crnlyap {

Mat::Mat(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = int(init.size());
    cols_ = rows_ ? int(init.begin()->size()) : 0;
    a_.resize(size_t(rows_) * cols_);
    int i = 0;
    for (const auto& r : init) {
        if (int(r.size()) != cols_) throw std::invalid_argument("ragged matrix literal");
        int j = 0;
        for (long v : r) (*this)(i, j++) = rat(v);
        ++i;
    }
}

Vec Mat::row(int i) const {
    Vec v(cols_);
    for (int j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
}

void Mat::set_row(int i, const Vec& v) {
    assert(int(v.size()) == cols_);
    for (int j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
}

void Mat::append_row(const Vec& v) {
    assert(int(v.size()) == cols_ || rows_ == 0);
    if (rows_ == 0) cols_ = int(v.size());
    a_.insert(a_.end(), v.begin(), v.end());
    ++rows_;
}

Mat Mat::transposed() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Mat Mat::from_rows(const std::vector<Vec>& rows, int cols) {
    Mat m(int(rows.size()), cols);
    for (int i = 0; i < int(rows.size()); ++i) m.set_row(i, rows[i]);
    return m;
}

Vec operator+(const Vec& x, const Vec& y) {
    assert(x.size() == y.size());
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

Vec operator-(const Vec& x, const Vec& y) {
    assert(x.size() == y.size());
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

Vec operator*(const Rational& s, const Vec& x) {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = s * x[i];
    return r;
}

Vec operator-(const Vec& x) {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = -x[i];
    return r;
}

Rational dot(const Vec& x, const Vec& y) {
    assert(x.size() == y.size());
    Rational s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

bool is_zero_vec(const Vec& v) {
    for (const auto& x : v)
        if (!is_zero(x)) return false;
    return true;
}

Vec mat_vec(const Mat& A, const Vec& x) {
    assert(int(x.size()) == A.cols());
    Vec r(A.rows());
    for (int i = 0; i < A.rows(); ++i) {
        Rational s = 0;
        for (int j = 0; j < A.cols(); ++j) s += A(i, j) * x[j];
        r[i] = s;
    }
    return r;
}

Vec vec_mat(const Vec& x, const Mat& A) {
    assert(int(x.size()) == A.rows());
    Vec r(A.cols());
    for (int j = 0; j < A.cols(); ++j) {
        Rational s = 0;
        for (int i = 0; i < A.rows(); ++i) s += x[i] * A(i, j);
        r[j] = s;
    }
    return r;
}

Mat mat_mul(const Mat& A, const Mat& B) {
    assert(A.cols() == B.rows());
    Mat C(A.rows(), B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int k = 0; k < A.cols(); ++k) {
            if (is_zero(A(i, k))) continue;
            for (int j = 0; j < B.cols(); ++j) C(i, j) += A(i, k) * B(k, j);
        }
    return C;
}

namespace {

// Gauss-Jordan to reduced row echelon form. Returns pivot column per pivot row.
std::vector<int> rref(Mat& A) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < A.cols() && r < A.rows(); ++c) {
        int p = -1;
        for (int i = r; i < A.rows(); ++i)
            if (!is_zero(A(i, c))) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < A.cols(); ++j) std::swap(A(p, j), A(r, j));
        Rational inv = 1 / A(r, c);
        for (int j = c; j < A.cols(); ++j) A(r, j) *= inv;
        for (int i = 0; i < A.rows(); ++i) {
            if (i == r || is_zero(A(i, c))) continue;
            Rational f = A(i, c);
            for (int j = c; j < A.cols(); ++j) A(i, j) -= f * A(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

int rank(const Mat& A) {
    Mat B = A;
    return int(rref(B).size());
}

std::vector<Vec> kernel_basis(const Mat& A) {
    Mat B = A;
    std::vector<int> pivots = rref(B);
    std::vector<bool> is_pivot(A.cols(), false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (int c = 0; c < A.cols(); ++c) {
        if (is_pivot[c]) continue;
        Vec v(A.cols(), Rational(0));
        v[c] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -B(int(r), c);
        basis.push_back(primitive(v));
    }
    return basis;
}

std::vector<Vec> left_kernel_basis(const Mat& A) { return kernel_basis(A.transposed()); }

std::optional<Vec> solve_linear(const Mat& A, const Vec& b) {
    assert(int(b.size()) == A.rows());
    Mat aug(A.rows(), A.cols() + 1);
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) aug(i, j) = A(i, j);
        aug(i, A.cols()) = b[i];
    }
    std::vector<int> pivots = rref(aug);
    for (int c : pivots)
        if (c == A.cols()) return std::nullopt;  // 0 = 1 row
    Vec x(A.cols(), Rational(0));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(int(r), A.cols());
    return x;
}

bool in_rowspace(const Mat& A, const Vec& v) {
    return solve_linear(A.transposed(), v).has_value();
}

bool kernel_equal(const Mat& A, const Mat& B) {
    assert(A.cols() == B.cols());
    if (rank(A) != rank(B)) return false;
    for (const Vec& v : kernel_basis(A))
        if (!is_zero_vec(mat_vec(B, v))) return false;
    return true;
}

Vec primitive_keep_sign(const Vec& v) {
    mpz_class den_lcm = 1, num_gcd = 0;
    for (const auto& q : v) {
        if (is_zero(q)) continue;
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den().get_mpz_t());
        den_lcm = l;
    }
    for (const auto& q : v) {
        if (is_zero(q)) continue;
        mpz_class n = q.get_num() * (den_lcm / q.get_den());
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
        num_gcd = g;
    }
    if (num_gcd == 0) return v;
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    return scale * v;
}

Vec primitive(const Vec& v) {
    Vec r = primitive_keep_sign(v);
    for (const auto& q : r) {
        if (is_zero(q)) continue;
        if (sign(q) < 0) return Rational(-1) * r;
        break;
    }
    return r;
}

}  // namespace crnlyap
