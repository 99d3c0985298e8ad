#include "crnlyap/certificate.hpp"

#include <stdexcept>

#include "crnlyap/lp.hpp"
#include "crnlyap/partition.hpp"

namespace crnlyap {

Vec extended_row(const Mat& C, int e) {
    const int K = C.rows();
    return e < K ? C.row(e) : -C.row(2 * K - 1 - e);
}

ConvexGeometry convex_geometry(const Mat& C) {
    ConvexGeometry geo;
    geo.K = C.rows();
    geo.witness.resize(size_t(2) * geo.K);
    parallel_for(geo.num_extended(), [&](int e) {
        Vec ce = extended_row(C, e);
        Mat M(0, C.cols());
        for (int l = 0; l < geo.num_extended(); ++l) {
            if (l == e) continue;
            Vec d = ce - extended_row(C, l);
            if (!is_zero_vec(d)) M.append_row(d);
        }
        if (M.rows() == 0) return;  // single direction: max-region is all space
        geo.witness[e] = strict_cone_interior(M);
    });
    return geo;
}

bool convex_adjacent(const Mat& C, int e, int l) {
    const int n2 = 2 * C.rows();
    Vec ce = extended_row(C, e);
    Vec facet = ce - extended_row(C, l);
    if (is_zero_vec(facet)) return false;
    Vec facet_dir = primitive(facet);
    // Relative interior of the facet: the switched inequality holds with
    // equality, every non-parallel inequality of the region strictly.
    LinearProgram lp;
    int nu = C.cols();
    lp.A = Mat(0, nu + 1);  // variables (r, t)
    auto add = [&](Vec row, Rel rel, Rational t_coef, Rational rhs) {
        row.push_back(std::move(t_coef));
        lp.A.append_row(row);
        lp.rel.push_back(rel);
        lp.b.push_back(std::move(rhs));
    };
    add(facet, Rel::Eq, 0, 0);
    bool any_strict = false;
    for (int j = 0; j < n2; ++j) {
        if (j == e || j == l) continue;
        Vec d = ce - extended_row(C, j);
        if (is_zero_vec(d) || primitive(d) == facet_dir) continue;
        add(d, Rel::Ge, -1, 0);
        any_strict = true;
    }
    {
        Vec row(nu, Rational(0));
        add(row, Rel::Le, 1, 1);  // t <= 1 bounds the cone scaling
    }
    if (!any_strict) return true;
    lp.bounds.assign(nu + 1, VarBound::free());
    Vec obj(nu + 1, Rational(0));
    obj[nu] = 1;
    lp.objective = obj;
    LpOutcome out = solve(lp);
    return out.status == LpStatus::Feasible && out.optimal && sign(*out.optimal) > 0;
}

Mat dedupe_rows_keep_scale(const std::vector<Vec>& rows, int cols) {
    std::vector<Vec> dirs;    // primitive directions in appearance order
    std::vector<Vec> best;    // representative with the largest scale
    std::vector<Rational> best_scale;
    for (const Vec& r : rows) {
        if (is_zero_vec(r)) continue;
        Vec dir = primitive(r);
        // |scale| relative to the primitive direction
        Rational s = 0;
        for (size_t j = 0; j < r.size(); ++j)
            if (!is_zero(dir[j])) { s = rational_abs(r[j] / dir[j]); break; }
        bool found = false;
        for (size_t t = 0; t < dirs.size(); ++t)
            if (dirs[t] == dir) {
                if (s > best_scale[t]) {
                    best[t] = r;
                    best_scale[t] = s;
                }
                found = true;
                break;
            }
        if (!found) {
            dirs.push_back(std::move(dir));
            best.push_back(r);
            best_scale.push_back(s);
        }
    }
    return Mat::from_rows(best, cols);
}

namespace {

PwlrCertificate max_over_sign_regions(const std::vector<Vec>& weighted_rows, int cols) {
    Mat D = Mat::from_rows(weighted_rows, cols);
    Partition part = build_partition(D);
    std::vector<Vec> c_rows;
    for (int k = 0; k < part.num_regions() / 2; ++k) {
        const Region& reg = part.regions[k];
        Vec c(cols, Rational(0));
        for (int i = 0; i < D.rows(); ++i)
            c = c + Rational(reg.signature[i]) * D.row(i);
        c_rows.push_back(std::move(c));
    }
    PwlrCertificate cert;
    cert.form = CertForm::Convex;
    cert.C = dedupe_rows_keep_scale(c_rows, cols);
    if (cert.C.rows() == 0)
        throw std::invalid_argument("candidate collapses to the zero function");
    return cert;
}

}  // namespace

PwlrCertificate l1_candidate(const Vec& xi, const Mat& gamma) {
    if (int(xi.size()) != gamma.rows())
        throw std::invalid_argument("xi length must match the species count");
    std::vector<Vec> weighted;
    for (int i = 0; i < gamma.rows(); ++i) {
        if (sign(xi[i]) < 0) throw std::invalid_argument("xi must be nonnegative");
        if (is_zero(xi[i])) continue;
        Vec row = xi[i] * gamma.row(i);
        if (!is_zero_vec(row)) weighted.push_back(std::move(row));
    }
    if (weighted.empty()) throw std::invalid_argument("xi selects no nonzero rows");
    return max_over_sign_regions(weighted, gamma.cols());
}

PwlrCertificate sum_abs_candidate(const std::vector<Vec>& terms, int cols) {
    std::vector<Vec> nz;
    for (const Vec& t : terms)
        if (!is_zero_vec(t)) nz.push_back(t);
    if (nz.empty()) throw std::invalid_argument("all terms are zero");
    return max_over_sign_regions(nz, cols);
}

}  // namespace crnlyap
