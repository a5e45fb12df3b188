#include "hypolymin/smallmat.hpp"

#include <cmath>
#include <stdexcept>

namespace hypolymin {

SmallMat SmallMat::transposed() const {
    SmallMat t(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
}

namespace {

// One-sided Jacobi on B = A^t (few columns): rotates column pairs until
// mutually orthogonal, giving B = U diag(sigma) V^t with U the normalized
// rotated columns. Returns sigma (unsorted), U columns (length B.rows), and
// V (B.cols x B.cols).
struct ThinSvd {
    std::vector<double> sigma;               // size c
    std::vector<std::vector<double>> u;      // c columns, each length r
    std::vector<std::vector<double>> v;      // c columns, each length c
};

ThinSvd jacobi_svd_thin(const SmallMat& B) {
    int r = B.rows, c = B.cols;
    std::vector<std::vector<double>> col(c, std::vector<double>(r));
    for (int j = 0; j < c; ++j)
        for (int i = 0; i < r; ++i) col[j][i] = B.at(i, j);

    std::vector<std::vector<double>> v(c, std::vector<double>(c, 0.0));
    for (int j = 0; j < c; ++j) v[j][j] = 1.0;

    auto dot = [r](const std::vector<double>& x, const std::vector<double>& y) {
        double s = 0.0;
        for (int i = 0; i < r; ++i) s += x[i] * y[i];
        return s;
    };

    for (int sweep = 0; sweep < 60; ++sweep) {
        double worst = 0.0;
        for (int p = 0; p < c - 1; ++p)
            for (int q = p + 1; q < c; ++q) {
                double app = dot(col[p], col[p]);
                double aqq = dot(col[q], col[q]);
                double apq = dot(col[p], col[q]);
                double denom = std::sqrt(app * aqq);
                if (denom == 0.0) continue;
                worst = std::max(worst, std::abs(apq) / denom);
                if (std::abs(apq) <= 1e-15 * denom) continue;

                double zeta = (aqq - app) / (2.0 * apq);
                double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double cs = 1.0 / std::sqrt(1.0 + t * t);
                double sn = cs * t;
                for (int i = 0; i < r; ++i) {
                    double xp = col[p][i], xq = col[q][i];
                    col[p][i] = cs * xp - sn * xq;
                    col[q][i] = sn * xp + cs * xq;
                }
                for (int i = 0; i < c; ++i) {
                    double xp = v[p][i], xq = v[q][i];
                    v[p][i] = cs * xp - sn * xq;
                    v[q][i] = sn * xp + cs * xq;
                }
            }
        if (worst < 1e-15) break;
    }

    ThinSvd out;
    out.sigma.resize(c);
    out.u.assign(c, std::vector<double>(r, 0.0));
    out.v = v;
    for (int j = 0; j < c; ++j) {
        double n = std::sqrt(dot(col[j], col[j]));
        out.sigma[j] = n;
        if (n > 0.0)
            for (int i = 0; i < r; ++i) out.u[j][i] = col[j][i] / n;
    }
    return out;
}

// SVD of A itself via the thin decomposition of A^t: A = V diag(sigma) U^t,
// so A's right singular vectors live in the U columns (length A.cols).
ThinSvd svd_of(const SmallMat& A) { return jacobi_svd_thin(A.transposed()); }

} // namespace

std::vector<double> singular_values(const SmallMat& m) {
    ThinSvd s = svd_of(m);
    std::vector<double> sv = s.sigma;
    for (size_t i = 1; i < sv.size(); ++i)
        for (size_t j = i; j > 0 && sv[j] > sv[j - 1]; --j) std::swap(sv[j], sv[j - 1]);
    return sv;
}

std::vector<double> solve_min_norm(const SmallMat& A, const std::vector<double>& b,
                                   double rel_cut) {
    if (static_cast<int>(b.size()) != A.rows)
        throw std::invalid_argument("solve_min_norm: size mismatch");
    ThinSvd s = svd_of(A);  // A = V sigma U^t; V columns in s.v (length A.rows)
    double smax = 0.0;
    for (double x : s.sigma) smax = std::max(smax, x);

    std::vector<double> x(A.cols, 0.0);
    for (size_t k = 0; k < s.sigma.size(); ++k) {
        if (s.sigma[k] <= rel_cut * smax || s.sigma[k] == 0.0) continue;
        double vb = 0.0;
        for (int i = 0; i < A.rows; ++i) vb += s.v[k][i] * b[i];
        double coef = vb / s.sigma[k];
        for (int j = 0; j < A.cols; ++j) x[j] += coef * s.u[k][j];
    }
    return x;
}

std::vector<std::vector<double>> nullspace(const SmallMat& A, double rel_cut) {
    ThinSvd s = svd_of(A);
    double smax = 0.0;
    for (double x : s.sigma) smax = std::max(smax, x);

    // Range directions of A^t (right singular vectors with non-negligible
    // sigma), completed to an orthonormal basis by Gram-Schmidt over the
    // standard basis; the added vectors span null(A).
    std::vector<std::vector<double>> range;
    for (size_t k = 0; k < s.sigma.size(); ++k)
        if (smax > 0.0 && s.sigma[k] > rel_cut * smax) range.push_back(s.u[k]);

    std::vector<std::vector<double>> basis = range;
    std::vector<std::vector<double>> null_basis;
    for (int e = 0; e < A.cols && static_cast<int>(basis.size()) < A.cols; ++e) {
        std::vector<double> w(A.cols, 0.0);
        w[e] = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) {
                double proj = 0.0;
                for (int i = 0; i < A.cols; ++i) proj += q[i] * w[i];
                for (int i = 0; i < A.cols; ++i) w[i] -= proj * q[i];
            }
        double n = 0.0;
        for (double x : w) n += x * x;
        n = std::sqrt(n);
        if (n > 1e-8) {
            for (double& x : w) x /= n;
            basis.push_back(w);
            null_basis.push_back(w);
        }
    }
    return null_basis;
}

std::vector<double> project_to_nullspace(const SmallMat& A, const std::vector<double>& v,
                                         double rel_cut) {
    if (static_cast<int>(v.size()) != A.cols)
        throw std::invalid_argument("project_to_nullspace: size mismatch");
    ThinSvd s = svd_of(A);
    double smax = 0.0;
    for (double x : s.sigma) smax = std::max(smax, x);

    std::vector<double> out = v;
    for (size_t k = 0; k < s.sigma.size(); ++k) {
        if (smax == 0.0 || s.sigma[k] <= rel_cut * smax) continue;
        double proj = 0.0;
        for (int i = 0; i < A.cols; ++i) proj += s.u[k][i] * v[i];
        for (int i = 0; i < A.cols; ++i) out[i] -= proj * s.u[k][i];
    }
    return out;
}

} // namespace hypolymin
