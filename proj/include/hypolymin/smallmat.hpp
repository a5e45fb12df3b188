#pragma once

#include <vector>

namespace hypolymin {

// Dense row-major matrix for the optimizer's small systems (at most 4 rows by
// n+2 columns with desk-scale n). Deliberately minimal: only the pieces the
// constrained descent needs, implemented without external dependencies.
struct SmallMat {
    int rows = 0, cols = 0;
    std::vector<double> a;  // row-major, rows*cols

    SmallMat() = default;
    SmallMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    SmallMat transposed() const;
};

// Singular values in decreasing order, by one-sided Jacobi on the side with
// fewer vectors. Exact to machine precision at these sizes; used for honest
// rank ratios (sigma_k / sigma_1) in the certificates.
std::vector<double> singular_values(const SmallMat& m);

// Minimum-norm least-squares solution x of A x = b (A with full row rank in
// the generic case; rank-deficient rows are handled by truncating tiny
// singular values at rel_cut * sigma_1).
std::vector<double> solve_min_norm(const SmallMat& A, const std::vector<double>& b,
                                   double rel_cut = 1e-13);

// Orthonormal basis of the nullspace of A (columns of the result, each of
// length A.cols). Computed from the full Jacobi SVD of A^t.
std::vector<std::vector<double>> nullspace(const SmallMat& A, double rel_cut = 1e-11);

// Euclidean projection of v onto the nullspace of A: v - A^t (A A^t)^+ A v.
std::vector<double> project_to_nullspace(const SmallMat& A, const std::vector<double>& v,
                                         double rel_cut = 1e-13);

} // namespace hypolymin
