#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace pf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Rank by Gaussian elimination with full pivoting. A pivot counts while its
// magnitude exceeds tol times the largest magnitude of the input matrix.
// When pivotRows is given it receives the original row index of each pivot.
int pivoted_rank(Mat m, double tol, std::vector<int>* pivotRows = nullptr);

// Dimension of the affine hull of a point set. witness, when requested and
// the set is nonempty, receives rank+1 indices of affinely independent points.
int affine_rank(const std::vector<Vec>& points, double tol,
                std::vector<int>* witness = nullptr);

// Central-difference Jacobian with per-axis step hScale * (1 + |t_j|).
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& t,
                double hScale = 1e-5);

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations,
// iterated until the off-diagonal Frobenius norm falls below
// offTol * ||A||_F. Eigenpairs are returned unsorted.
struct JacobiEigen {
  Vec values;
  Mat vectors;  // columns are unit eigenvectors
};
JacobiEigen jacobi_eigen(const Mat& a, double offTol = 1e-12);

}  // namespace pf
