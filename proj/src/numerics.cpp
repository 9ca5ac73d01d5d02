#include "polyfourier/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pf {

int pivoted_rank(Mat m, double tol, std::vector<int>* pivotRows) {
  if (pivotRows) pivotRows->clear();
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  if (rows == 0 || cols == 0) return 0;

  const double scale = m.cwiseAbs().maxCoeff();
  if (scale <= 0.0) return 0;
  const double threshold = tol * scale;

  std::vector<int> origRow(static_cast<std::size_t>(rows));
  std::iota(origRow.begin(), origRow.end(), 0);

  int r = 0;
  const int steps = std::min(rows, cols);
  for (; r < steps; ++r) {
    int pi = -1, pj = -1;
    double best = threshold;
    for (int i = r; i < rows; ++i)
      for (int j = r; j < cols; ++j)
        if (std::abs(m(i, j)) > best) {
          best = std::abs(m(i, j));
          pi = i;
          pj = j;
        }
    if (pi < 0) break;

    m.row(r).swap(m.row(pi));
    std::swap(origRow[static_cast<std::size_t>(r)],
              origRow[static_cast<std::size_t>(pi)]);
    m.col(r).swap(m.col(pj));
    if (pivotRows) pivotRows->push_back(origRow[static_cast<std::size_t>(r)]);

    for (int i = r + 1; i < rows; ++i) {
      const double f = m(i, r) / m(r, r);
      m.row(i).tail(cols - r) -= f * m.row(r).tail(cols - r);
    }
  }
  return r;
}

int affine_rank(const std::vector<Vec>& points, double tol,
                std::vector<int>* witness) {
  if (witness) witness->clear();
  if (points.empty()) return -1;
  if (points.size() == 1) {
    if (witness) witness->push_back(0);
    return 0;
  }

  const int n = static_cast<int>(points.front().size());
  Mat diffs(static_cast<int>(points.size()) - 1, n);
  for (std::size_t i = 1; i < points.size(); ++i)
    diffs.row(static_cast<int>(i) - 1) = (points[i] - points[0]).transpose();

  std::vector<int> pivotRows;
  const int rank = pivoted_rank(diffs, tol, witness ? &pivotRows : nullptr);
  if (witness) {
    witness->push_back(0);
    for (int row : pivotRows) witness->push_back(row + 1);
  }
  return rank;
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& t,
                double hScale) {
  const Vec f0 = f(t);
  const int m = static_cast<int>(f0.size());
  const int d = static_cast<int>(t.size());
  Mat jac(m, d);
  for (int j = 0; j < d; ++j) {
    const double h = hScale * (1.0 + std::abs(t[j]));
    Vec tp = t, tm = t;
    tp[j] += h;
    tm[j] -= h;
    jac.col(j) = (f(tp) - f(tm)) / (2.0 * h);
  }
  return jac;
}

JacobiEigen jacobi_eigen(const Mat& a, double offTol) {
  const int n = static_cast<int>(a.rows());
  Mat m = a;
  Mat v = Mat::Identity(n, n);
  const double normA = a.norm();
  if (normA <= 0.0) return {Vec::Zero(n), v};

  auto offNorm = [&] {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += 2.0 * m(p, q) * m(p, q);
    return std::sqrt(s);
  };

  const int maxSweeps = 64;
  for (int sweep = 0; sweep < maxSweeps && offNorm() > offTol * normA;
       ++sweep) {
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(m(p, q)) <= 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        // Smaller-angle root for stability.
        double tval = (theta >= 0.0 ? 1.0 : -1.0) /
                      (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tval * tval + 1.0);
        const double s = tval * c;
        for (int k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  // Fixed sign convention so repeated runs agree: the entry of largest
  // magnitude in each eigenvector is positive.
  for (int j = 0; j < n; ++j) {
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(v(i, j)) > std::abs(v(imax, j))) imax = i;
    if (v(imax, j) < 0.0) v.col(j) = -v.col(j);
  }
  return {m.diagonal(), v};
}

}  // namespace pf
