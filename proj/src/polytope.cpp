#include "polyfourier/polytope.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>

namespace pf {
namespace {

double max_abs(const std::vector<Vec>& pts) {
  double m = 0.0;
  for (const Vec& p : pts)
    if (p.size() > 0) m = std::max(m, p.cwiseAbs().maxCoeff());
  return m;
}

bool vec_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

bool points_close(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    const double tol =
        kCoordTol * (1.0 + std::max(std::abs(a[i]), std::abs(b[i])));
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

std::vector<Vec> dedup_sorted(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), vec_less);
  std::vector<Vec> out;
  for (const Vec& p : pts) {
    bool dup = false;
    for (const Vec& q : out)
      if (points_close(p, q)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(p);
  }
  return out;
}

bool next_combination(std::vector<int>& idx, int total) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[static_cast<std::size_t>(i)] < total - (k - i)) {
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        idx[static_cast<std::size_t>(j)] =
            idx[static_cast<std::size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

double det_small(const Mat& m) {
  if (m.rows() == 0) return 1.0;
  if (m.rows() == 1) return m(0, 0);
  if (m.rows() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m.determinant();
}

// Generalized cross product: vector orthogonal to the affine span of the
// n points selected by idx, zero when they are affinely dependent.
Vec subset_normal(const std::vector<Vec>& pts, const std::vector<int>& idx,
                  int n) {
  Vec a(n);
  if (n == 1) {
    a[0] = 1.0;
    return a;
  }
  Mat d(n, n - 1);
  for (int j = 1; j < n; ++j)
    d.col(j - 1) = pts[static_cast<std::size_t>(idx[static_cast<std::size_t>(
                       j)])] -
                   pts[static_cast<std::size_t>(idx[0])];
  Mat minor(n - 1, n - 1);
  for (int i = 0; i < n; ++i) {
    int r = 0;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      minor.row(r++) = d.row(k);
    }
    a[i] = ((i % 2) ? -1.0 : 1.0) * det_small(minor);
  }
  return a;
}

std::vector<Halfspace> enumerate_facets(const std::vector<Vec>& pts, int n) {
  std::vector<Halfspace> out;
  if (static_cast<int>(pts.size()) < n) return out;
  const double scale = 1.0 + max_abs(pts);
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  do {
    Vec a = subset_normal(pts, idx, n);
    const double len = a.norm();
    if (len <= 1e-12 * std::pow(scale, n - 1)) continue;
    a /= len;
    double beta = a.dot(pts[static_cast<std::size_t>(idx[0])]);
    bool below = true, above = true;
    for (const Vec& p : pts) {
      const double v = a.dot(p) - beta;
      if (v > kCoordTol * scale) below = false;
      if (v < -kCoordTol * scale) above = false;
      if (!below && !above) break;
    }
    if (!below && !above) continue;
    if (!below) {
      a = -a;
      beta = -beta;
    }
    bool dup = false;
    for (const Halfspace& h : out)
      if ((h.normal - a).cwiseAbs().maxCoeff() <= 1e-7 &&
          std::abs(h.offset - beta) <= 1e-7 * scale) {
        dup = true;
        break;
      }
    if (!dup) out.push_back({a, beta});
  } while (next_combination(idx, static_cast<int>(pts.size())));
  std::sort(out.begin(), out.end(), [](const Halfspace& x, const Halfspace& y) {
    if (vec_less(x.normal, y.normal)) return true;
    if (vec_less(y.normal, x.normal)) return false;
    return x.offset < y.offset;
  });
  return out;
}

double simplex_volume_raw(const std::vector<Vec>& v) {
  const int n = static_cast<int>(v.front().size());
  Mat d(n, n);
  for (int j = 1; j <= n; ++j) d.col(j - 1) = v[static_cast<std::size_t>(j)] - v[0];
  double fact = 1.0;
  for (int k = 2; k <= n; ++k) fact *= k;
  return std::abs(det_small(d)) / fact;
}

// Appends d-simplices (as vertex lists) triangulating the d-dimensional face
// spanned by pts; pts must be exactly the face's vertices, sorted.
void fan_face(const std::vector<Vec>& pts, int d,
              std::vector<std::vector<Vec>>& out) {
  if (static_cast<int>(pts.size()) == d + 1) {
    out.push_back(pts);
    return;
  }
  if (d == 1) {
    out.push_back({pts.front(), pts.back()});
    return;
  }
  const int n = static_cast<int>(pts.front().size());

  // Orthonormal basis of the face's tangent space, then work in d coords.
  Mat basis(n, d);
  int got = 0;
  for (std::size_t c = 1; c < pts.size() && got < d; ++c) {
    Vec v = pts[c] - pts[0];
    const double lenIn = v.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < got; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    if (v.norm() > 1e-9 * (1.0 + lenIn)) basis.col(got++) = v / v.norm();
  }
  if (got < d) throw DegenerateInput("face has deficient affine rank");

  std::vector<Vec> proj(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    proj[i] = basis.transpose() * (pts[i] - pts[0]);
  const double scale = 1.0 + max_abs(proj);
  const std::vector<Halfspace> faces = enumerate_facets(proj, d);

  const Vec& apex = pts[0];
  for (const Halfspace& h : faces) {
    if (std::abs(h.normal.dot(proj[0]) - h.offset) <= kCoordTol * scale)
      continue;
    std::vector<Vec> facePts;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (std::abs(h.normal.dot(proj[i]) - h.offset) <= kCoordTol * scale)
        facePts.push_back(pts[i]);
    std::vector<std::vector<Vec>> sub;
    fan_face(facePts, d - 1, sub);
    for (auto& s : sub) {
      s.push_back(apex);
      out.push_back(std::move(s));
    }
  }
}

}  // namespace

Hyperplane::Hyperplane(Vec a, double beta) : normal(std::move(a)), offset(beta) {
  if (normal.size() == 0 || normal.norm() <= 0.0)
    throw DegenerateInput("hyperplane normal must be nonzero");
}

Simplex::Simplex(std::vector<Vec> vertices) : verts_(std::move(vertices)) {
  if (verts_.empty()) throw DegenerateInput("simplex: no vertices");
  const int n = static_cast<int>(verts_.front().size());
  if (static_cast<int>(verts_.size()) != n + 1)
    throw DegenerateInput("simplex needs exactly n+1 vertices");
  for (const Vec& v : verts_)
    if (static_cast<int>(v.size()) != n)
      throw DegenerateInput("simplex: mixed dimensions");
  std::sort(verts_.begin(), verts_.end(), vec_less);
  volume_ = simplex_volume_raw(verts_);
  const double scale = std::max(1.0, max_abs(verts_));
  if (volume_ <= kDegenerateSimplexTol * std::pow(scale, n))
    throw DegenerateInput("degenerate simplex");
}

bool ConvexPolytope::contains(const Vec& x) const {
  for (const Halfspace& h : halves_)
    if (h.normal.dot(x) > h.offset + kCoordTol * (1.0 + std::abs(h.offset)))
      return false;
  return true;
}

GeneralizedPolytope::GeneralizedPolytope(std::vector<ConvexPolytope> pieces)
    : pieces_(std::move(pieces)) {
  if (pieces_.empty())
    throw DegenerateInput("generalized polytope needs at least one piece");
  if (static_cast<int>(pieces_.size()) > kMaxPieces)
    throw InvalidSpec("piece count exceeds cap of 8");
  for (const ConvexPolytope& p : pieces_)
    if (p.dim() != pieces_.front().dim())
      throw DegenerateInput("pieces have mixed dimensions");
}

ConvexPolytope hull_facets(const std::vector<Vec>& points) {
  if (points.empty()) throw DegenerateInput("hull_facets: no points");
  const int n = static_cast<int>(points.front().size());
  if (n < 1 || n > kMaxDim)
    throw InvalidSpec("dimension must be between 1 and 4");
  for (const Vec& p : points)
    if (static_cast<int>(p.size()) != n)
      throw DegenerateInput("hull_facets: mixed dimensions");

  std::vector<Vec> pts = dedup_sorted(points);
  if (static_cast<int>(pts.size()) < n + 1)
    throw DegenerateInput("hull_facets: fewer than n+1 distinct points");
  if (affine_rank(pts, 1e-9) < n)
    throw DegenerateInput("hull_facets: points span less than n dimensions");

  std::vector<Halfspace> halves = enumerate_facets(pts, n);
  const double scale = 1.0 + max_abs(pts);

  std::vector<Vec> verts;
  for (const Vec& p : pts) {
    std::vector<Vec> tightNormals;
    for (const Halfspace& h : halves)
      if (std::abs(h.normal.dot(p) - h.offset) <= kCoordTol * scale)
        tightNormals.push_back(h.normal);
    if (static_cast<int>(tightNormals.size()) < n) continue;
    Mat nm(static_cast<int>(tightNormals.size()), n);
    for (std::size_t i = 0; i < tightNormals.size(); ++i)
      nm.row(static_cast<int>(i)) = tightNormals[i].transpose();
    if (pivoted_rank(nm, 1e-9) == n) verts.push_back(p);
  }
  if (static_cast<int>(verts.size()) < n + 1)
    throw DegenerateInput("hull_facets: vertex recovery failed");
  return ConvexPolytope(n, std::move(verts), std::move(halves));
}

std::optional<ConvexPolytope> intersect(const ConvexPolytope& p,
                                        const ConvexPolytope& q) {
  if (p.dim() != q.dim())
    throw DegenerateInput("intersect: dimension mismatch");
  const int n = p.dim();

  std::vector<Halfspace> hs = p.halfspaces();
  hs.insert(hs.end(), q.halfspaces().begin(), q.halfspaces().end());
  const double scale =
      1.0 + std::max(max_abs(p.vertices()), max_abs(q.vertices()));

  std::vector<Vec> cand;
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  do {
    Mat a(n, n);
    Vec b(n);
    for (int i = 0; i < n; ++i) {
      a.row(i) = hs[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]
                     .normal.transpose();
      b[i] = hs[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]
                 .offset;
    }
    Eigen::FullPivLU<Mat> lu(a);
    lu.setThreshold(1e-9);
    if (!lu.isInvertible()) continue;
    const Vec x = lu.solve(b);
    bool feasible = true;
    for (const Halfspace& h : hs)
      if (h.normal.dot(x) > h.offset + kCoordTol * scale) {
        feasible = false;
        break;
      }
    if (feasible) cand.push_back(x);
  } while (next_combination(idx, static_cast<int>(hs.size())));

  cand = dedup_sorted(cand);
  if (static_cast<int>(cand.size()) < n + 1) return std::nullopt;
  if (affine_rank(cand, 1e-9) < n) return std::nullopt;
  return hull_facets(cand);
}

std::vector<Simplex> triangulate_from(const ConvexPolytope& p, int apexIndex) {
  const int n = p.dim();
  const std::vector<Vec>& verts = p.vertices();
  if (apexIndex < 0 || apexIndex >= static_cast<int>(verts.size()))
    throw InvalidSpec("triangulate_from: apex index out of range");
  if (static_cast<int>(verts.size()) == n + 1) return {Simplex(verts)};

  const Vec& apex = verts[static_cast<std::size_t>(apexIndex)];
  const double scale = 1.0 + max_abs(verts);
  const double volTol =
      kDegenerateSimplexTol * std::pow(std::max(1.0, max_abs(verts)), n);

  std::vector<Simplex> out;
  for (const Halfspace& h : p.halfspaces()) {
    if (std::abs(h.normal.dot(apex) - h.offset) <= kCoordTol * scale) continue;
    std::vector<Vec> facePts;
    for (const Vec& v : verts)
      if (std::abs(h.normal.dot(v) - h.offset) <= kCoordTol * scale)
        facePts.push_back(v);
    std::vector<std::vector<Vec>> sub;
    fan_face(facePts, n - 1, sub);
    for (auto& s : sub) {
      s.push_back(apex);
      if (simplex_volume_raw(s) <= volTol) continue;
      out.push_back(Simplex(std::move(s)));
    }
  }
  if (out.empty()) throw DegenerateInput("triangulation produced no simplices");
  return out;
}

std::vector<Simplex> triangulate(const ConvexPolytope& p) {
  const std::vector<Vec>& verts = p.vertices();
  Vec centroid = Vec::Zero(p.dim());
  for (const Vec& v : verts) centroid += v;
  centroid /= static_cast<double>(verts.size());
  int apex = 0;
  double best = (verts[0] - centroid).norm();
  for (std::size_t i = 1; i < verts.size(); ++i) {
    const double d = (verts[i] - centroid).norm();
    if (d < best) {
      best = d;
      apex = static_cast<int>(i);
    }
  }
  return triangulate_from(p, apex);
}

double volume(const ConvexPolytope& p) {
  double total = 0.0;
  for (const Simplex& s : triangulate(p)) total += s.volume();
  return total;
}

Vec mirror_point(const Vec& x, const Hyperplane& h) {
  const double d = (h.normal.dot(x) - h.offset) / h.normal.squaredNorm();
  return x - 2.0 * d * h.normal;
}

GeneralizedPolytope mirror(const GeneralizedPolytope& p, const Hyperplane& h) {
  if (h.normal.size() != p.dim())
    throw DegenerateInput("mirror: hyperplane dimension mismatch");
  std::vector<ConvexPolytope> pieces;
  pieces.reserve(p.pieces().size());
  for (const ConvexPolytope& piece : p.pieces()) {
    std::vector<Vec> mapped;
    mapped.reserve(piece.vertices().size());
    for (const Vec& v : piece.vertices()) mapped.push_back(mirror_point(v, h));
    pieces.push_back(hull_facets(mapped));
  }
  return GeneralizedPolytope(std::move(pieces));
}

GeneralizedPolytope affine_image(const GeneralizedPolytope& p, const Mat& m,
                                 const Vec& w) {
  if (m.rows() != p.dim() || m.cols() != p.dim() || w.size() != p.dim())
    throw DegenerateInput("affine_image: shape mismatch");
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(1e-9);
  if (!lu.isInvertible()) throw SingularMatrix("affine_image: singular matrix");
  std::vector<ConvexPolytope> pieces;
  pieces.reserve(p.pieces().size());
  for (const ConvexPolytope& piece : p.pieces()) {
    std::vector<Vec> mapped;
    mapped.reserve(piece.vertices().size());
    for (const Vec& v : piece.vertices()) mapped.push_back(m * v + w);
    pieces.push_back(hull_facets(mapped));
  }
  return GeneralizedPolytope(std::move(pieces));
}

std::pair<Vec, Vec> bounding_box(const GeneralizedPolytope& p) {
  Vec lo = p.pieces().front().vertices().front();
  Vec hi = lo;
  for (const ConvexPolytope& piece : p.pieces())
    for (const Vec& v : piece.vertices()) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  return {lo, hi};
}

bool contains(const GeneralizedPolytope& p, const Vec& x) {
  for (const ConvexPolytope& piece : p.pieces())
    if (piece.contains(x)) return true;
  return false;
}

}  // namespace pf
