#include "polyfourier/fourier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>

#include "polyfourier/parallel.hpp"
#include "polyfourier/rng.hpp"

namespace pf {
namespace {

using CMat = Eigen::MatrixXcd;

// Pade-13 with scaling and squaring (Higham). Matrices here are at most
// 16x16 bidiagonal node matrices, so no lower-order economization is needed.
CMat expm(const CMat& a) {
  static const double b[14] = {64764752532480000.0,
                               32382376266240000.0,
                               7771770303897600.0,
                               1187353796428800.0,
                               129060195264000.0,
                               10559470521600.0,
                               670442572800.0,
                               33522128640.0,
                               1323241920.0,
                               40840800.0,
                               960960.0,
                               16380.0,
                               182.0,
                               1.0};
  const double theta13 = 5.371920351148152;
  const int n = static_cast<int>(a.rows());

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  CMat as = a;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    as /= std::pow(2.0, squarings);
  }

  const CMat id = CMat::Identity(n, n);
  const CMat a2 = as * as;
  const CMat a4 = a2 * a2;
  const CMat a6 = a4 * a2;
  const CMat u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                       b[5] * a4 + b[3] * a2 + b[1] * id);
  const CMat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                 b[4] * a4 + b[2] * a2 + b[0] * id;
  CMat r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

ExpNodes nodes_for(const std::vector<Vec>& verts, const Vec& s) {
  std::vector<Complex> ns;
  ns.reserve(verts.size());
  for (const Vec& v : verts) ns.emplace_back(0.0, -s.dot(v));
  return ExpNodes(std::move(ns));
}

// Signed convex terms of the inclusion-exclusion expansion; subset
// intersections are memoized by bitmask and built from one-smaller subsets.
std::vector<std::pair<double, ConvexPolytope>> signed_terms(
    const GeneralizedPolytope& p) {
  const int m = static_cast<int>(p.pieces().size());
  std::vector<std::optional<ConvexPolytope>> byMask(
      static_cast<std::size_t>(1) << m);
  std::vector<std::pair<double, ConvexPolytope>> out;
  for (int mask = 1; mask < (1 << m); ++mask) {
    const int low = mask & -mask;
    const int rest = mask ^ low;
    const int lowIdx = std::countr_zero(static_cast<unsigned>(low));
    if (rest == 0) {
      byMask[static_cast<std::size_t>(mask)] =
          p.pieces()[static_cast<std::size_t>(lowIdx)];
    } else if (byMask[static_cast<std::size_t>(rest)]) {
      byMask[static_cast<std::size_t>(mask)] =
          intersect(*byMask[static_cast<std::size_t>(rest)],
                    p.pieces()[static_cast<std::size_t>(lowIdx)]);
    }
    if (!byMask[static_cast<std::size_t>(mask)]) continue;
    const double sign =
        (std::popcount(static_cast<unsigned>(mask)) % 2) ? 1.0 : -1.0;
    out.emplace_back(sign, *byMask[static_cast<std::size_t>(mask)]);
  }
  return out;
}

}  // namespace

ExpNodes::ExpNodes(std::vector<Complex> ns) : nodes(std::move(ns)) {
  if (nodes.empty()) throw InvalidSpec("expdiff: no nodes");
  if (static_cast<int>(nodes.size()) > kMaxExpNodes)
    throw InvalidSpec("expdiff: more than 16 nodes");
  for (const Complex& z : nodes) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidSpec("expdiff: non-finite node");
    if (std::abs(z.real()) > kExpGuard || std::abs(z.imag()) > kExpGuard)
      throw Overflow("expdiff: node exceeds exponential range guard");
  }
}

Complex expdiff(const ExpNodes& nodes) {
  std::vector<Complex> ns = nodes.nodes;
  // Divided differences are symmetric; a canonical order makes the value
  // bitwise identical under permutation.
  std::sort(ns.begin(), ns.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  const int m = static_cast<int>(ns.size());
  if (m == 1) return std::exp(ns[0]);
  CMat h = CMat::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    h(i, i) = ns[static_cast<std::size_t>(i)];
    if (i + 1 < m) h(i, i + 1) = 1.0;
  }
  return expm(h)(0, m - 1);
}

Complex simplex_ft(const Simplex& sx, const Vec& s) {
  const int n = sx.dim();
  if (s.size() != n) throw InvalidSpec("simplex_ft: dimension mismatch");
  return factorial(n) * sx.volume() * expdiff(nodes_for(sx.vertices(), s));
}

Complex simplices_ft(const std::vector<Simplex>& parts, const Vec& s) {
  Complex total = 0.0;
  for (const Simplex& sx : parts) total += simplex_ft(sx, s);
  return total;
}

Complex polytope_ft(const ConvexPolytope& p, const Vec& s) {
  return simplices_ft(triangulate(p), s);
}

FourierEvaluator::FourierEvaluator(const GeneralizedPolytope& p)
    : dim_(p.dim()), volume_(0.0) {
  for (const auto& [sign, piece] : signed_terms(p)) {
    Term term{sign, triangulate(piece)};
    double vol = 0.0;
    for (const Simplex& sx : term.simplices) vol += sx.volume();
    volume_ += sign * vol;
    terms_.push_back(std::move(term));
  }
}

Complex FourierEvaluator::eval(const Vec& s) const {
  if (s.size() != dim_) throw InvalidSpec("eval: dimension mismatch");
  Complex total = 0.0;
  for (const Term& term : terms_)
    total += term.sign * simplices_ft(term.simplices, s);
  return total;
}

std::vector<Complex> FourierEvaluator::eval_batch(
    const std::vector<Vec>& points, int threads) const {
  std::vector<Complex> out(points.size());
  parallel_for(points.size(), threads,
               [&](std::size_t i) { out[i] = eval(points[i]); });
  return out;
}

Complex generalized_ft(const GeneralizedPolytope& p, const Vec& s) {
  return FourierEvaluator(p).eval(s);
}

void gauss_legendre_01(int order, std::vector<double>& nodes,
                       std::vector<double>& weights) {
  if (order < 1) throw InvalidSpec("gauss_legendre: order must be positive");
  nodes.assign(static_cast<std::size_t>(order), 0.0);
  weights.assign(static_cast<std::size_t>(order), 0.0);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    nodes[static_cast<std::size_t>(i)] = (1.0 - x) / 2.0;
    nodes[static_cast<std::size_t>(order - 1 - i)] = (1.0 + x) / 2.0;
    weights[static_cast<std::size_t>(i)] = w / 2.0;
    weights[static_cast<std::size_t>(order - 1 - i)] = w / 2.0;
  }
}

namespace {

QuadratureResult mc_ft(const GeneralizedPolytope& p, const Vec& s,
                       const QuadratureSpec& spec) {
  const int n = p.dim();
  const auto [lo, hi] = bounding_box(p);
  double boxVol = 1.0;
  for (int j = 0; j < n; ++j) boxVol *= hi[j] - lo[j];

  const std::size_t total = spec.samplesOrOrder;
  const std::size_t blockSize = 8192;
  const std::size_t blocks = (total + blockSize - 1) / blockSize;
  struct BlockSum {
    double re = 0.0, im = 0.0, re2 = 0.0, im2 = 0.0;
  };
  std::vector<BlockSum> sums(blocks);

  parallel_for(blocks, spec.threads, [&](std::size_t bi) {
    const std::size_t begin = bi * blockSize;
    const std::size_t end = std::min(begin + blockSize, total);
    Vec x(n);
    BlockSum acc;
    for (std::size_t i = begin; i < end; ++i) {
      SplitMix64 rng = substream(spec.seed, i);
      for (int j = 0; j < n; ++j) x[j] = rng.next_uniform(lo[j], hi[j]);
      double re = 0.0, im = 0.0;
      if (contains(p, x)) {
        const double phase = -s.dot(x);
        re = std::cos(phase);
        im = std::sin(phase);
      }
      acc.re += re;
      acc.im += im;
      acc.re2 += re * re;
      acc.im2 += im * im;
    }
    sums[bi] = acc;
  });

  BlockSum totalSum;
  for (const BlockSum& b : sums) {
    totalSum.re += b.re;
    totalSum.im += b.im;
    totalSum.re2 += b.re2;
    totalSum.im2 += b.im2;
  }
  const double nd = static_cast<double>(total);
  const double meanRe = totalSum.re / nd;
  const double meanIm = totalSum.im / nd;
  const double varRe =
      std::max(0.0, (totalSum.re2 - nd * meanRe * meanRe) / (nd - 1.0));
  const double varIm =
      std::max(0.0, (totalSum.im2 - nd * meanIm * meanIm) / (nd - 1.0));
  return {boxVol * Complex(meanRe, meanIm),
          boxVol * std::sqrt((varRe + varIm) / nd)};
}

Complex duffy_simplex(const Simplex& sx, const Vec& s,
                      const std::vector<double>& nodes,
                      const std::vector<double>& weights) {
  const int n = sx.dim();
  const int order = static_cast<int>(nodes.size());
  Mat d(n, n);
  for (int k = 1; k <= n; ++k)
    d.col(k - 1) = sx.vertices()[static_cast<std::size_t>(k)] -
                   sx.vertices()[0];
  const double detScale = sx.volume() * factorial(n);

  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Vec u(n), y(n), x(n);
  Complex total = 0.0;
  for (;;) {
    double w = 1.0;
    for (int j = 0; j < n; ++j) {
      u[j] = nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
      w *= weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    }
    // Duffy map from the unit cube onto the standard simplex.
    double shrink = 1.0;
    double jac = 1.0;
    for (int j = 0; j < n; ++j) {
      y[j] = u[j] * shrink;
      shrink *= 1.0 - u[j];
      jac *= std::pow(1.0 - u[j], n - 1 - j);
    }
    x = sx.vertices()[0] + d * y;
    const double phase = -s.dot(x);
    total += w * jac * Complex(std::cos(phase), std::sin(phase));

    int j = 0;
    for (; j < n; ++j) {
      if (++idx[static_cast<std::size_t>(j)] < order) break;
      idx[static_cast<std::size_t>(j)] = 0;
    }
    if (j == n) break;
  }
  return detScale * total;
}

QuadratureResult duffy_ft(const GeneralizedPolytope& p, const Vec& s,
                          const QuadratureSpec& spec) {
  std::vector<double> nodes, weights;
  gauss_legendre_01(static_cast<int>(spec.samplesOrOrder), nodes, weights);
  Complex total = 0.0;
  for (const auto& [sign, piece] : signed_terms(p))
    for (const Simplex& sx : triangulate(piece))
      total += sign * duffy_simplex(sx, s, nodes, weights);
  return {total, 0.0};
}

}  // namespace

QuadratureResult quadrature_ft(const GeneralizedPolytope& p, const Vec& s,
                               const QuadratureSpec& spec) {
  if (spec.samplesOrOrder == 0)
    throw InvalidSpec("quadrature: sample count / order must be positive");
  if (s.size() != p.dim())
    throw InvalidSpec("quadrature: dimension mismatch");
  if (spec.method == QuadratureSpec::Method::MonteCarlo) return mc_ft(p, s, spec);
  return duffy_ft(p, s, spec);
}

}  // namespace pf
