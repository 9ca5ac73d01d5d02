#include "polyfourier/quadric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "polyfourier/rng.hpp"

namespace pf {
namespace {

struct EigenSplit {
  Vec values;
  Mat vectors;
  std::vector<int> pos, neg, ker;
  double normA;
};

EigenSplit split_eigen(const Mat& a) {
  EigenSplit out;
  const JacobiEigen eig = jacobi_eigen(a, kJacobiOffTol);
  out.values = eig.values;
  out.vectors = eig.vectors;
  out.normA = a.norm();
  for (int j = 0; j < a.rows(); ++j) {
    if (eig.values[j] > kEigenRankTol * out.normA)
      out.pos.push_back(j);
    else if (eig.values[j] < -kEigenRankTol * out.normA)
      out.neg.push_back(j);
    else
      out.ker.push_back(j);
  }
  return out;
}

int argmax_abs(const Vec& values, const std::vector<int>& subset) {
  int best = subset.front();
  for (int j : subset)
    if (std::abs(values[j]) > std::abs(values[best])) best = j;
  return best;
}

bool line_free_formula(const QuadricClassification& cl) {
  switch (cl.caseId) {
    case QuadricCase::DefiniteSphere:
      return true;
    case QuadricCase::Paraboloid:
      return std::all_of(cl.epsilons.begin(), cl.epsilons.end(),
                         [&](int e) { return e == cl.epsilons.front(); });
    case QuadricCase::CentralMixed: {
      // Normalized form has inertia (1 + #positive middle signs) positives;
      // a central mixed quadric misses lines exactly when that count is 1
      // and the right-hand side is nonzero.
      const double coneTol =
          1e-12 * (1.0 + residual_scale(cl.source, cl.v));
      if (cl.cPrime <= coneTol) return false;
      return std::none_of(cl.epsilons.begin(), cl.epsilons.end(),
                          [](int e) { return e == 1; });
    }
  }
  return false;
}

bool checked_line_free(const QuadricClassification& cl) {
  const bool formula = line_free_formula(cl);
  if (formula && find_line(cl.source))
    throw InternalInconsistency(
        "falsification search found a line on a quadric deduced line-free");
  return formula;
}

}  // namespace

Quadric::Quadric(Mat a, Vec bv, double cv)
    : A(std::move(a)), b(std::move(bv)), c(cv) {
  const int n = static_cast<int>(A.rows());
  if (n < 2 || n > 4 || A.cols() != n)
    throw InvalidSpec("quadric matrix must be square with 2 <= n <= 4");
  if (b.size() != n) throw InvalidSpec("quadric b has wrong dimension");
  const double scale = A.cwiseAbs().maxCoeff();
  if (scale <= 0.0) throw InvalidSpec("quadric matrix must be nonzero");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidSpec("quadric matrix must be symmetric");
}

double residual(const Quadric& q, const Vec& s) {
  return 0.5 * s.dot(q.A * s) + q.b.dot(s) + q.c;
}

double residual_scale(const Quadric& q, const Vec& s) {
  const Vec as = s.cwiseAbs();
  return 0.5 * as.dot(q.A.cwiseAbs() * as) + q.b.cwiseAbs().dot(as) +
         std::abs(q.c);
}

QuadricClassification classify(const Quadric& q) {
  const int n = q.dim();

  Mat ab(n, n + 1);
  ab.leftCols(n) = q.A;
  ab.col(n) = q.b;
  if (pivoted_rank(ab, 1e-9) < n)
    throw UnsupportedQuadric(
        "rank of (A|b) is below n: the surface is a cylinder over a "
        "lower-dimensional quadric and contains lines");

  const EigenSplit e = split_eigen(q.A);
  const int rank = n - static_cast<int>(e.ker.size());

  QuadricCase caseId;
  std::vector<int> epsilons;
  double cPrime = 0.0;
  Mat T = Mat::Zero(n, n);
  Vec v = Vec::Zero(n);

  if (rank == n - 1) {
    caseId = QuadricCase::Paraboloid;
    const double flip = (e.neg.size() > e.pos.size()) ? -1.0 : 1.0;
    const Vec lam = flip * e.values;
    const Vec bf = flip * q.b;

    const int kerIdx = e.ker.front();
    const Vec uk = e.vectors.col(kerIdx);
    const double beta = uk.dot(bf);

    std::vector<int> nz;
    for (int j = 0; j < n; ++j)
      if (j != kerIdx) nz.push_back(j);
    std::sort(nz.begin(), nz.end(), [&](int a2, int b2) {
      if (lam[a2] != lam[b2]) return lam[a2] > lam[b2];
      return a2 < b2;
    });

    Vec vpart = Vec::Zero(n);
    for (int j : nz)
      vpart += -(e.vectors.col(j).dot(bf)) / lam[j] * e.vectors.col(j);
    const double mu = -(flip * residual(q, vpart)) / beta;
    v = vpart + mu * uk;

    for (std::size_t i = 0; i < nz.size(); ++i) {
      const int j = nz[i];
      epsilons.push_back(lam[j] > 0 ? 1 : -1);
      T.col(static_cast<int>(i)) =
          e.vectors.col(j) * std::sqrt(2.0 / std::abs(lam[j]));
    }
    T.col(n - 1) = uk * (-1.0 / beta);
  } else {
    v = Eigen::FullPivLU<Mat>(q.A).solve(-q.b);
    double center = -residual(q, v);
    const bool mixed = !e.pos.empty() && !e.neg.empty();

    if (mixed) {
      caseId = QuadricCase::CentralMixed;
      const double flip = (center < 0.0) ? -1.0 : 1.0;
      const Vec lam = flip * e.values;
      cPrime = flip * center;

      const std::vector<int>& posF = (flip > 0) ? e.pos : e.neg;
      const std::vector<int>& negF = (flip > 0) ? e.neg : e.pos;
      const int p = argmax_abs(lam, posF);
      const int m = argmax_abs(lam, negF);

      std::vector<int> mid;
      for (int j = 0; j < n; ++j)
        if (j != p && j != m) mid.push_back(j);
      std::sort(mid.begin(), mid.end(), [&](int a2, int b2) {
        if (lam[a2] != lam[b2]) return lam[a2] > lam[b2];
        return a2 < b2;
      });

      const Vec up = e.vectors.col(p) / std::sqrt(2.0 * std::abs(lam[p]));
      const Vec um = e.vectors.col(m) / std::sqrt(2.0 * std::abs(lam[m]));
      T.col(0) = up - um;
      T.col(n - 1) = up + um;
      for (std::size_t i = 0; i < mid.size(); ++i) {
        const int j = mid[i];
        epsilons.push_back(lam[j] > 0 ? 1 : -1);
        T.col(static_cast<int>(i) + 1) =
            e.vectors.col(j) * std::sqrt(2.0 / std::abs(lam[j]));
      }
    } else {
      caseId = QuadricCase::DefiniteSphere;
      const double flip = e.pos.empty() ? -1.0 : 1.0;
      const Vec lam = flip * e.values;
      const double r2 = flip * center;

      const double tol = 1e-12 * (1.0 + e.normA + q.b.norm() + std::abs(q.c));
      if (r2 < -tol)
        throw EmptyQuadric("definite quadric with negative squared radius");
      if (r2 <= tol)
        throw PointQuadric("definite quadric degenerates to a single point");

      std::vector<int> order(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) order[static_cast<std::size_t>(j)] = j;
      std::sort(order.begin(), order.end(), [&](int a2, int b2) {
        if (lam[a2] != lam[b2]) return lam[a2] > lam[b2];
        return a2 < b2;
      });
      for (int i = 0; i < n; ++i)
        T.col(i) = e.vectors.col(order[static_cast<std::size_t>(i)]) *
                   std::sqrt(2.0 * r2 / lam[order[static_cast<std::size_t>(i)]]);
    }
  }

  QuadricClassification cl{caseId, std::move(epsilons), cPrime,
                           std::move(T), std::move(v), false,
                           PointCount::Many,  q};
  cl.lineFree = checked_line_free(cl);
  return cl;
}

std::optional<LineWitness> find_line(const Quadric& q, std::uint64_t seeds) {
  const int n = q.dim();
  const EigenSplit e = split_eigen(q.A);
  const bool havePair = !e.pos.empty() && !e.neg.empty();
  const bool haveKer = !e.ker.empty();
  if (!havePair && !haveKer) return std::nullopt;  // definite A: no null directions

  const double normB = q.b.norm();
  auto rand_vec = [](SplitMix64& rng, int d) {
    Vec r(d);
    for (int j = 0; j < d; ++j) r[j] = rng.next_uniform(-1.0, 1.0);
    return r;
  };

  for (std::uint64_t sd = 0; sd < seeds; ++sd) {
    SplitMix64 rng = substream(0x11FE, sd);
    const bool usePair = havePair && (!haveKer || sd % 3 != 1);
    const bool useKer = haveKer && (!havePair || sd % 3 != 2);

    // Direction on the null cone of A, in eigencoordinates.
    Vec wc = Vec::Zero(n);
    if (usePair) {
      Vec rp = Vec::Zero(n), rm = Vec::Zero(n);
      double qp = 0.0, qm = 0.0;
      for (int j : e.pos) {
        rp[j] = rng.next_uniform(-1.0, 1.0);
        qp += e.values[j] * rp[j] * rp[j];
      }
      for (int j : e.neg) {
        rm[j] = rng.next_uniform(-1.0, 1.0);
        qm += -e.values[j] * rm[j] * rm[j];
      }
      if (qp < 1e-12 || qm < 1e-12) continue;
      wc = rp / std::sqrt(qp) + rm / std::sqrt(qm);
    }
    if (useKer)
      for (int j : e.ker) wc[j] = rng.next_uniform(-1.0, 1.0);
    if (wc.norm() < 1e-9) continue;
    Vec w = e.vectors * wc;
    w.normalize();

    const Vec aw = q.A * w;
    const double bw = q.b.dot(w);
    Vec u0 = 3.0 * rand_vec(rng, n);
    Vec d = rand_vec(rng, n);
    if (aw.norm() > 1e-12 * (1.0 + e.normA)) {
      u0 -= (aw.dot(u0) + bw) / aw.squaredNorm() * aw;
      d -= aw.dot(d) / aw.squaredNorm() * aw;
    } else if (std::abs(bw) > 1e-9 * (1.0 + normB)) {
      continue;  // (Au+b)·w = b·w != 0 for every u
    }
    if (d.norm() < 1e-9) continue;
    d.normalize();

    // residual(u0 + x d) = 0 as a quadratic in x
    const double qa = 0.5 * d.dot(q.A * d);
    const double qb = (q.A * u0 + q.b).dot(d);
    const double qc = residual(q, u0);
    const double qscale = std::abs(qa) + std::abs(qb) + std::abs(qc);
    double x;
    if (std::abs(qa) > 1e-12 * qscale) {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc < 0.0) continue;
      x = (-qb + ((sd % 2) ? 1.0 : -1.0) * std::sqrt(disc)) / (2.0 * qa);
    } else if (std::abs(qb) > 1e-12 * qscale) {
      x = -qc / qb;
    } else {
      continue;
    }
    const Vec u = u0 + x * d;

    if (std::abs(residual(q, u)) > 1e-9 * (1.0 + residual_scale(q, u)))
      continue;
    bool online = true;
    for (const double kappa : {-2.0, -0.5, 0.5, 2.0}) {
      const Vec pt = u + kappa * w;
      if (std::abs(residual(q, pt)) > 1e-7 * (1.0 + residual_scale(q, pt))) {
        online = false;
        break;
      }
    }
    if (online) return LineWitness{u, w};
  }
  return std::nullopt;
}

bool line_free(const QuadricClassification& cl) {
  return checked_line_free(cl);
}

RationalParameterization::RationalParameterization(
    QuadricClassification cl, std::function<Vec(const Vec&)> normalForm,
    bool excludeT1Zero)
    : n_(static_cast<int>(cl.T.rows())),
      normalForm_(std::move(normalForm)),
      excludeT1_(excludeT1Zero),
      cl_(std::move(cl)) {}

RationalParameterization::RationalParameterization(
    int dim, std::function<Vec(const Vec&)> eval)
    : n_(dim), normalForm_(std::move(eval)), excludeT1_(false) {
  if (dim < 2) throw InvalidSpec("parameterization needs dimension >= 2");
}

bool RationalParameterization::in_domain(const Vec& t) const {
  if (t.size() != n_ - 1) return false;
  if (excludeT1_ && std::abs(t[0]) <= 1e-9) return false;
  return true;
}

Vec RationalParameterization::sigma(const Vec& t) const {
  if (!in_domain(t)) throw DegenerateInput("parameter outside the domain");
  const Vec sp = normalForm_(t);
  if (!cl_) return sp;
  return cl_->T * sp + cl_->v;
}

Vec RationalParameterization::sigma_prime(const Vec& t) const {
  if (!in_domain(t)) throw DegenerateInput("parameter outside the domain");
  return normalForm_(t);
}

std::pair<Vec, Vec> RationalParameterization::default_box() const {
  return {Vec::Constant(n_ - 1, -1.0), Vec::Constant(n_ - 1, 1.0)};
}

RationalParameterization parameterize(const QuadricClassification& cl) {
  if (cl.pointCount != PointCount::Many)
    throw PointQuadric("parameterization needs at least two surface points");
  const int n = cl.source.dim();

  std::function<Vec(const Vec&)> nf;
  bool excludeT1 = false;
  switch (cl.caseId) {
    case QuadricCase::Paraboloid: {
      const std::vector<int> eps = cl.epsilons;
      nf = [n, eps](const Vec& t) {
        Vec s(n);
        s.head(n - 1) = t;
        double quad = 0.0;
        for (int j = 0; j < n - 1; ++j)
          quad += eps[static_cast<std::size_t>(j)] * t[j] * t[j];
        s[n - 1] = quad;
        return s;
      };
      break;
    }
    case QuadricCase::CentralMixed: {
      const std::vector<int> eps = cl.epsilons;
      const double cp = cl.cPrime;
      nf = [n, eps, cp](const Vec& t) {
        Vec s(n);
        s.head(n - 1) = t;
        double num = cp;
        for (int j = 1; j < n - 1; ++j)
          num -= eps[static_cast<std::size_t>(j - 1)] * t[j] * t[j];
        s[n - 1] = num / t[0];
        return s;
      };
      excludeT1 = true;
      break;
    }
    case QuadricCase::DefiniteSphere: {
      nf = [n](const Vec& t) {
        Vec s(n);
        double prod = 1.0;
        for (int j = 0; j + 1 < n; ++j) {
          const double den = 1.0 + t[j] * t[j];
          s[j] = prod * (1.0 - t[j] * t[j]) / den;
          prod *= 2.0 * t[j] / den;
        }
        s[n - 1] = prod;
        return s;
      };
      break;
    }
  }

  RationalParameterization rp(cl, std::move(nf), excludeT1);

  // Construction-time spot check: the map must stay on the surface.
  SplitMix64 rng = substream(0xA111CE, 0);
  int checked = 0;
  for (int it = 0; it < 400 && checked < 64; ++it) {
    Vec t(n - 1);
    for (int j = 0; j < n - 1; ++j) t[j] = rng.next_uniform(-1.5, 1.5);
    if (!rp.in_domain(t)) continue;
    if (excludeT1 && std::abs(t[0]) < 0.05) continue;
    const Vec s = rp.sigma(t);
    if (std::abs(residual(cl.source, s)) >
        kResidualTol * (1.0 + residual_scale(cl.source, s)))
      throw InternalInconsistency("parameterization left the quadric");
    ++checked;
  }
  return rp;
}

std::vector<Vec> draw_samples(const SamplePlan& plan) {
  const int d = static_cast<int>(plan.lo.size());
  if (d < 1 || plan.hi.size() != d)
    throw InvalidSpec("sample plan: box dimensions are inconsistent");
  for (int j = 0; j < d; ++j)
    if (!(plan.lo[j] < plan.hi[j]))
      throw InvalidSpec("sample plan: empty box axis");

  std::vector<Vec> out;
  if (plan.mode == SamplePlan::Mode::Grid) {
    const int k = plan.gridPerAxis;
    if (k < 1) throw InvalidSpec("sample plan: grid needs >= 1 point per axis");
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (;;) {
      Vec t(d);
      for (int j = 0; j < d; ++j) {
        const int i = idx[static_cast<std::size_t>(j)];
        t[j] = (k == 1) ? 0.5 * (plan.lo[j] + plan.hi[j])
                        : plan.lo[j] + (plan.hi[j] - plan.lo[j]) * i / (k - 1);
      }
      out.push_back(t);
      int j = 0;
      for (; j < d; ++j) {
        if (++idx[static_cast<std::size_t>(j)] < k) break;
        idx[static_cast<std::size_t>(j)] = 0;
      }
      if (j == d) break;
    }
  } else {
    if (plan.randomCount == 0)
      throw InvalidSpec("sample plan: need a positive sample count");
    SplitMix64 rng(plan.seed);
    for (std::size_t i = 0; i < plan.randomCount; ++i) {
      Vec t(d);
      for (int j = 0; j < d; ++j) t[j] = rng.next_uniform(plan.lo[j], plan.hi[j]);
      out.push_back(t);
    }
  }
  return out;
}

Vec sigma_hat(const RationalParameterization& rp, const Vec& t,
              double sigma1Tol) {
  const Vec s = rp.sigma(t);
  if (std::abs(s[0]) <= sigma1Tol)
    throw OnSigma1Zero("sigma_1 vanishes at this parameter");
  return (s.tail(rp.dim() - 1) / s[0]).eval();
}

double jacobian_det_sigma_hat(const RationalParameterization& rp, const Vec& t,
                              double sigma1Tol) {
  const auto f = [&](const Vec& tt) { return sigma_hat(rp, tt, sigma1Tol); };
  return fd_jacobian(f, t).determinant();
}

namespace {

std::vector<Vec> admissible_samples(const RationalParameterization& rp,
                                    const SamplePlan& plan) {
  std::vector<Vec> out;
  for (const Vec& t : draw_samples(plan)) {
    if (!rp.in_domain(t)) continue;
    const Vec s = rp.sigma(t);
    if (std::abs(s[0]) <= plan.sigma1Tol) continue;
    out.push_back(t);
  }
  return out;
}

}  // namespace

HyperplaneCheck check_hyperplane_condition(const RationalParameterization& rp,
                                           const SamplePlan& plan) {
  const int n = rp.dim();
  const std::vector<Vec> ts = admissible_samples(rp, plan);
  if (static_cast<int>(ts.size()) < n + 1)
    throw TooFewSamples("hyperplane check needs at least n+1 admissible points");

  std::vector<Vec> pts;
  pts.reserve(ts.size());
  for (const Vec& t : ts) pts.push_back(rp.sigma(t));

  std::vector<int> witnessIdx;
  const int rank = affine_rank(pts, 1e-9, &witnessIdx);
  HyperplaneCheck out{rank == n, std::nullopt, static_cast<int>(pts.size())};
  if (out.holds) {
    std::vector<Vec> witness;
    for (int i : witnessIdx) witness.push_back(pts[static_cast<std::size_t>(i)]);
    out.witness = std::move(witness);
  }
  return out;
}

InnerPointCheck check_inner_point_condition(const RationalParameterization& rp,
                                            const SamplePlan& plan) {
  const int n = rp.dim();
  const std::vector<Vec> ts = admissible_samples(rp, plan);
  if (static_cast<int>(ts.size()) < n + 1)
    throw TooFewSamples(
        "inner point check needs at least n+1 admissible points");

  InnerPointCheck out{false, std::nullopt, std::nullopt, 0.0,
                      static_cast<int>(ts.size())};
  for (const Vec& t : ts) {
    double det;
    try {
      det = jacobian_det_sigma_hat(rp, t, plan.sigma1Tol);
    } catch (const OnSigma1Zero&) {
      continue;  // FD stencil crossed the excluded set
    } catch (const DegenerateInput&) {
      continue;
    }
    out.maxAbsDet = std::max(out.maxAbsDet, std::abs(det));
    const Vec sh = sigma_hat(rp, t, plan.sigma1Tol);
    const double scale = 1.0 + std::pow(sh.cwiseAbs().maxCoeff(), n - 1);
    if (std::abs(det) > kInnerPointDetTol * scale) {
      out.holds = true;
      out.witnessT = t;
      break;
    }
  }

  if (rp.classification()) {
    const Quadric& q = rp.classification()->source;
    const Vec s = rp.sigma(out.witnessT ? *out.witnessT : ts.front());
    bool leaves = true;
    for (const double lambda : {1.0 - 1e-3, 1.0 + 1e-3}) {
      const Vec p = lambda * s;
      if (std::abs(residual(q, p)) <= 1e-9 * (1.0 + residual_scale(q, p)))
        leaves = false;
    }
    out.rayLeavesQuadric = leaves;
  }
  return out;
}

Vec spherical_point(const Vec& phi) {
  const int n = static_cast<int>(phi.size()) + 1;
  Vec s(n);
  double prod = 1.0;
  for (int j = 0; j + 1 < n; ++j) {
    s[j] = prod * std::cos(phi[j]);
    prod *= std::sin(phi[j]);
  }
  s[n - 1] = prod;
  return s;
}

SheetFunction::SheetFunction(Quadric q, const Vec& anchor)
    : q_(std::move(q)), branch_(0) {
  const int n = q_.dim();
  if (anchor.size() != n)
    throw InvalidSpec("sheet anchor has wrong dimension");
  if (std::abs(residual(q_, anchor)) >
      1e-6 * (1.0 + residual_scale(q_, anchor)))
    throw DegenerateInput("sheet anchor does not lie on the quadric");

  const double alpha = 0.5 * q_.A(n - 1, n - 1);
  if (std::abs(alpha) > 1e-12 * (1.0 + q_.A.cwiseAbs().maxCoeff())) {
    const Vec sbar = anchor.head(n - 1);
    const double beta =
        q_.A.row(n - 1).head(n - 1).dot(sbar) + q_.b[n - 1];
    const double disc = beta * beta -
                        4.0 * alpha *
                            (0.5 * sbar.dot(q_.A.topLeftCorner(n - 1, n - 1) *
                                            sbar) +
                             q_.b.head(n - 1).dot(sbar) + q_.c);
    const double root = std::sqrt(std::max(0.0, disc));
    const double xPlus = (-beta + root) / (2.0 * alpha);
    const double xMinus = (-beta - root) / (2.0 * alpha);
    branch_ = (std::abs(xPlus - anchor[n - 1]) <=
               std::abs(xMinus - anchor[n - 1]))
                  ? 1
                  : -1;
  }
}

double SheetFunction::value(const Vec& sbar) const {
  const int n = q_.dim();
  if (sbar.size() != n - 1)
    throw InvalidSpec("sheet argument has wrong dimension");
  const double alpha = 0.5 * q_.A(n - 1, n - 1);
  const double beta = q_.A.row(n - 1).head(n - 1).dot(sbar) + q_.b[n - 1];
  const double gamma =
      0.5 * sbar.dot(q_.A.topLeftCorner(n - 1, n - 1) * sbar) +
      q_.b.head(n - 1).dot(sbar) + q_.c;
  if (branch_ == 0) {
    if (std::abs(beta) <= 1e-12 * (1.0 + std::abs(gamma)))
      throw DegenerateInput("sheet function undefined: linear term vanished");
    return -gamma / beta;
  }
  const double disc = beta * beta - 4.0 * alpha * gamma;
  if (disc < 0.0)
    throw DegenerateInput("sheet function undefined: no real solution");
  return (-beta + branch_ * std::sqrt(disc)) / (2.0 * alpha);
}

Vec SheetFunction::gradient(const Vec& sbar) const {
  const int n = q_.dim();
  Vec s(n);
  s.head(n - 1) = sbar;
  s[n - 1] = value(sbar);
  const Vec g = q_.A * s + q_.b;
  if (std::abs(g[n - 1]) <= 1e-12 * (1.0 + g.norm()))
    throw DegenerateInput("sheet gradient undefined: vertical tangent");
  return (-g.head(n - 1) / g[n - 1]).eval();
}

}  // namespace pf
