#include "polyfourier/verify.hpp"

#include <algorithm>
#include <cmath>

#include "polyfourier/rng.hpp"

namespace pf {
namespace {

std::vector<Vec> admissible_ts(const RationalParameterization& rp,
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

Vec rand_vec(SplitMix64& rng, int n, double lo, double hi) {
  Vec v(n);
  for (int j = 0; j < n; ++j) v[j] = rng.next_uniform(lo, hi);
  return v;
}

// Orthonormal basis of the hyperplane a.x = 0.
std::vector<Vec> hyperplane_basis(const Vec& a) {
  const int n = static_cast<int>(a.size());
  const Vec unit = a / a.norm();
  std::vector<Vec> basis;
  for (int j = 0; j < n && static_cast<int>(basis.size()) < n - 1; ++j) {
    Vec cand = Vec::Unit(n, j);
    cand -= unit.dot(cand) * unit;
    for (const Vec& b : basis) cand -= b.dot(cand) * b;
    if (cand.norm() > 1e-6) basis.push_back(cand / cand.norm());
  }
  if (static_cast<int>(basis.size()) != n - 1)
    throw InternalInconsistency("hyperplane basis completion failed");
  return basis;
}

GeneralizedPolytope random_hull(SplitMix64& rng, int n) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Vec> pts;
    for (int i = 0; i < n + 5; ++i) pts.push_back(rand_vec(rng, n, -1.0, 1.0));
    try {
      return GeneralizedPolytope({hull_facets(pts)});
    } catch (const DegenerateInput&) {
    }
  }
  throw InternalInconsistency("random hull generation kept degenerating");
}

ConvexPolytope axis_slab(int n, const Vec& lo, const Vec& hi, int axis,
                         double cutLo, double cutHi) {
  Vec slabLo = (lo.array() - 0.5).matrix();
  Vec slabHi = (hi.array() + 0.5).matrix();
  slabLo[axis] = cutLo;
  slabHi[axis] = cutHi;
  std::vector<Vec> corners;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec c(n);
    for (int j = 0; j < n; ++j) c[j] = (mask >> j & 1) ? slabHi[j] : slabLo[j];
    corners.push_back(c);
  }
  return hull_facets(corners);
}

double symmetric_difference_mc(const GeneralizedPolytope& a,
                               const GeneralizedPolytope& b, SplitMix64& rng) {
  const auto [loA, hiA] = bounding_box(a);
  const auto [loB, hiB] = bounding_box(b);
  const Vec lo = loA.cwiseMin(loB);
  const Vec hi = hiA.cwiseMax(hiB);
  const int n = static_cast<int>(lo.size());
  double boxVol = 1.0;
  for (int j = 0; j < n; ++j) boxVol *= hi[j] - lo[j];
  const int samples = 4000;
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    Vec x(n);
    for (int j = 0; j < n; ++j) x[j] = rng.next_uniform(lo[j], hi[j]);
    if (contains(a, x) != contains(b, x)) ++hits;
  }
  return boxVol * hits / samples;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Indistinguishable:
      return "indistinguishable";
    case Verdict::Distinguishable:
      return "distinguishable";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

ComparisonReport compare_on_surface(const GeneralizedPolytope& p1,
                                    const GeneralizedPolytope& p2,
                                    const RationalParameterization& rp,
                                    const SamplePlan& plan, double threshold,
                                    int threads) {
  if (p1.dim() != rp.dim() || p2.dim() != rp.dim())
    throw InvalidSpec("polytope and surface dimensions must match");
  if (threshold <= 0.0) throw InvalidSpec("threshold must be positive");

  ComparisonReport rep;
  rep.threshold = threshold;
  rep.hyperplaneHolds = check_hyperplane_condition(rp, plan).holds;
  rep.innerPointHolds = check_inner_point_condition(rp, plan).holds;
  rep.conditionsCertified = rep.hyperplaneHolds && rep.innerPointHolds;
  rep.note = rep.conditionsCertified
                 ? "conditions certified on this sample plan; equality "
                   "verdicts are finite-sample evidence, not proof"
                 : "conditions not certified; equality verdicts are "
                   "finite-sample evidence, not proof";

  const std::vector<Vec> ts = admissible_ts(rp, plan);
  std::vector<Vec> points;
  points.reserve(ts.size());
  for (const Vec& t : ts) points.push_back(rp.sigma(t));

  const FourierEvaluator e1(p1), e2(p2);
  const std::vector<Complex> v1 = e1.eval_batch(points, threads);
  const std::vector<Complex> v2 = e2.eval_batch(points, threads);

  rep.samples.reserve(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    rep.samples.push_back({SpectrumSample{ts[i], points[i], v1[i]},
                           SpectrumSample{ts[i], points[i], v2[i]}});
    rep.maxAbsDiff = std::max(rep.maxAbsDiff, std::abs(v1[i] - v2[i]));
    rep.maxAbsValue =
        std::max({rep.maxAbsValue, std::abs(v1[i]), std::abs(v2[i])});
  }

  if (rep.maxAbsDiff <= threshold * (1.0 + rep.maxAbsValue))
    rep.verdict = Verdict::Indistinguishable;
  else if (rep.maxAbsDiff > kDistinguishableFloor)
    rep.verdict = Verdict::Distinguishable;
  else
    rep.verdict = Verdict::Inconclusive;
  return rep;
}

MirrorReport mirror_counterexample(const GeneralizedPolytope& p,
                                   const Hyperplane& h, int nOn, int nOff,
                                   std::uint64_t seed, int threads) {
  if (nOn < 1 || nOff < 1)
    throw InvalidSpec("mirror experiment needs positive sample counts");
  if (std::abs(h.offset) > 1e-12)
    throw InvalidSpec("mirror experiment expects a hyperplane through 0");
  const int n = p.dim();
  if (h.normal.size() != n) throw InvalidSpec("hyperplane dimension mismatch");

  int side = 0;
  for (const ConvexPolytope& piece : p.pieces())
    for (const Vec& x : piece.vertices()) {
      const double d = h.normal.dot(x);
      const double tol = 1e-9 * (1.0 + h.normal.norm() * x.norm());
      if (std::abs(d) <= tol)
        throw InvalidFixture("polytope touches the mirror hyperplane");
      const int s = d > 0 ? 1 : -1;
      if (side == 0) side = s;
      if (side != s)
        throw InvalidFixture(
            "polytope must lie strictly on one side of the hyperplane");
    }

  const GeneralizedPolytope mirrored = mirror(p, h);
  const FourierEvaluator ep(p), em(mirrored);
  const std::vector<Vec> basis = hyperplane_basis(h.normal);

  MirrorReport rep;
  std::vector<Vec> onPts;
  SplitMix64 onRng = substream(seed, 0);
  for (int i = 0; i < nOn; ++i) {
    Vec s = Vec::Zero(n);
    for (const Vec& b : basis) s += onRng.next_uniform(-10.0, 10.0) * b;
    onPts.push_back(s);
  }
  std::vector<Vec> offPts;
  SplitMix64 offRng = substream(seed, 1);
  const double anorm = h.normal.norm();
  while (static_cast<int>(offPts.size()) < nOff) {
    const Vec s = rand_vec(offRng, n, -10.0, 10.0);
    if (std::abs(h.normal.dot(s)) / anorm > 0.5) offPts.push_back(s);
  }

  const std::vector<Complex> onP = ep.eval_batch(onPts, threads);
  const std::vector<Complex> onM = em.eval_batch(onPts, threads);
  for (std::size_t i = 0; i < onPts.size(); ++i) {
    rep.maxOnDiff = std::max(rep.maxOnDiff, std::abs(onP[i] - onM[i]));
    rep.onSamples.push_back({SpectrumSample{{}, onPts[i], onP[i]},
                             SpectrumSample{{}, onPts[i], onM[i]}});
  }
  const std::vector<Complex> offP = ep.eval_batch(offPts, threads);
  const std::vector<Complex> offM = em.eval_batch(offPts, threads);
  for (std::size_t i = 0; i < offPts.size(); ++i) {
    rep.maxOffDiff = std::max(rep.maxOffDiff, std::abs(offP[i] - offM[i]));
    rep.offSamples.push_back({SpectrumSample{{}, offPts[i], offP[i]},
                              SpectrumSample{{}, offPts[i], offM[i]}});
  }

  rep.onPass = rep.maxOnDiff <= kMirrorOnTol;
  rep.offPass = rep.maxOffDiff > kMirrorOffFloor;
  rep.passed = rep.onPass && rep.offPass;
  return rep;
}

ModulusReport modulus_invariance(const GeneralizedPolytope& p, const Vec& w,
                                 const RationalParameterization& rp,
                                 const SamplePlan& plan, int threads) {
  const int n = p.dim();
  if (w.size() != n || rp.dim() != n)
    throw InvalidSpec("modulus experiment dimension mismatch");

  const std::vector<Vec> ts = admissible_ts(rp, plan);
  if (ts.empty()) throw TooFewSamples("no admissible surface samples");
  std::vector<Vec> points;
  points.reserve(ts.size());
  for (const Vec& t : ts) points.push_back(rp.sigma(t));

  const Mat eye = Mat::Identity(n, n);
  const FourierEvaluator base(p);
  const FourierEvaluator shifted(affine_image(p, eye, w));
  const FourierEvaluator reflected(affine_image(p, -eye, Vec::Zero(n)));

  const std::vector<Complex> f0 = base.eval_batch(points, threads);
  const std::vector<Complex> ft = shifted.eval_batch(points, threads);
  const std::vector<Complex> fr = reflected.eval_batch(points, threads);

  ModulusReport rep;
  rep.sampleCount = static_cast<int>(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    rep.maxTranslationDiff = std::max(
        rep.maxTranslationDiff, std::abs(std::abs(ft[i]) - std::abs(f0[i])));
    rep.maxReflectionDiff = std::max(
        rep.maxReflectionDiff, std::abs(std::abs(fr[i]) - std::abs(f0[i])));
  }
  rep.passed = rep.maxTranslationDiff <= kModulusTol &&
               rep.maxReflectionDiff <= kModulusTol;
  return rep;
}

IdentitySummary identity_experiment(const std::vector<IdentityCase>& suite,
                                    const RationalParameterization& rp,
                                    const SamplePlan& plan, double threshold,
                                    int threads) {
  if (suite.empty()) throw InvalidSpec("identity experiment needs cases");
  IdentitySummary summary;
  summary.total = suite.size();
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const IdentityCase& cs = suite[i];
    ComparisonReport rep =
        compare_on_surface(cs.p1, cs.p2, rp, plan, threshold, threads);
    const bool agree =
        cs.expectEqual ? rep.verdict == Verdict::Indistinguishable
                       : rep.verdict == Verdict::Distinguishable;
    if (agree)
      ++summary.agreed;
    else
      summary.disagreements.push_back(
          {i, cs.expectEqual, rep.verdict, rep.maxAbsDiff});
    summary.reports.push_back(std::move(rep));
  }
  return summary;
}

std::vector<IdentityCase> build_identity_suite(int dim, int equalPairs,
                                               int perturbedPairs,
                                               std::uint64_t seed) {
  if (dim < 2 || dim > kMaxDim) throw InvalidSpec("unsupported dimension");
  if (equalPairs < 0 || perturbedPairs < 0)
    throw InvalidSpec("pair counts must be nonnegative");
  std::vector<IdentityCase> suite;

  for (int i = 0; i < equalPairs; ++i) {
    SplitMix64 rng = substream(seed, 2 * static_cast<std::uint64_t>(i));
    for (;;) {
      const GeneralizedPolytope p1 = random_hull(rng, dim);
      const ConvexPolytope& piece = p1.pieces().front();
      const auto [lo, hi] = bounding_box(p1);
      const int axis = i % dim;
      const double cut1 = lo[axis] + 0.4 * (hi[axis] - lo[axis]);
      const double cut2 = lo[axis] + 0.6 * (hi[axis] - lo[axis]);
      const auto lower =
          intersect(piece, axis_slab(dim, lo, hi, axis, lo[axis] - 0.5, cut2));
      const auto upper =
          intersect(piece, axis_slab(dim, lo, hi, axis, cut1, hi[axis] + 0.5));
      if (!lower || !upper) continue;
      suite.push_back({p1, GeneralizedPolytope({*lower, *upper}), true});
      break;
    }
  }

  for (int i = 0; i < perturbedPairs; ++i) {
    SplitMix64 rng = substream(seed, 2 * static_cast<std::uint64_t>(i) + 1);
    for (;;) {
      const GeneralizedPolytope p1 = random_hull(rng, dim);
      std::vector<Vec> jittered;
      for (const Vec& x : p1.pieces().front().vertices())
        jittered.push_back(x + rand_vec(rng, dim, -0.1, 0.1));
      try {
        GeneralizedPolytope p2({hull_facets(jittered)});
        if (symmetric_difference_mc(p1, p2, rng) <= 1e-3) continue;
        suite.push_back({p1, std::move(p2), false});
        break;
      } catch (const DegenerateInput&) {
      }
    }
  }
  return suite;
}

}  // namespace pf
