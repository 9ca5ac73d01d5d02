#include "polyfourier/verify.hpp"

#include <cmath>
#include <complex>

#include "doctest.h"
#include "helpers.hpp"

using namespace pf;
using pftest::vec;

namespace {

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

// The fixture triangle {(0,1),(1,1),(0,2)} has vertical fiber length 1 - x
// over x in [0,1], so its transform at s = (a, 0) is the 1-D integral
// int_0^1 (1-x) e^{-iax} dx, evaluated here in closed form.
Complex triangle_marginal_ft(double a) {
  if (std::abs(a) < 1e-12) return Complex(0.5, 0.0);
  const Complex k(0.0, -a);
  const Complex i0 = (std::exp(k) - 1.0) / k;
  const Complex i1 = std::exp(k) * (1.0 / k - 1.0 / (k * k)) + 1.0 / (k * k);
  return i0 - i1;
}

GeneralizedPolytope unit_square() {
  return GeneralizedPolytope({hull_facets(
      {vec({0.0, 0.0}), vec({1.0, 0.0}), vec({0.0, 1.0}), vec({1.0, 1.0})})});
}

GeneralizedPolytope square_two_pieces() {
  const auto left = hull_facets(
      {vec({0.0, 0.0}), vec({0.6, 0.0}), vec({0.0, 1.0}), vec({0.6, 1.0})});
  const auto right = hull_facets(
      {vec({0.4, 0.0}), vec({1.0, 0.0}), vec({0.4, 1.0}), vec({1.0, 1.0})});
  return GeneralizedPolytope({left, right});
}

GeneralizedPolytope fixture_triangle() {
  return GeneralizedPolytope(
      {hull_facets({vec({0.0, 1.0}), vec({1.0, 1.0}), vec({0.0, 2.0})})});
}

GeneralizedPolytope fixture_tetra() {
  return GeneralizedPolytope({hull_facets({vec({0.0, 0.0, 1.0}),
                                           vec({1.0, 0.0, 1.0}),
                                           vec({0.0, 1.0, 1.0}),
                                           vec({0.0, 0.0, 2.0})})});
}

RationalParameterization circle_surface(double radius) {
  return parameterize(classify(
      Quadric(2.0 * Mat::Identity(2, 2), Vec::Zero(2), -radius * radius)));
}

RationalParameterization sphere_surface(double radius) {
  return parameterize(classify(
      Quadric(2.0 * Mat::Identity(3, 3), Vec::Zero(3), -radius * radius)));
}

RationalParameterization rational_line2() {
  return RationalParameterization(
      2, [](const Vec& t) { return pftest::vec({t[0], t[0]}); });
}

SamplePlan default_plan(int domainDim, std::size_t count, std::uint64_t seed) {
  SamplePlan plan;
  plan.lo = Vec::Constant(domainDim, -1.0);
  plan.hi = Vec::Constant(domainDim, 1.0);
  plan.randomCount = count;
  plan.seed = seed;
  return plan;
}

TEST_CASE("oracle sanity: marginal formula reproduces the triangle spectrum") {
  const GeneralizedPolytope tri = fixture_triangle();
  for (double a : {0.37, 1.0, M_PI, 4.4}) {
    const Complex direct = generalized_ft(tri, vec({a, 0.0}));
    const Complex oracle = triangle_marginal_ft(a);
    CHECK(std::abs(direct - oracle) <= 1e-12);
  }
  CHECK(std::abs(generalized_ft(tri, vec({0.0, 0.0})) - Complex(0.5, 0.0)) <=
        1e-12);
}

// ---------------------------------------------------------------------------
// compare_on_surface
// ---------------------------------------------------------------------------

TEST_CASE("compare_on_surface: identical polytopes are indistinguishable") {
  const GeneralizedPolytope sq = unit_square();
  const RationalParameterization rp = circle_surface(5.0);
  const ComparisonReport rep =
      compare_on_surface(sq, sq, rp, default_plan(1, 100, 17));
  CHECK(rep.maxAbsDiff <= 1e-12);
  CHECK(rep.verdict == Verdict::Indistinguishable);
  CHECK(rep.hyperplaneHolds);
  CHECK(rep.innerPointHolds);
  CHECK(rep.conditionsCertified);
  CHECK(rep.note.find("not proof") != std::string::npos);
  CHECK(rep.samples.size() == 100);
  for (const auto& [a, b] : rep.samples) {
    CHECK(std::abs(a.s.norm() - 5.0) <= 1e-9);  // on the radius-5 circle
    CHECK(a.t.has_value());
  }
}

TEST_CASE("compare_on_surface: redecomposition is indistinguishable") {
  const ComparisonReport rep =
      compare_on_surface(unit_square(), square_two_pieces(),
                         circle_surface(5.0), default_plan(1, 100, 5), 1e-10);
  CHECK(rep.verdict == Verdict::Indistinguishable);
  CHECK(rep.maxAbsDiff <= 1e-10);
}

TEST_CASE("compare_on_surface: a shifted square is distinguishable") {
  const GeneralizedPolytope sq = unit_square();
  const GeneralizedPolytope shifted =
      affine_image(sq, Mat::Identity(2, 2), vec({0.3, 0.0}));
  const ComparisonReport rep = compare_on_surface(
      sq, shifted, circle_surface(5.0), default_plan(1, 100, 5));
  CHECK(rep.verdict == Verdict::Distinguishable);
  CHECK(rep.maxAbsDiff > 1e-3);
}

TEST_CASE("compare_on_surface: report internals are consistent") {
  const ComparisonReport rep =
      compare_on_surface(unit_square(), square_two_pieces(),
                         circle_surface(5.0), default_plan(1, 60, 9));
  double maxDiff = 0.0, maxVal = 0.0;
  for (auto it = rep.samples.rbegin(); it != rep.samples.rend(); ++it) {
    maxDiff = std::max(maxDiff, std::abs(it->first.value - it->second.value));
    maxVal = std::max({maxVal, std::abs(it->first.value),
                       std::abs(it->second.value)});
  }
  CHECK(rep.maxAbsDiff == maxDiff);
  CHECK(rep.maxAbsValue == maxVal);
  CHECK((rep.verdict == Verdict::Indistinguishable) ==
        (rep.maxAbsDiff <= rep.threshold * (1.0 + rep.maxAbsValue)));
}

TEST_CASE("compare_on_surface: parallel evaluation is bitwise identical") {
  const GeneralizedPolytope sq = unit_square();
  const GeneralizedPolytope shifted =
      affine_image(sq, Mat::Identity(2, 2), vec({0.3, 0.0}));
  const RationalParameterization rp = circle_surface(5.0);
  const SamplePlan plan = default_plan(1, 80, 23);
  const ComparisonReport serial = compare_on_surface(sq, shifted, rp, plan,
                                                     kIndistinguishableTol, 1);
  const ComparisonReport parallel = compare_on_surface(
      sq, shifted, rp, plan, kIndistinguishableTol, 8);
  CHECK(serial.maxAbsDiff == parallel.maxAbsDiff);
  CHECK(serial.maxAbsValue == parallel.maxAbsValue);
  CHECK(serial.verdict == parallel.verdict);
  REQUIRE(serial.samples.size() == parallel.samples.size());
  for (std::size_t i = 0; i < serial.samples.size(); ++i) {
    CHECK(serial.samples[i].first.value == parallel.samples[i].first.value);
    CHECK(serial.samples[i].second.value == parallel.samples[i].second.value);
  }
}

TEST_CASE("compare_on_surface refuses nothing but stamps uncertified plans") {
  const ComparisonReport rep =
      compare_on_surface(unit_square(), unit_square(), rational_line2(),
                         default_plan(1, 50, 2));
  CHECK(rep.verdict == Verdict::Indistinguishable);
  CHECK(!rep.hyperplaneHolds);
  CHECK(!rep.innerPointHolds);
  CHECK(!rep.conditionsCertified);
  CHECK(rep.note.find("conditions not certified") != std::string::npos);
}

// ---------------------------------------------------------------------------
// mirror_counterexample
// ---------------------------------------------------------------------------

TEST_CASE("mirror counterexample: triangle spectra agree only on the plane") {
  const MirrorReport rep = mirror_counterexample(
      fixture_triangle(), Hyperplane(vec({0.0, 1.0})), 50, 50, 71);
  CHECK(rep.onPass);
  CHECK(rep.offPass);
  CHECK(rep.passed);
  CHECK(rep.maxOnDiff <= 1e-10);
  CHECK(rep.maxOffDiff > 1e-3);
  REQUIRE(rep.onSamples.size() == 50);
  REQUIRE(rep.offSamples.size() == 50);
  for (const auto& [a, b] : rep.onSamples) {
    CHECK(std::abs(a.s[1]) <= 1e-12);  // frequency on the mirror plane
    // both values equal the marginal oracle on that plane
    CHECK(std::abs(a.value - triangle_marginal_ft(a.s[0])) <= 1e-11);
    CHECK(std::abs(b.value - triangle_marginal_ft(a.s[0])) <= 1e-11);
  }
}

TEST_CASE("mirror counterexample: tetrahedron version passes in 3-D") {
  const MirrorReport rep = mirror_counterexample(
      fixture_tetra(), Hyperplane(vec({0.0, 0.0, 1.0})), 50, 50, 72);
  CHECK(rep.passed);
  CHECK(rep.maxOnDiff <= 1e-10);
  CHECK(rep.maxOffDiff > 1e-3);
}

TEST_CASE("mirror counterexample rejects unusable fixtures") {
  // symmetric about the hyperplane: mirror(p) = p
  const GeneralizedPolytope centered = GeneralizedPolytope({hull_facets(
      {vec({0.0, -1.0}), vec({1.0, -1.0}), vec({0.0, 1.0}), vec({1.0, 1.0})})});
  CHECK_THROWS_AS(mirror_counterexample(centered, Hyperplane(vec({0.0, 1.0})),
                                        10, 10, 1),
                  InvalidFixture);
  // touches the hyperplane
  CHECK_THROWS_AS(
      mirror_counterexample(unit_square(), Hyperplane(vec({0.0, 1.0})), 10,
                            10, 1),
      InvalidFixture);
  // hyperplane not through the origin
  CHECK_THROWS_AS(
      mirror_counterexample(fixture_triangle(),
                            Hyperplane(vec({0.0, 1.0}), 0.5), 10, 10, 1),
      InvalidSpec);
}

// ---------------------------------------------------------------------------
// modulus_invariance
// ---------------------------------------------------------------------------

TEST_CASE("modulus invariance under translation and point reflection") {
  const GeneralizedPolytope sq = unit_square();
  // reflection oracle: F_{-P}(s) = conj(F_P(s))
  const GeneralizedPolytope reflected =
      affine_image(sq, -Mat::Identity(2, 2), Vec::Zero(2));
  for (double a : {0.4, 2.0}) {
    const Vec s = vec({a, 1.1 * a});
    CHECK(std::abs(generalized_ft(reflected, s) -
                   std::conj(generalized_ft(sq, s))) <= 1e-13);
  }

  const ModulusReport rep =
      modulus_invariance(sq, vec({2.7, -1.3}), circle_surface(5.0),
                         default_plan(1, 100, 13));
  CHECK(rep.passed);
  CHECK(rep.sampleCount == 100);
  CHECK(rep.maxTranslationDiff <= 1e-10);
  CHECK(rep.maxReflectionDiff <= 1e-10);

  const ModulusReport trivial =
      modulus_invariance(sq, Vec::Zero(2), circle_surface(5.0),
                         default_plan(1, 40, 13));
  CHECK(trivial.passed);
  CHECK(trivial.maxTranslationDiff <= 1e-14);
}

TEST_CASE("modulus invariance holds for a 3-D fixture") {
  const ModulusReport rep =
      modulus_invariance(fixture_tetra(), vec({0.5, -2.0, 1.25}),
                         sphere_surface(5.0), default_plan(2, 100, 29));
  CHECK(rep.passed);
}

// ---------------------------------------------------------------------------
// identity_experiment
// ---------------------------------------------------------------------------

TEST_CASE("identity experiment: generated suite verdicts match expectations") {
  const std::vector<IdentityCase> suite = build_identity_suite(2, 3, 3, 101);
  REQUIRE(suite.size() == 6);
  const IdentitySummary summary =
      identity_experiment(suite, circle_surface(5.0),
                          default_plan(1, 100, 55), 1e-10);
  CHECK(summary.total == 6);
  CHECK(summary.agreed == 6);
  CHECK(summary.passed());
  CHECK(summary.reports.size() == 6);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(summary.reports[i].maxAbsDiff <= 1e-10);
  for (std::size_t i = 3; i < 6; ++i)
    CHECK(summary.reports[i].maxAbsDiff > 1e-3);
}

TEST_CASE("identity experiment: 3-D suite on a sphere") {
  const std::vector<IdentityCase> suite = build_identity_suite(3, 2, 2, 202);
  const IdentitySummary summary =
      identity_experiment(suite, sphere_surface(5.0),
                          default_plan(2, 100, 56), 1e-10);
  CHECK(summary.passed());
}

TEST_CASE("identity experiment: trivial equal pair and input validation") {
  const GeneralizedPolytope sq = unit_square();
  const IdentitySummary summary = identity_experiment(
      {{sq, sq, true}}, circle_surface(5.0), default_plan(1, 50, 1), 1e-10);
  CHECK(summary.passed());
  CHECK(summary.reports.front().verdict == Verdict::Indistinguishable);

  CHECK_THROWS_AS(identity_experiment({}, circle_surface(5.0),
                                      default_plan(1, 50, 1)),
                  InvalidSpec);
}

}  // namespace
