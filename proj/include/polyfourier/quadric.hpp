#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "polyfourier/errors.hpp"
#include "polyfourier/numerics.hpp"

namespace pf {

inline constexpr double kResidualTol = 1e-9;
inline constexpr double kSigma1DefaultTol = 1e-6;
inline constexpr double kEigenRankTol = 1e-9;
inline constexpr double kJacobiOffTol = 1e-12;
inline constexpr double kInnerPointDetTol = 1e-8;

struct Quadric {
  Mat A;
  Vec b;
  double c;

  Quadric(Mat a, Vec bv, double cv);
  int dim() const { return static_cast<int>(A.rows()); }
};

// 1/2 s'As + b's + c
double residual(const Quadric& q, const Vec& s);

// Magnitude of the residual's terms at s, for relative tolerances.
double residual_scale(const Quadric& q, const Vec& s);

enum class QuadricCase { Paraboloid = 1, CentralMixed = 2, DefiniteSphere = 3 };
enum class PointCount { None, One, Many };

struct QuadricClassification {
  QuadricCase caseId;
  std::vector<int> epsilons;  // case 1: n-1 signs; case 2: n-2 middle signs
  double cPrime;              // case 2 right-hand side
  Mat T;                      // s = T s' + v maps the normal form onto the quadric
  Vec v;
  bool lineFree;
  PointCount pointCount;
  Quadric source;
};

QuadricClassification classify(const Quadric& q);

struct LineWitness {
  Vec point;
  Vec direction;
};

// Randomized search for a full line {point + t*direction} on the quadric.
std::optional<LineWitness> find_line(const Quadric& q,
                                     std::uint64_t seeds = 200);
bool line_free(const QuadricClassification& cl);

class RationalParameterization {
 public:
  // Quadric-backed parameterization (normal-form map composed with T, v).
  RationalParameterization(QuadricClassification cl,
                           std::function<Vec(const Vec&)> normalForm,
                           bool excludeT1Zero);
  // Plug-in surface evaluator with no quadric attached.
  RationalParameterization(int dim, std::function<Vec(const Vec&)> eval);

  int dim() const { return n_; }
  int domain_dim() const { return n_ - 1; }
  bool in_domain(const Vec& t) const;
  Vec sigma(const Vec& t) const;
  Vec sigma_prime(const Vec& t) const;  // normal-form point, = sigma for plug-ins
  std::pair<Vec, Vec> default_box() const;
  const std::optional<QuadricClassification>& classification() const {
    return cl_;
  }

 private:
  int n_;
  std::function<Vec(const Vec&)> normalForm_;
  bool excludeT1_;
  std::optional<QuadricClassification> cl_;
};

RationalParameterization parameterize(const QuadricClassification& cl);

struct SamplePlan {
  enum class Mode { Grid, Random };

  Vec lo, hi;  // box in t-space
  Mode mode = Mode::Random;
  int gridPerAxis = 5;
  std::size_t randomCount = 200;
  std::uint64_t seed = 0;
  double sigma1Tol = kSigma1DefaultTol;
};

std::vector<Vec> draw_samples(const SamplePlan& plan);

Vec sigma_hat(const RationalParameterization& rp, const Vec& t,
              double sigma1Tol = kSigma1DefaultTol);
double jacobian_det_sigma_hat(const RationalParameterization& rp, const Vec& t,
                              double sigma1Tol = kSigma1DefaultTol);

struct HyperplaneCheck {
  bool holds;
  std::optional<std::vector<Vec>> witness;  // n+1 affinely independent points
  int admissibleCount;
};

struct InnerPointCheck {
  bool holds;
  std::optional<Vec> witnessT;
  std::optional<bool> rayLeavesQuadric;  // residual((1 +/- 1e-3) s) != 0 probe
  double maxAbsDet;
  int admissibleCount;
};

HyperplaneCheck check_hyperplane_condition(const RationalParameterization& rp,
                                           const SamplePlan& plan);
InnerPointCheck check_inner_point_condition(const RationalParameterization& rp,
                                            const SamplePlan& plan);

// Unit-sphere point from n-1 spherical angles.
Vec spherical_point(const Vec& phi);

// Last quadric coordinate as a function of the first n-1, on the sheet
// through the anchor point.
class SheetFunction {
 public:
  SheetFunction(Quadric q, const Vec& anchor);

  double value(const Vec& sbar) const;
  Vec gradient(const Vec& sbar) const;

 private:
  Quadric q_;
  int branch_;
};

}  // namespace pf
