#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "polyfourier/polytope.hpp"

namespace pf {

using Complex = std::complex<double>;

inline constexpr int kMaxExpNodes = 16;
inline constexpr double kExpGuard = 700.0;

struct ExpNodes {
  std::vector<Complex> nodes;

  explicit ExpNodes(std::vector<Complex> ns);
};

struct SpectrumSample {
  std::optional<Vec> t;
  Vec s;
  Complex value;
};

struct QuadratureSpec {
  enum class Method { MonteCarlo, DuffyGauss };

  Method method = Method::MonteCarlo;
  std::size_t samplesOrOrder = 100000;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct QuadratureResult {
  Complex value;
  double standardError;
};

// Divided difference of exp over the nodes (Opitz: top-right entry of the
// exponential of the bidiagonal node matrix). Symmetric in the nodes.
Complex expdiff(const ExpNodes& nodes);

Complex simplex_ft(const Simplex& sx, const Vec& s);
Complex simplices_ft(const std::vector<Simplex>& parts, const Vec& s);
Complex polytope_ft(const ConvexPolytope& p, const Vec& s);
Complex generalized_ft(const GeneralizedPolytope& p, const Vec& s);

QuadratureResult quadrature_ft(const GeneralizedPolytope& p, const Vec& s,
                               const QuadratureSpec& spec);

// Caches the inclusion-exclusion expansion (signed triangulated terms) so a
// polytope can be evaluated at many s cheaply.
class FourierEvaluator {
 public:
  explicit FourierEvaluator(const GeneralizedPolytope& p);

  Complex eval(const Vec& s) const;
  std::vector<Complex> eval_batch(const std::vector<Vec>& points,
                                  int threads = 1) const;
  double volume() const { return volume_; }
  int dim() const { return dim_; }

 private:
  struct Term {
    double sign;
    std::vector<Simplex> simplices;
  };

  int dim_;
  double volume_;
  std::vector<Term> terms_;
};

// Gauss-Legendre rule on [0,1].
void gauss_legendre_01(int order, std::vector<double>& nodes,
                       std::vector<double>& weights);

}  // namespace pf
