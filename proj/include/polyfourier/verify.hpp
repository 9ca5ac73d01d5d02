#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "polyfourier/fourier.hpp"
#include "polyfourier/polytope.hpp"
#include "polyfourier/quadric.hpp"

namespace pf {

inline constexpr double kIndistinguishableTol = 1e-8;
inline constexpr double kDistinguishableFloor = 1e-3;
inline constexpr double kMirrorOnTol = 1e-10;
inline constexpr double kMirrorOffFloor = 1e-3;
inline constexpr double kModulusTol = 1e-10;

enum class Verdict { Indistinguishable, Distinguishable, Inconclusive };

std::string to_string(Verdict v);

struct ComparisonReport {
  std::vector<std::pair<SpectrumSample, SpectrumSample>> samples;
  double maxAbsDiff = 0.0;
  double maxAbsValue = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  double threshold = kIndistinguishableTol;
  bool hyperplaneHolds = false;
  bool innerPointHolds = false;
  bool conditionsCertified = false;
  std::string note;
};

// Evaluates both transforms on sigma(t) over the plan's admissible samples.
// Indistinguishable iff maxAbsDiff <= threshold * (1 + maxAbsValue);
// distinguishable needs maxAbsDiff > kDistinguishableFloor; in between the
// verdict is inconclusive.
ComparisonReport compare_on_surface(const GeneralizedPolytope& p1,
                                    const GeneralizedPolytope& p2,
                                    const RationalParameterization& rp,
                                    const SamplePlan& plan,
                                    double threshold = kIndistinguishableTol,
                                    int threads = 1);

struct MirrorReport {
  double maxOnDiff = 0.0;   // over s with a.s = 0
  double maxOffDiff = 0.0;  // over s clearly off the hyperplane
  bool onPass = false;      // maxOnDiff <= kMirrorOnTol
  bool offPass = false;     // maxOffDiff > kMirrorOffFloor
  bool passed = false;
  std::vector<std::pair<SpectrumSample, SpectrumSample>> onSamples;
  std::vector<std::pair<SpectrumSample, SpectrumSample>> offSamples;
};

// Compares a polytope against its mirror image: equal spectra on the
// mirror hyperplane's frequency directions, different away from them.
MirrorReport mirror_counterexample(const GeneralizedPolytope& p,
                                   const Hyperplane& h, int nOn, int nOff,
                                   std::uint64_t seed, int threads = 1);

struct ModulusReport {
  double maxTranslationDiff = 0.0;
  double maxReflectionDiff = 0.0;
  bool passed = false;
  int sampleCount = 0;
};

// | |F_{P+w}| - |F_P| | and | |F_{-P}| - |F_P| | over surface samples.
ModulusReport modulus_invariance(const GeneralizedPolytope& p, const Vec& w,
                                 const RationalParameterization& rp,
                                 const SamplePlan& plan, int threads = 1);

struct IdentityCase {
  GeneralizedPolytope p1;
  GeneralizedPolytope p2;
  bool expectEqual;
};

struct IdentityDisagreement {
  std::size_t index;
  bool expectEqual;
  Verdict verdict;
  double maxAbsDiff;
};

struct IdentitySummary {
  std::size_t total = 0;
  std::size_t agreed = 0;
  std::vector<IdentityDisagreement> disagreements;
  std::vector<ComparisonReport> reports;
  bool passed() const { return total > 0 && disagreements.empty(); }
};

IdentitySummary identity_experiment(const std::vector<IdentityCase>& suite,
                                    const RationalParameterization& rp,
                                    const SamplePlan& plan,
                                    double threshold = kIndistinguishableTol,
                                    int threads = 1);

// Random suite: `equalPairs` cases pairing a convex hull with an overlapping
// two-piece re-decomposition of itself, then `perturbedPairs` cases pairing
// it with a vertex-jittered variant (jitter 0.1, accidental set equality
// rejected by a Monte Carlo symmetric-difference estimate).
std::vector<IdentityCase> build_identity_suite(int dim, int equalPairs,
                                               int perturbedPairs,
                                               std::uint64_t seed);

}  // namespace pf
