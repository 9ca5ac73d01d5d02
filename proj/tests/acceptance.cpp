// Acceptance gate: one line per criterion, nonzero exit if any fails.
#include <sys/wait.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "polyfourier/json_io.hpp"
#include "polyfourier/verify.hpp"

namespace {

using pf::Complex;
using pf::Mat;
using pf::Quadric;
using pf::Vec;

int failures = 0;

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

void criterion(int idx, const char* name,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] %2d %s%s%s\n", ok ? "PASS" : "FAIL", idx, name,
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fixture(const std::string& name) {
  return std::string(PF_FIXTURES) + "/" + name;
}

struct CliRun {
  int exitCode = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(PF_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
  r.exitCode = WEXITSTATUS(pclose(pipe));
  return r;
}

Vec rand_vec(pf::SplitMix64& rng, int n, double lo, double hi) {
  Vec v(n);
  for (int j = 0; j < n; ++j) v[j] = rng.next_uniform(lo, hi);
  return v;
}

Vec rand_direction(pf::SplitMix64& rng, int n) {
  for (;;) {
    const Vec v = rand_vec(rng, n, -1.0, 1.0);
    if (v.norm() > 1e-3) return v / v.norm();
  }
}

double sine_power_product(const Vec& phi) {
  const int n = static_cast<int>(phi.size()) + 1;
  double p = (n % 2 == 0) ? -1.0 : 1.0;
  for (int j = 0; j < n - 1; ++j)
    p *= std::pow(std::sin(phi[j]), n - 1 - j);
  return p;
}

pf::RationalParameterization surface(const std::string& name) {
  return pf::parameterize(
      pf::classify(pf::load_quadric_json(fixture(name)).quadric));
}

pf::SamplePlan random_plan(int domainDim, std::size_t count,
                           std::uint64_t seed) {
  pf::SamplePlan plan;
  plan.lo = Vec::Constant(domainDim, -1.0);
  plan.hi = Vec::Constant(domainDim, 1.0);
  plan.mode = pf::SamplePlan::Mode::Random;
  plan.randomCount = count;
  plan.seed = seed;
  return plan;
}

// 1. Closed-form values on the unit square and the standard triangle.
bool closed_form_values(std::string& d) {
  const double pi = std::numbers::pi;
  const pf::GeneralizedPolytope square({pf::hull_facets(
      {pftest::vec({0, 0}), pftest::vec({1, 0}), pftest::vec({1, 1}),
       pftest::vec({0, 1})})});
  const pf::GeneralizedPolytope triangle({pf::hull_facets(
      {pftest::vec({0, 0}), pftest::vec({1, 0}), pftest::vec({0, 1})})});

  const Complex gotSquare = pf::generalized_ft(square, pftest::vec({pi, pi}));
  const Complex wantSquare(-4.0 / (pi * pi), 0.0);
  const Complex gotTriangle =
      pf::generalized_ft(triangle, pftest::vec({pi, 0}));
  const Complex wantTriangle(2.0 / (pi * pi), -1.0 / pi);

  const double err = std::max(std::abs(gotSquare - wantSquare),
                              std::abs(gotTriangle - wantTriangle));
  d = "max abs err " + sci(err);
  return err <= 1e-12;
}

// 2. F(0) equals the volume for random polytopes in dimensions 2..4.
bool zero_frequency_volume(std::string& d) {
  pf::SplitMix64 rng(20260814);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + i % 3;
    const pf::ConvexPolytope hull = pftest::random_polytope(rng, n);
    const pf::GeneralizedPolytope p({hull});
    const double vol = pf::volume(hull);
    const Complex f = pf::generalized_ft(p, Vec::Zero(n));
    worst = std::max(worst, std::abs(f - Complex(vol, 0.0)) / vol);
  }
  d = "max rel err " + sci(worst);
  return worst <= 1e-12;
}

// 3. Exact values agree with Duffy-Gauss quadrature, including frequencies
//    orthogonal to vertex differences (confluent divided differences).
bool duffy_agreement(std::string& d) {
  const std::vector<std::string> names = {"tri.json", "tetra.json"};
  double worst = 0.0;
  int checked = 0;
  for (std::size_t k = 0; k < names.size(); ++k) {
    const pf::GeneralizedPolytope p = pf::load_polytope_json(fixture(names[k]));
    const int n = p.dim();
    const std::vector<Vec>& verts = p.pieces().front().vertices();
    pf::SplitMix64 rng = pf::substream(314, k);
    for (int i = 0; i < 25; ++i) {
      Vec s;
      if (i < 20) {
        s = rand_direction(rng, n) * rng.next_uniform(0.5, 10.0);
      } else {
        const Vec e = verts[1] - verts[0];
        for (;;) {
          const Vec r = rand_direction(rng, n);
          s = r - (r.dot(e) / e.squaredNorm()) * e;
          if (s.norm() > 1e-3) break;
        }
        s *= rng.next_uniform(1.0, 10.0) / s.norm();
      }
      const Complex exact = pf::generalized_ft(p, s);
      pf::QuadratureSpec spec;
      spec.method = pf::QuadratureSpec::Method::DuffyGauss;
      spec.samplesOrOrder = 20;
      const Complex approx = pf::quadrature_ft(p, s, spec).value;
      worst = std::max(worst, std::abs(exact - approx));
      ++checked;
    }
  }
  d = std::to_string(checked) + " frequencies, max abs err " + sci(worst);
  return checked == 50 && worst <= 1e-8;
}

// 4. The transform is invariant under re-decomposition of the same set.
bool decomposition_invariance(std::string& d) {
  const pf::GeneralizedPolytope whole =
      pf::load_polytope_json(fixture("square.json"));
  const pf::GeneralizedPolytope pieces =
      pf::load_polytope_json(fixture("square_two_pieces.json"));
  pf::SplitMix64 rng(40404);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec s = rand_direction(rng, 2) * rng.next_uniform(0.0, 10.0);
    worst = std::max(
        worst, std::abs(pf::generalized_ft(whole, s) -
                        pf::generalized_ft(pieces, s)));
  }
  d = "max abs diff " + sci(worst);
  return worst <= 1e-10;
}

// 5. Every quadric fixture classifies as annotated and its chart lies on the
//    surface to solver accuracy; degenerate fixtures raise the right errors.
bool quadric_fixtures(std::string& d) {
  const std::vector<std::string> valid = {
      "circle.json",      "circle_r5.json", "sphere3.json",
      "sphere3_r5.json",  "sphere4.json",   "ellipsoid3.json",
      "parabola.json",    "paraboloid3.json", "hyperbola.json",
      "two_sheet3.json",  "one_sheet3.json",
      "hyperbolic_paraboloid3.json"};
  double worst = 0.0;
  for (const std::string& name : valid) {
    const pf::QuadricFixture fx = pf::load_quadric_json(fixture(name));
    const pf::QuadricClassification cl = pf::classify(fx.quadric);
    if (!fx.expectedCase || static_cast<int>(cl.caseId) != *fx.expectedCase) {
      d = name + ": unexpected case";
      return false;
    }
    if (!fx.expectedLineFree || cl.lineFree != *fx.expectedLineFree) {
      d = name + ": unexpected lineFree";
      return false;
    }
    const pf::RationalParameterization rp = pf::parameterize(cl);
    const int dd = rp.domain_dim();
    pf::SamplePlan plan = random_plan(dd, 10000, 20260814);
    if (cl.caseId == pf::QuadricCase::CentralMixed) {
      plan.lo[0] = 0.1;
      plan.hi[0] = 2.1;
    }
    for (const Vec& t : pf::draw_samples(plan)) {
      if (!rp.in_domain(t)) continue;
      worst = std::max(worst, std::abs(pf::residual(fx.quadric, rp.sigma(t))));
    }
  }

  const std::vector<std::pair<std::string, std::string>> degenerate = {
      {"cylinder3.json", "UnsupportedQuadric"},
      {"empty_circle.json", "EmptyQuadric"},
      {"point_circle.json", "PointQuadric"}};
  for (const auto& [name, kind] : degenerate) {
    const pf::QuadricFixture fx = pf::load_quadric_json(fixture(name));
    if (!fx.expectError || *fx.expectError != kind) {
      d = name + ": fixture annotation mismatch";
      return false;
    }
    bool raised = false;
    try {
      pf::classify(fx.quadric);
    } catch (const pf::UnsupportedQuadric&) {
      raised = kind == "UnsupportedQuadric";
    } catch (const pf::EmptyQuadric&) {
      raised = kind == "EmptyQuadric";
    } catch (const pf::PointQuadric&) {
      raised = kind == "PointQuadric";
    }
    if (!raised) {
      d = name + ": expected " + kind;
      return false;
    }
  }
  d = "12 charts, max |residual| " + sci(worst) + "; 3 degenerate rejected";
  return worst <= 1e-9;
}

// 6. Spherical chart determinant matches the sine-product closed form.
bool spherical_determinant(std::string& d) {
  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    pf::SplitMix64 rng = pf::substream(41, static_cast<std::uint64_t>(n));
    for (int i = 0; i < 100; ++i) {
      const Vec phi = rand_vec(rng, n - 1, 0.1, std::numbers::pi - 0.1);
      const auto chart = [n](const Vec& p) {
        return pf::spherical_point(p).head(n - 1).eval();
      };
      const double lhs = pf::fd_jacobian(chart, phi).determinant();
      const double rhs = sine_power_product(phi);
      worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
    }
  }
  d = "300 angles, max rel err " + sci(worst);
  return worst <= 1e-6;
}

// 7. Hyperplane and inner-point conditions hold for sphere and hyperbola
//    charts and fail for a rational line.
bool condition_checks(std::string& d) {
  for (const char* name : {"sphere3.json", "hyperbola.json"}) {
    const pf::RationalParameterization rp = surface(name);
    const pf::SamplePlan plan = random_plan(rp.domain_dim(), 200, 0);
    if (!pf::check_hyperplane_condition(rp, plan).holds) {
      d = std::string(name) + ": hyperplane condition failed";
      return false;
    }
    if (!pf::check_inner_point_condition(rp, plan).holds) {
      d = std::string(name) + ": inner-point condition failed";
      return false;
    }
  }
  const pf::RationalParameterization line(
      2, [](const Vec& t) { return pftest::vec({t[0], t[0]}); });
  const pf::SamplePlan plan = random_plan(1, 200, 0);
  const bool lineHyper = pf::check_hyperplane_condition(line, plan).holds;
  const bool lineInner = pf::check_inner_point_condition(line, plan).holds;
  d = "sphere+hyperbola certified; line fails both";
  return !lineHyper && !lineInner;
}

// 8. Mirror image: identical spectra on the mirror hyperplane's frequency
//    directions, distinct away from them.
bool mirror_experiment(std::string& d) {
  const pf::GeneralizedPolytope tri = pf::load_polytope_json(fixture("tri.json"));
  const pf::MirrorReport r2 = pf::mirror_counterexample(
      tri, pf::Hyperplane(pftest::vec({0, 1})), 50, 50, 71);
  const pf::GeneralizedPolytope tetra =
      pf::load_polytope_json(fixture("tetra.json"));
  const pf::MirrorReport r3 = pf::mirror_counterexample(
      tetra, pf::Hyperplane(pftest::vec({0, 0, 1})), 50, 50, 72);
  d = "on-plane diff " + sci(std::max(r2.maxOnDiff, r3.maxOnDiff)) +
      ", off-plane diff " + sci(std::min(r2.maxOffDiff, r3.maxOffDiff));
  return r2.passed && r3.passed && r2.maxOnDiff <= 1e-10 &&
         r3.maxOnDiff <= 1e-10 && r2.maxOffDiff > 1e-3 && r3.maxOffDiff > 1e-3;
}

// 9. Identity experiment: equal pairs indistinguishable at 1e-10, perturbed
//    pairs distinguishable, on circle and sphere surface samples.
bool identity_experiments(std::string& d) {
  const struct {
    const char* quadric;
    int dim;
    std::uint64_t seed;
  } runs[] = {{"circle_r5.json", 2, 101}, {"sphere3_r5.json", 3, 202}};
  std::size_t agreed = 0, total = 0;
  for (const auto& run : runs) {
    const pf::RationalParameterization rp = surface(run.quadric);
    const std::vector<pf::IdentityCase> suite =
        pf::build_identity_suite(run.dim, 20, 20, run.seed);
    const pf::IdentitySummary summary = pf::identity_experiment(
        suite, rp, random_plan(rp.domain_dim(), 100, 0), 1e-10);
    if (!summary.passed()) {
      d = std::string(run.quadric) + ": " +
          std::to_string(summary.disagreements.size()) + " disagreements";
      return false;
    }
    agreed += summary.agreed;
    total += summary.total;
  }
  d = std::to_string(agreed) + "/" + std::to_string(total) + " pairs agreed";
  return agreed == 80 && total == 80;
}

// 10. |F| is invariant under translation and point reflection on surface
//     samples.
bool modulus_experiment(std::string& d) {
  const pf::ModulusReport r2 = pf::modulus_invariance(
      pf::load_polytope_json(fixture("square.json")), pftest::vec({2.7, -1.3}),
      surface("circle_r5.json"), random_plan(1, 100, 0));
  const pf::ModulusReport r3 = pf::modulus_invariance(
      pf::load_polytope_json(fixture("tetra.json")),
      pftest::vec({0.4, -1.1, 2.2}), surface("sphere3_r5.json"),
      random_plan(2, 100, 0));
  const double worst =
      std::max({r2.maxTranslationDiff, r2.maxReflectionDiff,
                r3.maxTranslationDiff, r3.maxReflectionDiff});
  d = std::to_string(r2.sampleCount + r3.sampleCount) +
      " samples, max diff " + sci(worst);
  return r2.passed && r3.passed && worst <= 1e-10;
}

// 11. CLI reports are byte-identical across repeat runs and thread counts.
bool cli_determinism(std::string& d) {
  const std::string cmp = "ft compare --polytope " + fixture("square.json") +
                          " --polytope2 " + fixture("tri.json") +
                          " --quadric " + fixture("circle_r5.json") +
                          " --random 60 --seed 13 --threads ";
  const CliRun a = run_cli(cmp + "1");
  const CliRun b = run_cli(cmp + "8");
  const CliRun c = run_cli(cmp + "1");

  const std::string ident = "experiment identity --quadric " +
                            fixture("sphere3_r5.json") +
                            " --pairs-equal 2 --pairs-perturbed 2 --random 40 "
                            "--seed 17 --threads ";
  const CliRun ia = run_cli(ident + "1");
  const CliRun ib = run_cli(ident + "8");

  d = "compare outputs " + std::to_string(a.out.size()) + " bytes, identity " +
      std::to_string(ia.out.size()) + " bytes";
  return a.exitCode == 0 && b.exitCode == 0 && c.exitCode == 0 &&
         !a.out.empty() && a.out == b.out && a.out == c.out &&
         ia.exitCode == 0 && ib.exitCode == 0 && !ia.out.empty() &&
         ia.out == ib.out;
}

}  // namespace

int main() {
  criterion(1, "closed-form square and triangle transforms", closed_form_values);
  criterion(2, "zero frequency equals volume", zero_frequency_volume);
  criterion(3, "exact transform matches Duffy-Gauss quadrature", duffy_agreement);
  criterion(4, "invariance under re-decomposition", decomposition_invariance);
  criterion(5, "quadric fixtures classify and parameterize on-surface",
            quadric_fixtures);
  criterion(6, "spherical chart determinant closed form", spherical_determinant);
  criterion(7, "hyperplane and inner-point condition checks", condition_checks);
  criterion(8, "mirror polytopes agree only on the mirror hyperplane",
            mirror_experiment);
  criterion(9, "identity experiment separates equal from perturbed",
            identity_experiments);
  criterion(10, "modulus invariance under translation and reflection",
            modulus_experiment);
  criterion(11, "CLI output determinism across threads", cli_determinism);

  if (failures == 0) {
    std::printf("acceptance: all 11 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", failures);
  return 1;
}
