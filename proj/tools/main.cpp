#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyfourier/json_io.hpp"
#include "polyfourier/verify.hpp"

namespace {

using nlohmann::ordered_json;

pf::Vec parse_comma_vec(const std::string& text) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(tok, &used));
    } catch (const std::exception&) {
      throw pf::InvalidSpec("cannot parse number list: \"" + text + "\"");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  pf::Vec v(static_cast<int>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i)
    v[static_cast<int>(i)] = vals[i];
  return v;
}

void emit(const std::string& text, const std::string& outPath) {
  std::cout << text;
  if (!outPath.empty()) pf::write_text_file(outPath, text);
}

std::string format_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct PlanFlags {
  std::string box = "-1,1";
  int grid = 0;  // 0 = random mode
  std::size_t random = 200;
  std::uint64_t seed = 0;
  double sigma1Tol = pf::kSigma1DefaultTol;

  void attach(CLI::App* cmd) {
    cmd->add_option("--box", box, "sample box per axis as \"lo,hi\"");
    cmd->add_option("--grid", grid, "grid points per axis (switches to grid mode)");
    cmd->add_option("--random", random, "random sample count (default mode, 200)");
    cmd->add_option("--seed", seed, "RNG seed")->envname("POLYFOURIER_SEED");
    cmd->add_option("--sigma1-tol", sigma1Tol,
                    "exclusion tolerance around sigma_1 = 0");
  }

  pf::SamplePlan plan(int domainDim) const {
    const pf::Vec b = parse_comma_vec(box);
    if (b.size() != 2 || !(b[0] < b[1]))
      throw pf::InvalidSpec("--box expects \"lo,hi\" with lo < hi");
    if (sigma1Tol <= 0.0)
      throw pf::InvalidSpec("--sigma1-tol must be positive");
    pf::SamplePlan plan;
    plan.lo = pf::Vec::Constant(domainDim, b[0]);
    plan.hi = pf::Vec::Constant(domainDim, b[1]);
    if (grid > 0) {
      plan.mode = pf::SamplePlan::Mode::Grid;
      plan.gridPerAxis = grid;
    } else {
      plan.mode = pf::SamplePlan::Mode::Random;
      plan.randomCount = random;
    }
    plan.seed = seed;
    plan.sigma1Tol = sigma1Tol;
    return plan;
  }
};

pf::RationalParameterization surface_from_file(const std::string& path) {
  return pf::parameterize(pf::classify(pf::load_quadric_json(path).quadric));
}

int run_ft_eval(const std::string& polytopePath, const std::string& sStr,
                const std::string& method, std::size_t samples, int order,
                std::uint64_t seed, int threads, const std::string& out) {
  const pf::GeneralizedPolytope p = pf::load_polytope_json(polytopePath);
  const pf::Vec s = parse_comma_vec(sStr);
  if (s.size() != p.dim())
    throw pf::InvalidSpec("--s dimension does not match the polytope");

  ordered_json j;
  if (method.empty()) {
    const pf::Complex v = pf::generalized_ft(p, s);
    j["re"] = v.real();
    j["im"] = v.imag();
  } else {
    pf::QuadratureSpec spec;
    if (method == "mc") {
      spec.method = pf::QuadratureSpec::Method::MonteCarlo;
      spec.samplesOrOrder = samples;
    } else if (method == "duffy") {
      spec.method = pf::QuadratureSpec::Method::DuffyGauss;
      spec.samplesOrOrder = static_cast<std::size_t>(order);
    } else {
      throw pf::InvalidSpec("--quadrature must be mc or duffy");
    }
    spec.seed = seed;
    spec.threads = threads;
    const pf::QuadratureResult r = pf::quadrature_ft(p, s, spec);
    j["re"] = r.value.real();
    j["im"] = r.value.imag();
    j["standardError"] = r.standardError;
    j["method"] = method;
  }
  emit(j.dump(2) + "\n", out);
  return 0;
}

int run_ft_compare(const std::string& p1Path, const std::string& p2Path,
                   const std::string& qPath, const PlanFlags& flags,
                   double threshold, int threads, const std::string& expect,
                   const std::string& out, const std::string& csv) {
  const pf::GeneralizedPolytope p1 = pf::load_polytope_json(p1Path);
  const pf::GeneralizedPolytope p2 = pf::load_polytope_json(p2Path);
  const pf::RationalParameterization rp = surface_from_file(qPath);
  const pf::ComparisonReport rep = pf::compare_on_surface(
      p1, p2, rp, flags.plan(rp.domain_dim()), threshold, threads);
  emit(pf::comparison_to_json(rep), out);
  if (!csv.empty()) pf::write_text_file(csv, pf::samples_to_csv(rep.samples));
  if (expect == "equal")
    return rep.verdict == pf::Verdict::Indistinguishable ? 0 : 2;
  if (expect == "different")
    return rep.verdict == pf::Verdict::Distinguishable ? 0 : 2;
  return 0;
}

int run_quadric_classify(const std::string& qPath, const std::string& out) {
  const pf::QuadricClassification cl =
      pf::classify(pf::load_quadric_json(qPath).quadric);
  emit(pf::classification_to_json(cl), out);
  return 0;
}

int run_quadric_param(const std::string& qPath, const std::string& tStr,
                      const PlanFlags& flags, const std::string& out) {
  const pf::RationalParameterization rp = surface_from_file(qPath);
  if (!tStr.empty()) {
    const pf::Vec t = parse_comma_vec(tStr);
    ordered_json j;
    j["t"] = ordered_json::array();
    for (int i = 0; i < t.size(); ++i) j["t"].push_back(t[i]);
    const pf::Vec s = rp.sigma(t);
    const pf::Vec sp = rp.sigma_prime(t);
    j["sigma"] = ordered_json::array();
    for (int i = 0; i < s.size(); ++i) j["sigma"].push_back(s[i]);
    j["sigmaPrime"] = ordered_json::array();
    for (int i = 0; i < sp.size(); ++i) j["sigmaPrime"].push_back(sp[i]);
    try {
      const pf::Vec sh = pf::sigma_hat(rp, t, flags.sigma1Tol);
      j["sigmaHat"] = ordered_json::array();
      for (int i = 0; i < sh.size(); ++i) j["sigmaHat"].push_back(sh[i]);
    } catch (const pf::OnSigma1Zero&) {
      j["sigmaHat"] = nullptr;
    }
    emit(j.dump(2) + "\n", out);
    return 0;
  }

  const pf::SamplePlan plan = flags.plan(rp.domain_dim());
  std::string csvText;
  for (int i = 1; i < rp.dim(); ++i) csvText += "t" + std::to_string(i) + ",";
  for (int i = 1; i <= rp.dim(); ++i) {
    csvText += "s" + std::to_string(i);
    csvText += (i == rp.dim()) ? "\n" : ",";
  }
  for (const pf::Vec& t : pf::draw_samples(plan)) {
    if (!rp.in_domain(t)) continue;
    const pf::Vec s = rp.sigma(t);
    for (int i = 0; i < t.size(); ++i) csvText += format_num(t[i]) + ",";
    for (int i = 0; i < s.size(); ++i) {
      csvText += format_num(s[i]);
      csvText += (i + 1 == s.size()) ? "\n" : ",";
    }
  }
  emit(csvText, out);
  return 0;
}

int run_quadric_check(const std::string& qPath, const PlanFlags& flags,
                      const std::string& out) {
  const pf::RationalParameterization rp = surface_from_file(qPath);
  const pf::SamplePlan plan = flags.plan(rp.domain_dim());
  const pf::HyperplaneCheck hc = pf::check_hyperplane_condition(rp, plan);
  const pf::InnerPointCheck ic = pf::check_inner_point_condition(rp, plan);

  ordered_json j;
  j["hyperplane"]["holds"] = hc.holds;
  j["hyperplane"]["admissibleCount"] = hc.admissibleCount;
  j["innerPoint"]["holds"] = ic.holds;
  j["innerPoint"]["maxAbsDet"] = ic.maxAbsDet;
  if (ic.rayLeavesQuadric)
    j["innerPoint"]["rayLeavesQuadric"] = *ic.rayLeavesQuadric;
  else
    j["innerPoint"]["rayLeavesQuadric"] = nullptr;
  j["lineFree"] = rp.classification()->lineFree;
  const bool certified = hc.holds && ic.holds;
  j["certified"] = certified;
  emit(j.dump(2) + "\n", out);
  return certified ? 0 : 2;
}

int run_experiment_identity(const std::string& qPath, int equalPairs,
                            int perturbedPairs, const PlanFlags& flags,
                            double threshold, int threads,
                            const std::string& out) {
  const pf::RationalParameterization rp = surface_from_file(qPath);
  const std::vector<pf::IdentityCase> suite =
      pf::build_identity_suite(rp.dim(), equalPairs, perturbedPairs, flags.seed);
  const pf::IdentitySummary summary = pf::identity_experiment(
      suite, rp, flags.plan(rp.domain_dim()), threshold, threads);
  emit(pf::identity_to_json(summary), out);
  return summary.passed() ? 0 : 2;
}

int run_experiment_mirror(const std::string& pPath, const std::string& normal,
                          int nOn, int nOff, std::uint64_t seed, int threads,
                          const std::string& out) {
  const pf::GeneralizedPolytope p = pf::load_polytope_json(pPath);
  const pf::Hyperplane h(parse_comma_vec(normal));
  const pf::MirrorReport rep =
      pf::mirror_counterexample(p, h, nOn, nOff, seed, threads);
  emit(pf::mirror_to_json(rep), out);
  return rep.passed ? 0 : 2;
}

int run_experiment_modulus(const std::string& pPath, const std::string& wStr,
                           const std::string& qPath, const PlanFlags& flags,
                           int threads, const std::string& out) {
  const pf::GeneralizedPolytope p = pf::load_polytope_json(pPath);
  const pf::Vec w = parse_comma_vec(wStr);
  const pf::RationalParameterization rp = surface_from_file(qPath);
  const pf::ModulusReport rep = pf::modulus_invariance(
      p, w, rp, flags.plan(rp.domain_dim()), threads);
  emit(pf::modulus_to_json(rep), out);
  return rep.passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Fourier transforms of generalized polytopes and "
               "rational quadric surface experiments"};
  app.require_subcommand(1);
  int exitCode = 0;

  // ft
  CLI::App* ft = app.add_subcommand("ft", "Fourier transform evaluation");
  ft->require_subcommand(1);

  CLI::App* ftEval = ft->add_subcommand("eval", "evaluate F_P(s)");
  std::string evalPolytope, evalS, evalMethod, evalOut;
  std::size_t evalSamples = 100000;
  int evalOrder = 20, evalThreads = 1;
  std::uint64_t evalSeed = 0;
  ftEval->add_option("--polytope", evalPolytope, "polytope JSON")->required();
  ftEval->add_option("--s", evalS, "frequency vector \"s1,s2,...\"")
      ->required();
  ftEval->add_option("--quadrature", evalMethod,
                     "cross-check method: mc or duffy (default: exact)");
  ftEval->add_option("--samples", evalSamples, "MC sample count");
  ftEval->add_option("--order", evalOrder, "Gauss order per axis");
  ftEval->add_option("--seed", evalSeed, "RNG seed")
      ->envname("POLYFOURIER_SEED");
  ftEval->add_option("--threads", evalThreads, "worker threads");
  ftEval->add_option("--out", evalOut, "also write the JSON here");
  ftEval->callback([&] {
    exitCode = run_ft_eval(evalPolytope, evalS, evalMethod, evalSamples,
                           evalOrder, evalSeed, evalThreads, evalOut);
  });

  CLI::App* ftCompare =
      ft->add_subcommand("compare", "compare two polytopes on a surface");
  std::string cmpP1, cmpP2, cmpQ, cmpExpect, cmpOut, cmpCsv;
  PlanFlags cmpFlags;
  double cmpThreshold = pf::kIndistinguishableTol;
  int cmpThreads = 1;
  ftCompare->add_option("--polytope", cmpP1, "first polytope JSON")->required();
  ftCompare->add_option("--polytope2", cmpP2, "second polytope JSON")
      ->required();
  ftCompare->add_option("--quadric", cmpQ, "surface quadric JSON")->required();
  cmpFlags.attach(ftCompare);
  ftCompare->add_option("--threshold", cmpThreshold,
                        "indistinguishability threshold");
  ftCompare->add_option("--threads", cmpThreads, "worker threads");
  ftCompare->add_option("--expect", cmpExpect,
                        "equal or different: exit 2 on verdict mismatch");
  ftCompare->add_option("--out", cmpOut, "also write the JSON here");
  ftCompare->add_option("--csv", cmpCsv, "write the sample table as CSV");
  ftCompare->callback([&] {
    exitCode = run_ft_compare(cmpP1, cmpP2, cmpQ, cmpFlags, cmpThreshold,
                              cmpThreads, cmpExpect, cmpOut, cmpCsv);
  });

  // quadric
  CLI::App* quadric = app.add_subcommand("quadric", "quadric surface tools");
  quadric->require_subcommand(1);

  CLI::App* qClassify =
      quadric->add_subcommand("classify", "normal-form classification");
  std::string clsQ, clsOut;
  qClassify->add_option("--quadric", clsQ, "quadric JSON")->required();
  qClassify->add_option("--out", clsOut, "also write the JSON here");
  qClassify->callback([&] { exitCode = run_quadric_classify(clsQ, clsOut); });

  CLI::App* qParam =
      quadric->add_subcommand("param", "evaluate the rational chart");
  std::string parQ, parT, parOut;
  PlanFlags parFlags;
  qParam->add_option("--quadric", parQ, "quadric JSON")->required();
  qParam->add_option("--t", parT, "single parameter point \"t1,t2,...\"");
  parFlags.attach(qParam);
  qParam->add_option("--out", parOut, "also write the output here");
  qParam->callback(
      [&] { exitCode = run_quadric_param(parQ, parT, parFlags, parOut); });

  CLI::App* qCheck = quadric->add_subcommand(
      "check", "hyperplane and inner-point condition checks");
  std::string chkQ, chkOut;
  PlanFlags chkFlags;
  qCheck->add_option("--quadric", chkQ, "quadric JSON")->required();
  chkFlags.attach(qCheck);
  qCheck->add_option("--out", chkOut, "also write the JSON here");
  qCheck->callback(
      [&] { exitCode = run_quadric_check(chkQ, chkFlags, chkOut); });

  // experiment
  CLI::App* experiment =
      app.add_subcommand("experiment", "reproducible numeric experiments");
  experiment->require_subcommand(1);

  CLI::App* exIdentity = experiment->add_subcommand(
      "identity", "equal vs perturbed pair distinguishability");
  std::string idQ, idOut;
  PlanFlags idFlags;
  int idEqual = 20, idPerturbed = 20, idThreads = 1;
  double idThreshold = 1e-10;
  exIdentity->add_option("--quadric", idQ, "surface quadric JSON")->required();
  exIdentity->add_option("--pairs-equal", idEqual, "equal-pair count");
  exIdentity->add_option("--pairs-perturbed", idPerturbed,
                         "perturbed-pair count");
  idFlags.attach(exIdentity);
  exIdentity->add_option("--threshold", idThreshold,
                         "indistinguishability threshold");
  exIdentity->add_option("--threads", idThreads, "worker threads");
  exIdentity->add_option("--out", idOut, "also write the JSON here");
  exIdentity->callback([&] {
    exitCode = run_experiment_identity(idQ, idEqual, idPerturbed, idFlags,
                                       idThreshold, idThreads, idOut);
  });

  CLI::App* exMirror = experiment->add_subcommand(
      "mirror", "spectra of a polytope vs its mirror image");
  std::string mirP, mirNormal, mirOut;
  int mirOn = 50, mirOff = 50, mirThreads = 1;
  std::uint64_t mirSeed = 0;
  exMirror->add_option("--polytope", mirP, "polytope JSON")->required();
  exMirror->add_option("--normal", mirNormal, "mirror hyperplane normal")
      ->required();
  exMirror->add_option("--on", mirOn, "on-hyperplane sample count");
  exMirror->add_option("--off", mirOff, "off-hyperplane sample count");
  exMirror->add_option("--seed", mirSeed, "RNG seed")
      ->envname("POLYFOURIER_SEED");
  exMirror->add_option("--threads", mirThreads, "worker threads");
  exMirror->add_option("--out", mirOut, "also write the JSON here");
  exMirror->callback([&] {
    exitCode = run_experiment_mirror(mirP, mirNormal, mirOn, mirOff, mirSeed,
                                     mirThreads, mirOut);
  });

  CLI::App* exModulus = experiment->add_subcommand(
      "modulus", "|F| invariance under translation and point reflection");
  std::string modP, modW, modQ, modOut;
  PlanFlags modFlags;
  int modThreads = 1;
  exModulus->add_option("--polytope", modP, "polytope JSON")->required();
  exModulus->add_option("--w", modW, "translation vector \"w1,w2,...\"")
      ->required();
  exModulus->add_option("--quadric", modQ, "surface quadric JSON")->required();
  modFlags.attach(exModulus);
  exModulus->add_option("--threads", modThreads, "worker threads");
  exModulus->add_option("--out", modOut, "also write the JSON here");
  exModulus->callback([&] {
    exitCode = run_experiment_modulus(modP, modW, modQ, modFlags, modThreads,
                                      modOut);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const pf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exitCode;
}
