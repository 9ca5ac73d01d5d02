#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "polyfourier/polytope.hpp"
#include "polyfourier/rng.hpp"

namespace pftest {

inline pf::Vec vec(std::initializer_list<double> xs) {
  pf::Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

inline bool close(const pf::Vec& a, const pf::Vec& b, double tol) {
  return a.size() == b.size() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

inline bool same_point_set(const std::vector<pf::Vec>& a,
                           const std::vector<pf::Vec>& b, double tol = 1e-9) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const pf::Vec& p : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double scale = 1.0 + std::max(p.cwiseAbs().maxCoeff(),
                                          b[j].cwiseAbs().maxCoeff());
      if ((p - b[j]).cwiseAbs().maxCoeff() <= tol * scale) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

inline pf::ConvexPolytope random_polytope(pf::SplitMix64& rng, int n,
                                          int extra = 4, double radius = 1.0) {
  for (;;) {
    std::vector<pf::Vec> pts;
    const int k = n + 1 + extra;
    for (int i = 0; i < k; ++i) {
      pf::Vec p(n);
      for (int j = 0; j < n; ++j) p[j] = rng.next_uniform(-radius, radius);
      pts.push_back(p);
    }
    try {
      return pf::hull_facets(pts);
    } catch (const pf::DegenerateInput&) {
    }
  }
}

struct McVolume {
  double estimate;
  double standardError;
};

// Independent union-volume estimate: uniform samples over the bounding box,
// membership by halfspace test.
inline McVolume mc_union_volume(const pf::GeneralizedPolytope& p,
                                std::uint64_t seed, std::size_t samples) {
  auto [lo, hi] = pf::bounding_box(p);
  const int n = p.dim();
  double boxVol = 1.0;
  for (int j = 0; j < n; ++j) boxVol *= hi[j] - lo[j];
  pf::SplitMix64 rng(seed);
  std::size_t hits = 0;
  pf::Vec x(n);
  for (std::size_t i = 0; i < samples; ++i) {
    for (int j = 0; j < n; ++j) x[j] = rng.next_uniform(lo[j], hi[j]);
    if (pf::contains(p, x)) ++hits;
  }
  const double frac =
      static_cast<double>(hits) / static_cast<double>(samples);
  return {boxVol * frac,
          boxVol * std::sqrt(frac * (1.0 - frac) /
                             static_cast<double>(samples))};
}

}  // namespace pftest
