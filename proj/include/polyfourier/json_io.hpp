#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyfourier/polytope.hpp"
#include "polyfourier/quadric.hpp"
#include "polyfourier/verify.hpp"

namespace pf {

// {"pieces": [{"vertices": [[x, y, ...], ...]}, ...]}
GeneralizedPolytope parse_polytope_json(const std::string& text);
GeneralizedPolytope load_polytope_json(const std::string& path);

// {"A": [[...]], "b": [...], "c": r} plus optional bookkeeping:
// "expected": {"case": k, "lineFree": b}, "expectError": "name".
struct QuadricFixture {
  Quadric quadric;
  std::optional<int> expectedCase;
  std::optional<bool> expectedLineFree;
  std::optional<std::string> expectError;
};

QuadricFixture parse_quadric_json(const std::string& text);
QuadricFixture load_quadric_json(const std::string& path);

std::string classification_to_json(const QuadricClassification& cl);
std::string comparison_to_json(const ComparisonReport& rep);
std::string mirror_to_json(const MirrorReport& rep);
std::string modulus_to_json(const ModulusReport& rep);
std::string identity_to_json(const IdentitySummary& summary);

// Fixed column order: t1..tk (when present), s1..sn, re1, im1, re2, im2,
// absdiff; floats with 17 significant digits.
std::string samples_to_csv(
    const std::vector<std::pair<SpectrumSample, SpectrumSample>>& samples);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pf
