#include "polyfourier/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pf {
namespace {

using nlohmann::ordered_json;

ordered_json parse_or_throw(const std::string& text, const char* what) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidFixture(std::string(what) + ": " + e.what());
  }
}

Vec json_to_vec(const ordered_json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw InvalidFixture(std::string(what) + " must be a nonempty array");
  Vec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw InvalidFixture(std::string(what) + " must hold numbers");
    v[static_cast<int>(i)] = j[i].get<double>();
  }
  return v;
}

Mat json_to_mat(const ordered_json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw InvalidFixture(std::string(what) + " must be a nonempty 2-D array");
  const int rows = static_cast<int>(j.size());
  Mat m;
  for (int r = 0; r < rows; ++r) {
    const Vec row = json_to_vec(j[static_cast<std::size_t>(r)], what);
    if (r == 0) m = Mat(rows, row.size());
    if (row.size() != m.cols())
      throw InvalidFixture(std::string(what) + " has ragged rows");
    m.row(r) = row;
  }
  return m;
}

ordered_json vec_to_json(const Vec& v) {
  ordered_json out = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

ordered_json mat_to_json(const Mat& m) {
  ordered_json out = ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) out.push_back(vec_to_json(m.row(r)));
  return out;
}

ordered_json sample_pair_to_json(
    const std::pair<SpectrumSample, SpectrumSample>& pair) {
  ordered_json row;
  if (pair.first.t) row["t"] = vec_to_json(*pair.first.t);
  row["s"] = vec_to_json(pair.first.s);
  row["re1"] = pair.first.value.real();
  row["im1"] = pair.first.value.imag();
  row["re2"] = pair.second.value.real();
  row["im2"] = pair.second.value.imag();
  row["absdiff"] = std::abs(pair.first.value - pair.second.value);
  return row;
}

void append_num(std::string& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  out += buf;
}

}  // namespace

GeneralizedPolytope parse_polytope_json(const std::string& text) {
  const ordered_json j = parse_or_throw(text, "polytope JSON");
  if (!j.contains("pieces") || !j["pieces"].is_array() || j["pieces"].empty())
    throw InvalidFixture("polytope JSON needs a nonempty \"pieces\" array");
  std::vector<ConvexPolytope> pieces;
  for (const ordered_json& pj : j["pieces"]) {
    if (!pj.contains("vertices"))
      throw InvalidFixture("each piece needs a \"vertices\" array");
    std::vector<Vec> verts;
    for (const ordered_json& vj : pj["vertices"])
      verts.push_back(json_to_vec(vj, "vertex"));
    pieces.push_back(hull_facets(verts));
  }
  return GeneralizedPolytope(std::move(pieces));
}

GeneralizedPolytope load_polytope_json(const std::string& path) {
  return parse_polytope_json(read_text_file(path));
}

QuadricFixture parse_quadric_json(const std::string& text) {
  const ordered_json j = parse_or_throw(text, "quadric JSON");
  if (!j.contains("A") || !j.contains("b") || !j.contains("c"))
    throw InvalidFixture("quadric JSON needs \"A\", \"b\", \"c\"");
  if (!j["c"].is_number())
    throw InvalidFixture("quadric \"c\" must be a number");
  QuadricFixture fx{Quadric(json_to_mat(j["A"], "quadric A"),
                            json_to_vec(j["b"], "quadric b"),
                            j["c"].get<double>()),
                    {}, {}, {}};
  if (j.contains("expected")) {
    const ordered_json& e = j["expected"];
    if (e.contains("case")) fx.expectedCase = e["case"].get<int>();
    if (e.contains("lineFree"))
      fx.expectedLineFree = e["lineFree"].get<bool>();
  }
  if (j.contains("expectError"))
    fx.expectError = j["expectError"].get<std::string>();
  return fx;
}

QuadricFixture load_quadric_json(const std::string& path) {
  return parse_quadric_json(read_text_file(path));
}

std::string classification_to_json(const QuadricClassification& cl) {
  ordered_json j;
  j["case"] = static_cast<int>(cl.caseId);
  j["epsilons"] = cl.epsilons;
  j["cPrime"] = cl.cPrime;
  j["T"] = mat_to_json(cl.T);
  j["v"] = vec_to_json(cl.v);
  j["lineFree"] = cl.lineFree;
  j["pointCount"] = cl.pointCount == PointCount::Many
                        ? "many"
                        : (cl.pointCount == PointCount::One ? "one" : "none");
  return j.dump(2) + "\n";
}

std::string comparison_to_json(const ComparisonReport& rep) {
  ordered_json j;
  j["verdict"] = to_string(rep.verdict);
  j["maxAbsDiff"] = rep.maxAbsDiff;
  j["maxAbsValue"] = rep.maxAbsValue;
  j["threshold"] = rep.threshold;
  j["hyperplaneHolds"] = rep.hyperplaneHolds;
  j["innerPointHolds"] = rep.innerPointHolds;
  j["conditionsCertified"] = rep.conditionsCertified;
  j["note"] = rep.note;
  j["sampleCount"] = rep.samples.size();
  ordered_json rows = ordered_json::array();
  for (const auto& pair : rep.samples) rows.push_back(sample_pair_to_json(pair));
  j["samples"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string mirror_to_json(const MirrorReport& rep) {
  ordered_json j;
  j["passed"] = rep.passed;
  j["onPass"] = rep.onPass;
  j["offPass"] = rep.offPass;
  j["maxOnDiff"] = rep.maxOnDiff;
  j["maxOffDiff"] = rep.maxOffDiff;
  j["onSampleCount"] = rep.onSamples.size();
  j["offSampleCount"] = rep.offSamples.size();
  return j.dump(2) + "\n";
}

std::string modulus_to_json(const ModulusReport& rep) {
  ordered_json j;
  j["passed"] = rep.passed;
  j["maxTranslationDiff"] = rep.maxTranslationDiff;
  j["maxReflectionDiff"] = rep.maxReflectionDiff;
  j["sampleCount"] = rep.sampleCount;
  return j.dump(2) + "\n";
}

std::string identity_to_json(const IdentitySummary& summary) {
  ordered_json j;
  j["total"] = summary.total;
  j["agreed"] = summary.agreed;
  j["passed"] = summary.passed();
  ordered_json rows = ordered_json::array();
  for (const IdentityDisagreement& d : summary.disagreements) {
    ordered_json row;
    row["index"] = d.index;
    row["expectEqual"] = d.expectEqual;
    row["verdict"] = to_string(d.verdict);
    row["maxAbsDiff"] = d.maxAbsDiff;
    rows.push_back(std::move(row));
  }
  j["disagreements"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string samples_to_csv(
    const std::vector<std::pair<SpectrumSample, SpectrumSample>>& samples) {
  std::string out;
  if (samples.empty()) return out;
  const int tDim =
      samples.front().first.t ? static_cast<int>(samples.front().first.t->size())
                              : 0;
  const int sDim = static_cast<int>(samples.front().first.s.size());
  for (int i = 1; i <= tDim; ++i) out += "t" + std::to_string(i) + ",";
  for (int i = 1; i <= sDim; ++i) out += "s" + std::to_string(i) + ",";
  out += "re1,im1,re2,im2,absdiff\n";
  for (const auto& [a, b] : samples) {
    if (tDim > 0)
      for (int i = 0; i < tDim; ++i) {
        append_num(out, (*a.t)[i]);
        out += ",";
      }
    for (int i = 0; i < sDim; ++i) {
      append_num(out, a.s[i]);
      out += ",";
    }
    append_num(out, a.value.real());
    out += ",";
    append_num(out, a.value.imag());
    out += ",";
    append_num(out, b.value.real());
    out += ",";
    append_num(out, b.value.imag());
    out += ",";
    append_num(out, std::abs(a.value - b.value));
    out += "\n";
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidFixture("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidFixture("cannot write file: " + path);
  out << text;
}

}  // namespace pf
