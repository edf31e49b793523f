// SPDX-License-Identifier: Apache-2.0
#include "qmht/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qmht {

namespace {

using nlohmann::json;

constexpr double kNormTol = 1e-8;

[[noreturn]] void parse_fail(const std::string& msg) { fail(ErrorCode::kParse, msg); }

std::string state_label(std::size_t k) { return "state " + std::to_string(k + 1); }

Complex parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  parse_fail(where + ": complex entries must be [re, im] pairs");
}

RMatrix parse_real_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) parse_fail(where + ": expected a nonempty matrix");
  const auto rows = static_cast<Eigen::Index>(j.size());
  RMatrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      parse_fail(where + ": matrix must be square");
    }
    for (Eigen::Index c = 0; c < rows; ++c) {
      const json& x = row[static_cast<std::size_t>(c)];
      if (!x.is_number()) parse_fail(where + ": matrix entries must be numbers");
      m(r, c) = x.get<double>();
    }
  }
  return m;
}

void warn_renormalized(std::vector<std::string>& warnings, const std::string& where,
                       const char* what, double value) {
  std::ostringstream os;
  os.precision(12);
  os << where << ": " << what << " " << value << " renormalized to 1";
  warnings.push_back(os.str());
}

DensityMatrix parse_state(const json& j, std::size_t k, std::vector<std::string>& warnings) {
  const std::string where = state_label(k);
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    parse_fail(where + ": missing \"type\"");
  }
  const std::string type = j["type"].get<std::string>();
  try {
    if (type == "pure") {
      if (!j.contains("vector") || !j["vector"].is_array() || j["vector"].empty()) {
        parse_fail(where + ": pure state needs a nonempty \"vector\"");
      }
      const json& v = j["vector"];
      CVector psi(static_cast<Eigen::Index>(v.size()));
      for (std::size_t c = 0; c < v.size(); ++c) psi(static_cast<Eigen::Index>(c)) = parse_complex(v[c], where);
      const double norm = psi.norm();
      if (!(norm > 0.0) || !std::isfinite(norm)) parse_fail(where + ": vector has no finite nonzero norm");
      if (std::abs(norm - 1.0) > kNormTol) warn_renormalized(warnings, where, "vector norm", norm);
      return DensityMatrix::pure(psi / norm);
    }
    if (type == "diagonal") {
      if (!j.contains("probabilities") || !j["probabilities"].is_array() || j["probabilities"].empty()) {
        parse_fail(where + ": diagonal state needs nonempty \"probabilities\"");
      }
      std::vector<double> p;
      for (const json& x : j["probabilities"]) {
        if (!x.is_number()) parse_fail(where + ": probabilities must be numbers");
        p.push_back(x.get<double>());
        if (!(p.back() >= 0.0) || !std::isfinite(p.back())) parse_fail(where + ": negative probability");
      }
      double sum = 0.0;
      for (double x : p) sum += x;
      if (!(sum > 0.0)) parse_fail(where + ": probabilities sum to zero");
      if (std::abs(sum - 1.0) > kNormTol) warn_renormalized(warnings, where, "probability sum", sum);
      for (double& x : p) x /= sum;
      return DensityMatrix::diagonal(p);
    }
    if (type == "dense") {
      if (!j.contains("real")) parse_fail(where + ": dense state needs \"real\"");
      const RMatrix re = parse_real_matrix(j["real"], where);
      RMatrix im = RMatrix::Zero(re.rows(), re.cols());
      if (j.contains("imag")) {
        im = parse_real_matrix(j["imag"], where);
        if (im.rows() != re.rows()) parse_fail(where + ": real and imag parts differ in shape");
      }
      CMatrix m(re.rows(), re.cols());
      m.real() = re;
      m.imag() = im;
      const double tr = m.trace().real();
      if (!(tr > 0.0) || !std::isfinite(tr)) parse_fail(where + ": trace must be positive");
      if (std::abs(tr - 1.0) > kNormTol) warn_renormalized(warnings, where, "trace", tr);
      return DensityMatrix::from_matrix(HermitianMatrix(CMatrix(m / tr)));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    parse_fail(where + ": " + e.what());
  }
  parse_fail(where + ": unknown type \"" + type + "\"");
}

int parse_positive_int(const json& j, const char* key) {
  if (!j.is_number_integer()) parse_fail(std::string("\"") + key + "\" must be an integer");
  const auto v = j.get<std::int64_t>();
  if (v < 1 || v > 1000000) parse_fail(std::string("\"") + key + "\" must be a positive integer");
  return static_cast<int>(v);
}

json real_to_json(double x) {
  if (std::isfinite(x)) return x;
  return format_real(x);
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    if (s == "nan") return std::nan("");
  }
  parse_fail("report: expected a real number");
}

std::optional<double> optional_real(const json& row, const char* key) {
  if (!row.contains(key) || row[key].is_null()) return std::nullopt;
  return real_from_json(row[key]);
}

std::string pair_label(std::pair<int, int> p) {
  return std::to_string(p.first + 1) + "-" + std::to_string(p.second + 1);
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_fail("scenario must be a JSON object");
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<int>() != kSchemaVersion) {
    parse_fail("unsupported or missing \"schema_version\" (expected 1)");
  }

  Scenario sc;
  static const std::set<std::string> known{"schema_version", "states", "n_min", "n_max",
                                           "detectors", "epsilon_override", "seed"};
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) sc.warnings.push_back("unknown field \"" + item.key() + "\" ignored");
  }

  if (!doc.contains("states") || !doc["states"].is_array() || doc["states"].empty()) {
    parse_fail("scenario needs a nonempty \"states\" list");
  }
  for (std::size_t k = 0; k < doc["states"].size(); ++k) {
    sc.states.push_back(parse_state(doc["states"][k], k, sc.warnings));
    if (sc.states.back().dim() != sc.states.front().dim()) {
      parse_fail(state_label(k) + ": dimension " + std::to_string(sc.states.back().dim()) +
                 " differs from " + std::to_string(sc.states.front().dim()));
    }
  }

  if (doc.contains("n_min")) sc.n_min = parse_positive_int(doc["n_min"], "n_min");
  if (doc.contains("n_max")) {
    sc.n_max = parse_positive_int(doc["n_max"], "n_max");
  } else {
    sc.n_max = sc.n_min;
  }
  if (sc.n_min > sc.n_max) parse_fail("n_min exceeds n_max");

  if (doc.contains("detectors")) {
    const json& d = doc["detectors"];
    if (!d.is_array() || d.empty()) parse_fail("\"detectors\" must be a nonempty list");
    sc.detectors.clear();
    for (const json& name : d) {
      if (!name.is_string()) parse_fail("detector names must be strings");
      const DetectorFamily kind = family_from_string(name.get<std::string>());
      for (DetectorFamily seen : sc.detectors) {
        if (seen == kind) parse_fail("detector \"" + name.get<std::string>() + "\" listed twice");
      }
      sc.detectors.push_back(kind);
    }
  }

  if (doc.contains("epsilon_override") && !doc["epsilon_override"].is_null()) {
    if (!doc["epsilon_override"].is_number()) parse_fail("\"epsilon_override\" must be a number");
    const double eps = doc["epsilon_override"].get<double>();
    try {
      check_epsilon(eps);
    } catch (const Error& e) {
      parse_fail(std::string("epsilon_override: ") + e.what());
    }
    sc.epsilon_override = eps;
  }
  if (doc.contains("seed") && !doc["seed"].is_null()) {
    if (!doc["seed"].is_number_integer()) parse_fail("\"seed\" must be an integer");
    sc.seed = doc["seed"].get<std::int64_t>();
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "n,detector,err,exponent,lemma3_bound,lambda_min_gram,epsilon,qcb_xi,qcb_pair\n";
  const std::string xi = format_real(report.qcb.xi);
  const std::string pair = pair_label(report.qcb.argmin_pair);
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  for (const ExperimentRow& row : report.rows) {
    os << row.n << ',' << to_string(row.kind) << ',' << format_real(row.err) << ','
       << format_real(row.exponent) << ',' << opt(row.lemma3_bound) << ','
       << opt(row.lambda_min_gram) << ',' << opt(row.epsilon) << ',' << xi << ',' << pair << '\n';
  }
  return os.str();
}

std::string report_to_json(const ExperimentReport& report) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  json pairs = json::array();
  for (const auto& [p, res] : report.qcb.pairwise) {
    pairs.push_back({{"i", p.first + 1},
                     {"j", p.second + 1},
                     {"xi", real_to_json(res.xi)},
                     {"s_star", real_to_json(res.s_star)},
                     {"q_star", real_to_json(res.q_star)}});
  }
  doc["qcb"] = {{"xi", real_to_json(report.qcb.xi)},
                {"pair", {report.qcb.argmin_pair.first + 1, report.qcb.argmin_pair.second + 1}},
                {"pairwise", pairs}};
  json rows = json::array();
  for (const ExperimentRow& row : report.rows) {
    json r{{"n", row.n},
           {"detector", std::string(to_string(row.kind))},
           {"err", real_to_json(row.err)},
           {"exponent", real_to_json(row.exponent)}};
    json per = json::array();
    for (double e : row.per_hypothesis) per.push_back(real_to_json(e));
    r["per_hypothesis"] = per;
    if (row.lemma3_bound) r["lemma3_bound"] = real_to_json(*row.lemma3_bound);
    if (row.lambda_min_gram) r["lambda_min_gram"] = real_to_json(*row.lambda_min_gram);
    if (row.epsilon) r["epsilon"] = real_to_json(*row.epsilon);
    if (row.lemma6_bound) r["lemma6_bound"] = real_to_json(*row.lemma6_bound);
    if (row.stopping_index) r["stopping_index"] = *row.stopping_index;
    rows.push_back(r);
  }
  doc["rows"] = rows;
  json slopes = json::array();
  for (const SlopeEstimate& s : report.slopes) {
    slopes.push_back({{"detector", std::string(to_string(s.kind))},
                      {"slope", s.slope ? real_to_json(*s.slope) : json(nullptr)}});
  }
  doc["slopes"] = slopes;
  return doc.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  ExperimentReport report;
  try {
    const json doc = json::parse(text);
    if (doc.value("schema_version", 0) != kSchemaVersion) parse_fail("report: unsupported schema_version");
    const json& qcb = doc.at("qcb");
    report.qcb.xi = real_from_json(qcb.at("xi"));
    report.qcb.argmin_pair = {qcb.at("pair").at(0).get<int>() - 1, qcb.at("pair").at(1).get<int>() - 1};
    for (const json& p : qcb.at("pairwise")) {
      ChernoffResult res;
      res.xi = real_from_json(p.at("xi"));
      res.s_star = real_from_json(p.at("s_star"));
      res.q_star = real_from_json(p.at("q_star"));
      report.qcb.pairwise[{p.at("i").get<int>() - 1, p.at("j").get<int>() - 1}] = res;
    }
    for (const json& r : doc.at("rows")) {
      ExperimentRow row;
      row.n = r.at("n").get<int>();
      row.kind = family_from_string(r.at("detector").get<std::string>());
      row.err = real_from_json(r.at("err"));
      row.exponent = real_from_json(r.at("exponent"));
      for (const json& e : r.at("per_hypothesis")) row.per_hypothesis.push_back(real_from_json(e));
      row.lemma3_bound = optional_real(r, "lemma3_bound");
      row.lambda_min_gram = optional_real(r, "lambda_min_gram");
      row.epsilon = optional_real(r, "epsilon");
      row.lemma6_bound = optional_real(r, "lemma6_bound");
      if (r.contains("stopping_index")) row.stopping_index = r["stopping_index"].get<int>();
      report.rows.push_back(std::move(row));
    }
    for (const json& s : doc.value("slopes", json::array())) {
      SlopeEstimate est;
      est.kind = family_from_string(s.at("detector").get<std::string>());
      if (!s.at("slope").is_null()) est.slope = real_from_json(s.at("slope"));
      report.slopes.push_back(est);
    }
  } catch (const json::exception& e) {
    parse_fail(std::string("malformed report: ") + e.what());
  }
  return report;
}

}  // namespace qmht
