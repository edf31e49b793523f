// SPDX-License-Identifier: Apache-2.0
//
// JSON scenario files and report serialization.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmht/tensor_lab.hpp"

namespace qmht {

inline constexpr int kSchemaVersion = 1;

struct Scenario {
  std::vector<DensityMatrix> states;
  int n_min = 1;
  int n_max = 1;
  std::vector<DetectorFamily> detectors{DetectorFamily::kGs};
  std::optional<double> epsilon_override;
  std::optional<std::int64_t> seed;
  std::vector<std::string> warnings;  // e.g. renormalized vectors
};

/// Parses scenario JSON. Every malformed input throws kParse.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// "inf", "-inf", "nan" or %.12g.
std::string format_real(double x);

/// Columns: n,detector,err,exponent,lemma3_bound,lambda_min_gram,epsilon,qcb_xi,qcb_pair.
/// Absent values are empty fields; qcb_pair is 1-based, e.g. "1-3".
std::string report_to_csv(const ExperimentReport& report);
std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

}  // namespace qmht
