// SPDX-License-Identifier: Apache-2.0

#ifndef GRAPHTV_SERIALIZE_HPP
#define GRAPHTV_SERIALIZE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "graphtv/experiments.hpp"
#include "graphtv/signals.hpp"
#include "graphtv/spectral.hpp"

namespace graphtv {

using Json = nlohmann::ordered_json;

/// Shortest round-trip text for a double ("%.17g").
std::string format_double(double v);

Json to_json(const SpectralReport& report);

Json to_json(const SignalSpec& spec);
SignalSpec signal_spec_from_json(const Json& j);

/// Every field is written, defaults included, so the output re-runs as is.
Json to_json(const ExperimentConfig& cfg);
/// Missing fields keep their defaults; unknown fields are rejected.
ExperimentConfig experiment_config_from_json(const Json& j);

/// Accepts one config object or {"experiments": [...]}.
std::vector<ExperimentConfig> experiment_configs_from_json(const Json& j);

/// Bundled experiment settings: island-fig2, island-fig3, holder-2d,
/// cartoon-2d, isotonic-2d.
std::vector<ExperimentConfig> preset(const std::string& name);
std::vector<std::string> preset_names();

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
Json records_to_json(const std::vector<ExperimentRecord>& records);

/// "x y yerr" rows with a header line.
void write_plot_tsv(std::ostream& out, const std::vector<RatePoint>& points);
Json to_json(const RateFit& fit);

/// One number per line; blank lines and '#' comments are skipped.
Eigen::VectorXd read_vector(std::istream& in);
void write_vector(std::ostream& out, const Eigen::VectorXd& v);

}  // namespace graphtv

#endif  // GRAPHTV_SERIALIZE_HPP
