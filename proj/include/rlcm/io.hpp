#pragma once

// File formats. Column order everywhere is binary-counter order of the
// profile code, bit 0 = attribute 1 (and bit 0 = item 1 for patterns).

#include <json.hpp>
#include <string>
#include <vector>

#include "rlcm/core.hpp"
#include "rlcm/identifiability.hpp"
#include "rlcm/inference.hpp"
#include "rlcm/models.hpp"
#include "rlcm/tmatrix.hpp"

namespace rlcm::io {

using nlohmann::json;

inline constexpr const char* kColumnOrder = "binary-counter, bit0=attr1";
inline constexpr int kSchemaVersion = 1;

/// Malformed input. Message carries "line L, column C" when known.
struct ParseError : Error { using Error::Error; };

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// J lines of K comma-separated 0/1 values. Lines starting with '#' and blank lines are skipped.
QMatrix parse_qmatrix_csv(const std::string& text);
std::string format_qmatrix_csv(const QMatrix& Q);

/// N lines of J comma-separated 0/1 values, same comment rules.
ResponseData parse_responses_csv(const std::string& text);
std::string format_responses_csv(const ResponseData& data);

/// Parses JSON, converting library errors into line/column diagnostics.
json parse_json(const std::string& text);

json theta_to_json(const ThetaMatrix& theta);
ThetaMatrix theta_from_json(const json& j);

json proportions_to_json(const ProportionVector& p);
ProportionVector proportions_from_json(const json& j);

json item_params_to_json(const std::vector<ItemParams>& params, int K);
std::vector<ItemParams> item_params_from_json(const json& j, int K);
json item_to_json(const ItemParams& p, int K);
ItemParams item_from_json(const json& j, int K);

json report_to_json(const IdentifiabilityReport& rep);
json pair_to_json(const NonIdentifiablePair& pair);
ModelPoint model_point_from_json(const json& j);
std::pair<ModelPoint, ModelPoint> pair_points_from_json(const json& j);

Prop2Design prop2_design_from_json(const json& j);
json prop2_design_to_json(const Prop2Design& d);

json fit_to_json(const FitResult& fit, int K);
json experiment_to_json(const ExperimentTable& table);

/// 2^J rows; header names the ordering convention. `graded` selects the
/// weight-graded display order for both rows and columns.
std::string format_tmatrix_csv(const TMatrix& t, bool graded);
/// Columns: pattern, P(R >= r), P(R = r).
std::string format_distribution_csv(const std::vector<double>& marginals, const std::vector<double>& point, int J,
                                    bool graded);

/// JSON schemas for every structured file.
json schemas();

}  // namespace rlcm::io
