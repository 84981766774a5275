#pragma once

#include <string>
#include <vector>

#include "hzplate/formulations.hpp"
#include "hzplate/study.hpp"

namespace hzplate {

/// CSV column order of write_csv.
const std::vector<std::string>& csv_columns();

/// One row per record: step, elements, dofs, h, err_w, err_phi, err_m, err_q, estimator,
/// then the running slopes (last three points) slope_w, slope_phi, slope_m, slope_q,
/// slope_estimator. Values use %.10e; unmeasured values print as "nan". Wall time is
/// omitted so identical studies give identical files. Throws std::invalid_argument
/// for an empty record list.
std::string records_to_csv(const std::vector<ConvergenceRecord>& records);

/// JSON document {"config": ..., "records": [...], "slopes": {...}} including wall times.
/// Unmeasured values are null.
std::string records_to_json(const StudyConfig& config, const std::vector<ConvergenceRecord>& records);

/// Configuration as a JSON object with the keys accepted by apply_config_json.
std::string config_to_json(const StudyConfig& config);
/// Overrides the fields present in a JSON object: domain, formulation, p, t, E, nu, ks,
/// refinements, geo_order, adaptive, theta, max_dofs, max_steps, condense, load.
/// Unknown keys and wrong types throw std::invalid_argument.
void apply_config_json(StudyConfig& config, const std::string& text);

/// Point probe table: x, y, w, phi_x, phi_y, m11, m12, m22, q_x, q_y.
std::string probes_to_csv(const std::vector<Vec2>& points, const std::vector<FieldValues>& values);

/// Reads a whole file; throws std::runtime_error naming the path on failure.
std::string read_text_file(const std::string& path);
/// Writes a whole file; throws std::runtime_error naming the path on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hzplate
