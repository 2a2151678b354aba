#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "declq/baseline.hpp"
#include "declq/config.hpp"

namespace declq {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 17 significant digits ("%.17g"), enough to round-trip any double.
std::string format_double(double value);

/// JSON text in which every floating-point number is written with format_double.
std::string dump_json(const nlohmann::json& doc, int indent = 2);

/// Writes to a sibling temporary file, then renames it over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Gain columns use column-major order: K1_11, K1_21, ..., K2_11, ...
std::string gains_csv(const SolveReport& report);
std::string residuals_csv(const SolveReport& report);
std::string states_csv(const std::vector<Vector>& states);
std::string centralized_gains_csv(const CentralizedSolution& solution);

nlohmann::json report_json(const SolveReport& report, const ProblemConfig& cfg);
nlohmann::json baseline_json(const CentralizedSolution& solution, const ProblemConfig& cfg);
nlohmann::json comparison_json(const ComparisonReport& comparison);

} // namespace declq
