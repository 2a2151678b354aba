#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "declq/solver.hpp"

namespace declq {

inline constexpr const char* kSchemaVersion = "1";

/// Malformed config text. Carries the 1-based line and column of the failure.
class ConfigParseError : public ValidationError {
public:
    ConfigParseError(const std::string& what, std::size_t line, std::size_t column)
        : ValidationError(what, "config"), line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

struct OutputSpec {
    std::string directory = "out";
    std::vector<std::string> emit = {"gains", "residuals", "states", "report"};

    bool emits(const std::string& artifact) const;
};

struct ProblemConfig {
    std::string schema_version = kSchemaVersion;
    PartitionedSystem system;
    CostWeights cost;
    /// Absent for pure state-feedback problems.
    std::optional<OutputMap> output_maps;
    Vector initial_state;
    SolverConfig solver;
    OutputSpec outputs;

    /// The maps the solver should use: the configured ones, or H = I.
    OutputMap effective_output_map() const;
};

/// Parses and validates a config document.
///
/// The document is a JSON object (// and /* */ comments allowed). Matrices
/// are row-major nested arrays. Unknown keys are rejected. Omitted fields
/// take their defaults: rho 1.0, inner_tol 1e-9, delta 1.0,
/// best_so_far_guard true, depth_cap 50, P_terminal = delta * I, and mode
/// "output" when output_maps is present, "state" otherwise.
ProblemConfig parse_config(const std::string& text);

/// Parsing and per-field checks only; cross-field dimension and weight checks
/// are left to check_config. Used where every violation should be listed.
ProblemConfig parse_config_structure(const std::string& text);

/// Cross-field checks: validate_problem under the configured mode, plus the
/// lengths of initial_state, x0_init and damping. Throws ValidationError.
void check_config(const ProblemConfig& cfg);

/// Reads and parses a config file. I/O failures throw std::ios_base::failure.
ProblemConfig load_config(const std::filesystem::path& path);

/// Whole file contents. Throws std::ios_base::failure.
std::string read_text_file(const std::filesystem::path& path);

/// The fully resolved config with defaults filled in; parse_config of its
/// dump yields an equivalent ProblemConfig.
nlohmann::json config_to_json(const ProblemConfig& cfg);

} // namespace declq
