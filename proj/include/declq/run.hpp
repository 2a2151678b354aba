#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "declq/solver.hpp"

namespace declq {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2, kExitIo = 3 };

struct RunFlags {
    std::optional<std::filesystem::path> out_dir;
    std::optional<FeedbackMode> mode;
    bool quiet = false;
};

/// Executes one subcommand (validate, solve, baseline, compare).
///
/// Failures produce a single JSON line on err, e.g.
/// {"error":"validation","field":"system.A","message":"..."}, and the
/// matching exit code.
int run(const std::string& subcommand, const std::filesystem::path& config_path, const RunFlags& flags,
        std::ostream& out, std::ostream& err);

} // namespace declq
