#include "declq/run.hpp"

#include <ios>

#include "declq/artifacts.hpp"

namespace declq {

namespace {

using nlohmann::json;

void error_line(std::ostream& err, const std::string& kind, const std::string& message,
                const std::string& field = {}) {
    json line = {{"error", kind}, {"message", message}};
    if (!field.empty()) {
        line["field"] = field;
    }
    err << line.dump() << '\n';
}

ProblemConfig load(const std::filesystem::path& path, const RunFlags& flags) {
    ProblemConfig cfg = parse_config_structure(read_text_file(path));
    if (flags.mode) {
        cfg.solver.mode = *flags.mode;
    }
    check_config(cfg);
    return cfg;
}

std::filesystem::path output_dir(const ProblemConfig& cfg, const RunFlags& flags) {
    return flags.out_dir.value_or(std::filesystem::path(cfg.outputs.directory));
}

SolveReport run_solver(const ProblemConfig& cfg) {
    return solve(cfg.system, cfg.cost, cfg.effective_output_map(), cfg.initial_state, cfg.solver);
}

int cmd_validate(const std::filesystem::path& path, const RunFlags& flags, std::ostream& out, std::ostream& err) {
    ProblemConfig cfg = parse_config_structure(read_text_file(path));
    if (flags.mode) {
        cfg.solver.mode = *flags.mode;
    }
    const OutputMap hmap = cfg.solver.mode == FeedbackMode::Output ? cfg.effective_output_map()
                                                                    : OutputMap::identity(cfg.system.part);
    ValidationReport report = validate_problem(cfg.system, cfg.cost, hmap);
    if (report.ok) {
        try {
            check_config(cfg);
        } catch (const ValidationError& e) {
            report.ok = false;
            report.issues.push_back({Severity::Error, e.field(), e.what()});
        }
    }
    out << report.summary() << '\n';
    if (!report.ok) {
        const ValidationIssue first = report.errors().front();
        error_line(err, "validation", first.message, first.field);
        return kExitValidation;
    }
    return kExitOk;
}

int cmd_solve(const std::filesystem::path& path, const RunFlags& flags, std::ostream& out) {
    const ProblemConfig cfg = load(path, flags);
    const SolveReport report = run_solver(cfg);
    const auto dir = output_dir(cfg, flags);
    if (cfg.outputs.emits("gains")) {
        write_file_atomic(dir / "gains.csv", gains_csv(report));
    }
    if (cfg.outputs.emits("residuals")) {
        write_file_atomic(dir / "residuals.csv", residuals_csv(report));
    }
    if (cfg.outputs.emits("states")) {
        write_file_atomic(dir / "states.csv", states_csv(report.states));
    }
    if (cfg.outputs.emits("report")) {
        write_file_atomic(dir / "report.json", dump_json(report_json(report, cfg)));
    }
    if (!flags.quiet) {
        out << "mode " << to_string(report.mode) << ", N = " << report.horizon() << "\n"
            << "cost " << format_double(report.cost) << "\n"
            << "max residual " << format_double(report.max_residual()) << "\n";
        for (const auto& w : report.warnings) {
            out << "warning: " << w << "\n";
        }
        out << "artifacts in " << dir.string() << "\n";
    }
    return kExitOk;
}

int cmd_baseline(const std::filesystem::path& path, const RunFlags& flags, std::ostream& out) {
    const ProblemConfig cfg = load(path, flags);
    const ValidationReport validation =
        validate_problem(cfg.system, cfg.cost, OutputMap::identity(cfg.system.part));
    const CentralizedSolution solution =
        centralized_lqr(cfg.system, validation.cost, cfg.initial_state, cfg.solver.horizon);
    const auto dir = output_dir(cfg, flags);
    if (cfg.outputs.emits("gains")) {
        write_file_atomic(dir / "centralized_gains.csv", centralized_gains_csv(solution));
    }
    if (cfg.outputs.emits("states")) {
        write_file_atomic(dir / "centralized_states.csv", states_csv(solution.states));
    }
    if (cfg.outputs.emits("report")) {
        write_file_atomic(dir / "baseline.json", dump_json(baseline_json(solution, cfg)));
    }
    if (!flags.quiet) {
        out << "centralized cost " << format_double(solution.cost) << "\n"
            << "artifacts in " << dir.string() << "\n";
    }
    return kExitOk;
}

int cmd_compare(const std::filesystem::path& path, const RunFlags& flags, std::ostream& out) {
    const ProblemConfig cfg = load(path, flags);
    const SolveReport report = run_solver(cfg);
    const ValidationReport validation =
        validate_problem(cfg.system, cfg.cost, OutputMap::identity(cfg.system.part));
    const CentralizedSolution solution =
        centralized_lqr(cfg.system, validation.cost, cfg.initial_state, cfg.solver.horizon);
    const ComparisonReport comparison = compare(report, solution);
    const auto dir = output_dir(cfg, flags);
    write_file_atomic(dir / "comparison.json", dump_json(comparison_json(comparison)));
    if (!flags.quiet) {
        out << "cost gap " << format_double(comparison.cost_gap) << "\n"
            << "final gain distance " << format_double(comparison.final_gain_distance) << "\n"
            << "artifacts in " << dir.string() << "\n";
    }
    return kExitOk;
}

} // namespace

int run(const std::string& subcommand, const std::filesystem::path& config_path, const RunFlags& flags,
        std::ostream& out, std::ostream& err) {
    try {
        if (subcommand == "validate") {
            return cmd_validate(config_path, flags, out, err);
        }
        if (subcommand == "solve") {
            return cmd_solve(config_path, flags, out);
        }
        if (subcommand == "baseline") {
            return cmd_baseline(config_path, flags, out);
        }
        if (subcommand == "compare") {
            return cmd_compare(config_path, flags, out);
        }
        error_line(err, "usage", "unknown subcommand '" + subcommand + "'");
        return kExitValidation;
    } catch (const ValidationError& e) {
        error_line(err, "validation", e.what(), e.field());
        return kExitValidation;
    } catch (const NumericalError& e) {
        error_line(err, "numerical", e.what());
        return kExitNumerical;
    } catch (const IoError& e) {
        error_line(err, "io", e.what());
        return kExitIo;
    } catch (const std::ios_base::failure& e) {
        error_line(err, "io", e.what());
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        error_line(err, "io", e.what());
        return kExitIo;
    }
}

} // namespace declq
