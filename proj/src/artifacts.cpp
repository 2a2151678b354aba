#include "declq/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace declq {

using nlohmann::json;

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

void dump_into(std::string& out, const json& node, int indent, int level) {
    const auto newline = [&](int depth) {
        if (indent >= 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent * depth), ' ');
        }
    };
    const char* colon = indent >= 0 ? ": " : ":";

    switch (node.type()) {
    case json::value_t::object: {
        if (node.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = node.begin(); it != node.end(); ++it) {
            if (!first) {
                out += ',';
            }
            first = false;
            newline(level + 1);
            out += json(it.key()).dump();
            out += colon;
            dump_into(out, it.value(), indent, level + 1);
        }
        newline(level);
        out += '}';
        return;
    }
    case json::value_t::array: {
        if (node.empty()) {
            out += "[]";
            return;
        }
        // Numeric rows stay on one line so matrices read as matrices.
        bool scalars = true;
        for (const auto& item : node) {
            scalars = scalars && !item.is_structured();
        }
        out += '[';
        bool first = true;
        for (const auto& item : node) {
            if (!first) {
                out += scalars && indent >= 0 ? ", " : ",";
            }
            first = false;
            if (!scalars) {
                newline(level + 1);
            }
            dump_into(out, item, indent, level + 1);
        }
        if (!scalars) {
            newline(level);
        }
        out += ']';
        return;
    }
    case json::value_t::number_float: {
        const double value = node.get<double>();
        out += std::isfinite(value) ? format_double(value) : "null";
        return;
    }
    default:
        out += node.dump();
        return;
    }
}

std::string row(int k, const Vector& values) {
    std::string line = std::to_string(k);
    for (Index i = 0; i < values.size(); ++i) {
        line += ',';
        line += format_double(values(i));
    }
    line += '\n';
    return line;
}

void gain_header(std::string& out, const std::string& name, Index rows, Index cols) {
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            out += ',' + name + '_' + std::to_string(i + 1) + std::to_string(j + 1);
        }
    }
}

json doubles(const std::vector<double>& values) { return json(values); }

} // namespace

std::string dump_json(const json& doc, int indent) {
    std::string out;
    dump_into(out, doc, indent, 0);
    out += '\n';
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw IoError("write to " + tmp.string() + " failed");
        }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

std::string gains_csv(const SolveReport& report) {
    std::string out = "k";
    if (!report.gains.empty()) {
        const GainDims dims = report.gains.front().dims();
        gain_header(out, "K1", dims.m1, dims.p1);
        gain_header(out, "K2", dims.m2, dims.p2);
    }
    out += '\n';
    for (std::size_t k = 0; k < report.gains.size(); ++k) {
        out += row(static_cast<int>(k), stack_gains(report.gains[k]));
    }
    return out;
}

std::string residuals_csv(const SolveReport& report) {
    std::string out = "k,residual\n";
    for (std::size_t k = 0; k < report.residuals.size(); ++k) {
        out += std::to_string(k) + ',' + format_double(report.residuals[k]) + '\n';
    }
    return out;
}

std::string states_csv(const std::vector<Vector>& states) {
    std::string out = "k";
    const Index n = states.empty() ? 0 : states.front().size();
    for (Index i = 0; i < n; ++i) {
        out += ",x_" + std::to_string(i + 1);
    }
    out += '\n';
    for (std::size_t k = 0; k < states.size(); ++k) {
        out += row(static_cast<int>(k), states[k]);
    }
    return out;
}

std::string centralized_gains_csv(const CentralizedSolution& solution) {
    std::string out = "k";
    if (!solution.gains.empty()) {
        gain_header(out, "K", solution.gains.front().rows(), solution.gains.front().cols());
    }
    out += '\n';
    for (std::size_t k = 0; k < solution.gains.size(); ++k) {
        out += row(static_cast<int>(k), vec(solution.gains[k]));
    }
    return out;
}

json report_json(const SolveReport& report, const ProblemConfig& cfg) {
    return {{"cost", report.cost},
            {"cost_trace_form", report.cost_trace},
            {"max_residual", report.max_residual()},
            {"mode", to_string(report.mode)},
            {"iterations_used", report.iterations_used},
            {"warnings", report.warnings},
            {"config", config_to_json(cfg)}};
}

json baseline_json(const CentralizedSolution& solution, const ProblemConfig& cfg) {
    return {{"cost", solution.cost}, {"config", config_to_json(cfg)}};
}

json comparison_json(const ComparisonReport& c) {
    return {{"cost_decentralized", c.cost_decentralized},
            {"cost_centralized", c.cost_centralized},
            {"cost_gap", c.cost_gap},
            {"max_gain_distance", c.max_gain_distance},
            {"final_gain_distance", c.final_gain_distance},
            {"gain_distance", doubles(c.gain_distance)},
            {"max_residual", c.max_residual},
            {"mean_residual", c.mean_residual}};
}

} // namespace declq
