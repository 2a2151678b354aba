#include "declq/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace declq {

using nlohmann::json;

bool OutputSpec::emits(const std::string& artifact) const {
    return std::find(emit.begin(), emit.end(), artifact) != emit.end();
}

OutputMap ProblemConfig::effective_output_map() const {
    return output_maps.value_or(OutputMap::identity(system.part));
}

namespace {

const std::set<std::string> kArtifacts = {"gains", "residuals", "states", "report"};

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw ValidationError(field + ": " + message, field);
}

// Reads the members of one JSON object and rejects whatever was not read.
class ObjectReader {
public:
    ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            fail(path_.empty() ? "config" : path_, "expected an object");
        }
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* optional(const std::string& key) {
        seen_.insert(key);
        auto it = node_.find(key);
        return it == node_.end() ? nullptr : &*it;
    }

    const json& required(const std::string& key) {
        const json* value = optional(key);
        if (value == nullptr) {
            fail(field(key), "missing required field");
        }
        return *value;
    }

    void finish() const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            if (!seen_.count(it.key())) {
                fail(field(it.key()), "unknown key");
            }
        }
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

double to_double(const json& v, const std::string& field) {
    if (!v.is_number()) {
        fail(field, "expected a number");
    }
    return v.get<double>();
}

int to_int(const json& v, const std::string& field) {
    if (!v.is_number_integer()) {
        fail(field, "expected an integer");
    }
    return v.get<int>();
}

Index to_size(const json& v, const std::string& field) {
    const int value = to_int(v, field);
    if (value < 1) {
        fail(field, "must be >= 1");
    }
    return value;
}

Matrix to_matrix(const json& v, const std::string& field) {
    if (!v.is_array() || v.empty()) {
        fail(field, "expected a non-empty array of rows");
    }
    const std::size_t cols = v.front().is_array() ? v.front().size() : 0;
    if (cols == 0) {
        fail(field, "expected a non-empty array of rows");
    }
    Matrix M(static_cast<Index>(v.size()), static_cast<Index>(cols));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_array() || v[i].size() != cols) {
            fail(field, "row " + std::to_string(i) + " does not have " + std::to_string(cols) + " entries");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            M(static_cast<Index>(i), static_cast<Index>(j)) =
                to_double(v[i][j], field + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
        }
    }
    return M;
}

Vector to_vector(const json& v, const std::string& field) {
    if (!v.is_array()) {
        fail(field, "expected an array");
    }
    Vector x(static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        x(static_cast<Index>(i)) = to_double(v[i], field + "[" + std::to_string(i) + "]");
    }
    return x;
}

json matrix_json(const Matrix& M) {
    json rows = json::array();
    for (Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < M.cols(); ++j) {
            row.push_back(M(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_json(const Vector& x) {
    json out = json::array();
    for (Index i = 0; i < x.size(); ++i) {
        out.push_back(x(i));
    }
    return out;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    // parse_error::byte is 1-based and points just past the offending character.
    const std::size_t end = std::min(text.size(), byte > 0 ? byte - 1 : 0);
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

} // namespace

void check_config(const ProblemConfig& cfg) {
    const OutputMap hmap = cfg.solver.mode == FeedbackMode::Output ? cfg.effective_output_map() : OutputMap::identity(cfg.system.part);
    const ValidationReport report = validate_problem(cfg.system, cfg.cost, hmap);
    if (!report.ok) {
        const auto errors = report.errors();
        fail(errors.front().field, errors.front().message);
    }
    const Index n = cfg.system.part.n();
    if (cfg.initial_state.size() != n) {
        fail("initial_state", "expected " + std::to_string(n) + " entries, got " +
                                  std::to_string(cfg.initial_state.size()));
    }
    const Index d = GainDims::of(cfg.system.part, hmap).d();
    if (cfg.solver.x0_init && cfg.solver.x0_init->size() != d) {
        fail("solver.x0_init", "expected " + std::to_string(d) + " entries");
    }
    if (cfg.solver.damping && (cfg.solver.damping->rows() != d || cfg.solver.damping->cols() != d)) {
        fail("solver.damping", "expected " + std::to_string(d) + "x" + std::to_string(d));
    }
}

ProblemConfig parse_config_structure(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte);
        throw ConfigParseError("parse error at line " + std::to_string(line) + ", column " +
                                   std::to_string(column) + ": " + e.what(),
                               line, column);
    }

    ProblemConfig cfg;
    ObjectReader root(doc, "");

    const json& version = root.required("schema_version");
    if (!version.is_string() || version.get<std::string>() != kSchemaVersion) {
        fail("schema_version", std::string("unsupported schema version (expected \"") + kSchemaVersion + "\")");
    }
    cfg.schema_version = version.get<std::string>();

    {
        ObjectReader sys(root.required("system"), "system");
        cfg.system.part.n1 = to_size(sys.required("n1"), "system.n1");
        cfg.system.part.n2 = to_size(sys.required("n2"), "system.n2");
        cfg.system.part.m1 = to_size(sys.required("m1"), "system.m1");
        cfg.system.part.m2 = to_size(sys.required("m2"), "system.m2");
        cfg.system.A = to_matrix(sys.required("A"), "system.A");
        cfg.system.B = to_matrix(sys.required("B"), "system.B");
        sys.finish();
    }
    {
        ObjectReader cost(root.required("cost"), "cost");
        cfg.cost.Q = to_matrix(cost.required("Q"), "cost.Q");
        cfg.cost.R = to_matrix(cost.required("R"), "cost.R");
        if (const json* delta = cost.optional("delta")) {
            cfg.cost.delta = to_double(*delta, "cost.delta");
        }
        if (const json* pt = cost.optional("P_terminal")) {
            cfg.cost.P_terminal = to_matrix(*pt, "cost.P_terminal");
        } else {
            const Index n = cfg.system.part.n();
            cfg.cost.P_terminal = cfg.cost.delta * Matrix::Identity(n, n);
        }
        cost.finish();
    }
    if (const json* maps = root.optional("output_maps")) {
        ObjectReader hm(*maps, "output_maps");
        cfg.output_maps = OutputMap{to_matrix(hm.required("H1"), "output_maps.H1"),
                                    to_matrix(hm.required("H2"), "output_maps.H2")};
        hm.finish();
    }
    cfg.initial_state = to_vector(root.required("initial_state"), "initial_state");

    {
        ObjectReader solver(root.required("solver"), "solver");
        SolverConfig& s = cfg.solver;
        s.horizon = to_int(solver.required("N"), "solver.N");
        s.iterations = to_int(solver.required("I"), "solver.I");
        if (const json* v = solver.optional("rho")) {
            s.rho = to_double(*v, "solver.rho");
        }
        if (const json* v = solver.optional("damping")) {
            s.damping = to_matrix(*v, "solver.damping");
        }
        if (const json* v = solver.optional("inner_tol")) {
            s.inner_tol = to_double(*v, "solver.inner_tol");
        }
        if (const json* v = solver.optional("x0_init")) {
            s.x0_init = to_vector(*v, "solver.x0_init");
        }
        if (const json* v = solver.optional("best_so_far_guard")) {
            if (!v->is_boolean()) {
                fail("solver.best_so_far_guard", "expected true or false");
            }
            s.best_so_far_guard = v->get<bool>();
        }
        if (const json* v = solver.optional("depth_cap")) {
            s.depth_cap = to_int(*v, "solver.depth_cap");
        }
        s.mode = cfg.output_maps ? FeedbackMode::Output : FeedbackMode::State;
        if (const json* v = solver.optional("mode")) {
            if (!v->is_string()) {
                fail("solver.mode", "expected \"state\" or \"output\"");
            }
            s.mode = feedback_mode_from_string(v->get<std::string>());
        }
        solver.finish();

        if (s.horizon < 0) {
            fail("solver.N", "must be >= 0");
        }
        if (s.iterations < 1) {
            fail("solver.I", "must be >= 1");
        }
        if (!(s.rho > 0.0)) {
            fail("solver.rho", "must be positive");
        }
        if (!(s.inner_tol >= 0.0)) {
            fail("solver.inner_tol", "must be >= 0");
        }
        if (s.depth_cap < 0) {
            fail("solver.depth_cap", "must be >= 0");
        }
    }

    if (const json* out = root.optional("outputs")) {
        ObjectReader outputs(*out, "outputs");
        if (const json* dir = outputs.optional("directory")) {
            if (!dir->is_string()) {
                fail("outputs.directory", "expected a string");
            }
            cfg.outputs.directory = dir->get<std::string>();
        }
        if (const json* emit = outputs.optional("emit")) {
            if (!emit->is_array()) {
                fail("outputs.emit", "expected an array of artifact names");
            }
            cfg.outputs.emit.clear();
            for (const json& item : *emit) {
                if (!item.is_string() || !kArtifacts.count(item.get<std::string>())) {
                    fail("outputs.emit", "artifacts are gains, residuals, states, report");
                }
                cfg.outputs.emit.push_back(item.get<std::string>());
            }
        }
        outputs.finish();
    }
    root.finish();
    return cfg;
}

ProblemConfig parse_config(const std::string& text) {
    ProblemConfig cfg = parse_config_structure(text);
    check_config(cfg);
    return cfg;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::ios_base::failure("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ProblemConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

json config_to_json(const ProblemConfig& cfg) {
    const Partition& part = cfg.system.part;
    json doc;
    doc["schema_version"] = cfg.schema_version;
    doc["system"] = {{"n1", part.n1},
                     {"n2", part.n2},
                     {"m1", part.m1},
                     {"m2", part.m2},
                     {"A", matrix_json(cfg.system.A)},
                     {"B", matrix_json(cfg.system.B)}};
    doc["cost"] = {{"Q", matrix_json(cfg.cost.Q)},
                   {"R", matrix_json(cfg.cost.R)},
                   {"P_terminal", matrix_json(cfg.cost.P_terminal)},
                   {"delta", cfg.cost.delta}};
    if (cfg.output_maps) {
        doc["output_maps"] = {{"H1", matrix_json(cfg.output_maps->H1)}, {"H2", matrix_json(cfg.output_maps->H2)}};
    }
    doc["initial_state"] = vector_json(cfg.initial_state);

    const SolverConfig& s = cfg.solver;
    json solver = {{"N", s.horizon},
                   {"I", s.iterations},
                   {"rho", s.rho},
                   {"inner_tol", s.inner_tol},
                   {"best_so_far_guard", s.best_so_far_guard},
                   {"depth_cap", s.depth_cap},
                   {"mode", to_string(s.mode)}};
    if (s.damping) {
        solver["damping"] = matrix_json(*s.damping);
    }
    if (s.x0_init) {
        solver["x0_init"] = vector_json(*s.x0_init);
    }
    doc["solver"] = std::move(solver);
    doc["outputs"] = {{"directory", cfg.outputs.directory}, {"emit", cfg.outputs.emit}};
    return doc;
}

} // namespace declq
