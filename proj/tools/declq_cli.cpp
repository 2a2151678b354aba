// declq: decentralized LQ gain synthesis from a config file.
//
//   declq validate <config>
//   declq solve    <config> [--out-dir DIR] [--mode state|output] [--quiet]
//   declq baseline <config> [--out-dir DIR] [--quiet]
//   declq compare  <config> [--out-dir DIR] [--mode state|output] [--quiet]

#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "declq/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Decentralized LQ gain synthesis"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string mode;
    bool quiet = false;

    for (const char* name : {"validate", "solve", "baseline", "compare"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("config", config_path, "Problem config file")->required();
        sub->add_option("--out-dir", out_dir, "Override outputs.directory");
        sub->add_option("--mode", mode, "Feedback mode")->check(CLI::IsMember({"state", "output"}));
        sub->add_flag("--quiet", quiet, "Suppress the summary on stdout");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << nlohmann::json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
        return declq::kExitValidation;
    }

    declq::RunFlags flags;
    if (!out_dir.empty()) {
        flags.out_dir = out_dir;
    }
    if (!mode.empty()) {
        flags.mode = declq::feedback_mode_from_string(mode);
    }
    flags.quiet = quiet;
    return declq::run(app.get_subcommands().front()->get_name(), config_path, flags, std::cout, std::cerr);
}
