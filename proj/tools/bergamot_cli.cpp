// Command-line front end: loads a JSON run configuration, executes one of
// the scan/check commands, and writes CSV + summary JSON + log reports.
// Exit status is 0 iff every enabled invariant in the summary passed.

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bergamot/runner.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> t_min;
    std::optional<double> t_max;
    std::optional<int> points;
    bool convex = false;
};

int execute(const CliOverrides& opts, bergamot::Command cmd) {
    std::ifstream in(opts.config_path);
    if (!in) {
        std::fprintf(stderr, "error: cannot open config %s\n", opts.config_path.c_str());
        return 2;
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: config parse failed: %s\n", e.what());
        return 2;
    }
    if (opts.out_dir) j["out"] = *opts.out_dir;
    if (opts.seed) j["seed"] = *opts.seed;
    if (opts.t_min) j["grid"]["t_min"] = *opts.t_min;
    if (opts.t_max) j["grid"]["t_max"] = *opts.t_max;
    if (opts.points) j["grid"]["points"] = *opts.points;
    if (opts.convex) j["convex"] = true;

    try {
        const bergamot::RunConfig cfg = bergamot::parse_config(j);
        const bergamot::ReportBundle bundle = bergamot::run_scan(cfg, cmd);
        std::printf("%s: %s\n", bergamot::command_name(cmd), bundle.all_pass ? "pass" : "fail");
        std::printf("  csv:     %s\n", bundle.csv_path.c_str());
        std::printf("  summary: %s\n", bundle.summary_path.c_str());
        std::printf("  log:     %s\n", bundle.log_path.c_str());
        return bundle.all_pass ? 0 : 1;
    } catch (const bergamot::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified Bergman/Szego kernel bounds on decoupled model domains"};
    app.require_subcommand(1);

    static const std::pair<const char*, bergamot::Command> commands[] = {
        {"kernel-scan", bergamot::Command::KernelScan},
        {"metric-scan", bergamot::Command::MetricScan},
        {"szego-scan", bergamot::Command::SzegoScan},
        {"profile-check", bergamot::Command::ProfileCheck},
        {"integral-check", bergamot::Command::IntegralCheck},
        {"oracle-validate", bergamot::Command::OracleValidate},
        {"extended-scan", bergamot::Command::ExtendedScan},
    };

    int exit_code = 0;
    for (const auto& [name, cmd] : commands) {
        auto* sub = app.add_subcommand(name);
        auto opts = std::make_shared<CliOverrides>();
        sub->add_option("--config", opts->config_path, "JSON run configuration")->required();
        sub->add_option("--out", opts->out_dir, "output directory (overrides config)");
        sub->add_option("--seed", opts->seed, "seed (overrides config)");
        sub->add_option("--t-min", opts->t_min, "grid lower end (overrides config)");
        sub->add_option("--t-max", opts->t_max, "grid upper end (overrides config)");
        sub->add_option("--points", opts->points, "grid size (overrides config)");
        sub->add_flag("--convex", opts->convex, "assert the boundary is convex near 0");
        bergamot::Command command = cmd;
        sub->callback([opts, command, &exit_code] { exit_code = execute(*opts, command); });
    }

    CLI11_PARSE(app, argc, argv);
    return exit_code;
}
