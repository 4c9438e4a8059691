#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "experiments.hpp"
#include "rw/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

static constexpr const char* kVersion = "0.1.0";

int main(int argc, char** argv) {
    CLI::App app{"repulse-wave: numerical experiments for wave equations with "
                 "repulsive potentials"};
    app.set_version_flag("--version", kVersion);

    std::string experiment, config_path, out_dir = "out";
    std::vector<std::string> sets;
    int threads = 1;
    app.add_option("experiment", experiment, "one of: wavefun, spectrum, evolve, waveop, "
                                             "variants, equiv, dispersion, odecheck, bridge3d")
        ->required();
    app.add_option("--config", config_path, "config file (key = value, [section] headers, "
                                            "inline {..} tables)")
        ->required();
    app.add_option("--set", sets, "override a key, e.g. --set grid.N=8192");
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--threads", threads, "worker thread cap (default: 1)")
        ->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    rwcli::RunContext ctx;
    ctx.experiment = experiment;
    ctx.out_dir = out_dir;
    ctx.threads = threads;

    bool known = false;
    for (const auto& n : rwcli::experiment_names) known |= (n == experiment);
    if (!known) {
        std::fprintf(stderr, "error: unknown experiment '%s'\n", experiment.c_str());
        return 2;
    }

    try {
        ctx.cfg = rwcli::parse_config_file(config_path);
        for (const auto& s : sets) rwcli::apply_override(ctx.cfg, s);
    } catch (const rw::ConfigInvalid& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "error: cannot create output directory %s\n", out_dir.c_str());
        return 1;
    }

    try {
        rwcli::run_experiment(ctx);
    } catch (const rw::ConfigInvalid& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const rw::Error& e) {
        std::fprintf(stderr, "error while running '%s': %s\n", experiment.c_str(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error while running '%s': %s\n", experiment.c_str(), e.what());
        return 1;
    }

    {
        std::ofstream sum(out_dir + "/summary.txt");
        sum << "experiment: " << experiment << "\n";
        for (const auto& line : ctx.summary) sum << line << "\n";
        sum << "result: " << (ctx.invariants_ok ? "ok" : "INVARIANT FAILURE") << "\n";
        ctx.files.push_back("summary.txt");
    }

    json manifest;
    manifest["experiment"] = experiment;
    manifest["config_hash"] = rwcli::fnv1a_hex(ctx.cfg.canonical());
    manifest["versions"] = {{"repulse-wave", kVersion}, {"compiler", __VERSION__}};
    manifest["invariants_ok"] = ctx.invariants_ok;
    manifest["files"] = ctx.files;
    std::ofstream(out_dir + "/manifest.json") << manifest.dump(2) << "\n";

    for (const auto& line : ctx.summary) std::printf("%s\n", line.c_str());
    std::printf("result: %s (%zu files in %s)\n", ctx.invariants_ok ? "ok" : "INVARIANT FAILURE",
                ctx.files.size() + 1, out_dir.c_str());
    return ctx.invariants_ok ? 0 : 1;
}
