#pragma once
#include <string>
#include <vector>

#include "config.hpp"

namespace rwcli {

struct RunContext {
    Config cfg;
    std::string experiment;
    std::string out_dir;
    int threads = 1;
    std::vector<std::string> files;    // emitted file names, relative to out_dir
    std::vector<std::string> summary;  // human-readable result lines
    bool invariants_ok = true;
};

extern const std::vector<std::string> experiment_names;

// Runs the named experiment, filling ctx.files / ctx.summary; throws
// rw::ConfigInvalid for bad configs and module errors for runtime failures.
void run_experiment(RunContext& ctx);

} // namespace rwcli
