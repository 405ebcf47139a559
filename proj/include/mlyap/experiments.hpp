#pragma once

#include <string>
#include <vector>

namespace mlyap {

/// One sub-check of a named experiment.
struct CheckLine {
    std::string label;
    bool pass = false;
    std::string detail;
};

struct ExperimentResult {
    std::string name;
    std::vector<CheckLine> checks;
    double wall_seconds = 0.0;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

/// Named verification experiments runnable from the CLI (`repro <name>`) and
/// from the acceptance test suite.  Every tolerance is pinned in code.
std::vector<std::string> experiment_names();

ExperimentResult run_experiment(const std::string& name, int n_threads = 0);

std::string format_experiment(const ExperimentResult& r);

}  // namespace mlyap
