#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qbm {

// Exit discipline shared by the library and the CLI.
enum class RunStatus : int {
    ok = 0,
    validation_error = 2,   // bad configuration
    numerical_refusal = 3,  // stability guard tripped
    check_failure = 4,      // acceptance criterion failed
    io_error = 5,
};

struct RunResult {
    RunStatus status = RunStatus::ok;
    std::string message;
    nlohmann::json summary;   // JSON-lines record also written to disk
};

// Fully resolved run request: experiment name, parameter object (defaults
// merged with file and --set overrides), seed and worker count.
struct RunConfig {
    std::string experiment;
    nlohmann::json params;
    std::uint64_t seed = 1;
    int workers = 1;
    std::filesystem::path output_dir = ".";

    static const std::vector<std::string>& experiment_names();
};

// Default parameter object for an experiment (the full key registry).
nlohmann::json default_params(const std::string& experiment);

// Validates `params` against the experiment registry; unknown keys are
// rejected with the nearest-match suggestion in the thrown message.
void validate_params(const std::string& experiment, const nlohmann::json& params);

// Runs one experiment: writes manifest.json, data CSVs and summary.jsonl
// into output_dir, and returns the summary. Identical config + seed +
// workers produce byte-identical files.
RunResult run_experiment(const RunConfig& config);

// One run per value of `params[axis]`, with derived seeds (seed, index);
// writes a merged sweep_summary.jsonl. Empty `values` is a no-op success.
RunResult run_sweep(const RunConfig& config, const std::string& axis,
                    const std::vector<double>& values);

// Acceptance checks, one entry per criterion.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<CriterionResult> run_acceptance_suite(int workers,
                                                  const std::filesystem::path& output_dir);

const char* version_string();

} // namespace qbm
