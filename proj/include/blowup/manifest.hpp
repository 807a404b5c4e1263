#pragma once

// Batch front-end: a self-contained JSON manifest fully determines an
// experiment; re-running a manifest bit-reproduces its CSV outputs.

#include <string>
#include <vector>

#include "json.hpp"

namespace blowup {

struct ExperimentManifest {
    std::string command;  // criteria | ode | pde | example4 | dichotomy-sweep | kernel-verify
    nlohmann::json parameters;
    long seed = 2025;
    std::string output_dir;

    [[nodiscard]] nlohmann::json to_json() const;
    static ExperimentManifest from_json(const nlohmann::json& j);
    static ExperimentManifest load(const std::string& path);
    /// Schema validation only (no execution). Throws ValidationError.
    void validate() const;
};

struct RunReport {
    bool pass = true;
    std::vector<std::string> failures;
    nlohmann::json summary;

    void fail(std::string why) {
        pass = false;
        failures.push_back(std::move(why));
    }
};

/// Executes the manifest, writing CSV/JSON reports under its output_dir.
/// `jobs` parallelizes sweep cells (deterministic assembly). The returned
/// report embeds the manifest.
RunReport run_manifest(const ExperimentManifest& manifest, int jobs = 1);

}  // namespace blowup
