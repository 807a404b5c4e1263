// blowup-lab: batch laboratory for the blow-up dichotomy of fractional
// semilinear heat equations.
//
//   blowup-lab <command> --manifest <file> [--out <dir>] [--jobs N] [--validate]
//
// Commands: criteria, ode, pde, example4, dichotomy-sweep, kernel-verify.
// The manifest JSON fully determines the experiment; reports embed it.

#include <iostream>

#include "CLI11.hpp"
#include "blowup/manifest.hpp"

int main(int argc, char** argv) {
    CLI::App app{"blow-up dichotomy laboratory"};
    app.require_subcommand(1);

    std::string manifest_path, out_dir;
    int jobs = 1;
    bool validate_only = false;

    const std::vector<std::string> commands = {"criteria", "ode",             "pde",
                                               "example4", "dichotomy-sweep", "kernel-verify"};
    for (const std::string& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--manifest", manifest_path, "manifest JSON file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides manifest)");
        sub->add_option("--jobs", jobs, "worker threads for sweep cells");
        sub->add_flag("--validate", validate_only, "dry-run: validate the manifest schema only");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        blowup::ExperimentManifest manifest = blowup::ExperimentManifest::load(manifest_path);
        if (manifest.command.empty()) manifest.command = command;
        if (manifest.command != command) {
            std::cerr << "manifest command '" << manifest.command
                      << "' does not match subcommand '" << command << "'\n";
            return 2;
        }
        if (!out_dir.empty()) manifest.output_dir = out_dir;
        manifest.validate();
        if (validate_only) {
            std::cout << "manifest ok\n";
            return 0;
        }
        const blowup::RunReport report = blowup::run_manifest(manifest, jobs);
        if (report.pass) {
            std::cout << "all checks passed; reports in " << manifest.output_dir << "\n";
            return 0;
        }
        std::cerr << report.failures.size() << " check(s) failed:\n";
        for (const std::string& f : report.failures) std::cerr << "  - " << f << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
