// scrap: run, sweep, map and validate SCRAP scenarios from a YAML config.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kIo = 3 };

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stark-chirped rapid adiabatic passage simulator"};
    app.set_version_flag("--version", SCRAP_VERSION);
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<double> step;
    bool svg = false;
    bool quiet = false;

    auto add_common = [&](CLI::App* sub, bool writes) {
        sub->add_option("config", config_path, "YAML scenario config")->required();
        sub->add_option("--step", step, "Integrator step in seconds (overrides the config)");
        sub->add_flag("--quiet", quiet, "Only report errors");
        if (writes) {
            sub->add_option("--out", out_dir, "Output directory (default: config output.directory, else ./out)");
            sub->add_flag("--svg", svg, "Also emit SVG plots");
        }
    };
    auto* run = app.add_subcommand("run", "Propagate one scenario at the configured gamma");
    auto* sweep = app.add_subcommand("sweep", "Final target population over the gamma list");
    auto* map = app.add_subcommand("map", "Target population over time for every gamma in the list");
    auto* validate = app.add_subcommand("validate", "Run the invariant checks on the configured scenario");
    add_common(run, true);
    add_common(sweep, true);
    add_common(map, true);
    add_common(validate, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    using namespace scrap::cli;
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        Config config = load_config(config_path);
        if (step) {
            if (!(*step > 0.0)) throw ConfigError("--step", 0, "step", "must be > 0");
            config.integrator.step = *step;
        }
        if (out_dir) config.output_directory = *out_dir;

        CommandResult result;
        if (command == "run") {
            result = cmd_run(config, svg);
        } else if (command == "sweep") {
            result = cmd_sweep(config, svg);
        } else if (command == "map") {
            result = cmd_map(config, svg);
        } else {
            result = cmd_validate(config);
            std::cout << result.report;
            if (!result.ok) {
                std::cerr << "validate: one or more properties failed\n";
                return kNumerical;
            }
            return kOk;
        }
        const auto written = write_outputs(config.output_directory, config, command, result);
        if (!quiet) {
            std::cout << result.report;
            for (const auto& p : written) std::cout << "wrote " << p << "\n";
        }
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const scrap::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumerical;
    } catch (const scrap::DomainError& e) {
        std::cerr << "invalid scenario: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
}
