#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scrap/error.hpp"
#include "scrap/sweep.hpp"

namespace scrap::cli {

/// Config problem tied to a place in the source document.
class ConfigError : public Error {
public:
    ConfigError(const std::string& source, int line, const std::string& field, const std::string& what)
        : Error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + field + ": " + what),
          line_(line),
          field_(field) {}
    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

enum class ScenarioKind { SingleQubit, TwoQubit };

/// Fully resolved configuration, SI units throughout.
struct Config {
    ScenarioKind kind = ScenarioKind::SingleQubit;
    Scenario scenario;                 // gamma left at 0; applied per run
    double gamma = 0.0;                // dimensionless gamma = Gamma * t_ref for `run`
    std::vector<double> gamma_list;    // for `sweep` and `map`
    double t_ref = 0.0;                // s
    PropagationOptions integrator;     // step resolved to seconds
    bool record_every_set = false;     // false: subcommands may choose their own sampling
    bool full_space = false;           // two-qubit only: propagate all four levels
    std::string output_directory = "out";
    RegimeThresholds regimes;

    double decay_rate() const { return gamma / t_ref; }

    /// Canonical serialization of every resolved field; stable across runs.
    std::string resolved_json() const;
    /// SHA-256 of resolved_json(), hex.
    std::string hash() const;
};

/// Parses a YAML document. `source` names the document in error messages.
Config parse_config(const std::string& text, const std::string& source = "<config>");
Config load_config(const std::string& path);

/// 60 log-spaced points on [1e-3, 1e2].
std::vector<double> default_gamma_grid();
std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace scrap::cli
