#pragma once

#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace scrap::cli {

/// Failure reading or writing files.
class IoError : public Error {
public:
    using Error::Error;
};

/// What a subcommand produced: named file contents plus a human-readable
/// report. Nothing touches the disk until write_outputs.
struct CommandResult {
    std::vector<std::pair<std::string, std::string>> files;
    std::string report;
    bool ok = true;
};

CommandResult cmd_run(const Config& config, bool svg = false);
CommandResult cmd_sweep(const Config& config, bool svg = false);
CommandResult cmd_map(const Config& config, bool svg = false);
CommandResult cmd_validate(const Config& config);

/// Documented CSV headers for a given config.
std::vector<std::string> trajectory_header(const Config& config);
std::vector<std::string> summary_header(const Config& config);
std::vector<std::string> sweep_header();
std::vector<std::string> map_header();

/// manifest.json text for the given files. The timestamp comes from
/// SOURCE_DATE_EPOCH when set, otherwise the wall clock.
std::string manifest_json(const Config& config, const std::string& command,
                          const std::vector<std::pair<std::string, std::string>>& files);

/// Writes every file and manifest.json into `directory`, creating it if needed.
/// Returns the list of paths written.
std::vector<std::string> write_outputs(const std::string& directory, const Config& config, const std::string& command,
                                       const CommandResult& result);

}  // namespace scrap::cli
