// commands.hpp — Subcommands of the pulsemix tool.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace pulsemix::cli {

enum ExitCode : int { kSuccess = 0, kValidationError = 1, kCheckFailure = 2 };

// Output files keyed by path relative to the output directory. Commands fill
// this in memory; nothing touches the disk until a command has succeeded.
using FileSet = std::map<std::filesystem::path, std::string>;

FileSet cmd_decompose(const RunConfig& config);
FileSet cmd_sample(const RunConfig& config);
FileSet cmd_field(const RunConfig& config, const std::filesystem::path& pulse_set_file);
// sets `passed` to the combined verdict
FileSet cmd_verify(const RunConfig& config, bool& passed, std::ostream& log);
FileSet cmd_converge(const RunConfig& config);

void write_files(const std::filesystem::path& out_dir, const FileSet& files);

// argv-style entry point; args[0] is the program name
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pulsemix::cli
