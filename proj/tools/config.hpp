#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace stablenoise::cli {

// Bad flags, unreadable files, malformed config.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& why) : std::runtime_error(why) {}
};

// Arguments for the parser: the subcommand, then the settings from a
// --config JSON file (if any) as --name=value, then the command line
// itself. Options take their last value, so flags win over the file.
// A report JSON is accepted as config through its "config" member.
std::vector<std::string> merge_config(int argc, char** argv);

// Every option of the subcommand with its effective value.
nlohmann::json resolved_config(const CLI::App& sub);

// "-" or empty writes to stdout.
void write_text(const std::string& path, const std::string& text);

std::string read_text(const std::string& path);

}  // namespace stablenoise::cli
