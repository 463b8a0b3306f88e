#pragma once

#include <functional>
#include <map>
#include <string>

#include "CLI11.hpp"

namespace stablenoise::cli {

// Exit statuses.
enum exit_code : int {
    exit_ok = 0,
    exit_config = 1,
    exit_rejected = 2,
    exit_numerical = 3,
    exit_acceptance = 4,
};

using runner = std::function<int(const CLI::App& sub)>;

// Adds every subcommand to app and returns the runner for each name.
std::map<std::string, runner> register_commands(CLI::App& app);

}  // namespace stablenoise::cli
