#include <algorithm>
#include <cstdio>
#include <exception>

#include "commands.hpp"
#include "config.hpp"
#include "json.hpp"
#include "stablenoise/errors.hpp"

using namespace stablenoise;

int main(int argc, char** argv) {
    CLI::App app{"Simulation and verification of stable random noise.\n"
                 "Any subcommand also takes --config FILE (JSON); flags on the command line win."};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
    const auto runners = cli::register_commands(app);
    try {
        std::vector<std::string> args = cli::merge_config(argc, argv);
        std::reverse(args.begin(), args.end());
        try {
            app.parse(std::move(args));
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? cli::exit_ok : cli::exit_config;
        }
        for (const CLI::App* sub : app.get_subcommands()) return runners.at(sub->get_name())(*sub);
        return cli::exit_config;
    } catch (const cli::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return cli::exit_config;
    } catch (const integrand_rejected& e) {
        std::fprintf(stderr, "integrand rejected: %s\n", e.what());
        return cli::exit_rejected;
    } catch (const numerical_failure& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return cli::exit_numerical;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return cli::exit_config;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return cli::exit_config;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return cli::exit_numerical;
    }
}
