#pragma once

// Command-line front end. One subcommand per experiment plus a generic
// switch runner and a self-test. A flat JSON config file can supply any
// flag's value; values given on the command line win. The seed falls back
// to $SWITCHCAST_SEED when neither source provides one.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace switchcast {

inline constexpr std::uint64_t kDefaultSeed = 1234567;

struct RunConfig {
    std::string subcommand;
    double theta = 0.5;
    std::string prior_k = "harmonic"; // harmonic | uniform
    std::string prior_t = "harmonic"; // harmonic | geometric:<rho>
    std::string input;
    std::string out_dir = ".";
    std::vector<int> orders = {1, 2};
    std::uint64_t n = 10000;       // sample size (histsim n_max)
    std::uint64_t replicates = 20; // histsim replicates / consistency seeds
    std::string density = "linear:0.5,1";
    double theta_star = 0.7; // consistency source parameter
    std::uint64_t stride = 0;
    int kmax = 0;
    int workers = 0; // 0: hardware concurrency
    std::uint64_t seed = kDefaultSeed;

    nlohmann::json echo() const;
};

// Thrown instead of a config when the arguments ask for usage text; not a
// std::exception so error handlers don't swallow it.
struct HelpRequested {
    std::string text;
};

// Throws std::invalid_argument (or CLI parsing errors surfaced as
// invalid_argument) with a message naming the offending field, and
// HelpRequested when -h/--help is present.
RunConfig parse_and_validate(const std::vector<std::string>& args);

// Dispatches to the experiment drivers, writes CSV + manifest, returns the
// process exit status. Output files are written whole-then-renamed so a
// failed run never clobbers a previous good one.
int execute(const RunConfig& config);

int cli_main(int argc, char** argv);

} // namespace switchcast
