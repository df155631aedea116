#pragma once

#include <string>
#include <vector>

#include "homsim/numerics.hpp"
#include "homsim/sweep.hpp"

namespace homsim::cli {

/// Thrown by parse_config on --help; main_entry prints the text and exits 0.
struct HelpRequested {
    std::string text;
};

/// Fully resolved invocation. Defaults mirror the standard source
/// (nu = 1.7 THz, xi = 1.356 rad/ps, phi = pi) and the standard sweep
/// grids. Angular detuning is derived as mu = 2*pi*nu_thz when the run
/// starts; everything user-facing stays in THz.
struct RunConfig {
    std::string subcommand = "curve"; ///< curve | matrix | scan | validate
    std::string source = "entangled"; ///< entangled | detuned | grid:<path>
    double nu_thz = 1.7;
    double xi_radps = 1.356;
    double phi_rad = num::pi;
    double theta_rad = 0.0;
    sweep::Range dtau{-3.0, 3.0, 601}; ///< curve and scan delay grid, ps
    double dtau_ps = 1.0;              ///< matrix evaluation delay, ps
    sweep::Range nu_range{0.01, 2.0, 100}; ///< scan separations, THz
    std::string engine = "auto"; ///< auto | closed | numeric
    std::string out = "-";       ///< output path, "-" = stdout
    std::string format = "csv";  ///< csv | json

    bool operator==(const RunConfig&) const = default;
};

/// Phase token: strict number, or the literals pi / +pi / -pi.
double parse_phase(const std::string& token);

/// "start:end:steps" with strict numbers, steps >= 2, start < end.
sweep::Range parse_range(const std::string& token);

/// Parses command-line tokens (without argv[0]). A --config FILE is applied
/// first, flags given on the line win over it, built-in defaults fill the
/// rest. A config file naming a different subcommand than the command line
/// is rejected. Throws UsageError (and HelpRequested for --help).
RunConfig parse_config(const std::vector<std::string>& args);

/// Flat key=value serialization of every field, one per line, doubles at 17
/// significant digits so that re-parsing reproduces the exact config.
std::string to_config_text(const RunConfig& config);

/// Applies key=value lines onto config; '#' lines and blank lines are
/// skipped. Returns the keys seen, in file order. Unknown keys or malformed
/// values throw ParseError.
std::vector<std::string> apply_config_text(const std::string& text,
                                           RunConfig& config);

/// Executes a parsed config: curve and scan write sweep files, matrix writes
/// one probability matrix, validate writes the oracle comparison table and
/// returns nonzero when any row fails. Numerical failures surface as
/// exceptions; see main_entry for the exit-code mapping.
int run(const RunConfig& config);

/// Full front end: parse, run, map errors to exit codes (bad usage or bad
/// input files -> 2 with a message on stderr, numerical failures -> 1,
/// success -> 0).
int main_entry(int argc, const char* const* argv);

} // namespace homsim::cli
