#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "emf/config.hpp"

namespace emf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitUsage = 2;

// Environment variable naming the default output directory for `sweep`.
inline constexpr const char* kOutDirEnv = "EMFEXPO_OUT_DIR";

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by parse_args for --help; carries the rendered help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepCommand {
    RunConfig run;
};

struct MinDistanceCommand {
    std::string profile = "nr5g";
    StationKind station = StationKind::UE;
    std::string limit = "icnirp-sar";
    std::optional<double> duty;
    double beam_offset_db = 0.0;
    std::optional<double> reflection;
    std::string dielectrics;
};

struct ProfilesCommand {
    bool json = false;
};

struct DepthProfileCommand {
    double frequency_hz = 0.0;
    std::string dielectrics;
    std::optional<double> eps_r;
    std::optional<double> sigma;
    double incident_pd = 10.0;
    std::optional<double> max_depth_m;
    int points = 51;
    std::string out;  // empty = stdout
};

using Command = std::variant<SweepCommand, MinDistanceCommand, ProfilesCommand, DepthProfileCommand>;

/// Arguments exclude the program name. Throws UsageError naming the offending
/// token, or HelpRequested.
Command parse_args(const std::vector<std::string>& args);

/// Executes a parsed command; returns the process exit code.
int execute(const Command& cmd, std::ostream& out, std::ostream& err);

/// parse_args + execute with the 0/1/2 exit-code contract.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace emf::cli
