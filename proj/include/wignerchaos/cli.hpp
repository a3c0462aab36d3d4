#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wigner::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 1 computation error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Raised by parse_args. `exit_code` is 0 for --help, 2 otherwise; `what()`
/// holds the text to print.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& text, int exit_code)
        : std::runtime_error(text), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

struct RunConfig {
    std::string subcommand;  // pairings | moment | experiment | sim | version | schema
    std::string out_path;
    std::string format = "json";  // json | csv
    int jobs = 1;

    // pairings
    int n = 0;
    bool noncrossing = false;
    std::vector<int> blocks;
    bool respectful_only = false;

    // moment
    std::vector<std::string> kernel_paths;
    std::vector<int> word;
    std::string engine = "free";
    bool contributions = false;
    bool naive = false;

    // experiment
    std::string family = "tensor_sum";
    std::string mode = "component";
    int order = 2;
    double rho = 0.5;
    std::vector<int> ks{1, 4, 16, 64};
    int max_order = 6;

    // sim
    int dim = 300;
    int samples = 200;
    std::uint64_t seed = 20110516;
    std::string cov_path;
    std::vector<std::vector<int>> words;
};

/// Validated configuration; throws UsageError on unknown flags, missing or
/// malformed input.
RunConfig parse_args(int argc, const char* const* argv);

/// Executes a configuration. Results go to `out` unless an output path is
/// set, in which case they are written atomically. Errors are reported on
/// `err`. Returns 0 or 1.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with the exit-code convention applied.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wigner::cli
