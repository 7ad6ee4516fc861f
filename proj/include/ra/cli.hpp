// Batch pipeline behind the command-line tool: extract (market CSV ->
// risk-aversion tables + trend diagnostics), portfolio (per-date optimal
// weights), validate (self-contained synthetic property suites).
//
// The functions throw ra::Error on failure; the binary maps categories to
// exit codes (0 ok, 1 input error, 2 numerical degeneracy, 3 internal).
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ra/data_io.hpp"
#include "ra/errors.hpp"
#include "ra/estimation.hpp"

namespace ra {

struct ClampRange {
    double lo = 0.0;
    double hi = 1.0;
};

struct RunConfig {
    std::vector<std::filesystem::path> inputs;
    std::vector<MonthRange> exclusions;
    EstimationScheme scheme = EstimationScheme::expanding(24);
    Compounding compounding = Compounding::Geometric;
    double tau = 0.2;
    std::optional<double> split_at;
    std::vector<std::string> families;  // portfolio only
    std::optional<ClampRange> clamp;    // presentation clamp, raw kept
    std::filesystem::path out_dir = ".";
    OutputFormat format = OutputFormat::Csv;
    SchemaConfig schema;

    // Throws ValidationError: scheme param >= 2, tau in [0,1), >= 1 input.
    void validate_common() const;
};

// Per index: writes Moments, RiskAversion (chronological and wealth-sorted
// orderings) and Diagnostics tables under out_dir, and prints one trend
// line per diagnostic series to `out`.
void cmd_extract(const RunConfig& cfg, std::ostream& out);

// Per index: writes a Weights table with one row per (date, family).
void cmd_portfolio(const RunConfig& cfg, std::ostream& out);

struct ValidateOptions {
    bool strict = false;  // tighten implementation-accuracy tolerances 10x
};

// Runs every synthetic property suite, printing one pass/fail line each.
// Returns the number of failed suites.
int cmd_validate(const ValidateOptions& opts, std::ostream& out);

// "ERROR <code>: <message>" single line for standard error.
std::string format_error_line(const Error& e);

}  // namespace ra
