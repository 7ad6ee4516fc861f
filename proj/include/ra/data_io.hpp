// CSV ingestion of market series, exclusion windows, and emission of
// result tables as CSV or JSON.
//
// Input CSV format:
//   header: date,return,market_cap,rf_annual   (extra columns are ignored)
//   date "YYYY-MM"; numbers with '.' decimal point; lines starting with
//   '#' are comments. Returns and yields are decimal fractions unless the
//   schema flags say percent.
//
// Output schemas (fixed column order):
//   Moments       date,mu,sigma
//   RiskAversion  date,wealth,ara,rra
//   Weights       date,family,w_s[,w_s_raw]
//   Diagnostics   series,corr,label,tau
//
// Numerics are serialized with 17 significant digits so a write/read
// round trip is value-identical; output is byte-deterministic (LF line
// endings, no timestamps).
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ra/estimation.hpp"
#include "ra/yearmonth.hpp"

namespace ra {

struct SchemaConfig {
    std::string date_col = "date";
    std::string return_col = "return";
    std::string cap_col = "market_cap";
    std::string rf_col = "rf_annual";
    bool returns_in_percent = false;  // divide return cells by 100 on load
    bool rf_in_percent = false;       // same for rf_annual cells
};

struct MarketDataset {
    std::string index_name;
    std::vector<MarketRecord> records;  // strictly increasing unique dates
    std::vector<MonthRange> exclusions;
};

// Parse and validate one market CSV. Throws ParseError (with line number),
// SchemaError (missing columns), ValidationError (invariant breach,
// duplicate dates). Rows are sorted by date on load.
MarketDataset load_market_csv(const std::filesystem::path& path, const SchemaConfig& schema = {});

// Remove records dated inside any exclusion range. Idempotent; the removal
// count is the difference in record counts.
MarketDataset apply_exclusions(const MarketDataset& ds);

enum class TableKind { Moments, RiskAversion, Weights, Diagnostics };
enum class OutputFormat { Csv, Json };

struct MomentsRow {
    YearMonth date;
    double mu = 0.0;
    double sigma = 0.0;
    bool operator==(const MomentsRow&) const = default;
};
struct RiskAversionRow {
    YearMonth date;
    double wealth = 0.0;
    double ara = 0.0;
    double rra = 0.0;
    bool operator==(const RiskAversionRow&) const = default;
};
struct WeightsRow {
    YearMonth date;
    std::string family;
    double w_s = 0.0;
    std::optional<double> w_s_raw;  // pre-clamp value, present only when clamping
    bool operator==(const WeightsRow&) const = default;
};
struct DiagnosticsRow {
    std::string series;
    double corr = 0.0;
    std::string label;
    double tau = 0.0;
    bool operator==(const DiagnosticsRow&) const = default;
};

class ResultTable {
public:
    using Rows = std::variant<std::vector<MomentsRow>, std::vector<RiskAversionRow>,
                              std::vector<WeightsRow>, std::vector<DiagnosticsRow>>;

    static ResultTable moments(std::vector<MomentsRow> rows);
    static ResultTable risk_aversion(std::vector<RiskAversionRow> rows);
    static ResultTable weights(std::vector<WeightsRow> rows);
    static ResultTable diagnostics(std::vector<DiagnosticsRow> rows);

    TableKind kind() const { return kind_; }
    std::size_t row_count() const;

    template <typename Row>
    const std::vector<Row>& rows() const {
        return std::get<std::vector<Row>>(rows_);
    }

    bool operator==(const ResultTable&) const = default;

private:
    ResultTable(TableKind kind, Rows rows);
    TableKind kind_;
    Rows rows_;
};

// Serialize with a fixed header and 17-significant-digit numerics. The file
// is written to a temporary sibling and atomically renamed into place.
// Throws ValidationError on non-finite numerics, IoError on I/O failure.
void write_table(const ResultTable& t, const std::filesystem::path& path, OutputFormat format);

// Read back a table written by write_table (round-trip exact).
ResultTable read_table(const std::filesystem::path& path, TableKind kind, OutputFormat format);

enum class PlotAxis { Date, WealthSorted };

// Reorder rows by the chosen axis (stable sort). Throws SchemaError when
// the table has no such column (e.g. wealth on a Moments table).
ResultTable emit_plot_data(const ResultTable& t, PlotAxis axis);

// 17-significant-digit formatting shared by every emitter ("%.17g").
std::string format_double(double v);

}  // namespace ra
