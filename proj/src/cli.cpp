#include "ra/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "ra/errors.hpp"
#include "ra/portfolio.hpp"
#include "ra/validation.hpp"

namespace ra {

void RunConfig::validate_common() const {
    if (inputs.empty()) throw ValidationError("at least one --input is required");
    if (scheme.param < 2) {
        throw ValidationError("estimation scheme parameter must be >= 2, got " +
                              std::to_string(scheme.param));
    }
    if (!(tau >= 0.0 && tau < 1.0)) throw ValidationError("tau must lie in [0, 1)");
    if (clamp && !(clamp->lo <= clamp->hi)) {
        throw ValidationError("clamp range has lo > hi");
    }
}

namespace {

std::string extension(OutputFormat f) { return f == OutputFormat::Csv ? ".csv" : ".json"; }

std::filesystem::path table_path(const RunConfig& cfg, const std::string& index,
                                 const std::string& suffix) {
    return cfg.out_dir / (index + "_" + suffix + extension(cfg.format));
}

MomentSeries estimate(const RunConfig& cfg, const MarketDataset& ds) {
    std::vector<Dated> returns;
    returns.reserve(ds.records.size());
    for (const MarketRecord& r : ds.records) returns.push_back({r.date, r.ret});
    if (cfg.scheme.kind == EstimationScheme::Kind::Expanding) {
        return expanding_moments(returns, cfg.scheme.param);
    }
    return rolling_moments(returns, cfg.scheme.param);
}

std::string label_for(double corr, double tau) {
    if (corr < -tau) return trend_name(Trend::Decreasing);
    if (corr > tau) return trend_name(Trend::Increasing);
    return trend_name(Trend::Constant);
}

void emit_line(std::ostream& out, const std::string& line) { out << line << '\n'; }

MarketDataset load_and_filter(const RunConfig& cfg, const std::filesystem::path& input,
                              std::ostream& out) {
    MarketDataset ds = load_market_csv(input, cfg.schema);
    ds.exclusions = cfg.exclusions;
    if (!ds.exclusions.empty()) {
        std::size_t before = ds.records.size();
        ds = apply_exclusions(ds);
        std::ostringstream line;
        line << ds.index_name << ": excluded " << (before - ds.records.size()) << " records";
        emit_line(out, line.str());
    }
    return ds;
}

}  // namespace

void cmd_extract(const RunConfig& cfg, std::ostream& out) {
    cfg.validate_common();
    for (const auto& input : cfg.inputs) {
        MarketDataset ds = load_and_filter(cfg, input, out);
        MomentSeries ms = estimate(cfg, ds);
        std::vector<RiskAversionPoint> points =
            risk_aversion_series(ms, ds.records, cfg.compounding);

        std::vector<double> wealth, rra_values, ara_values;
        std::size_t negative_rra = 0;
        for (const RiskAversionPoint& p : points) {
            wealth.push_back(p.wealth);
            rra_values.push_back(p.rra);
            ara_values.push_back(p.ara);
            if (p.rra < 0.0) ++negative_rra;
        }

        TrendResult ara_trend = classify_trend(wealth, ara_values, cfg.tau);
        TrendResult rra_trend = classify_trend(wealth, rra_values, cfg.tau);

        std::vector<DiagnosticsRow> diag{
            {"ara_vs_wealth", ara_trend.corr, trend_name(ara_trend.label), cfg.tau},
            {"rra_vs_wealth", rra_trend.corr, trend_name(rra_trend.label), cfg.tau},
        };
        if (cfg.split_at) {
            auto [below, above] = split_rra_at(*cfg.split_at, wealth, rra_values);
            diag.push_back({"rra_vs_wealth_below", below, label_for(below, cfg.tau), cfg.tau});
            diag.push_back({"rra_vs_wealth_above", above, label_for(above, cfg.tau), cfg.tau});
        }

        std::vector<MomentsRow> moment_rows;
        for (const MomentEntry& e : ms.entries) moment_rows.push_back({e.date, e.mu, e.sigma});
        std::vector<RiskAversionRow> ra_rows;
        for (const RiskAversionPoint& p : points) {
            ra_rows.push_back({p.date, p.wealth, p.ara, p.rra});
        }

        ResultTable ra_table = ResultTable::risk_aversion(std::move(ra_rows));
        write_table(ResultTable::moments(std::move(moment_rows)),
                    table_path(cfg, ds.index_name, "moments"), cfg.format);
        write_table(emit_plot_data(ra_table, PlotAxis::Date),
                    table_path(cfg, ds.index_name, "risk_aversion_by_date"), cfg.format);
        write_table(emit_plot_data(ra_table, PlotAxis::WealthSorted),
                    table_path(cfg, ds.index_name, "risk_aversion_by_wealth"), cfg.format);
        write_table(ResultTable::diagnostics(diag),
                    table_path(cfg, ds.index_name, "diagnostics"), cfg.format);

        for (const DiagnosticsRow& row : diag) {
            char corr_text[32];
            std::snprintf(corr_text, sizeof corr_text, "%.4f", row.corr);
            std::ostringstream line;
            line << ds.index_name << ": " << row.series << " corr=" << corr_text
                 << " trend=" << row.label << " tau=" << row.tau;
            emit_line(out, line.str());
        }
        if (negative_rra > 0) {
            std::ostringstream line;
            line << ds.index_name << ": " << negative_rra << " periods with negative rra";
            emit_line(out, line.str());
        }
    }
}

void cmd_portfolio(const RunConfig& cfg, std::ostream& out) {
    cfg.validate_common();
    if (cfg.families.empty()) {
        throw ValidationError("portfolio requires at least one --families entry");
    }
    std::vector<WeightFamily> families;
    for (const std::string& f : cfg.families) families.push_back(WeightFamily::parse(f));

    for (const auto& input : cfg.inputs) {
        MarketDataset ds = load_and_filter(cfg, input, out);
        MomentSeries ms = estimate(cfg, ds);

        std::vector<Dated> rf_series;
        rf_series.reserve(ds.records.size());
        for (const MarketRecord& r : ds.records) {
            rf_series.push_back({r.date, per_period_rate(r.rf_annual, cfg.compounding)});
        }

        std::vector<std::vector<DatedWeight>> per_family;
        per_family.reserve(families.size());
        for (const WeightFamily& fam : families) {
            per_family.push_back(weight_series(fam, ms, rf_series));
        }

        std::vector<WeightsRow> rows;
        rows.reserve(ms.entries.size() * families.size());
        for (std::size_t t = 0; t < ms.entries.size(); ++t) {
            for (std::size_t f = 0; f < families.size(); ++f) {
                const DatedWeight& dw = per_family[f][t];
                WeightsRow row{dw.date, families[f].str(), dw.w_s, {}};
                if (cfg.clamp) {
                    row.w_s_raw = dw.w_s;
                    row.w_s = std::clamp(dw.w_s, cfg.clamp->lo, cfg.clamp->hi);
                }
                rows.push_back(std::move(row));
            }
        }

        std::size_t n_rows = rows.size();
        write_table(ResultTable::weights(std::move(rows)),
                    table_path(cfg, ds.index_name, "weights"), cfg.format);
        std::ostringstream line;
        line << ds.index_name << ": wrote " << n_rows << " weight rows (" << families.size()
             << " families x " << ms.entries.size() << " dates)";
        emit_line(out, line.str());
    }
}

int cmd_validate(const ValidateOptions& opts, std::ostream& out) {
    Tolerances tol = opts.strict ? Tolerances::strict() : Tolerances::defaults();
    std::vector<SuiteResult> results = run_validation_suites(tol);
    int failures = 0;
    for (const SuiteResult& r : results) {
        std::ostringstream line;
        line << (r.passed ? "PASS " : "FAIL ") << r.name;
        if (!r.detail.empty()) line << " (" << r.detail << ")";
        emit_line(out, line.str());
        if (!r.passed) ++failures;
    }
    std::ostringstream summary;
    summary << (failures == 0 ? "all suites passed" : std::to_string(failures) + " suite(s) failed")
            << " [" << results.size() << " total]";
    emit_line(out, summary.str());
    return failures;
}

std::string format_error_line(const Error& e) {
    return "ERROR " + e.code() + ": " + e.what();
}

}  // namespace ra
