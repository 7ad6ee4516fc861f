#include "ra/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ra/errors.hpp"

namespace ra {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        auto comma = line.find(',', pos);
        if (comma == std::string::npos) {
            out.push_back(trim(std::string_view(line).substr(pos)));
            break;
        }
        out.push_back(trim(std::string_view(line).substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

double parse_cell_double(const std::string& cell, const std::string& column, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad numeric '" + cell +
                         "' in column " + column);
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

MarketDataset load_market_csv(const std::filesystem::path& path, const SchemaConfig& schema) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    MarketDataset ds;
    ds.index_name = path.stem().string();

    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t i_date = 0, i_ret = 0, i_cap = 0, i_rf = 0, n_cols = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::vector<std::string> cells = split_csv_line(line);

        if (!have_header) {
            auto find_col = [&](const std::string& name) {
                auto it = std::find(cells.begin(), cells.end(), name);
                if (it == cells.end()) {
                    throw SchemaError("missing column '" + name + "' in " + path.string());
                }
                return static_cast<std::size_t>(it - cells.begin());
            };
            i_date = find_col(schema.date_col);
            i_ret = find_col(schema.return_col);
            i_cap = find_col(schema.cap_col);
            i_rf = find_col(schema.rf_col);
            n_cols = cells.size();
            have_header = true;
            continue;
        }

        if (cells.size() != n_cols) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(n_cols) + " fields, got " +
                             std::to_string(cells.size()));
        }
        MarketRecord rec;
        try {
            rec.date = YearMonth::parse(cells[i_date]);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        rec.ret = parse_cell_double(cells[i_ret], schema.return_col, line_no);
        rec.market_cap = parse_cell_double(cells[i_cap], schema.cap_col, line_no);
        rec.rf_annual = parse_cell_double(cells[i_rf], schema.rf_col, line_no);
        if (schema.returns_in_percent) rec.ret /= 100.0;
        if (schema.rf_in_percent) rec.rf_annual /= 100.0;

        if (!(rec.ret > -1.0)) {
            throw ValidationError("return " + cells[i_ret] + " at " + rec.date.str() +
                                  " violates ret > -1");
        }
        if (!(rec.market_cap > 0.0)) {
            throw ValidationError("market cap " + cells[i_cap] + " at " + rec.date.str() +
                                  " violates market_cap > 0");
        }
        if (!(rec.rf_annual > -1.0)) {
            throw ValidationError("yield " + cells[i_rf] + " at " + rec.date.str() +
                                  " violates rf_annual > -1");
        }
        ds.records.push_back(rec);
    }
    if (!have_header) throw SchemaError("no header row in " + path.string());

    std::stable_sort(ds.records.begin(), ds.records.end(),
                     [](const MarketRecord& a, const MarketRecord& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < ds.records.size(); ++i) {
        if (ds.records[i - 1].date == ds.records[i].date) {
            throw ValidationError("duplicate date " + ds.records[i].date.str() + " in " +
                                  path.string());
        }
    }
    return ds;
}

MarketDataset apply_exclusions(const MarketDataset& ds) {
    MarketDataset out;
    out.index_name = ds.index_name;
    out.exclusions = ds.exclusions;
    out.records.reserve(ds.records.size());
    for (const MarketRecord& rec : ds.records) {
        bool excluded = std::any_of(ds.exclusions.begin(), ds.exclusions.end(),
                                    [&](const MonthRange& r) { return r.contains(rec.date); });
        if (!excluded) out.records.push_back(rec);
    }
    return out;
}

ResultTable::ResultTable(TableKind kind, Rows rows) : kind_(kind), rows_(std::move(rows)) {}

ResultTable ResultTable::moments(std::vector<MomentsRow> rows) {
    return {TableKind::Moments, std::move(rows)};
}
ResultTable ResultTable::risk_aversion(std::vector<RiskAversionRow> rows) {
    return {TableKind::RiskAversion, std::move(rows)};
}
ResultTable ResultTable::weights(std::vector<WeightsRow> rows) {
    return {TableKind::Weights, std::move(rows)};
}
ResultTable ResultTable::diagnostics(std::vector<DiagnosticsRow> rows) {
    return {TableKind::Diagnostics, std::move(rows)};
}

std::size_t ResultTable::row_count() const {
    return std::visit([](const auto& rows) { return rows.size(); }, rows_);
}

namespace {

void check_finite(double v, const char* column) {
    if (!std::isfinite(v)) {
        throw ValidationError(std::string("non-finite value in column ") + column);
    }
}

void check_plain_string(const std::string& s, const char* column) {
    if (s.find_first_of(",\n\r\"") != std::string::npos) {
        throw ValidationError(std::string("string cell in column ") + column +
                              " contains a delimiter");
    }
}

bool weights_have_raw(const std::vector<WeightsRow>& rows) {
    if (rows.empty()) return false;
    bool raw = rows.front().w_s_raw.has_value();
    for (const WeightsRow& r : rows) {
        if (r.w_s_raw.has_value() != raw) {
            throw InternalError("weights table mixes clamped and unclamped rows");
        }
    }
    return raw;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += ch;
        }
    }
    return out;
}

void render_csv(const ResultTable& t, std::ostream& os) {
    switch (t.kind()) {
        case TableKind::Moments: {
            os << "date,mu,sigma\n";
            for (const auto& r : t.rows<MomentsRow>()) {
                check_finite(r.mu, "mu");
                check_finite(r.sigma, "sigma");
                os << r.date.str() << ',' << format_double(r.mu) << ',' << format_double(r.sigma)
                   << '\n';
            }
            break;
        }
        case TableKind::RiskAversion: {
            // ARA is in inverse units of the input market_cap column.
            os << "# ara unit: 1 / market_cap unit; rra dimensionless\n";
            os << "date,wealth,ara,rra\n";
            for (const auto& r : t.rows<RiskAversionRow>()) {
                check_finite(r.wealth, "wealth");
                check_finite(r.ara, "ara");
                check_finite(r.rra, "rra");
                os << r.date.str() << ',' << format_double(r.wealth) << ','
                   << format_double(r.ara) << ',' << format_double(r.rra) << '\n';
            }
            break;
        }
        case TableKind::Weights: {
            bool raw = weights_have_raw(t.rows<WeightsRow>());
            os << (raw ? "date,family,w_s,w_s_raw\n" : "date,family,w_s\n");
            for (const auto& r : t.rows<WeightsRow>()) {
                check_finite(r.w_s, "w_s");
                check_plain_string(r.family, "family");
                os << r.date.str() << ',' << r.family << ',' << format_double(r.w_s);
                if (raw) {
                    check_finite(*r.w_s_raw, "w_s_raw");
                    os << ',' << format_double(*r.w_s_raw);
                }
                os << '\n';
            }
            break;
        }
        case TableKind::Diagnostics: {
            os << "series,corr,label,tau\n";
            for (const auto& r : t.rows<DiagnosticsRow>()) {
                check_finite(r.corr, "corr");
                check_finite(r.tau, "tau");
                check_plain_string(r.series, "series");
                check_plain_string(r.label, "label");
                os << r.series << ',' << format_double(r.corr) << ',' << r.label << ','
                   << format_double(r.tau) << '\n';
            }
            break;
        }
    }
}

void render_json(const ResultTable& t, std::ostream& os) {
    os << "[";
    bool first = true;
    auto next = [&] {
        if (!first) os << ",";
        first = false;
        os << "\n  ";
    };
    switch (t.kind()) {
        case TableKind::Moments:
            for (const auto& r : t.rows<MomentsRow>()) {
                check_finite(r.mu, "mu");
                check_finite(r.sigma, "sigma");
                next();
                os << "{\"date\":\"" << r.date.str() << "\",\"mu\":" << format_double(r.mu)
                   << ",\"sigma\":" << format_double(r.sigma) << "}";
            }
            break;
        case TableKind::RiskAversion:
            for (const auto& r : t.rows<RiskAversionRow>()) {
                check_finite(r.wealth, "wealth");
                check_finite(r.ara, "ara");
                check_finite(r.rra, "rra");
                next();
                os << "{\"date\":\"" << r.date.str() << "\",\"wealth\":" << format_double(r.wealth)
                   << ",\"ara\":" << format_double(r.ara) << ",\"rra\":" << format_double(r.rra)
                   << "}";
            }
            break;
        case TableKind::Weights: {
            bool raw = weights_have_raw(t.rows<WeightsRow>());
            for (const auto& r : t.rows<WeightsRow>()) {
                check_finite(r.w_s, "w_s");
                next();
                os << "{\"date\":\"" << r.date.str() << "\",\"family\":\""
                   << json_escape(r.family) << "\",\"w_s\":" << format_double(r.w_s);
                if (raw) {
                    check_finite(*r.w_s_raw, "w_s_raw");
                    os << ",\"w_s_raw\":" << format_double(*r.w_s_raw);
                }
                os << "}";
            }
            break;
        }
        case TableKind::Diagnostics:
            for (const auto& r : t.rows<DiagnosticsRow>()) {
                check_finite(r.corr, "corr");
                check_finite(r.tau, "tau");
                next();
                os << "{\"series\":\"" << json_escape(r.series)
                   << "\",\"corr\":" << format_double(r.corr) << ",\"label\":\""
                   << json_escape(r.label) << "\",\"tau\":" << format_double(r.tau) << "}";
            }
            break;
    }
    os << "\n]\n";
}

}  // namespace

void write_table(const ResultTable& t, const std::filesystem::path& path, OutputFormat format) {
    std::ostringstream body;
    if (format == OutputFormat::Csv) {
        render_csv(t, body);
    } else {
        render_json(t, body);
    }

    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << body.str();
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string());
    }
}

namespace {

std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path,
                                                    std::vector<std::string>& header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto cells = split_csv_line(line);
        if (!have_header) {
            header = cells;
            have_header = true;
        } else {
            rows.push_back(cells);
        }
    }
    if (!have_header) throw SchemaError("no header row in " + path.string());
    return rows;
}

double cell_to_double(const std::string& cell) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ParseError("bad numeric cell '" + cell + "'");
    }
    return v;
}

ResultTable read_table_csv(const std::filesystem::path& path, TableKind kind) {
    std::vector<std::string> header;
    auto rows = read_csv_rows(path, header);
    switch (kind) {
        case TableKind::Moments: {
            std::vector<MomentsRow> out;
            for (auto& r : rows) {
                out.push_back({YearMonth::parse(r.at(0)), cell_to_double(r.at(1)),
                               cell_to_double(r.at(2))});
            }
            return ResultTable::moments(std::move(out));
        }
        case TableKind::RiskAversion: {
            std::vector<RiskAversionRow> out;
            for (auto& r : rows) {
                out.push_back({YearMonth::parse(r.at(0)), cell_to_double(r.at(1)),
                               cell_to_double(r.at(2)), cell_to_double(r.at(3))});
            }
            return ResultTable::risk_aversion(std::move(out));
        }
        case TableKind::Weights: {
            bool raw = header.size() == 4;
            std::vector<WeightsRow> out;
            for (auto& r : rows) {
                WeightsRow row{YearMonth::parse(r.at(0)), r.at(1), cell_to_double(r.at(2)), {}};
                if (raw) row.w_s_raw = cell_to_double(r.at(3));
                out.push_back(std::move(row));
            }
            return ResultTable::weights(std::move(out));
        }
        case TableKind::Diagnostics: {
            std::vector<DiagnosticsRow> out;
            for (auto& r : rows) {
                out.push_back({r.at(0), cell_to_double(r.at(1)), r.at(2), cell_to_double(r.at(3))});
            }
            return ResultTable::diagnostics(std::move(out));
        }
    }
    throw InternalError("unknown table kind");
}

ResultTable read_table_json(const std::filesystem::path& path, TableKind kind) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad JSON in " + path.string() + ": " + e.what());
    }
    if (!doc.is_array()) throw SchemaError("expected a JSON array in " + path.string());
    switch (kind) {
        case TableKind::Moments: {
            std::vector<MomentsRow> out;
            for (const auto& j : doc) {
                out.push_back({YearMonth::parse(j.at("date").get<std::string>()),
                               j.at("mu").get<double>(), j.at("sigma").get<double>()});
            }
            return ResultTable::moments(std::move(out));
        }
        case TableKind::RiskAversion: {
            std::vector<RiskAversionRow> out;
            for (const auto& j : doc) {
                out.push_back({YearMonth::parse(j.at("date").get<std::string>()),
                               j.at("wealth").get<double>(), j.at("ara").get<double>(),
                               j.at("rra").get<double>()});
            }
            return ResultTable::risk_aversion(std::move(out));
        }
        case TableKind::Weights: {
            std::vector<WeightsRow> out;
            for (const auto& j : doc) {
                WeightsRow row{YearMonth::parse(j.at("date").get<std::string>()),
                               j.at("family").get<std::string>(), j.at("w_s").get<double>(), {}};
                if (j.contains("w_s_raw")) row.w_s_raw = j.at("w_s_raw").get<double>();
                out.push_back(std::move(row));
            }
            return ResultTable::weights(std::move(out));
        }
        case TableKind::Diagnostics: {
            std::vector<DiagnosticsRow> out;
            for (const auto& j : doc) {
                out.push_back({j.at("series").get<std::string>(), j.at("corr").get<double>(),
                               j.at("label").get<std::string>(), j.at("tau").get<double>()});
            }
            return ResultTable::diagnostics(std::move(out));
        }
    }
    throw InternalError("unknown table kind");
}

}  // namespace

ResultTable read_table(const std::filesystem::path& path, TableKind kind, OutputFormat format) {
    return format == OutputFormat::Csv ? read_table_csv(path, kind) : read_table_json(path, kind);
}

ResultTable emit_plot_data(const ResultTable& t, PlotAxis axis) {
    if (axis == PlotAxis::WealthSorted) {
        if (t.kind() != TableKind::RiskAversion) {
            throw SchemaError("wealth ordering requires a RiskAversion table");
        }
        auto rows = t.rows<RiskAversionRow>();
        std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return a.wealth < b.wealth;
        });
        return ResultTable::risk_aversion(std::move(rows));
    }
    switch (t.kind()) {
        case TableKind::Moments: {
            auto rows = t.rows<MomentsRow>();
            std::stable_sort(rows.begin(), rows.end(),
                             [](const auto& a, const auto& b) { return a.date < b.date; });
            return ResultTable::moments(std::move(rows));
        }
        case TableKind::RiskAversion: {
            auto rows = t.rows<RiskAversionRow>();
            std::stable_sort(rows.begin(), rows.end(),
                             [](const auto& a, const auto& b) { return a.date < b.date; });
            return ResultTable::risk_aversion(std::move(rows));
        }
        case TableKind::Weights: {
            auto rows = t.rows<WeightsRow>();
            std::stable_sort(rows.begin(), rows.end(),
                             [](const auto& a, const auto& b) { return a.date < b.date; });
            return ResultTable::weights(std::move(rows));
        }
        case TableKind::Diagnostics:
            throw SchemaError("diagnostics tables have no date column");
    }
    throw InternalError("unknown table kind");
}

}  // namespace ra
