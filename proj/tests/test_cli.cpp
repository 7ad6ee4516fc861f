#include "ra/cli.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "ra/errors.hpp"
#include "ra/validation.hpp"

using namespace ra;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        auto ticks = std::chrono::steady_clock::now().time_since_epoch().count();
        path = std::filesystem::temp_directory_path() /
               ("ra_cli_" + std::to_string(ticks) + "_" + std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::filesystem::path write_market(const TempDir& dir, const MarketDataset& ds,
                                   const std::string& name) {
    std::filesystem::path p = dir.path / name;
    std::ofstream out(p, std::ios::binary);
    out << "date,return,market_cap,rf_annual\n";
    for (const MarketRecord& r : ds.records) {
        out << r.date.str() << ',' << format_double(r.ret) << ',' << format_double(r.market_cap)
            << ',' << format_double(r.rf_annual) << '\n';
    }
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("run config validation") {
    RunConfig cfg;
    CHECK_THROWS_AS(cfg.validate_common(), ValidationError);  // no inputs
    cfg.inputs = {"x.csv"};
    cfg.scheme = EstimationScheme::rolling(1);
    CHECK_THROWS_AS(cfg.validate_common(), ValidationError);
    cfg.scheme = EstimationScheme::rolling(60);
    cfg.tau = 1.0;
    CHECK_THROWS_AS(cfg.validate_common(), ValidationError);
    cfg.tau = 0.2;
    cfg.clamp = ClampRange{1.0, 0.0};
    CHECK_THROWS_AS(cfg.validate_common(), ValidationError);
    cfg.clamp = ClampRange{0.0, 1.0};
    CHECK_NOTHROW(cfg.validate_common());
}

TEST_CASE("extract pipeline on a rolling scheme") {
    TempDir dir;
    EstimationScheme scheme = EstimationScheme::rolling(60);
    MarketDataset ds = make_log_agent_market(130, scheme);
    std::filesystem::path input = write_market(dir, ds, "agent.csv");

    RunConfig cfg;
    cfg.inputs = {input};
    cfg.scheme = scheme;
    cfg.out_dir = dir.path / "out";
    std::ostringstream out;
    cmd_extract(cfg, out);

    ResultTable ra_table = read_table(cfg.out_dir / "agent_risk_aversion_by_date.csv",
                                      TableKind::RiskAversion, OutputFormat::Csv);
    CHECK(ra_table.row_count() == 130 - 60 + 1);  // N - M + 1 rows

    ResultTable by_wealth = read_table(cfg.out_dir / "agent_risk_aversion_by_wealth.csv",
                                       TableKind::RiskAversion, OutputFormat::Csv);
    const auto& rows = by_wealth.rows<RiskAversionRow>();
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].wealth <= rows[i].wealth);

    ResultTable diag = read_table(cfg.out_dir / "agent_diagnostics.csv", TableKind::Diagnostics,
                                  OutputFormat::Csv);
    REQUIRE(diag.row_count() == 2);
    CHECK(diag.rows<DiagnosticsRow>()[0].series == "ara_vs_wealth");
    CHECK(diag.rows<DiagnosticsRow>()[1].series == "rra_vs_wealth");
    CHECK(diag.rows<DiagnosticsRow>()[1].label == "Constant");

    std::string text = out.str();
    CHECK(text.find("rra_vs_wealth") != std::string::npos);
    CHECK(text.find("trend=Constant") != std::string::npos);
}

TEST_CASE("extract reports split correlations and exclusions") {
    TempDir dir;
    EstimationScheme scheme = EstimationScheme::expanding(24);
    MarketDataset ds = make_regime_break_market(240, 27.0, scheme);
    std::filesystem::path input = write_market(dir, ds, "break.csv");

    RunConfig cfg;
    cfg.inputs = {input};
    cfg.scheme = scheme;
    cfg.split_at = 27.0;
    cfg.exclusions = {MonthRange::parse("1980-01..1980-12")};  // outside the data: removes 0
    cfg.out_dir = dir.path / "out";
    std::ostringstream out;
    cmd_extract(cfg, out);

    ResultTable diag = read_table(cfg.out_dir / "break_diagnostics.csv", TableKind::Diagnostics,
                                  OutputFormat::Csv);
    REQUIRE(diag.row_count() == 4);
    const auto& rows = diag.rows<DiagnosticsRow>();
    CHECK(rows[2].series == "rra_vs_wealth_below");
    CHECK(rows[2].corr >= 0.85);
    CHECK(rows[3].series == "rra_vs_wealth_above");
    CHECK(rows[1].corr < 0.0);  // full-series rra correlation is negative

    CHECK(out.str().find("excluded 0 records") != std::string::npos);
    CHECK(out.str().find("periods with negative rra") != std::string::npos);
}

TEST_CASE("portfolio pipeline: identities and the quadratic/log gap") {
    TempDir dir;
    EstimationScheme scheme = EstimationScheme::rolling(60);
    MarketDataset ds = make_log_agent_market(100, scheme);
    std::filesystem::path input = write_market(dir, ds, "agent.csv");

    RunConfig cfg;
    cfg.inputs = {input};
    cfg.scheme = scheme;
    cfg.out_dir = dir.path / "out";
    cfg.families = {"quadratic:b=0.2", "log", "sqrt", "exp"};
    std::ostringstream out;
    cmd_portfolio(cfg, out);

    ResultTable weights = read_table(cfg.out_dir / "agent_weights.csv", TableKind::Weights,
                                     OutputFormat::Csv);
    const auto& rows = weights.rows<WeightsRow>();
    REQUIRE(rows.size() == (100 - 60 + 1) * 4);
    for (std::size_t i = 0; i < rows.size(); i += 4) {
        REQUIRE(rows[i].family == "quadratic:b=0.2");
        REQUIRE(rows[i + 1].family == "log");
        REQUIRE(rows[i + 2].family == "sqrt");
        REQUIRE(rows[i + 3].family == "exp");
        CHECK(rows[i + 2].w_s == 2.0 * rows[i + 1].w_s);  // sqrt doubles log, per date
        // the b=0.2 manager holds about 50% more than the log investor
        double ratio = rows[i].w_s / rows[i + 1].w_s;
        CHECK(ratio > 1.4);
        CHECK(ratio < 1.6);
    }
}

TEST_CASE("portfolio clamp keeps raw weights in an extra column") {
    TempDir dir;
    EstimationScheme scheme = EstimationScheme::rolling(60);
    MarketDataset ds = make_log_agent_market(80, scheme);
    std::filesystem::path input = write_market(dir, ds, "agent.csv");

    RunConfig cfg;
    cfg.inputs = {input};
    cfg.scheme = scheme;
    cfg.out_dir = dir.path / "out";
    cfg.families = {"log"};
    cfg.clamp = ClampRange{0.0, 0.2};
    std::ostringstream out;
    cmd_portfolio(cfg, out);

    ResultTable weights = read_table(cfg.out_dir / "agent_weights.csv", TableKind::Weights,
                                     OutputFormat::Csv);
    bool some_clamped = false;
    for (const WeightsRow& r : weights.rows<WeightsRow>()) {
        REQUIRE(r.w_s_raw.has_value());
        CHECK(r.w_s >= 0.0);
        CHECK(r.w_s <= 0.2);
        if (*r.w_s_raw != r.w_s) some_clamped = true;
    }
    CHECK(some_clamped);  // the log weights on this fixture sit near 0.5
}

TEST_CASE("portfolio requires families") {
    RunConfig cfg;
    cfg.inputs = {"whatever.csv"};
    std::ostringstream out;
    CHECK_THROWS_AS(cmd_portfolio(cfg, out), ValidationError);
}

TEST_CASE("json output format round-trips through the pipeline") {
    TempDir dir;
    EstimationScheme scheme = EstimationScheme::rolling(60);
    MarketDataset ds = make_log_agent_market(90, scheme);
    std::filesystem::path input = write_market(dir, ds, "agent.csv");

    RunConfig cfg;
    cfg.inputs = {input};
    cfg.scheme = scheme;
    cfg.out_dir = dir.path / "out";
    cfg.format = OutputFormat::Json;
    std::ostringstream out;
    cmd_extract(cfg, out);

    ResultTable moments_json = read_table(cfg.out_dir / "agent_moments.json", TableKind::Moments,
                                          OutputFormat::Json);
    CHECK(moments_json.row_count() == 90 - 60 + 1);
}

TEST_CASE("extract runs are byte-identical") {
    TempDir dir;
    EstimationScheme scheme = EstimationScheme::expanding(24);
    MarketDataset ds = make_log_agent_market(80, scheme);
    std::filesystem::path input = write_market(dir, ds, "agent.csv");

    auto run = [&](const char* sub) {
        RunConfig cfg;
        cfg.inputs = {input};
        cfg.scheme = scheme;
        cfg.out_dir = dir.path / sub;
        std::ostringstream out;
        cmd_extract(cfg, out);
        return out.str();
    };
    std::string log_a = run("a");
    std::string log_b = run("b");
    CHECK(log_a == log_b);
    for (const char* name : {"agent_moments.csv", "agent_risk_aversion_by_date.csv",
                             "agent_risk_aversion_by_wealth.csv", "agent_diagnostics.csv"}) {
        CHECK(slurp(dir.path / "a" / name) == slurp(dir.path / "b" / name));
    }
}

TEST_CASE("validate suites pass on both profiles") {
    std::ostringstream out;
    CHECK(cmd_validate({false}, out) == 0);
    CHECK(out.str().find("FAIL") == std::string::npos);
    std::ostringstream strict_out;
    CHECK(cmd_validate({true}, strict_out) == 0);
}

TEST_CASE("error line format") {
    ValidationError e("probabilities sum to 0.9");
    CHECK(format_error_line(e) == "ERROR VALIDATION: probabilities sum to 0.9");
    CHECK(e.exit_code() == 1);
    CHECK(DegenerateError("x").exit_code() == 2);
    CHECK(InternalError("x").exit_code() == 3);
}

TEST_CASE("missing input file surfaces as IoError") {
    RunConfig cfg;
    cfg.inputs = {"/nonexistent/nope.csv"};
    std::ostringstream out;
    CHECK_THROWS_AS(cmd_extract(cfg, out), IoError);
}
