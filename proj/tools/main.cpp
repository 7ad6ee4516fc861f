// Command-line front end: extract | portfolio | validate.
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ra/cli.hpp"
#include "ra/errors.hpp"

namespace {

ra::EstimationScheme parse_scheme(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ra::ParseError("bad --scheme '" + text + "', expected expanding:<min_obs> or rolling:<M>");
    }
    std::string kind = text.substr(0, colon);
    std::string value = text.substr(colon + 1);
    int param = 0;
    try {
        std::size_t used = 0;
        param = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ra::ParseError("bad scheme parameter '" + value + "'");
    }
    if (kind == "expanding") return ra::EstimationScheme::expanding(param);
    if (kind == "rolling") return ra::EstimationScheme::rolling(param);
    throw ra::ParseError("unknown scheme kind '" + kind + "'");
}

ra::ClampRange parse_clamp(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw ra::ParseError("bad --clamp '" + text + "', expected <lo>,<hi>");
    }
    try {
        std::size_t used = 0;
        std::string lo_s = text.substr(0, comma), hi_s = text.substr(comma + 1);
        double lo = std::stod(lo_s, &used);
        if (used != lo_s.size()) throw std::invalid_argument("trailing");
        double hi = std::stod(hi_s, &used);
        if (used != hi_s.size()) throw std::invalid_argument("trailing");
        return {lo, hi};
    } catch (const std::exception&) {
        throw ra::ParseError("bad numeric value in --clamp '" + text + "'");
    }
}

struct CommonFlags {
    std::vector<std::string> inputs;
    std::vector<std::string> excludes;
    std::string scheme = "expanding:24";
    std::string compounding = "geometric";
    std::string out_dir = ".";
    std::string format = "csv";
    bool percent = false;
    bool rf_percent = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--input", f.inputs, "market CSV path (repeatable)")->required();
    cmd->add_option("--exclude", f.excludes, "exclusion range YYYY-MM..YYYY-MM (repeatable)");
    cmd->add_option("--scheme", f.scheme, "expanding:<min_obs> or rolling:<M> [expanding:24]");
    cmd->add_option("--rf-compounding", f.compounding, "geometric|simple [geometric]")
        ->check(CLI::IsMember({"geometric", "simple"}));
    cmd->add_option("--out", f.out_dir, "output directory [.]");
    cmd->add_option("--format", f.format, "csv|json [csv]")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--percent", f.percent, "return column is in percent; divide by 100");
    cmd->add_flag("--rf-percent", f.rf_percent, "rf_annual column is in percent; divide by 100");
}

ra::RunConfig to_config(const CommonFlags& f) {
    ra::RunConfig cfg;
    for (const std::string& p : f.inputs) cfg.inputs.emplace_back(p);
    for (const std::string& e : f.excludes) cfg.exclusions.push_back(ra::MonthRange::parse(e));
    cfg.scheme = parse_scheme(f.scheme);
    cfg.compounding =
        f.compounding == "simple" ? ra::Compounding::Simple : ra::Compounding::Geometric;
    cfg.out_dir = f.out_dir;
    cfg.format = f.format == "json" ? ra::OutputFormat::Json : ra::OutputFormat::Csv;
    cfg.schema.returns_in_percent = f.percent;
    cfg.schema.rf_in_percent = f.rf_percent;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Arrow-Pratt risk-attitude extraction and two-asset portfolio weights"};
    app.require_subcommand(1);
    app.set_config("--config");

    CommonFlags extract_flags;
    double tau = 0.2;
    double split_at = 0.0;
    CLI::App* extract = app.add_subcommand(
        "extract", "estimate moments and extract ARA/RRA series with trend diagnostics");
    add_common(extract, extract_flags);
    extract->add_option("--tau", tau, "trend dead-band on |corr| [0.2]");
    CLI::Option* split_opt =
        extract->add_option("--split-at", split_at, "also report sub-correlations split at this wealth");

    CommonFlags portfolio_flags;
    std::vector<std::string> families;
    std::string clamp_text;
    CLI::App* portfolio =
        app.add_subcommand("portfolio", "closed-form risky-asset weights per utility family");
    add_common(portfolio, portfolio_flags);
    portfolio->add_option("--families", families,
                          "weight families: quadratic:b=<v>, log, sqrt, exp (repeatable)")
        ->required()
        ->delimiter(',');
    CLI::Option* clamp_opt = portfolio->add_option(
        "--clamp", clamp_text, "clamp emitted w_s to <lo>,<hi>; raw value kept in w_s_raw");

    std::string profile = "default";
    CLI::App* validate =
        app.add_subcommand("validate", "run the synthetic oracle and identity suites");
    validate->add_option("--profile", profile, "default|strict")
        ->check(CLI::IsMember({"default", "strict"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (extract->parsed()) {
            ra::RunConfig cfg = to_config(extract_flags);
            cfg.tau = tau;
            if (split_opt->count() > 0) cfg.split_at = split_at;
            ra::cmd_extract(cfg, std::cout);
            return 0;
        }
        if (portfolio->parsed()) {
            ra::RunConfig cfg = to_config(portfolio_flags);
            cfg.families = families;
            if (clamp_opt->count() > 0) cfg.clamp = parse_clamp(clamp_text);
            ra::cmd_portfolio(cfg, std::cout);
            return 0;
        }
        ra::ValidateOptions opts;
        opts.strict = profile == "strict";
        int failures = ra::cmd_validate(opts, std::cout);
        return failures == 0 ? 0 : std::min(failures, 125);
    } catch (const ra::Error& e) {
        std::cerr << ra::format_error_line(e) << std::endl;
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "ERROR INTERNAL: " << e.what() << std::endl;
        return 3;
    }
}
