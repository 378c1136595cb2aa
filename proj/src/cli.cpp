#include "guesswork/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

namespace guesswork::cli {

namespace {

using nlohmann::json;

double parse_double(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value)) {
        throw UsageError("invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

int parse_int(std::string_view text, std::string_view what) {
    int value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw UsageError("invalid integer for " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

std::string_view to_string(Command command) {
    switch (command) {
        case Command::exponent: return "exponent";
        case Command::sweep: return "sweep";
        case Command::exact: return "exact";
        case Command::simulate: return "simulate";
        case Command::verify: return "verify";
    }
    return "?";
}

Command parse_command(std::string_view text) {
    for (Command c : {Command::exponent, Command::sweep, Command::exact, Command::simulate,
                      Command::verify}) {
        if (to_string(c) == text) return c;
    }
    throw UsageError("unknown command '" + std::string(text) + "'");
}

OutputFormat parse_format(std::string_view text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw UsageError("unknown format '" + std::string(text) + "' (expected csv or json)");
}

std::string grid_text(const Grid& g) {
    return format_number(g.start) + ":" + format_number(g.stop) + ":" + format_number(g.step);
}

SchemeSpec scheme_of(const RunConfig& config) {
    if (config.scheme == Scheme::single && config.m != 1) {
        throw UsageError("--scheme single requires --m 1");
    }
    return {config.scheme, AgentCount(config.m)};
}

const LengthRange& require_lengths(const RunConfig& config) {
    if (!config.n) throw UsageError("--n is required for this command");
    return *config.n;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

MomentRun collect_moments(const RunConfig& config,
                          const std::function<MomentRecord(const SchemeSpec&, const ChannelSpec&,
                                                           MomentOrder, int)>& compute) {
    const SchemeSpec scheme = scheme_of(config);
    const ChannelSpec channel(config.channel, config.param);
    const MomentOrder alpha(config.alpha);
    const LengthRange& range = require_lengths(config);

    std::vector<MomentRecord> records;
    for (int n = range.first; n <= range.last; ++n) records.push_back(compute(scheme, channel, alpha, n));

    MomentRun run;
    for (const MomentRecord& r : records) run.rows.push_back(make_row(r));
    if (records.size() >= 2) run.slopes = slope_report(records, exponent(scheme, channel, alpha));
    return run;
}

}  // namespace

std::vector<double> Grid::points() const {
    std::vector<double> out;
    const double span = (stop - start) / step;
    const auto last = static_cast<long>(std::floor(span + 1e-9));
    for (long i = 0; i <= last; ++i) {
        double p = start + static_cast<double>(i) * step;
        if (std::abs(p - stop) <= 1e-9 * step) p = stop;
        out.push_back(p);
    }
    return out;
}

Grid parse_grid(std::string_view text) {
    const auto first = text.find(':');
    const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
    if (second == std::string_view::npos) throw UsageError("--grid expects start:stop:step");
    Grid g{parse_double(text.substr(0, first), "grid start"),
           parse_double(text.substr(first + 1, second - first - 1), "grid stop"),
           parse_double(text.substr(second + 1), "grid step")};
    if (!(g.step > 0.0)) throw UsageError("grid step must be positive");
    if (g.stop < g.start) throw UsageError("grid range is empty");
    return g;
}

LengthRange parse_length_range(std::string_view text) {
    const auto colon = text.find(':');
    LengthRange r{};
    if (colon == std::string_view::npos) {
        r.first = r.last = parse_int(text, "n");
    } else {
        r.first = parse_int(text.substr(0, colon), "n");
        r.last = parse_int(text.substr(colon + 1), "n");
    }
    if (r.first < 1 || r.last < r.first) throw UsageError("--n range must satisfy 1 <= a <= b");
    return r;
}

json to_json(const RunConfig& config) {
    json j;
    j["command"] = to_string(config.command);
    j["scheme"] = to_string(config.scheme);
    j["channel"] = to_string(config.channel);
    j["param"] = config.param;
    j["m"] = config.m;
    j["alpha"] = config.alpha;
    j["n"] = config.n ? json(std::to_string(config.n->first) + ":" + std::to_string(config.n->last))
                      : json(nullptr);
    if (config.command == Command::verify) {
        j["grid"] = config.fine ? "fine" : "coarse";
    } else {
        j["grid"] = config.grid ? json(grid_text(*config.grid)) : json(nullptr);
    }
    j["trials"] = config.trials;
    j["seed"] = config.seed;
    j["out"] = config.out ? json(*config.out) : json(nullptr);
    j["format"] = config.format == OutputFormat::csv ? "csv" : "json";
    return j;
}

void apply_json(const json& object, RunConfig& config) {
    if (!object.is_object()) throw UsageError("config file must hold a JSON object");
    try {
        if (object.contains("command")) config.command = parse_command(object["command"].get<std::string>());
        if (object.contains("scheme")) config.scheme = parse_scheme(object["scheme"].get<std::string>());
        if (object.contains("channel")) config.channel = parse_channel_kind(object["channel"].get<std::string>());
        if (object.contains("param")) config.param = object["param"].get<double>();
        if (object.contains("m")) config.m = object["m"].get<int>();
        if (object.contains("alpha")) config.alpha = object["alpha"].get<double>();
        if (object.contains("n") && !object["n"].is_null()) {
            const json& n = object["n"];
            config.n = n.is_string() ? parse_length_range(n.get<std::string>())
                                     : parse_length_range(std::to_string(n.get<int>()));
        }
        if (object.contains("grid") && !object["grid"].is_null()) {
            const std::string g = object["grid"].get<std::string>();
            if (g == "fine" || g == "coarse") {
                config.fine = g == "fine";
            } else {
                config.grid = parse_grid(g);
            }
        }
        if (object.contains("trials")) config.trials = object["trials"].get<std::uint64_t>();
        if (object.contains("seed")) config.seed = object["seed"].get<std::uint64_t>();
        if (object.contains("out") && !object["out"].is_null()) config.out = object["out"].get<std::string>();
        if (object.contains("format")) config.format = parse_format(object["format"].get<std::string>());
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad config file field: ") + e.what());
    }
}

ResultRow make_row(const SchemeSpec& scheme, const ChannelSpec& channel, double alpha,
                   const ExponentResult& result) {
    return {std::string(to_string(scheme.mode())), std::string(to_string(channel.kind())),
            channel.param().value(), scheme.m(), alpha, std::nullopt, result.value,
            std::string(to_string(result.method)), result.lambda_star, std::nullopt, std::nullopt,
            std::nullopt};
}

ResultRow make_row(const MomentRecord& record) {
    return {std::string(to_string(record.scheme.mode())),
            std::string(to_string(record.channel.kind())),
            record.channel.param().value(),
            record.scheme.m(),
            record.alpha,
            record.n,
            record.value,
            std::string(to_string(record.method)),
            std::nullopt,
            record.ci_low,
            record.ci_high,
            record.seed};
}

std::vector<ResultRow> cmd_exponent(const RunConfig& config) {
    const SchemeSpec scheme = scheme_of(config);
    const MomentOrder alpha(config.alpha);
    const std::vector<double> params = config.grid ? config.grid->points() : std::vector<double>{config.param};
    std::vector<ResultRow> rows;
    for (double p : params) {
        const ChannelSpec channel(config.channel, p);
        rows.push_back(make_row(scheme, channel, config.alpha, exponent(scheme, channel, alpha)));
    }
    return rows;
}

std::vector<ResultRow> cmd_sweep(const RunConfig& config) {
    if (!config.grid) throw UsageError("sweep needs --grid start:stop:step");
    const MomentOrder alpha(config.alpha);
    const SchemeSpec schemes[] = {SchemeSpec::single(), SchemeSpec::centralized(config.m),
                                  SchemeSpec::decentralized(config.m)};
    std::vector<ResultRow> rows;
    for (double p : config.grid->points()) {
        const ChannelSpec channel(config.channel, p);
        for (const SchemeSpec& scheme : schemes) {
            rows.push_back(make_row(scheme, channel, config.alpha, exponent(scheme, channel, alpha)));
        }
    }
    return rows;
}

MomentRun cmd_exact(const RunConfig& config) {
    return collect_moments(config, [](const SchemeSpec& s, const ChannelSpec& c, MomentOrder a, int n) {
        return exact_moment(s, c, a, n);
    });
}

MomentRun cmd_simulate(const RunConfig& config) {
    if (config.trials < 1) throw UsageError("simulate needs --trials >= 1");
    return collect_moments(config, [&](const SchemeSpec& s, const ChannelSpec& c, MomentOrder a, int n) {
        return mc_estimate_moment(s, c, a, n, config.trials, config.seed);
    });
}

std::vector<CheckResult> cmd_verify(const RunConfig& config) {
    VerifyOptions options;
    options.density = config.fine ? 4 : 1;
    if (config.inject_tie_fault) options.oracle_tie = TieBreak::descending_key;
    return run_verification(options);
}

std::string format_number(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
    return {buffer, result.ptr};
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
    out << kCsvHeader << '\n';
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (const ResultRow& r : rows) {
        out << r.scheme << ',' << r.channel_kind << ',' << format_number(r.channel_param) << ',' << r.m
            << ',' << format_number(r.alpha) << ',' << (r.n ? std::to_string(*r.n) : std::string())
            << ',' << format_number(r.value) << ',' << r.method << ',' << opt(r.lambda_star) << ','
            << opt(r.ci_low) << ',' << opt(r.ci_high) << ','
            << (r.seed ? std::to_string(*r.seed) : std::string()) << '\n';
    }
}

json rows_to_json(const RunConfig& config, const std::vector<ResultRow>& rows,
                  const std::optional<SlopeReport>& slopes) {
    json doc;
    doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    doc["config"] = to_json(config);
    doc["rows"] = json::array();
    for (const ResultRow& r : rows) {
        doc["rows"].push_back({{"scheme", r.scheme},
                               {"channel_kind", r.channel_kind},
                               {"channel_param", r.channel_param},
                               {"m", r.m},
                               {"alpha", r.alpha},
                               {"n", r.n ? json(*r.n) : json(nullptr)},
                               {"value", r.value},
                               {"method", r.method},
                               {"lambda_star", optional_number(r.lambda_star)},
                               {"ci_low", optional_number(r.ci_low)},
                               {"ci_high", optional_number(r.ci_high)},
                               {"seed", r.seed ? json(*r.seed) : json(nullptr)}});
    }
    if (slopes) {
        json points = json::array();
        for (const SlopePoint& p : slopes->points) {
            points.push_back({{"n", p.n},
                              {"log2_value", p.log2_value},
                              {"slope", optional_number(p.slope)},
                              {"distance_to_analytic", optional_number(p.distance_to_analytic)}});
        }
        doc["slope_report"] = {{"analytic_target", slopes->analytic_target},
                               {"nondecreasing", slopes->nondecreasing},
                               {"nonincreasing", slopes->nonincreasing},
                               {"points", points}};
    }
    return doc;
}

namespace {

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
    if (!config.out) {
        out << text;
        return;
    }
    std::ofstream file(*config.out, std::ios::binary);
    if (!file) throw UsageError("cannot open output file '" + *config.out + "'");
    file << text;
}

int execute(const RunConfig& config, std::ostream& out) {
    if (config.command == Command::verify) {
        const std::vector<CheckResult> checks = cmd_verify(config);
        bool all = true;
        json summary = json::array();
        std::ostringstream human;
        for (const CheckResult& c : checks) {
            all = all && c.passed;
            human << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
            summary.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        }
        human << (all ? "all checks passed" : "verification FAILED") << '\n';
        const json doc = {{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
                          {"config", to_json(config)},
                          {"passed", all},
                          {"checks", summary}};
        if (config.format == OutputFormat::json) {
            emit(config, doc.dump(2) + "\n", out);
        } else {
            out << human.str();
            if (config.out) emit(config, doc.dump(2) + "\n", out);
        }
        return all ? kExitOk : kExitVerifyFailed;
    }

    std::vector<ResultRow> rows;
    std::optional<SlopeReport> slopes;
    switch (config.command) {
        case Command::exponent: rows = cmd_exponent(config); break;
        case Command::sweep: rows = cmd_sweep(config); break;
        case Command::exact: {
            MomentRun run = cmd_exact(config);
            rows = std::move(run.rows);
            slopes = std::move(run.slopes);
            break;
        }
        case Command::simulate: {
            MomentRun run = cmd_simulate(config);
            rows = std::move(run.rows);
            slopes = std::move(run.slopes);
            break;
        }
        case Command::verify: break;
    }
    if (config.format == OutputFormat::json) {
        emit(config, rows_to_json(config, rows, slopes).dump(2) + "\n", out);
    } else {
        std::ostringstream text;
        write_csv(rows, text);
        emit(config, text.str(), out);
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Guesswork exponents and moments for multi-agent attacks with BEC/BSC side information",
                 std::string(kToolName)};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", std::string(kToolVersion));

    std::string config_path, scheme, channel, n_text, grid, format, out_path;
    double param = 0.0;
    double alpha = 0.0;
    int m = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    bool fault = false;

    app.add_option("--config", config_path, "JSON file with RunConfig fields; flags override it");
    auto* o_scheme = app.add_option("--scheme", scheme, "single | centralized | decentralized");
    auto* o_channel = app.add_option("--channel", channel, "bec | bsc");
    auto* o_param = app.add_option("--param", param, "erasure (BEC) or flip (BSC) probability");
    auto* o_m = app.add_option("--m", m, "number of agents");
    auto* o_alpha = app.add_option("--alpha", alpha, "moment order");
    auto* o_n = app.add_option("--n", n_text, "string length n or range a:b");
    auto* o_grid = app.add_option("--grid", grid, "start:stop:step (verify: coarse | fine)");
    auto* o_trials = app.add_option("--trials", trials, "Monte Carlo trials");
    auto* o_seed = app.add_option("--seed", seed, "Monte Carlo seed");
    auto* o_out = app.add_option("--out", out_path, "output file (default stdout)");
    auto* o_format = app.add_option("--format", format, "csv | json");
    app.add_flag("--inject-fault", fault, "verify only: flip the oracle tie-break (negative control)");

    const std::pair<Command, const char*> commands[] = {
        {Command::exponent, "analytic exponent at one parameter (or over --grid)"},
        {Command::sweep, "single/centralized/decentralized exponents over --grid"},
        {Command::exact, "exact finite-n moments E[G^alpha]"},
        {Command::simulate, "Monte Carlo moments with bootstrap intervals"},
        {Command::verify, "run the cross-check suites"},
    };
    for (const auto& [command, help] : commands) {
        app.add_subcommand(std::string(to_string(command)), help)->fallthrough();
    }

    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back(kToolName);
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        RunConfig config;
        if (!config_path.empty()) {
            std::ifstream file(config_path);
            if (!file) throw UsageError("cannot read config file '" + config_path + "'");
            json object;
            try {
                object = json::parse(file);
            } catch (const json::exception& e) {
                throw UsageError(std::string("config file is not valid JSON: ") + e.what());
            }
            apply_json(object, config);
        }
        config.command = parse_command(app.get_subcommands().front()->get_name());
        if (o_scheme->count()) config.scheme = parse_scheme(scheme);
        if (o_channel->count()) config.channel = parse_channel_kind(channel);
        if (o_param->count()) config.param = param;
        if (o_m->count()) config.m = m;
        if (o_alpha->count()) config.alpha = alpha;
        if (o_n->count()) config.n = parse_length_range(n_text);
        if (o_grid->count()) {
            if (config.command == Command::verify) {
                if (grid != "fine" && grid != "coarse") throw UsageError("verify --grid takes coarse or fine");
                config.fine = grid == "fine";
            } else {
                config.grid = parse_grid(grid);
            }
        }
        if (o_trials->count()) config.trials = trials;
        if (o_seed->count()) config.seed = seed;
        if (o_out->count()) config.out = out_path;
        if (o_format->count()) config.format = parse_format(format);
        config.inject_tie_fault = fault;
        return execute(config, out);
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace guesswork::cli
