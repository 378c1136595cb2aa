#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "guesswork/channels.hpp"
#include "guesswork/exponents.hpp"
#include "guesswork/moments.hpp"
#include "guesswork/verify.hpp"

namespace guesswork::cli {

inline constexpr std::string_view kToolName = "guesswork";
inline constexpr std::string_view kToolVersion = "1.0.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitVerifyFailed = 1,
    kExitUsage = 2,
    kExitCapacity = 3,
};

/// Invalid flags or configuration; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { exponent, sweep, exact, simulate, verify };
enum class OutputFormat { csv, json };

struct Grid {
    double start;
    double stop;
    double step;

    /// start, start + step, ... up to stop; the last point snaps onto stop
    /// when it lands within rounding of it.
    [[nodiscard]] std::vector<double> points() const;
};

struct LengthRange {
    int first;
    int last;
};

Grid parse_grid(std::string_view text);
LengthRange parse_length_range(std::string_view text);

struct RunConfig {
    Command command = Command::exponent;
    Scheme scheme = Scheme::single;
    ChannelKind channel = ChannelKind::bec;
    double param = 0.5;
    int m = 1;
    double alpha = 1.0;
    std::optional<LengthRange> n;
    std::optional<Grid> grid;
    bool fine = false;  // verify --grid fine
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::optional<std::string> out;
    OutputFormat format = OutputFormat::csv;
    bool inject_tie_fault = false;
};

nlohmann::json to_json(const RunConfig& config);

/// Applies the fields present in a JSON object onto `config`.
void apply_json(const nlohmann::json& object, RunConfig& config);

struct ResultRow {
    std::string scheme;
    std::string channel_kind;
    double channel_param;
    int m;
    double alpha;
    std::optional<int> n;
    double value;
    std::string method;
    std::optional<double> lambda_star;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::optional<std::uint64_t> seed;
};

ResultRow make_row(const SchemeSpec& scheme, const ChannelSpec& channel, double alpha,
                   const ExponentResult& result);
ResultRow make_row(const MomentRecord& record);

struct MomentRun {
    std::vector<ResultRow> rows;
    std::optional<SlopeReport> slopes;
};

std::vector<ResultRow> cmd_exponent(const RunConfig& config);

/// Rows for single, centralized(m) and decentralized(m) at each grid point,
/// parameter ascending.
std::vector<ResultRow> cmd_sweep(const RunConfig& config);
MomentRun cmd_exact(const RunConfig& config);
MomentRun cmd_simulate(const RunConfig& config);
std::vector<CheckResult> cmd_verify(const RunConfig& config);

/// Shortest text that round-trips at 17 significant digits, independent of
/// the locale.
std::string format_number(double value);

inline constexpr std::string_view kCsvHeader =
    "scheme,channel_kind,channel_param,m,alpha,n,value,method,lambda_star,ci_low,ci_high,seed";

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
nlohmann::json rows_to_json(const RunConfig& config, const std::vector<ResultRow>& rows,
                            const std::optional<SlopeReport>& slopes);

/// Full command-line entry point. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace guesswork::cli
