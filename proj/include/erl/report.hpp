#pragma once

#include <string>
#include <utility>
#include <vector>

namespace erl {

struct Check {
    std::string name;
    double expected = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string provenance;  // "analytic" or "sampled"
};

struct ZScore {
    std::string name;
    double analytic = 0.0;
    double sampled = 0.0;
    double std_error = 0.0;
    double z = 0.0;
};

// Structured output of a protocol run. `pass()` is the conjunction of every
// check plus every engine-comparison z staying under the threshold.
struct ScenarioReport {
    std::string scenario;
    std::vector<std::pair<std::string, double>> parameters;
    std::vector<std::pair<std::string, double>> statistics;
    std::vector<Check> checks;
    std::vector<ZScore> engine_comparison;
    double z_threshold = 4.0;

    void add_parameter(const std::string& name, double value);
    void add_statistic(const std::string& name, double value);

    /// pass iff |expected - observed| <= tolerance
    void check_close(const std::string& name, double expected, double observed, double tolerance,
                     const std::string& provenance = "analytic");
    /// pass iff observed <= bound
    void check_below(const std::string& name, double bound, double observed,
                     const std::string& provenance = "analytic");
    /// pass iff observed is true; expected column carries 1
    void check_flag(const std::string& name, bool observed,
                    const std::string& provenance = "analytic");

    /// Engine comparison entry; z = (sampled - analytic) / se. A vanishing
    /// standard error demands exact agreement.
    void compare(const std::string& name, double analytic, double sampled, double std_error);

    bool pass() const;
};

std::string to_json(const ScenarioReport& report);
std::string to_csv(const ScenarioReport& report);
std::string to_csv_header();

/// Formats doubles the same way everywhere so CLI output is byte-stable.
std::string format_number(double value);

}  // namespace erl
