#include "erl/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

namespace erl {

void ScenarioReport::add_parameter(const std::string& name, double value) {
    parameters.emplace_back(name, value);
}

void ScenarioReport::add_statistic(const std::string& name, double value) {
    statistics.emplace_back(name, value);
}

void ScenarioReport::check_close(const std::string& name, double expected, double observed,
                                 double tolerance, const std::string& provenance) {
    checks.push_back({name, expected, observed, tolerance,
                      std::abs(expected - observed) <= tolerance, provenance});
}

void ScenarioReport::check_below(const std::string& name, double bound, double observed,
                                 const std::string& provenance) {
    checks.push_back({name, bound, observed, 0.0, observed <= bound, provenance});
}

void ScenarioReport::check_flag(const std::string& name, bool observed,
                                const std::string& provenance) {
    checks.push_back({name, 1.0, observed ? 1.0 : 0.0, 0.0, observed, provenance});
}

void ScenarioReport::compare(const std::string& name, double analytic, double sampled,
                             double std_error) {
    double z;
    if (std_error > 0.0 && std::isfinite(std_error)) {
        z = (sampled - analytic) / std_error;
    } else {
        const double scale = std::max({1.0, std::abs(analytic), std::abs(sampled)});
        z = std::abs(sampled - analytic) <= 1e-12 * scale
                ? 0.0
                : std::numeric_limits<double>::infinity();
    }
    engine_comparison.push_back({name, analytic, sampled, std_error, z});
}

bool ScenarioReport::pass() const {
    for (const auto& check : checks)
        if (!check.pass) return false;
    for (const auto& entry : engine_comparison)
        if (!(std::abs(entry.z) < z_threshold)) return false;
    return true;
}

std::string format_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

std::string to_json(const ScenarioReport& report) {
    nlohmann::ordered_json root;
    root["scenario"] = report.scenario;
    root["pass"] = report.pass();
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [name, value] : report.parameters) params[name] = value;
    root["parameters"] = params;
    nlohmann::ordered_json stats = nlohmann::ordered_json::object();
    for (const auto& [name, value] : report.statistics) stats[name] = value;
    root["statistics"] = stats;
    root["checks"] = nlohmann::ordered_json::array();
    for (const auto& check : report.checks)
        root["checks"].push_back({{"name", check.name},
                                  {"expected", check.expected},
                                  {"observed", check.observed},
                                  {"tolerance", check.tolerance},
                                  {"pass", check.pass},
                                  {"provenance", check.provenance}});
    root["engine_comparison"] = nlohmann::ordered_json::array();
    for (const auto& entry : report.engine_comparison)
        root["engine_comparison"].push_back({{"name", entry.name},
                                             {"analytic", entry.analytic},
                                             {"sampled", entry.sampled},
                                             {"std_error", entry.std_error},
                                             {"z", entry.z}});
    root["z_threshold"] = report.z_threshold;
    return root.dump(2);
}

std::string to_csv_header() { return "scenario,check,expected,observed,tolerance,pass\n"; }

std::string to_csv(const ScenarioReport& report) {
    std::string out;
    for (const auto& check : report.checks) {
        out += report.scenario + "," + check.name + "," + format_number(check.expected) + "," +
               format_number(check.observed) + "," + format_number(check.tolerance) + "," +
               (check.pass ? "true" : "false") + "\n";
    }
    for (const auto& entry : report.engine_comparison) {
        const bool pass = std::abs(entry.z) < report.z_threshold;
        out += report.scenario + ",z:" + entry.name + ",0," + format_number(entry.z) + "," +
               format_number(report.z_threshold) + "," + (pass ? "true" : "false") + "\n";
    }
    return out;
}

}  // namespace erl
