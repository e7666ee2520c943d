#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "erl/io.hpp"
#include "erl/protocols.hpp"
#include "erl/report.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        erl::write_file(out_path, text);
}

int cmd_validate(const std::string& path, double lambda, double tol, const std::string& format,
                 const std::string& out_path) {
    std::string text;
    try {
        text = erl::read_file(path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    erl::ValidityReport report;
    std::string kind;
    try {
        switch (erl::detect_document_kind(text)) {
            case erl::DocumentKind::State:
                kind = "state";
                report = erl::validate(erl::load_state_json(text), tol);
                break;
            case erl::DocumentKind::Channel:
                kind = "channel";
                report = erl::channel_valid(erl::load_channel_json(text), tol);
                break;
            case erl::DocumentKind::Indicator:
                kind = "indicator";
                report = erl::indicator_valid(erl::load_indicator_json(text), lambda, tol);
                break;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::string body;
    if (format == "json") {
        body = std::string("{\n") + "  \"kind\": \"" + kind + "\",\n" +
               "  \"cupSatisfied\": " + (report.cup_satisfied ? "true" : "false") + ",\n" +
               "  \"minEigenvalue\": " + erl::format_number(report.min_eigenvalue) + ",\n" +
               "  \"saturating\": " + (report.saturating ? "true" : "false") + ",\n" +
               "  \"maxEntSatisfied\": " + (report.max_ent_satisfied ? "true" : "false") + "\n}\n";
    } else if (format == "csv") {
        body = "kind,cup,minEigenvalue,saturating,maxEnt\n" + kind + "," +
               (report.cup_satisfied ? "true" : "false") + "," +
               erl::format_number(report.min_eigenvalue) + "," +
               (report.saturating ? "true" : "false") + "," +
               (report.max_ent_satisfied ? "true" : "false") + "\n";
    } else {
        body = kind + ": " + (report.cup_satisfied ? "valid" : "invalid") +
               (report.saturating ? " (saturating)" : "") +
               ", min eigenvalue = " + erl::format_number(report.min_eigenvalue) + "\n";
    }
    emit(body, out_path);
    return report.cup_satisfied ? kExitPass : kExitFail;
}

std::string report_text(const erl::ScenarioReport& report) {
    std::string out = "scenario " + report.scenario + ": " +
                      (report.pass() ? "PASS" : "FAIL") + "\n";
    for (const auto& check : report.checks)
        out += "  [" + std::string(check.pass ? "ok" : "FAIL") + "] " + check.name +
               " expected=" + erl::format_number(check.expected) +
               " observed=" + erl::format_number(check.observed) +
               " tol=" + erl::format_number(check.tolerance) + "\n";
    for (const auto& entry : report.engine_comparison)
        out += "  [z " + std::string(std::abs(entry.z) < report.z_threshold ? "ok" : "FAIL") +
               "] " + entry.name + " z=" + erl::format_number(entry.z) + "\n";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Twin-engine Gaussian phase-space simulator"};
    app.require_subcommand(1);

    // validate
    std::string v_path, v_format = "text", v_out;
    double v_lambda = 1.0, v_tol = 1e-9;
    auto* validate = app.add_subcommand("validate", "Check a state/channel/indicator file");
    validate->add_option("path", v_path, "JSON document")->required();
    validate->add_option("--lambda", v_lambda, "lambda for indicator validation");
    validate->add_option("--tol", v_tol, "eigenvalue tolerance")->check(CLI::PositiveNumber);
    validate->add_option("--format", v_format)->check(CLI::IsMember({"text", "json", "csv"}));
    validate->add_option("--out", v_out, "write the report here instead of stdout");

    // scenario
    std::string s_name, s_format = "text", s_out, s_input, s_target;
    erl::ScenarioOptions opt;
    long long s_seed = 1;
    auto* scenario = app.add_subcommand("scenario", "Run one protocol scenario");
    scenario->add_option("name", s_name, "scenario name")->required();
    scenario->add_option("--r", opt.r, "squeezing regularization");
    scenario->add_option("--theta", opt.theta, "quadrature angle");
    scenario->add_option("--lambda", opt.lambda)->check(CLI::PositiveNumber);
    scenario->add_option("--N", opt.sample_count, "sample count")->check(CLI::PositiveNumber);
    scenario->add_option("--seed", s_seed);
    scenario->add_option("--cap", opt.conjugate_cap, "conjugate variance cap (units of lambda)");
    scenario->add_option("--chi-t", opt.chi_t);
    scenario->add_option("--probe-r", opt.probe_r);
    scenario->add_option("--trials", opt.trials);
    scenario->add_option("--q0", opt.q0);
    scenario->add_option("--p0", opt.p0);
    scenario->add_option("--dq", opt.dq);
    scenario->add_option("--dp", opt.dp);
    scenario->add_option("--dq-ind", opt.dq_ind);
    scenario->add_option("--dp-ind", opt.dp_ind);
    scenario->add_option("--deviation-tol", opt.deviation_tol);
    scenario->add_option("--input", s_input, "input state JSON (teleport/noncommute)");
    scenario->add_option("--target", s_target, "target state JSON (swap)");
    scenario->add_option("--tol", opt.deviation_tol, "alias of --deviation-tol");
    scenario->add_option("--format", s_format)->check(CLI::IsMember({"text", "json", "csv"}));
    scenario->add_option("--out", s_out);

    // equivalence
    std::string e_format = "text", e_out, e_only;
    int e_n = 100000;
    std::vector<long long> e_seeds = {1, 2, 3};
    double e_threshold = 4.0;
    bool e_negative = false;
    auto* equivalence = app.add_subcommand("equivalence", "Analytic vs sampled engine sweep");
    equivalence->add_option("--N", e_n)->check(CLI::PositiveNumber);
    equivalence->add_option("--seeds", e_seeds, "seeds for the sweep");
    equivalence->add_option("--threshold", e_threshold)->check(CLI::PositiveNumber);
    equivalence->add_flag("--negative-control", e_negative,
                          "add a corrupted-channel run that must fail");
    equivalence->add_option("--only", e_only, "comma-separated scenario subset");
    equivalence->add_option("--format", e_format)->check(CLI::IsMember({"text", "json", "csv"}));
    equivalence->add_option("--out", e_out);

    // sample
    std::string smp_state, smp_out, smp_csv;
    int smp_n = 1000;
    long long smp_seed = 1;
    auto* sample = app.add_subcommand("sample", "Dump ontic samples of a state");
    sample->add_option("--state", smp_state, "state JSON")->required();
    sample->add_option("--N", smp_n)->check(CLI::PositiveNumber);
    sample->add_option("--seed", smp_seed);
    sample->add_option("--out", smp_out, "binary dump path");
    sample->add_option("--csv", smp_csv, "CSV dump path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(v_path, v_lambda, v_tol, v_format, v_out);

        if (scenario->parsed()) {
            opt.seed = static_cast<std::uint64_t>(s_seed);
            if (!s_input.empty()) opt.input = erl::load_state_json(erl::read_file(s_input));
            if (!s_target.empty()) opt.target = erl::load_state_json(erl::read_file(s_target));
            const erl::ScenarioReport report = erl::run_scenario(s_name, opt);
            if (s_format == "json")
                emit(erl::to_json(report) + "\n", s_out);
            else if (s_format == "csv")
                emit(erl::to_csv_header() + erl::to_csv(report), s_out);
            else
                emit(report_text(report), s_out);
            return report.pass() ? kExitPass : kExitFail;
        }

        if (equivalence->parsed()) {
            std::vector<std::uint64_t> seeds;
            for (long long s : e_seeds) seeds.push_back(static_cast<std::uint64_t>(s));
            std::vector<std::string> only;
            if (!e_only.empty()) {
                std::size_t start = 0;
                while (start <= e_only.size()) {
                    const std::size_t comma = e_only.find(',', start);
                    only.push_back(e_only.substr(
                        start, comma == std::string::npos ? std::string::npos : comma - start));
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
            }
            const erl::EquivalenceSummary summary =
                erl::run_equivalence_suite(e_n, seeds, e_threshold, e_negative, only);
            std::string body;
            if (e_format == "json") {
                body = "[\n";
                for (std::size_t i = 0; i < summary.reports.size(); ++i)
                    body += erl::to_json(summary.reports[i]) +
                            (i + 1 < summary.reports.size() ? ",\n" : "\n");
                body += "]\n";
            } else if (e_format == "csv") {
                body = erl::to_csv_header();
                for (const auto& report : summary.reports) body += erl::to_csv(report);
            } else {
                for (const auto& report : summary.reports) {
                    double worst = 0.0;
                    for (const auto& entry : report.engine_comparison)
                        worst = std::max(worst, std::abs(entry.z));
                    body += report.scenario + " seed-row: worst |z| = " +
                            erl::format_number(worst) + " -> " +
                            (report.pass() ? "pass" : "fail") + "\n";
                }
                body += "overall: " + std::string(summary.pass() ? "PASS" : "FAIL") +
                        " (worst |z| = " + erl::format_number(summary.worst_abs_z()) + " at " +
                        summary.worst_entry() + ")\n";
            }
            emit(body, e_out);
            return summary.pass() ? kExitPass : kExitFail;
        }

        if (sample->parsed()) {
            const erl::GaussianState state = erl::load_state_json(erl::read_file(smp_state));
            const erl::OnticSampleSet set =
                erl::sample_states(state, smp_n, static_cast<std::uint64_t>(smp_seed));
            if (!smp_out.empty()) erl::write_samples_binary(smp_out, set);
            if (!smp_csv.empty()) erl::write_file(smp_csv, erl::outcomes_to_csv(set.points));
            if (smp_out.empty() && smp_csv.empty()) std::cout << erl::outcomes_to_csv(set.points);
            return kExitPass;
        }
    } catch (const erl::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
