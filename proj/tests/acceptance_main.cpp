// Acceptance suite: every criterion pinned to its tolerance, one verdict line
// each, nonzero exit on any failure. Runs the oracles (rejection sampling,
// quadrature) against the analytic pipeline at full scale.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "erl/channel.hpp"
#include "erl/measurement.hpp"
#include "erl/protocols.hpp"
#include "erl/rng.hpp"
#include "erl/sampler.hpp"
#include "erl/state.hpp"
#include "oracles.hpp"

using namespace erl;

namespace {

int failures = 0;

struct Criterion {
    std::string label;
    double time_limit_s;
    std::function<bool(std::string&)> body;
};

void run(const Criterion& criterion) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
        ok = criterion.body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criterion.time_limit_s) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
    }
    std::printf("[%s] %s (%.2f s%s%s)\n", ok ? "PASS" : "FAIL", criterion.label.c_str(), elapsed,
                detail.empty() ? "" : ": ", detail.c_str());
    if (!ok) ++failures;
}

GaussianChannel perturbed_invalid_channel(int modes, std::uint64_t seed) {
    GaussianChannel channel = random_valid_channel(modes, seed);
    double shift = 0.05;
    for (int attempt = 0; attempt < 60; ++attempt) {
        const GaussianChannel candidate(
            channel.x, channel.noise - shift * Eigen::MatrixXd::Identity(channel.dim(), channel.dim()),
            channel.delta, channel.lambda);
        if (channel_valid(candidate).min_eigenvalue < -0.02) return candidate;
        shift *= 1.6;
    }
    throw NumericError("no invalid perturbation found");
}

// ---- criterion bodies ----

bool cup_checker(std::string& detail) {
    const double lambda = 1.0;
    const auto vacuum = validate(vacuum_state(1, lambda), 1e-10);
    if (!(vacuum.cup_satisfied && vacuum.saturating && std::abs(vacuum.min_eigenvalue) <= 1e-10)) {
        detail = "boundary state misjudged";
        return false;
    }
    const auto narrow = validate(
        GaussianState(lambda, Eigen::VectorXd::Zero(2), 0.25 * lambda * Eigen::MatrixXd::Identity(2, 2)),
        1e-10);
    if (narrow.cup_satisfied || std::abs(narrow.min_eigenvalue + 0.5 * lambda) > 1e-10) {
        detail = "sub-floor state misjudged";
        return false;
    }
    for (double s : {0.1, 1.0, 10.0}) {
        Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2, 2);
        v.diagonal() << s * s, lambda * lambda / (4.0 * s * s);
        const auto report = validate(GaussianState(lambda, Eigen::VectorXd::Zero(2), v), 1e-10);
        if (!(report.cup_satisfied && report.saturating)) {
            detail = "balanced-squeeze state not saturating at s=" + std::to_string(s);
            return false;
        }
    }
    return true;
}

bool marginal_sweep(std::string& detail) {
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const GaussianState state = random_valid_state(2, 90000 + trial);
        const GaussianState moved = transform(state, random_symplectic(2, 91000 + trial));
        if (!validate(moved, 1e-8).cup_satisfied) {
            detail = "transformed state invalid at trial " + std::to_string(trial);
            return false;
        }
        for (int m : {0, 1}) {
            const auto report = validate(marginal(moved, {m}), 1e-8);
            worst = std::min(worst, report.min_eigenvalue);
            if (!report.cup_satisfied) {
                detail = "marginal violation at trial " + std::to_string(trial);
                return false;
            }
        }
    }
    detail = "worst marginal min eigenvalue " + format_number(worst);
    return true;
}

bool conditioning_validity(std::string& detail) {
    // valid-through-conditioning sweep
    for (int trial = 0; trial < 300; ++trial) {
        const bool wide = trial % 3 == 0;
        const GaussianState state =
            wide ? random_valid_state(3, 70000 + trial) : random_valid_state(2, 70000 + trial);
        const std::vector<int> targets = wide ? std::vector<int>{0, 1} : std::vector<int>{0};
        const int m = static_cast<int>(targets.size());
        const GaussianState shape = random_valid_state(m, 71000 + trial);
        const GaussianIndicator probe(targets, Eigen::MatrixXd::Identity(2 * m, 2 * m),
                                      shape.means(), shape.moments());
        const auto record = condition(state, probe, Eigen::VectorXd::Zero(2 * m));
        if (!validate(record.posterior, 1e-8).cup_satisfied) {
            detail = "posterior violation at trial " + std::to_string(trial);
            return false;
        }
    }

    // constructed counterexample from an invalid response function
    const GaussianIndicator narrow({0}, Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2),
                                   0.25 * Eigen::MatrixXd::Identity(2, 2));
    const auto record = condition(epr_state(8.0, 1.0), narrow, Eigen::Vector2d(0, 0));
    if (validate(record.posterior).min_eigenvalue > -1e-3) {
        detail = "invalid indicator failed to break the bound";
        return false;
    }

    // rejection-sampling oracle on three two-mode cases, 1e6 proposals each
    struct Case {
        GaussianState state;
        GaussianIndicator probe;
        Eigen::Vector2d outcome;
    };
    const SymplecticMap mixer = make_beamsplitter(0.6, 0, 1, 2);
    std::vector<Case> cases;
    cases.push_back({epr_state(0.8, 1.0), heterodyne_indicator(0, 1.0), {0.3, -0.2}});
    {
        // outcome near the measured marginal's mean keeps the acceptance rate sane
        const GaussianState state = random_valid_state(2, 424243);
        const Eigen::Vector2d mean_a = state.means().head(2);
        cases.push_back({state, quadrature_indicator(0, 0.4, 0.8, 1.0),
                         mean_a + Eigen::Vector2d(0.4, -0.3)});
    }
    cases.push_back({transform(tensor(quadrature_state(0.0, 0.4, 1.0, 1.0),
                                      quadrature_state(1.2, -0.3, 0.8, 1.0)),
                               mixer),
                     heterodyne_indicator(1, 1.0),
                     {-0.4, 0.6}});
    double worst_rel = 0.0;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const auto rec = condition(cases[c].state, cases[c].probe, cases[c].outcome);
        const auto mc =
            oracle::rejection_condition(cases[c].state, cases[c].probe, cases[c].outcome,
                                        1000000, 515151 + 7 * c);
        const double scale = rec.posterior.moments().cwiseAbs().maxCoeff();
        const Eigen::MatrixXd diff = mc.moments - rec.posterior.moments();
        for (int i = 0; i < diff.rows(); ++i)
            for (int j = 0; j < diff.cols(); ++j) {
                const double denom = std::max(std::abs(rec.posterior.moments()(i, j)), scale);
                worst_rel = std::max(worst_rel, std::abs(diff(i, j)) / denom);
            }
        if (mc.accepted < 20000) {
            detail = "oracle acceptance too low in case " + std::to_string(c);
            return false;
        }
    }
    detail = "worst oracle deviation " + format_number(worst_rel) + " (rel)";
    return worst_rel < 0.02;
}

bool choi_roundtrip(std::string& detail) {
    // validity transfers both ways across 300 channels at r = 8
    for (int trial = 0; trial < 150; ++trial) {
        const GaussianChannel good = random_valid_channel(1, 50000 + 2 * trial);
        if (!validate(choi_state(good, 8.0), 1e-8).cup_satisfied) {
            detail = "valid channel with invalid bipartite image";
            return false;
        }
        const GaussianChannel bad = perturbed_invalid_channel(1, 50001 + 2 * trial);
        if (validate(choi_state(bad, 8.0), 1e-8).cup_satisfied) {
            detail = "invalid channel with valid bipartite image";
            return false;
        }
    }
    // recovery accuracy
    double worst = 0.0;
    for (int trial = 0; trial < 60; ++trial) {
        const GaussianChannel channel = random_valid_channel(1, 52000 + trial);
        const GaussianChannel back = channel_from_choi(choi_state(channel, 8.0), 8.0);
        worst = std::max(worst, (back.x - channel.x).cwiseAbs().maxCoeff());
        worst = std::max(worst, (back.noise - channel.noise).cwiseAbs().maxCoeff());
    }
    if (worst >= 1e-5) {
        detail = "recovery error " + format_number(worst);
        return false;
    }
    // diagonal-block identity across regularizations
    const std::complex<double> imag_unit(0.0, 1.0);
    for (double r : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const Eigen::MatrixXcd sigma = imag_unit * build_sigma(1).cast<std::complex<double>>();
        const Eigen::MatrixXcd plus = epr_d_plus(r, 1.0).cast<std::complex<double>>();
        const Eigen::MatrixXcd minus = epr_d_minus(r, 1.0).cast<std::complex<double>>();
        const Eigen::MatrixXcd residual =
            plus - minus * (plus + sigma).inverse() * minus + sigma;
        if (residual.cwiseAbs().maxCoeff() > 1e-8) {
            detail = "block identity fails at r=" + std::to_string(r);
            return false;
        }
    }
    detail = "recovery error " + format_number(worst);
    return true;
}

bool equivalence_harness(std::string& detail) {
    const EquivalenceSummary summary =
        run_equivalence_suite(100000, {1, 2, 3}, 4.0, true);
    detail = "worst |z| = " + format_number(summary.worst_abs_z()) + " at " +
             summary.worst_entry();
    bool control_seen = false;
    for (const auto& report : summary.reports) {
        const bool control = report.scenario.ends_with("-corrupted");
        control_seen = control_seen || control;
        if (!control && !report.pass()) {
            detail += "; scenario " + report.scenario + " failed";
            return false;
        }
        if (control && report.pass()) {
            detail += "; negative control passed unexpectedly";
            return false;
        }
    }
    return control_seen && summary.pass();
}

bool teleport_convergence(std::string& detail) {
    double previous = 1e100;
    for (double r : {1.0, 2.0, 4.0, 8.0}) {
        const ScenarioReport report = run_teleportation(vacuum_state(1, 1.0), r, 100000, 1);
        if (!report.pass()) {
            detail = "teleport run failed at r=" + std::to_string(r);
            return false;
        }
        double excess = 0.0, fidelity = 0.0;
        for (const auto& [name, value] : report.statistics) {
            if (name == "excess-noise-trace") excess = value;
            if (name == "fidelity") fidelity = value;
        }
        if (excess >= previous) {
            detail = "excess noise not strictly decreasing at r=" + std::to_string(r);
            return false;
        }
        previous = excess;
        if (r >= 8.0 && fidelity <= 0.999) {
            detail = "fidelity " + format_number(fidelity) + " at r=8";
            return false;
        }
        if (r >= 8.0) detail = "fidelity " + format_number(fidelity) + " at r=8";
    }
    return true;
}

bool fidelity_criteria(std::string& detail) {
    // closed form against quadrature on ten cases
    std::vector<std::pair<GaussianState, GaussianState>> cases;
    Eigen::VectorXd shifted(2);
    shifted << 2.0, 0.0;
    cases.emplace_back(
        GaussianState(1.0, Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)),
        GaussianState(1.0, shifted, Eigen::MatrixXd::Identity(2, 2)));
    for (int k = 0; k < 9; ++k)
        cases.emplace_back(random_valid_state(1, 61000 + 2 * k),
                           random_valid_state(1, 61001 + 2 * k));
    double worst = 0.0;
    for (const auto& [a, b] : cases) {
        const double closed = bhattacharyya_fidelity(a, b);
        const double grid = oracle::fidelity_grid(a, b);
        worst = std::max(worst, std::abs(closed - grid));
    }
    if (worst >= 1e-6) {
        detail = "grid mismatch " + format_number(worst);
        return false;
    }
    const double reference = bhattacharyya_fidelity(cases[0].first, cases[0].second);
    if (std::abs(reference - std::exp(-0.5)) > 1e-12) {
        detail = "separation-2 value off";
        return false;
    }
    // monotonicity under 200 random valid channels
    for (int trial = 0; trial < 200; ++trial) {
        const GaussianChannel channel = random_valid_channel(1, 62000 + trial);
        const double mapped = bhattacharyya_fidelity(apply(channel, cases[0].first),
                                                     apply(channel, cases[0].second));
        if (mapped < reference - 1e-8) {
            detail = "fidelity dropped by " + format_number(reference - mapped);
            return false;
        }
    }
    // squaring contradiction away from the endpoints
    const double squared = bhattacharyya_fidelity(tensor(cases[0].first, cases[0].first),
                                                  tensor(cases[0].second, cases[0].second));
    if (!(reference > 0.0 && reference < 1.0 &&
          std::abs(squared - reference * reference) < 1e-12 &&
          std::abs(squared - reference) > 1e-3)) {
        detail = "cloning bookkeeping off";
        return false;
    }
    detail = "worst grid deviation " + format_number(worst);
    return true;
}

bool mixture_counterexample(std::string& detail) {
    const ScenarioReport report =
        run_appendix_a(100.0, 100.0, 0.01, 0.01, 1.0, 1.0, 1.0, 50000, 1);
    double product = 1e9;
    for (const auto& [name, value] : report.statistics)
        if (name == "posterior-uncertainty-product") product = value;
    detail = "posterior uncertainty product " + format_number(product);
    return report.pass() && product < 0.5;
}

bool swap_convergence(std::string& detail) {
    Eigen::VectorXd means(4);
    means << 0.2, -0.1, 0.15, 0.25;
    const GaussianState target(1.0, means, epr_state(0.5, 1.0).moments());
    const ScenarioReport fine = run_entanglement_swap(target, 8.0, 50000, 1, 1e-3);
    const ScenarioReport coarse = run_entanglement_swap(target, 4.0, 50000, 1, 1.0);
    double fine_dev = 1e9, coarse_dev = 0.0;
    for (const auto& [name, value] : fine.statistics)
        if (name == "moment-deviation") fine_dev = value;
    for (const auto& [name, value] : coarse.statistics)
        if (name == "moment-deviation") coarse_dev = value;
    detail = "deviation r=8: " + format_number(fine_dev) + ", r=4: " + format_number(coarse_dev);
    return fine.pass() && fine_dev < 1e-3 && coarse_dev > fine_dev;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"criterion 1: uncertainty-bound checker", 1.0, cup_checker},
        {"criterion 2: marginal validity sweep", 10.0, marginal_sweep},
        {"criterion 3: conditioning validity + rejection oracle", 120.0, conditioning_validity},
        {"criterion 4: channel/state isomorphism round trip", 30.0, choi_roundtrip},
        {"criterion 5: engine equivalence harness", 300.0, equivalence_harness},
        {"criterion 6: teleportation convergence", 60.0, teleport_convergence},
        {"criterion 7: classical fidelity and no-cloning", 60.0, fidelity_criteria},
        {"criterion 8: mixture counterexample", 5.0, mixture_counterexample},
        {"criterion 9: swap convergence", 60.0, swap_convergence},
    };
    for (const auto& criterion : criteria) run(criterion);
    if (failures == 0)
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
