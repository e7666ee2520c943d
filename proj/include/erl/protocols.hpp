#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "erl/channel.hpp"
#include "erl/measurement.hpp"
#include "erl/report.hpp"
#include "erl/sampler.hpp"
#include "erl/state.hpp"

namespace erl {

// Scenario library. Every scenario is deterministic in (parameters, N, seed),
// runs its statistics through the analytic engine and the ontic sampler, and
// emits a machine-checkable report. Delta and uniform limits are regularized
// by finite squeezing r throughout; convergence is reported, never asserted
// at infinity.

/// Vacuum through an attenuation channel into a heterodyne readout. With
/// `corrupt_analytic_noise` the analytic leg halves the channel noise, which
/// the engine comparison must catch (negative control).
ScenarioReport run_prepare_measure(int sample_count, std::uint64_t seed, double lambda = 1.0,
                                   bool corrupt_analytic_noise = false);

/// Correlated pair, quadrature measurement on one side, conditional knowledge
/// of the mirror quadrature on the other.
ScenarioReport run_epr(double r, double theta, int sample_count, std::uint64_t seed,
                       double lambda = 1.0);

/// Full teleportation protocol at finite resource squeezing r: relative
/// position and total momentum readout on (input, half of the pair), then a
/// unit-gain displacement correction on the distant mode.
ScenarioReport run_teleportation(const GaussianState& input, double r, int sample_count,
                                 std::uint64_t seed);

/// Swap a two-mode target onto fresh modes by conditioning on a correlated
/// response function at outcome zero.
ScenarioReport run_entanglement_swap(const GaussianState& target, double r, int sample_count,
                                     std::uint64_t seed, double deviation_tol = 1e-3);

/// Classical fidelity bookkeeping: cloning would square the fidelity, valid
/// channels can only preserve or increase it.
ScenarioReport run_no_cloning(const GaussianState& s1, const GaussianState& s2,
                              const std::vector<GaussianChannel>& channels, int sample_count,
                              std::uint64_t seed);

/// Order dependence of reproducible conjugate-quadrature measurements.
ScenarioReport run_noncommutativity(const GaussianState& initial, double conjugate_cap,
                                    int sample_count, std::uint64_t seed,
                                    double resolution_r = 6.0);

/// Dynamical (probe-coupling) model of a position measurement: effective
/// response function, momentum disturbance bookkeeping, cut invariance.
ScenarioReport run_von_neumann(double chi_t, double probe_r, int sample_count,
                               std::uint64_t seed, double lambda = 1.0);

/// Four-component mixture that satisfies the uncertainty bound on its total
/// moments yet, lacking max-ent, admits a measurement that drives a remote
/// subsystem below the bound. The matched-moments Gaussian is the contrast.
ScenarioReport run_appendix_a(double q0, double p0, double dq, double dp, double dq_ind,
                              double dp_ind, double lambda, int sample_count,
                              std::uint64_t seed);

/// Random sweep showing uncertainty cannot be concentrated out of a
/// subsystem: all marginals of valid states stay valid under symplectics.
ScenarioReport run_concentration_check(int trials, std::uint64_t seed, double lambda = 1.0);

struct ScenarioOptions {
    double lambda = 1.0;
    double r = 8.0;
    double theta = 0.0;
    int sample_count = 100000;
    std::uint64_t seed = 1;
    double conjugate_cap = 1e6;
    double chi_t = 1.0;
    double probe_r = 6.0;
    int trials = 500;
    double q0 = 100.0, p0 = 100.0, dq = 0.01, dp = 0.01, dq_ind = 1.0, dp_ind = 1.0;
    double deviation_tol = 1e-3;
    bool corrupt = false;
    std::optional<GaussianState> input;   // teleport input / noncommute initial
    std::optional<GaussianState> target;  // swap target
};

std::vector<std::string> scenario_names();

/// Dispatch by name; unknown names raise ConfigError.
ScenarioReport run_scenario(const std::string& name, const ScenarioOptions& options);

struct EquivalenceSummary {
    std::vector<ScenarioReport> reports;  // one per (scenario, seed)
    double threshold = 4.0;

    bool pass() const;
    double worst_abs_z() const;
    std::string worst_entry() const;
};

/// The operational-equivalence harness: every scenario, every seed, both
/// engines. `negative_control` adds a corrupted-channel run that must fail.
EquivalenceSummary run_equivalence_suite(int sample_count, const std::vector<std::uint64_t>& seeds,
                                         double threshold = 4.0, bool negative_control = false,
                                         const std::vector<std::string>& only = {});

}  // namespace erl
