#include <cmath>

#include "doctest.h"
#include "erl/rng.hpp"
#include "erl/sampler.hpp"
#include "erl/wigner.hpp"
#include "oracles.hpp"

using namespace erl;

TEST_CASE("phase-space dictionary for quantum states") {
    const double hbar = 1.0;
    const QuantumGaussianSpec vacuum(hbar, Eigen::VectorXd::Zero(2),
                                     hbar * Eigen::MatrixXd::Identity(2, 2));
    const GaussianState state = wigner_state(vacuum);
    CHECK(state.lambda() == hbar);
    CHECK(validate(state).saturating);

    Eigen::MatrixXd squeezed = Eigen::MatrixXd::Zero(2, 2);
    squeezed.diagonal() << hbar * std::exp(-2.0), hbar * std::exp(2.0);
    CHECK(validate(wigner_state({hbar, Eigen::VectorXd::Zero(2), squeezed})).saturating);

    CHECK_THROWS_AS(
        wigner_state({hbar, Eigen::VectorXd::Zero(2), 0.5 * hbar * Eigen::MatrixXd::Identity(2, 2)}),
        PreconditionError);
}

TEST_CASE("dictionary round trip and moment agreement") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const GaussianState state = random_valid_state(2, seed, 1.3);
        const QuantumGaussianSpec spec = quantum_spec(state);
        CHECK(quantum_uncertainty_check(spec, 1e-8).psd);
        const GaussianState back = wigner_state(spec, 1e-8);
        CHECK((back.means() - state.means()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((back.moments() - state.moments()).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(back.lambda() == state.lambda());
    }
}

TEST_CASE("uncertainty relation and the epistemic bound agree entrywise") {
    // the two verdicts coincide on random symmetric matrices, valid or not
    CounterRng rng(9090, 0);
    int disagreements = 0, invalid_seen = 0;
    for (int trial = 0; trial < 500; ++trial) {
        Eigen::MatrixXd w(4, 4);
        for (int i = 0; i < 16; ++i) w(i / 4, i % 4) = rng.normal(16 * trial + i);
        Eigen::MatrixXd gamma = w * w.transpose();
        if (trial % 2 == 0) gamma -= 0.8 * Eigen::MatrixXd::Identity(4, 4);
        gamma = 0.5 * (gamma + gamma.transpose());

        const double hbar = 0.9;
        bool quantum_ok;
        try {
            quantum_ok = quantum_uncertainty_check({hbar, Eigen::VectorXd::Zero(4), gamma}).psd;
        } catch (const DimensionError&) {
            continue;
        }
        const GaussianState as_state(hbar, Eigen::VectorXd::Zero(4), 0.5 * gamma);
        const bool classical_ok = validate(as_state).cup_satisfied;
        if (quantum_ok != classical_ok) ++disagreements;
        if (!classical_ok) ++invalid_seen;
    }
    CHECK(disagreements == 0);
    CHECK(invalid_seen > 50);  // the sweep actually probes both sides
}

TEST_CASE("outcome probabilities as phase-space overlaps") {
    const double hbar = 1.0;
    const QuantumGaussianSpec vacuum(hbar, Eigen::VectorXd::Zero(2),
                                     hbar * Eigen::MatrixXd::Identity(2, 2));
    const QuantumGaussianSpec element(hbar, Eigen::VectorXd::Zero(2),
                                      hbar * Eigen::MatrixXd::Identity(2, 2));
    CHECK(born_overlap(vacuum, element) ==
          doctest::Approx(1.0 / (2.0 * 3.14159265358979323846)).epsilon(1e-12));

    // agreement with the epistemic outcome density on random cases
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const GaussianState state = random_valid_state(1, seed * 3 + 1);
        const GaussianState shape = random_valid_state(1, seed * 3 + 2);
        const QuantumGaussianSpec rho = quantum_spec(state);
        const QuantumGaussianSpec povm(state.lambda(), shape.means(), 2.0 * shape.moments());
        const GaussianIndicator ind({0}, Eigen::MatrixXd::Identity(2, 2), shape.means(),
                                    shape.moments());
        const double lhs = born_overlap(rho, povm);
        const double rhs = outcome_density(state, ind, Eigen::VectorXd::Zero(2));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }

    // displaced family resolves to unit total probability
    const QuantumGaussianSpec probe_state(hbar, Eigen::Vector2d(0.3, -0.6),
                                          1.7 * Eigen::MatrixXd::Identity(2, 2));
    const double total = oracle::integrate_2d(
        [&](double a, double b) {
            const QuantumGaussianSpec displaced(hbar, Eigen::Vector2d(a, b),
                                                hbar * Eigen::MatrixXd::Identity(2, 2));
            return born_overlap(probe_state, displaced);
        },
        -16.0, 16.0, 321);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("purity") {
    const double hbar = 1.0;
    CHECK(purity({hbar, Eigen::VectorXd::Zero(2), hbar * Eigen::MatrixXd::Identity(2, 2)}) ==
          doctest::Approx(1.0));
    CHECK(purity({hbar, Eigen::VectorXd::Zero(2), 2.0 * hbar * Eigen::MatrixXd::Identity(2, 2)}) ==
          doctest::Approx(0.5));

    double previous = 1.1;
    for (double r : {0.5, 1.0, 2.0, 3.0}) {
        const GaussianState side = marginal(epr_state(r, hbar), {0});
        const double value = purity(quantum_spec(side));
        CHECK(value == doctest::Approx(1.0 / std::cosh(2.0 * r)).epsilon(1e-10));
        CHECK(value < previous);
        previous = value;
    }
}

TEST_CASE("transition kernels") {
    const GaussianChannel id = identity_channel(1, 1.0);
    const TransitionKernel trivial = wigner_map(id);
    CHECK(trivial.noise.cwiseAbs().maxCoeff() == 0.0);

    const GaussianChannel loss = attenuation_channel(0.4, 1, 1.0);
    const TransitionKernel kernel = wigner_map(loss);
    CHECK((kernel.x - loss.x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((kernel.noise - loss.noise).cwiseAbs().maxCoeff() == 0.0);

    // kernel normalization: for fixed z', the density over z integrates to 1
    Eigen::Vector2d from(0.8, -0.5);
    const GaussianState conditional(1.0, kernel.x.transpose() * from + kernel.delta,
                                    kernel.noise);
    const double mass = oracle::density_norm_2d(conditional);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));

    // the kernel is the law the sampler pushes points through
    const OnticSampleSet start = sample_states(vacuum_state(1, 1.0), 100000, 21);
    const SampleStats after = empirical_moments(push_channel(start, loss, 22));
    const GaussianState analytic = apply(loss, vacuum_state(1, 1.0));
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(after.moments(i, i) - analytic.moments()(i, i)) <
              4.0 * after.moments_std_error(i, i));

    const GaussianChannel amp(2.0 * Eigen::MatrixXd::Identity(2, 2),
                              Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2), 1.0);
    CHECK_THROWS_AS(wigner_map(amp), PreconditionError);
}
