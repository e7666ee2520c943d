#include <cmath>
#include <complex>

#include "doctest.h"
#include "erl/channel.hpp"
#include "erl/measurement.hpp"
#include "erl/rng.hpp"

using namespace erl;

namespace {

GaussianChannel perturbed_invalid_channel(int modes, std::uint64_t seed, double lambda = 1.0) {
    GaussianChannel channel = random_valid_channel(modes, seed, lambda);
    // pull the noise down until the validity margin is clearly negative
    double shift = 0.05 * lambda;
    for (int attempt = 0; attempt < 60; ++attempt) {
        const GaussianChannel candidate(
            channel.x,
            channel.noise - shift * Eigen::MatrixXd::Identity(channel.dim(), channel.dim()),
            channel.delta, lambda);
        if (channel_valid(candidate).min_eigenvalue < -0.02 * lambda) return candidate;
        shift *= 1.6;
    }
    throw std::runtime_error("could not build an invalid perturbation");
}

}  // namespace

TEST_CASE("apply") {
    const GaussianState vacuum = vacuum_state(1, 1.0);
    const GaussianChannel id = identity_channel(1, 1.0);
    const GaussianState same = apply(id, vacuum);
    CHECK((same.moments() - vacuum.moments()).cwiseAbs().maxCoeff() == 0.0);

    // vacuum analogue is a fixed point of attenuation
    const GaussianChannel loss = attenuation_channel(0.5, 1, 1.0);
    const GaussianState after = apply(loss, vacuum);
    CHECK((after.moments() - vacuum.moments()).cwiseAbs().maxCoeff() < 1e-15);

    // a noiseless symplectic channel agrees with transform
    const SymplecticMap map = random_symplectic(1, 4);
    const GaussianChannel unitary(map.matrix, Eigen::MatrixXd::Zero(2, 2),
                                  Eigen::VectorXd::Zero(2), 1.0);
    const GaussianState via_channel = apply(unitary, quadrature_state(0.3, 1.0, 0.5, 1.0));
    const GaussianState via_map = transform(quadrature_state(0.3, 1.0, 0.5, 1.0), map);
    CHECK((via_channel.moments() - via_map.moments()).cwiseAbs().maxCoeff() < 1e-14);

    const GaussianState other_units = vacuum_state(1, 2.0);
    CHECK_THROWS_AS(apply(loss, other_units), ConfigError);
}

TEST_CASE("channel validity condition") {
    CHECK(channel_valid(identity_channel(2, 1.0)).cup_satisfied);
    CHECK(channel_valid(attenuation_channel(0.5, 1, 1.0)).cup_satisfied);

    // noiseless amplification is forbidden
    const GaussianChannel amp(2.0 * Eigen::MatrixXd::Identity(2, 2),
                              Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2), 1.0);
    const auto verdict = channel_valid(amp);
    CHECK_FALSE(verdict.cup_satisfied);
    CHECK(verdict.min_eigenvalue == doctest::Approx(-3.0).epsilon(1e-10));

    // momentum inversion preserves single-system validity but fails the
    // channel condition
    const GaussianChannel inversion(momentum_inversion(1), Eigen::MatrixXd::Zero(2, 2),
                                    Eigen::VectorXd::Zero(2), 1.0);
    CHECK_FALSE(channel_valid(inversion).cup_satisfied);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const GaussianState state = random_valid_state(1, seed);
        CHECK(validate(apply(inversion, state), 1e-9).cup_satisfied);
    }
}

TEST_CASE("dilation-induced channels") {
    const GaussianState env = vacuum_state(1, 1.0);

    const GaussianChannel trivial = dilation_induced_channel(identity_map(2), 1, env);
    CHECK((trivial.x - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(trivial.noise.cwiseAbs().maxCoeff() == 0.0);

    const double theta = 0.7;
    const GaussianChannel mixed =
        dilation_induced_channel(make_beamsplitter(theta, 0, 1, 2), 1, env);
    const double eta = std::cos(theta) * std::cos(theta);
    CHECK((mixed.x - std::sqrt(eta) * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK((mixed.noise - (1.0 - eta) * 0.5 * Eigen::MatrixXd::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-12);

    // every dilation-induced channel passes the validity condition
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const SymplecticMap joint = random_symplectic(2, seed * 3 + 1);
        const GaussianState random_env = random_valid_state(1, seed * 5 + 2);
        const GaussianChannel channel = dilation_induced_channel(joint, 1, random_env);
        CHECK(channel_valid(channel, 1e-8).cup_satisfied);
    }
}

TEST_CASE("isomorphism with bipartite states") {
    const double r = 6.0;
    // identity channel reproduces the correlated pair
    const GaussianState pair = choi_state(identity_channel(1, 1.0), r);
    CHECK((pair.moments() - epr_state(r, 1.0).moments()).cwiseAbs().maxCoeff() < 1e-9);

    // direct block formula equals acting on half the pair
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const GaussianChannel channel = random_valid_channel(1, seed + 11);
        const GaussianState direct = choi_state(channel, r);
        const GaussianState via_apply =
            apply(tensor_with_identity(channel, 1), epr_state(r, 1.0));
        CHECK((direct.moments() - via_apply.moments()).cwiseAbs().maxCoeff() <
              1e-10 * std::max(1.0, direct.moments().cwiseAbs().maxCoeff()));
        CHECK((direct.means() - via_apply.means()).cwiseAbs().maxCoeff() < 1e-12);
    }

    // invalid channel, invalid bipartite image
    const GaussianChannel amp(2.0 * Eigen::MatrixXd::Identity(2, 2),
                              Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2), 1.0);
    CHECK_FALSE(validate(choi_state(amp, 6.0)).cup_satisfied);
}

TEST_CASE("channel recovery from its bipartite image") {
    for (double r : {6.0, 8.0}) {
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            const GaussianChannel channel = random_valid_channel(1, seed * 7 + 3);
            const GaussianChannel back = channel_from_choi(choi_state(channel, r), r);
            const double tol = r >= 8.0 ? 1e-5 : 1e-6;
            CHECK((back.x - channel.x).cwiseAbs().maxCoeff() < tol);
            CHECK((back.noise - channel.noise).cwiseAbs().maxCoeff() < tol);
            CHECK((back.delta - channel.delta).cwiseAbs().maxCoeff() < tol);
        }
    }
    CHECK_THROWS_AS(channel_from_choi(epr_state(1.0, 1.0), 0.0), NumericError);

    // recovery from any valid state of the right block form gives a valid
    // channel: thicken the leading block of a proper image and recover
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const GaussianChannel channel = random_valid_channel(1, seed * 11 + 5);
        const GaussianState base = choi_state(channel, 8.0);
        CounterRng rng(seed, 0xC01);
        Eigen::MatrixXd w(2, 2);
        for (int i = 0; i < 4; ++i) w(i / 2, i % 2) = rng.normal(i);
        Eigen::MatrixXd extra = Eigen::MatrixXd::Zero(4, 4);
        extra.topLeftCorner(2, 2) = w * w.transpose();
        const GaussianState thickened(1.0, base.means(), base.moments() + 0.3 * extra);
        CHECK(validate(thickened).cup_satisfied);
        const GaussianChannel recovered = channel_from_choi(thickened, 8.0);
        CHECK(channel_valid(recovered, 1e-7).cup_satisfied);
    }
}

TEST_CASE("validity transfers both ways at finite regularization") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        const GaussianChannel good = random_valid_channel(1, seed * 2 + 1);
        CHECK(channel_valid(good).cup_satisfied);
        CHECK(validate(choi_state(good, 8.0), 1e-8).cup_satisfied);

        const GaussianChannel bad = perturbed_invalid_channel(1, seed * 2 + 2);
        CHECK_FALSE(channel_valid(bad).cup_satisfied);
        CHECK_FALSE(validate(choi_state(bad, 8.0), 1e-8).cup_satisfied);
        checked += 2;
    }
    CHECK(checked == 300);
}

TEST_CASE("complete validity on larger systems") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const GaussianChannel channel = random_valid_channel(1, seed + 17);
        const GaussianState joint = random_valid_state(2, seed * 23 + 5);
        const GaussianState image = apply(tensor_with_identity(channel, 1), joint);
        CHECK(validate(image, 1e-8).cup_satisfied);
    }
}

TEST_CASE("composition") {
    const GaussianChannel id = identity_channel(1, 1.0);
    const GaussianChannel loss = attenuation_channel(0.7, 1, 1.0);
    const GaussianChannel same = compose(loss, id);
    CHECK((same.x - loss.x).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((same.noise - loss.noise).cwiseAbs().maxCoeff() < 1e-15);

    // two attenuations compose to the product transmissivity
    const GaussianChannel a = attenuation_channel(0.6, 1, 1.0);
    const GaussianChannel b = attenuation_channel(0.5, 1, 1.0);
    const GaussianChannel both = compose(b, a);
    const GaussianChannel expected = attenuation_channel(0.3, 1, 1.0);
    CHECK((both.x - expected.x).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((both.noise - expected.noise).cwiseAbs().maxCoeff() < 1e-12);

    // ordering semantics and validity closure
    const GaussianState probe = quadrature_state(0.9, 0.7, 0.8, 1.0);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const GaussianChannel c1 = random_valid_channel(1, seed * 3 + 100);
        const GaussianChannel c2 = random_valid_channel(1, seed * 3 + 101);
        const GaussianState sequential = apply(c2, apply(c1, probe));
        const GaussianState composed = apply(compose(c2, c1), probe);
        CHECK((sequential.moments() - composed.moments()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((sequential.means() - composed.means()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(channel_valid(compose(c2, c1), 1e-8).cup_satisfied);
    }
}

TEST_CASE("diagonal correlation blocks obey the closed-form identity") {
    const std::complex<double> imag_unit(0.0, 1.0);
    for (double lambda : {1.0, 1.3}) {
        const Eigen::MatrixXcd sigma =
            build_sigma(1).cast<std::complex<double>>() * imag_unit * lambda;
        for (double r : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            const Eigen::MatrixXcd plus =
                epr_d_plus(r, lambda).cast<std::complex<double>>();
            const Eigen::MatrixXcd minus =
                epr_d_minus(r, lambda).cast<std::complex<double>>();
            const Eigen::MatrixXcd lhs = plus - minus * (plus + sigma).inverse() * minus;
            CHECK((lhs + sigma).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("fidelity never decreases through valid channels") {
    const GaussianState s1 = vacuum_state(1, 1.0);
    const GaussianState s2 = quadrature_state(0.4, 1.2, 0.6, 1.0);
    const double base = bhattacharyya_fidelity(s1, s2);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const GaussianChannel channel = random_valid_channel(1, seed + 1000);
        const double mapped = bhattacharyya_fidelity(apply(channel, s1), apply(channel, s2));
        CHECK(mapped >= base - 1e-8);
    }
}
