#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "erl/rng.hpp"
#include "erl/symplectic.hpp"

using namespace erl;

TEST_CASE("build_sigma basic structure") {
    const Eigen::MatrixXd sigma1 = build_sigma(1);
    CHECK(sigma1(0, 0) == 0.0);
    CHECK(sigma1(0, 1) == -1.0);
    CHECK(sigma1(1, 0) == 1.0);
    CHECK(sigma1(1, 1) == 0.0);

    const Eigen::MatrixXd sigma2 = build_sigma(2);
    CHECK(sigma2.block(0, 0, 2, 2) == sigma1);
    CHECK(sigma2.block(2, 2, 2, 2) == sigma1);
    CHECK(sigma2.block(0, 2, 2, 2).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(build_sigma(0), DimensionError);
}

TEST_CASE("sigma is skew-orthogonal with inverse -sigma") {
    for (int n : {1, 2, 3, 4}) {
        const Eigen::MatrixXd sigma = build_sigma(n);
        CHECK((sigma + sigma.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((sigma * sigma.transpose() - Eigen::MatrixXd::Identity(2 * n, 2 * n))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
        CHECK((sigma * (-sigma) - Eigen::MatrixXd::Identity(2 * n, 2 * n))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }
}

TEST_CASE("is_symplectic") {
    CHECK(is_symplectic(Eigen::MatrixXd::Identity(4, 4), 1e-12));

    const double theta = 0.3;
    Eigen::MatrixXd rot(2, 2);
    rot << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    CHECK(is_symplectic(rot, 1e-12));

    Eigen::MatrixXd inversion = Eigen::MatrixXd::Identity(2, 2);
    inversion(1, 1) = -1.0;
    CHECK_FALSE(is_symplectic(inversion, 1e-12));
    // the inversion conjugates the form to its negative
    const Eigen::MatrixXd sigma = build_sigma(1);
    CHECK((inversion.transpose() * sigma * inversion + sigma).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(is_symplectic(Eigen::MatrixXd::Identity(3, 3), 1e-12), DimensionError);
}

TEST_CASE("is_psd_hermitian") {
    using C = std::complex<double>;
    Eigen::MatrixXcd m(2, 2);
    m << C(1, 0), C(0, -1), C(0, 1), C(1, 0);
    auto check = is_psd_hermitian(m, 1e-12);
    CHECK(check.psd);
    CHECK(check.min_eigenvalue == doctest::Approx(0.0).epsilon(1e-12));

    m << C(0.5, 0), C(0, -1), C(0, 1), C(0.5, 0);
    check = is_psd_hermitian(m, 1e-12);
    CHECK_FALSE(check.psd);
    CHECK(check.min_eigenvalue == doctest::Approx(-0.5));

    check = is_psd_hermitian(Eigen::MatrixXcd::Identity(3, 3), 1e-12);
    CHECK(check.psd);
    CHECK(check.min_eigenvalue == doctest::Approx(1.0));

    m << C(1, 0), C(2, 0), C(0, 0), C(1, 0);
    CHECK_THROWS_AS(is_psd_hermitian(m, 1e-12), DimensionError);
}

TEST_CASE("schur_complement") {
    CHECK(schur_complement(Eigen::MatrixXd::Identity(2, 2), 1)(0, 0) == doctest::Approx(1.0));

    Eigen::MatrixXd m(2, 2);
    m << 2, 1, 1, 2;
    CHECK(schur_complement(m, 1)(0, 0) == doctest::Approx(1.5));

    // the complement inverts the corresponding block of the inverse
    Eigen::MatrixXd a(4, 4);
    a << 4, 1, 0.5, 0.2, 1, 3, 0.1, 0.4, 0.5, 0.1, 5, 0.3, 0.2, 0.4, 0.3, 2;
    const Eigen::MatrixXd complement = schur_complement(a, 2);
    const Eigen::MatrixXd inv_block = a.inverse().bottomRightCorner(2, 2);
    CHECK((complement - inv_block.inverse()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("poisson bracket of linear observables") {
    Eigen::Vector2d q(1, 0), p(0, 1);
    CHECK(poisson_bracket_linear(q, p) == doctest::Approx(1.0));
    CHECK(poisson_bracket_linear(p, q) == doctest::Approx(-1.0));
    CHECK(poisson_bracket_linear(q, q) == 0.0);

    Eigen::VectorXd rel(4), tot(4);
    rel << 1, 0, -1, 0;  // q_A - q_B
    tot << 0, 1, 0, 1;   // p_A + p_B
    CHECK(poisson_bracket_linear(rel, tot) == 0.0);

    Eigen::VectorXd bad(3);
    CHECK_THROWS_AS(poisson_bracket_linear(bad, bad), DimensionError);
}

TEST_CASE("bracket is antisymmetric and symplectically invariant") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const SymplecticMap map = random_symplectic(2, seed);
        CounterRng rng(seed, 99);
        Eigen::VectorXd u(4), v(4);
        for (int i = 0; i < 4; ++i) {
            u[i] = rng.normal(i);
            v[i] = rng.normal(8 + i);
        }
        CHECK(poisson_bracket_linear(u, v) == -poisson_bracket_linear(v, u));
        const double direct = poisson_bracket_linear(u, v);
        const double mapped = poisson_bracket_linear(map.matrix.transpose() * u,
                                                     map.matrix.transpose() * v);
        CHECK(mapped == doctest::Approx(direct).epsilon(1e-8));
    }
}

TEST_CASE("generator factories") {
    CHECK((make_squeeze(0.0, 0, 1).matrix - Eigen::MatrixXd::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() == 0.0);

    // quarter rotation sends (q,p) to (p,-q) under z -> S^T z
    const SymplecticMap quarter = make_rotation(3.14159265358979323846 / 2.0, 0, 1);
    Eigen::Vector2d z(1.0, 0.5);
    const Eigen::Vector2d image = quarter.matrix.transpose() * z;
    CHECK(image[0] == doctest::Approx(0.5));
    CHECK(image[1] == doctest::Approx(-1.0));

    const SymplecticMap coupling = make_qp_coupling(1.0, 0, 1, 2);
    CHECK(is_symplectic(coupling.matrix, 1e-10));
    Eigen::VectorXd point(4);
    point << 2.0, 3.0, 5.0, 7.0;  // (q_A, p_A, q_B, p_B)
    const Eigen::VectorXd moved = coupling.matrix.transpose() * point;
    CHECK(moved[0] == doctest::Approx(2.0));
    CHECK(moved[1] == doctest::Approx(3.0 - 7.0));
    CHECK(moved[2] == doctest::Approx(5.0 + 2.0));
    CHECK(moved[3] == doctest::Approx(7.0));

    CHECK(is_symplectic(make_beamsplitter(0.7, 0, 1, 3).matrix, 1e-10));
    CHECK_THROWS_AS(make_beamsplitter(0.7, 1, 1, 2), ConfigError);
    CHECK_THROWS_AS(make_rotation(0.1, 3, 2), ConfigError);

    SymplecticSpec spec;
    spec.kind = "warp";
    CHECK_THROWS_AS(make_symplectic(spec), ConfigError);
    spec.kind = "squeeze";
    spec.params = {0.4};
    spec.target_modes = {0};
    CHECK(is_symplectic(make_symplectic(spec).matrix, 1e-10));
}

TEST_CASE("random symplectic maps") {
    const SymplecticMap a = random_symplectic(1, 7);
    const SymplecticMap b = random_symplectic(1, 7);
    CHECK((a.matrix - b.matrix).cwiseAbs().maxCoeff() == 0.0);

    for (std::uint64_t seed : {3ULL, 11ULL, 42ULL}) {
        for (int modes : {1, 2, 3}) {
            const SymplecticMap map = random_symplectic(modes, seed);
            const Eigen::MatrixXd sigma = build_sigma(modes);
            CHECK((map.matrix.transpose() * sigma * map.matrix - sigma).cwiseAbs().maxCoeff() <
                  1e-8);
            CHECK(map.matrix.determinant() == doctest::Approx(1.0).epsilon(1e-8));
        }
    }

    // composition closure
    const SymplecticMap s1 = random_symplectic(2, 5);
    const SymplecticMap s2 = random_symplectic(2, 6);
    CHECK(is_symplectic(s1.matrix * s2.matrix, 1e-8));
}
