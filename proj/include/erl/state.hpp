#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "erl/symplectic.hpp"

namespace erl {

struct ValidityReport {
    bool cup_satisfied = false;
    double min_eigenvalue = 0.0;  // smallest eigenvalue of gamma + i*lambda*Sigma
    bool saturating = false;      // min eigenvalue within tol of zero
    bool max_ent_satisfied = false;
};

// A Gaussian epistemic state over n modes. Second moments are stored in the
// V convention: V_ij is the actual symmetrized central second moment of
// (z_i, z_j). The covariance matrix gamma = 2V is exposed as a view; the
// classical uncertainty principle reads gamma + i*lambda*Sigma >= 0.
class GaussianState {
public:
    GaussianState(double lambda, Eigen::VectorXd means, Eigen::MatrixXd moments,
                  double symmetry_tol = 1e-10);

    int modes() const { return modes_; }
    int dim() const { return 2 * modes_; }
    double lambda() const { return lambda_; }
    const Eigen::VectorXd& means() const { return means_; }
    const Eigen::MatrixXd& moments() const { return moments_; }
    Eigen::MatrixXd gamma() const { return 2.0 * moments_; }

private:
    double lambda_;
    int modes_;
    Eigen::VectorXd means_;
    Eigen::MatrixXd moments_;
};

ValidityReport validate(const GaussianState& state, double tol = 1e-9);

/// Probability density at a phase-space point. Degenerate moment matrices are
/// handled through an eigenvalue-thresholded pseudoinverse; points off the
/// support subspace yield zero.
double density_at(const GaussianState& state, const PhaseVector& z);

/// Differential entropy 0.5*ln((2*pi*e)^{2n} det V); -inf for singular V.
double entropy(const GaussianState& state);

GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Marginal on the given (distinct, nonempty) mode subset, in the order given.
GaussianState marginal(const GaussianState& state, const std::vector<int>& modes);

/// d -> S^T d + c, V -> S^T V S.
GaussianState transform(const GaussianState& state, const SymplecticMap& map,
                        const PhaseVector& displacement);
GaussianState transform(const GaussianState& state, const SymplecticMap& map);

/// Vacuum analogue: zero means, V = (lambda/2) I.
GaussianState vacuum_state(int modes, double lambda);

/// Knowledge of the quadrature q_theta = cos(theta) q + sin(theta) p with
/// value a, regularized at squeezing r: variance (lambda/2) e^{-2r} along
/// q_theta and (lambda/2) e^{+2r} along the conjugate. Always saturating.
GaussianState quadrature_state(double theta, double a, double r, double lambda);

/// Two-mode correlated state with gamma = [[D+, D-], [D-, D+]],
/// D+ = cosh(2r) diag(1, lambda^2), D- = sinh(2r) diag(1, -lambda^2).
/// Var(q_A - q_B) and Var(p_A + p_B) shrink as e^{-2r}.
GaussianState epr_state(double r, double lambda);

Eigen::MatrixXd epr_d_plus(double r, double lambda, int modes = 1);
Eigen::MatrixXd epr_d_minus(double r, double lambda, int modes = 1);

/// Classical (Bhattacharyya) fidelity between two Gaussian densities,
/// integral of sqrt(mu1 * mu2); 1 iff the states are identical. A singular
/// average moment matrix takes a pseudoinverse path and sets *degenerate.
double bhattacharyya_fidelity(const GaussianState& a, const GaussianState& b,
                              bool* degenerate = nullptr);

// Finite convex mixtures of Gaussian states; these fail max-ent whenever two
// components differ, so they are not valid epistemic states themselves.
class GaussianMixture {
public:
    GaussianMixture(std::vector<double> weights, std::vector<GaussianState> components,
                    double weight_tol = 1e-12);

    int size() const { return static_cast<int>(components_.size()); }
    int modes() const { return components_.front().modes(); }
    double lambda() const { return components_.front().lambda(); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<GaussianState>& components() const { return components_; }

private:
    std::vector<double> weights_;
    std::vector<GaussianState> components_;
};

/// Total mean and total second moments of the mixture law.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> mixture_moments(const GaussianMixture& mix);

ValidityReport mixture_validate(const GaussianMixture& mix, double tol = 1e-9);

double mixture_density_at(const GaussianMixture& mix, const PhaseVector& z);

/// Random valid state for property sweeps: a symplectic image of a product of
/// saturating quadrature states, plus optional PSD noise when not saturating.
/// Deterministic in the seed.
GaussianState random_valid_state(int modes, std::uint64_t seed, double lambda = 1.0,
                                 double max_squeeze = 1.2, bool saturating = false);

}  // namespace erl
