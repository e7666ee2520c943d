#pragma once

#include <Eigen/Dense>

#include "erl/channel.hpp"
#include "erl/state.hpp"

namespace erl {

// Phase-space description of a Gaussian quantum object: means plus the
// covariance matrix gamma (so gamma = 2V), constrained by the uncertainty
// relation gamma + i*hbar*Sigma >= 0. No Hilbert-space objects appear
// anywhere; this parametrization carries all the statistics.
struct QuantumGaussianSpec {
    double hbar = 1.0;
    Eigen::VectorXd means;
    Eigen::MatrixXd gamma;

    QuantumGaussianSpec(double hbar_in, Eigen::VectorXd means_in, Eigen::MatrixXd gamma_in);

    int modes() const { return static_cast<int>(means.size()) / 2; }
};

/// gamma + i*hbar*Sigma PSD status and its smallest eigenvalue.
PsdCheck quantum_uncertainty_check(const QuantumGaussianSpec& spec, double tol = 1e-9);

/// The phase-space distribution of the state: an epistemic state with
/// lambda = hbar, the same means, and V = gamma/2. Rejects specs violating
/// the uncertainty relation.
GaussianState wigner_state(const QuantumGaussianSpec& spec, double tol = 1e-9);

/// Inverse dictionary: epistemic state -> quantum spec with hbar = lambda.
QuantumGaussianSpec quantum_spec(const GaussianState& state);

/// Outcome probability density Tr(rho E_y) as the phase-space overlap of the
/// two distributions; identical to the epistemic outcome_density.
double born_overlap(const QuantumGaussianSpec& state, const QuantumGaussianSpec& povm_element,
                    double povm_weight = 1.0);

/// Tr(rho^2) = hbar^n / sqrt(det gamma); 1 exactly when det gamma = hbar^{2n}.
double purity(const QuantumGaussianSpec& spec);

// The phase-space representation of a valid map is a Gaussian transition
// kernel: z' given z is normal with mean X^T z + delta and covariance N,
// exactly the law the ontic sampler pushes points through.
struct TransitionKernel {
    Eigen::MatrixXd x;
    Eigen::VectorXd delta;
    Eigen::MatrixXd noise;
};

TransitionKernel wigner_map(const GaussianChannel& channel, double tol = 1e-9);

}  // namespace erl
