#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "erl/state.hpp"

namespace erl {

// Affine-noisy Gaussian map. Moments evolve as V -> X^T V X + N and means as
// d -> X^T d + delta. Noise is stored in the V convention; the
// covariance-convention noise is the view Y = 2N. The map is a valid
// transformation iff 2N - i*lambda*Sigma + i*lambda*X^T Sigma X >= 0.
struct GaussianChannel {
    Eigen::MatrixXd x;
    Eigen::MatrixXd noise;  // N
    Eigen::VectorXd delta;
    double lambda = 1.0;

    GaussianChannel(Eigen::MatrixXd x_in, Eigen::MatrixXd noise_in, Eigen::VectorXd delta_in,
                    double lambda_in);

    int modes() const { return static_cast<int>(x.rows()) / 2; }
    int dim() const { return static_cast<int>(x.rows()); }
    Eigen::MatrixXd y_view() const { return 2.0 * noise; }
};

GaussianState apply(const GaussianChannel& channel, const GaussianState& state);

ValidityReport channel_valid(const GaussianChannel& channel, double tol = 1e-9);

GaussianChannel identity_channel(int modes, double lambda);

/// X = sqrt(eta) I, N = (1 - eta) (lambda/2) I; the vacuum analogue is a fixed point.
GaussianChannel attenuation_channel(double eta, int modes, double lambda);

/// Channel induced by coupling the leading `system_modes` modes to an
/// environment in `env` through the joint map S, then marginalizing:
/// X = S_AA, N = S_EA^T V_E S_EA, delta = S_EA^T d_E. Always valid.
GaussianChannel dilation_induced_channel(const SymplecticMap& joint, int system_modes,
                                         const GaussianState& env);

/// Extend a channel to act on `extra_modes` additional trailing modes as the identity.
GaussianChannel tensor_with_identity(const GaussianChannel& channel, int extra_modes);

/// The channel acting on half of the correlated state at regularization r:
/// gamma = [[X^T D+ X + Y, X^T D-], [D- X, D+]], means (delta, 0). Equals
/// apply(channel (x) id, epr_state(r)).
GaussianState choi_state(const GaussianChannel& channel, double r);

/// Inverse of choi_state for r > 0: X = D-^{-1} C^T and
/// Y = gamma_A - C D-^{-1} D+ D-^{-1} C^T, where C is the cross block.
GaussianChannel channel_from_choi(const GaussianState& choi, double r);

/// apply(compose(second, first), s) == apply(second, apply(first, s)).
GaussianChannel compose(const GaussianChannel& second, const GaussianChannel& first);

/// Valid by construction: dilation of a random symplectic with a random valid
/// environment. Deterministic in the seed.
GaussianChannel random_valid_channel(int modes, std::uint64_t seed, double lambda = 1.0);

}  // namespace erl
