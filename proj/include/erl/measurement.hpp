#pragma once

#include <Eigen/Dense>
#include <vector>

#include "erl/state.hpp"

namespace erl {

// A Gaussian response function. The indicator for outcome y is
//   xi_y(z) = weight * N(z_A; L y + base_mean, Vind)
// over the target modes A, a displaced family labelled by the outcome y.
// For square full-rank L the family integrates over y to the unit response
// exactly when weight = |det L|.
struct GaussianIndicator {
    std::vector<int> target_modes;
    Eigen::MatrixXd outcome_map;  // L, (2m) x outcome_dim
    Eigen::VectorXd base_mean;    // 2m
    Eigen::MatrixXd moments;      // Vind, V convention, symmetric PSD
    double weight = 1.0;

    GaussianIndicator(std::vector<int> targets, Eigen::MatrixXd L, Eigen::VectorXd base,
                      Eigen::MatrixXd vind, double w = 1.0);

    int mode_count() const { return static_cast<int>(target_modes.size()); }
    int dim() const { return 2 * mode_count(); }
    int outcome_dim() const { return static_cast<int>(outcome_map.cols()); }
};

/// Heterodyne analogue: full phase-space outcome, Vind = (lambda/2) I.
GaussianIndicator heterodyne_indicator(int mode, double lambda);

/// Finite-resolution quadrature (homodyne) measurement along q_theta: sharp
/// direction has variance (lambda/2) e^{-2r}, the conjugate carries the
/// regularized cap (lambda/2) e^{+2r}. Outcome is a full phase-space label;
/// only its q_theta component is informative.
GaussianIndicator quadrature_indicator(int mode, double theta, double r, double lambda);

/// Response function shaped like the two-mode correlated state at squeezing r.
GaussianIndicator correlated_indicator(int mode_a, int mode_b, double r, double lambda);

/// Validity of the normalized indicator as an epistemic state.
ValidityReport indicator_valid(const GaussianIndicator& ind, double lambda, double tol = 1e-9);

/// weight / |det L| for square L; the family is complete iff this equals 1.
double indicator_family_norm(const GaussianIndicator& ind);

/// p(y) = integral of xi_y * mu: a normal density of y under the convolution
/// of state and indicator moments. Integrates to 1 over y for complete
/// families.
double outcome_density(const GaussianState& state, const GaussianIndicator& ind,
                       const Eigen::VectorXd& y);

struct MeasurementRecord {
    Eigen::VectorXd outcome;
    double likelihood = 0.0;
    GaussianState posterior;
    bool used_pseudo_inverse = false;
};

/// Bayesian update of the unmeasured modes after observing outcome y on the
/// indicator's target modes:
///   V'_B = V_B - V_BA (V_A + Vind)^{-1} V_AB
///   d'_B = d_B + V_BA (V_A + Vind)^{-1} (Ly + base - d_A)
/// The target modes must be a strict subset of the state's modes.
MeasurementRecord condition(const GaussianState& state, const GaussianIndicator& ind,
                            const Eigen::VectorXd& y);

struct MixtureMeasurementRecord {
    Eigen::VectorXd outcome;
    double likelihood = 0.0;
    GaussianMixture posterior;
};

/// Per-component conditioning with weights reweighted by component likelihood.
/// Throws NumericError if every component likelihood underflows to zero.
MixtureMeasurementRecord mixture_condition(const GaussianMixture& mix,
                                           const GaussianIndicator& ind,
                                           const Eigen::VectorXd& y);

/// Reproducible-measurement update for a quadrature measurement on a single
/// mode: the post-measurement state knows q_theta = y up to the measurement
/// resolution while the conjugate quadrature is randomized up to the cap R
/// (a variance, R > lambda). The caller must keep resolution * R >= lambda^2/4
/// or the collapsed state would violate the uncertainty floor.
GaussianState collapse_rule(const GaussianState& state, double theta, double y,
                            double conjugate_variance_cap, double resolution_variance);

/// diag(1, -1, 1, -1, ...): valid-state-preserving but not symplectic.
Eigen::MatrixXd momentum_inversion(int modes);

}  // namespace erl
