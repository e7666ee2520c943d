#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "erl/channel.hpp"
#include "erl/measurement.hpp"
#include "erl/state.hpp"

namespace erl {

// A bag of phase-space points (one per row) with the seed that produced it.
// Every draw in this module is a pure function of (source, seed, point index,
// counter), so regeneration is bit-identical and independent of any worker
// partitioning.
struct OnticSampleSet {
    Eigen::MatrixXd points;  // count x 2n
    std::uint64_t seed = 0;
    std::string source;

    int count() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }
    int modes() const { return dim() / 2; }
};

struct SampleStats {
    Eigen::VectorXd mean;
    Eigen::MatrixXd moments;  // unbiased symmetrized central second moments
    int count = 0;
    Eigen::VectorXd mean_std_error;
    Eigen::MatrixXd moments_std_error;  // jackknife
};

/// Draw `count` points from the exact Gaussian law via eigenvalue
/// factorization of the moment matrix. Eigenvalues in [-1e-10*scale, 0] are
/// clamped to zero (regularized squeezing limits); anything lower is an error.
OnticSampleSet sample_states(const GaussianState& state, int count, std::uint64_t seed);
OnticSampleSet sample_states(const GaussianMixture& mix, int count, std::uint64_t seed);

/// Pointwise z -> S^T z + c.
OnticSampleSet push_symplectic(const OnticSampleSet& set, const SymplecticMap& map,
                               const PhaseVector& displacement);
OnticSampleSet push_symplectic(const OnticSampleSet& set, const SymplecticMap& map);

/// Pointwise z -> X^T z + delta + w with w ~ N(0, N). The channel must be valid.
OnticSampleSet push_channel(const OnticSampleSet& set, const GaussianChannel& channel,
                            std::uint64_t seed);

/// Per-point measurement outcomes (one row per point): y | z is the Gaussian
/// conditional law of the indicator family at that ontic state.
Eigen::MatrixXd simulate_measurement(const OnticSampleSet& set, const GaussianIndicator& ind,
                                     std::uint64_t seed);

/// Empirical mean and central second moments with jackknife standard errors.
/// Works for any row-sample matrix; requires at least 3 rows.
SampleStats compute_stats(const Eigen::MatrixXd& rows);

SampleStats empirical_moments(const OnticSampleSet& set);

/// Factor V = F F^T through a clamped eigendecomposition; throws
/// PreconditionError when V has eigenvalues below -1e-10 * scale.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& moments);

}  // namespace erl
