#include "erl/sampler.hpp"

#include <cmath>

#include "erl/linalg.hpp"
#include "erl/rng.hpp"

namespace erl {

namespace {

// counter layout inside a point's stream: normals occupy low counters,
// the mixture component pick lives far above them
constexpr std::uint64_t kComponentCounter = 1ULL << 20;

Eigen::MatrixXd draw_normals(int count, int dim, std::uint64_t seed) {
    Eigen::MatrixXd xi(count, dim);
    for (int i = 0; i < count; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        for (int c = 0; c < dim; ++c) xi(i, c) = rng.normal(static_cast<std::uint64_t>(c));
    }
    return xi;
}

}  // namespace

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& moments) {
    const auto dec = decompose_symmetric(moments);
    const double floor = -1e-10 * std::max(1.0, dec.eigenvalues.cwiseAbs().maxCoeff());
    Eigen::VectorXd roots(dec.eigenvalues.size());
    for (int i = 0; i < dec.eigenvalues.size(); ++i) {
        if (dec.eigenvalues[i] < floor)
            throw PreconditionError("psd_factor: moment matrix has a negative eigenvalue");
        roots[i] = std::sqrt(std::max(0.0, dec.eigenvalues[i]));
    }
    return dec.eigenvectors * roots.asDiagonal();
}

OnticSampleSet sample_states(const GaussianState& state, int count, std::uint64_t seed) {
    if (count < 1) throw ConfigError("sample_states: count must be >= 1");
    const Eigen::MatrixXd factor = psd_factor(state.moments());
    OnticSampleSet set;
    set.points = draw_normals(count, state.dim(), seed) * factor.transpose();
    set.points.rowwise() += state.means().transpose();
    set.seed = seed;
    set.source = "gaussian";
    return set;
}

OnticSampleSet sample_states(const GaussianMixture& mix, int count, std::uint64_t seed) {
    if (count < 1) throw ConfigError("sample_states: count must be >= 1");
    std::vector<Eigen::MatrixXd> factors;
    factors.reserve(mix.size());
    for (const auto& c : mix.components()) factors.push_back(psd_factor(c.moments()));

    const int dim = 2 * mix.modes();
    OnticSampleSet set;
    set.points.resize(count, dim);
    for (int i = 0; i < count; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        const double u = rng.uniform(kComponentCounter);
        int pick = 0;
        double cumulative = 0.0;
        for (int k = 0; k < mix.size(); ++k) {
            cumulative += mix.weights()[k];
            if (u <= cumulative) {
                pick = k;
                break;
            }
            pick = k;
        }
        Eigen::VectorXd xi(dim);
        for (int c = 0; c < dim; ++c) xi[c] = rng.normal(static_cast<std::uint64_t>(c));
        set.points.row(i) =
            (mix.components()[pick].means() + factors[pick] * xi).transpose();
    }
    set.seed = seed;
    set.source = "mixture";
    return set;
}

OnticSampleSet push_symplectic(const OnticSampleSet& set, const SymplecticMap& map,
                               const PhaseVector& displacement) {
    if (map.dim() != set.dim()) throw DimensionError("push_symplectic: dimension mismatch");
    if (displacement.size() != set.dim())
        throw DimensionError("push_symplectic: displacement dimension mismatch");
    OnticSampleSet out;
    out.points = set.points * map.matrix;  // (S^T z)^T = z^T S
    out.points.rowwise() += displacement.transpose();
    out.seed = set.seed;
    out.source = set.source + "|symplectic";
    return out;
}

OnticSampleSet push_symplectic(const OnticSampleSet& set, const SymplecticMap& map) {
    return push_symplectic(set, map, PhaseVector::Zero(set.dim()));
}

OnticSampleSet push_channel(const OnticSampleSet& set, const GaussianChannel& channel,
                            std::uint64_t seed) {
    if (channel.dim() != set.dim()) throw DimensionError("push_channel: dimension mismatch");
    if (!channel_valid(channel).cup_satisfied)
        throw PreconditionError("push_channel: channel is not a valid transformation");
    const Eigen::MatrixXd factor = psd_factor(channel.noise);
    OnticSampleSet out;
    out.points = set.points * channel.x;
    out.points.rowwise() += channel.delta.transpose();
    out.points += draw_normals(set.count(), set.dim(), seed) * factor.transpose();
    out.seed = set.seed;
    out.source = set.source + "|channel";
    return out;
}

Eigen::MatrixXd simulate_measurement(const OnticSampleSet& set, const GaussianIndicator& ind,
                                     std::uint64_t seed) {
    // Conditional outcome law given the ontic state: y | z is Gaussian. For a
    // square outcome map this is y ~ N(L^{-1}(z_A - b), L^{-1} Vind L^{-T}),
    // which stays exact for arbitrarily squeezed indicators. Non-square maps
    // go through the information form y ~ N(S L^T W (z_A - b), S), W = Vind^+,
    // S = (L^T W L)^+.
    Eigen::MatrixXd gain, cov_y;
    if (ind.outcome_map.rows() == ind.outcome_map.cols()) {
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(ind.outcome_map);
        const Eigen::MatrixXd l_inv = lu.inverse();
        gain = l_inv;
        cov_y = symmetrize(l_inv * ind.moments * l_inv.transpose());
    } else {
        const Eigen::MatrixXd w = decompose_symmetric(ind.moments).pseudo_inverse();
        const Eigen::MatrixXd info = ind.outcome_map.transpose() * w * ind.outcome_map;
        cov_y = decompose_symmetric(info).pseudo_inverse();
        gain = cov_y * ind.outcome_map.transpose() * w;
    }
    const Eigen::MatrixXd factor = psd_factor(cov_y);

    std::vector<int> a_dims;
    for (int m : ind.target_modes) {
        if (m < 0 || m >= set.modes())
            throw DimensionError("simulate_measurement: target mode out of range");
        a_dims.push_back(2 * m);
        a_dims.push_back(2 * m + 1);
    }
    const int k = ind.outcome_dim();
    Eigen::MatrixXd outcomes(set.count(), k);
    for (int i = 0; i < set.count(); ++i) {
        Eigen::VectorXd z_a(a_dims.size());
        for (std::size_t d = 0; d < a_dims.size(); ++d) z_a[d] = set.points(i, a_dims[d]);
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        Eigen::VectorXd xi(k);
        for (int c = 0; c < k; ++c) xi[c] = rng.normal(static_cast<std::uint64_t>(c));
        outcomes.row(i) = (gain * (z_a - ind.base_mean) + factor * xi).transpose();
    }
    return outcomes;
}

SampleStats compute_stats(const Eigen::MatrixXd& rows) {
    const int count = static_cast<int>(rows.rows());
    const int dim = static_cast<int>(rows.cols());
    if (count < 2) throw PreconditionError("compute_stats: need at least 2 samples");

    SampleStats stats;
    stats.count = count;
    stats.mean = rows.colwise().mean();
    const Eigen::MatrixXd centered = rows.rowwise() - stats.mean.transpose();

    stats.moments = (centered.transpose() * centered) / (count - 1.0);
    stats.moments = symmetrize(stats.moments);

    stats.mean_std_error.resize(dim);
    for (int a = 0; a < dim; ++a)
        stats.mean_std_error[a] =
            std::sqrt(centered.col(a).squaredNorm() / (count * (count - 1.0)));

    // Jackknife over leave-one-out covariances; affine in the per-sample
    // products, so it collapses to a single pass per entry.
    stats.moments_std_error.resize(dim, dim);
    for (int a = 0; a < dim; ++a)
        for (int b = a; b < dim; ++b) {
            double se = std::numeric_limits<double>::infinity();
            if (count >= 3) {
                const Eigen::ArrayXd products =
                    centered.col(a).array() * centered.col(b).array();
                const double spread = (products - products.mean()).square().sum();
                se = std::sqrt(count * spread /
                               ((count - 1.0) * (count - 2.0) * (count - 2.0)));
            }
            stats.moments_std_error(a, b) = se;
            stats.moments_std_error(b, a) = se;
        }
    return stats;
}

SampleStats empirical_moments(const OnticSampleSet& set) {
    if (set.count() < 2) throw PreconditionError("empirical_moments: need at least 2 samples");
    return compute_stats(set.points);
}

}  // namespace erl
