#include "erl/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "erl/linalg.hpp"

namespace erl {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

// log of N(x; mean, cov) using a pseudo-path for degenerate cov
double log_normal_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                          const Eigen::MatrixXd& cov, bool* used_pseudo = nullptr) {
    const auto dec = decompose_symmetric(cov);
    if (used_pseudo && dec.singular()) *used_pseudo = true;
    const Eigen::VectorXd centered = dec.eigenvectors.transpose() * (x - mean);
    double log_density = 0.0;
    for (int i = 0; i < centered.size(); ++i) {
        if (dec.eigenvalues[i] > dec.cutoff) {
            log_density -= 0.5 * centered[i] * centered[i] / dec.eigenvalues[i];
            log_density -= 0.5 * std::log(kTwoPi * dec.eigenvalues[i]);
        } else if (std::abs(centered[i]) > 1e-8 * (1.0 + mean.cwiseAbs().maxCoeff())) {
            return -std::numeric_limits<double>::infinity();
        }
    }
    return log_density;
}

struct Partition {
    std::vector<int> a_dims;  // phase-space indices of the target modes, indicator order
    std::vector<int> b_dims;  // remaining indices, ascending mode order
};

Partition partition_dims(const GaussianState& state, const GaussianIndicator& ind) {
    Partition part;
    std::vector<bool> target(state.modes(), false);
    for (int m : ind.target_modes) {
        if (m < 0 || m >= state.modes())
            throw DimensionError("measurement: target mode out of range for this state");
        target[m] = true;
        part.a_dims.push_back(2 * m);
        part.a_dims.push_back(2 * m + 1);
    }
    for (int m = 0; m < state.modes(); ++m)
        if (!target[m]) {
            part.b_dims.push_back(2 * m);
            part.b_dims.push_back(2 * m + 1);
        }
    return part;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& idx) {
    Eigen::VectorXd out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
    return out;
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = m(rows[r], cols[c]);
    return out;
}

}  // namespace

GaussianIndicator::GaussianIndicator(std::vector<int> targets, Eigen::MatrixXd L,
                                     Eigen::VectorXd base, Eigen::MatrixXd vind, double w)
    : target_modes(std::move(targets)),
      outcome_map(std::move(L)),
      base_mean(std::move(base)),
      moments(std::move(vind)),
      weight(w) {
    if (target_modes.empty()) throw ConfigError("GaussianIndicator: no target modes");
    std::vector<int> sorted = target_modes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ConfigError("GaussianIndicator: repeated target mode");
    const int d = dim();
    if (outcome_map.rows() != d || base_mean.size() != d || moments.rows() != d ||
        moments.cols() != d)
        throw DimensionError("GaussianIndicator: field dimensions disagree");
    if ((moments - moments.transpose()).cwiseAbs().maxCoeff() >
        1e-10 * std::max(1.0, moments.cwiseAbs().maxCoeff()))
        throw DimensionError("GaussianIndicator: moment matrix is not symmetric");
    if (weight <= 0.0) throw ConfigError("GaussianIndicator: weight must be positive");
    moments = symmetrize(moments);
}

GaussianIndicator heterodyne_indicator(int mode, double lambda) {
    return GaussianIndicator({mode}, Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2),
                             0.5 * lambda * Eigen::MatrixXd::Identity(2, 2));
}

GaussianIndicator quadrature_indicator(int mode, double theta, double r, double lambda) {
    const GaussianState shape = quadrature_state(theta, 0.0, r, lambda);
    return GaussianIndicator({mode}, Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2),
                             shape.moments());
}

GaussianIndicator correlated_indicator(int mode_a, int mode_b, double r, double lambda) {
    const GaussianState shape = epr_state(r, lambda);
    return GaussianIndicator({mode_a, mode_b}, Eigen::MatrixXd::Identity(4, 4),
                             Eigen::VectorXd::Zero(4), shape.moments());
}

ValidityReport indicator_valid(const GaussianIndicator& ind, double lambda, double tol) {
    const GaussianState normalized(lambda, ind.base_mean, ind.moments);
    return validate(normalized, tol);
}

double indicator_family_norm(const GaussianIndicator& ind) {
    if (ind.outcome_map.rows() != ind.outcome_map.cols())
        throw DimensionError("indicator_family_norm: outcome map must be square");
    const double det = std::abs(ind.outcome_map.determinant());
    if (det == 0.0) throw NumericError("indicator_family_norm: outcome map is singular");
    return ind.weight / det;
}

double outcome_density(const GaussianState& state, const GaussianIndicator& ind,
                       const Eigen::VectorXd& y) {
    if (y.size() != ind.outcome_dim())
        throw DimensionError("outcome_density: outcome dimension mismatch");
    const auto part = partition_dims(state, ind);
    const Eigen::VectorXd mean_a = gather(state.means(), part.a_dims);
    const Eigen::MatrixXd v_a = gather(state.moments(), part.a_dims, part.a_dims);
    const Eigen::VectorXd target = ind.outcome_map * y + ind.base_mean;
    const double log_d = log_normal_density(target, mean_a, v_a + ind.moments);
    return ind.weight * std::exp(log_d);
}

MeasurementRecord condition(const GaussianState& state, const GaussianIndicator& ind,
                            const Eigen::VectorXd& y) {
    if (y.size() != ind.outcome_dim())
        throw DimensionError("condition: outcome dimension mismatch");
    const auto part = partition_dims(state, ind);
    if (part.b_dims.empty())
        throw PreconditionError("condition: no unmeasured modes remain; use collapse_rule");

    const Eigen::VectorXd mean_a = gather(state.means(), part.a_dims);
    const Eigen::VectorXd mean_b = gather(state.means(), part.b_dims);
    const Eigen::MatrixXd v_a = gather(state.moments(), part.a_dims, part.a_dims);
    const Eigen::MatrixXd v_b = gather(state.moments(), part.b_dims, part.b_dims);
    const Eigen::MatrixXd v_ab = gather(state.moments(), part.a_dims, part.b_dims);

    const Eigen::MatrixXd total = v_a + ind.moments;
    bool used_pseudo = false;
    // K^T = total^{-1} v_ab, so K = v_ba total^{-1}
    const Eigen::MatrixXd kt = solve_psd(total, v_ab, &used_pseudo);
    const Eigen::VectorXd target = ind.outcome_map * y + ind.base_mean;

    const Eigen::MatrixXd posterior_v = symmetrize(v_b - kt.transpose() * v_ab);
    const Eigen::VectorXd posterior_d = mean_b + kt.transpose() * (target - mean_a);

    bool density_pseudo = false;
    const double log_like = log_normal_density(target, mean_a, total, &density_pseudo);

    MeasurementRecord record{y, ind.weight * std::exp(log_like),
                             GaussianState(state.lambda(), posterior_d, posterior_v),
                             used_pseudo || density_pseudo};
    return record;
}

MixtureMeasurementRecord mixture_condition(const GaussianMixture& mix,
                                           const GaussianIndicator& ind,
                                           const Eigen::VectorXd& y) {
    std::vector<double> log_weights(mix.size());
    std::vector<GaussianState> posteriors;
    posteriors.reserve(mix.size());
    double max_log = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < mix.size(); ++k) {
        const auto record = condition(mix.components()[k], ind, y);
        const double log_like =
            record.likelihood > 0.0 ? std::log(record.likelihood)
                                    : -std::numeric_limits<double>::infinity();
        log_weights[k] = std::log(mix.weights()[k]) + log_like;
        max_log = std::max(max_log, log_weights[k]);
        posteriors.push_back(record.posterior);
    }
    if (!std::isfinite(max_log))
        throw NumericError(
            "mixture_condition: all component likelihoods underflowed; "
            "rescale the outcome or the mixture parameters");

    std::vector<double> weights(mix.size());
    std::vector<GaussianState> kept;
    std::vector<double> kept_weights;
    double total = 0.0;
    for (int k = 0; k < mix.size(); ++k) {
        weights[k] = std::exp(log_weights[k] - max_log);
        total += weights[k];
    }
    double likelihood = 0.0;
    for (int k = 0; k < mix.size(); ++k) {
        likelihood += std::exp(log_weights[k]);
        const double w = weights[k] / total;
        if (w > 0.0) {
            kept.push_back(posteriors[k]);
            kept_weights.push_back(w);
        }
    }
    // renormalize exactly after dropping zero-weight components
    double kept_total = 0.0;
    for (double w : kept_weights) kept_total += w;
    for (double& w : kept_weights) w /= kept_total;

    return {y, likelihood, GaussianMixture(std::move(kept_weights), std::move(kept))};
}

GaussianState collapse_rule(const GaussianState& state, double theta, double y,
                            double conjugate_variance_cap, double resolution_variance) {
    if (state.modes() != 1)
        throw PreconditionError("collapse_rule: single-mode states only");
    const double lambda = state.lambda();
    if (conjugate_variance_cap <= lambda)
        throw ConfigError("collapse_rule: conjugate variance cap must exceed lambda");
    if (resolution_variance <= 0.0)
        throw ConfigError("collapse_rule: resolution variance must be positive");
    if (resolution_variance * conjugate_variance_cap < 0.25 * lambda * lambda)
        throw PreconditionError(
            "collapse_rule: cap times resolution falls below the uncertainty floor");
    Eigen::VectorXd means(2);
    means << y, 0.0;
    Eigen::MatrixXd moments = Eigen::MatrixXd::Zero(2, 2);
    moments(0, 0) = resolution_variance;
    moments(1, 1) = conjugate_variance_cap;
    return transform(GaussianState(lambda, means, moments), make_rotation(-theta, 0, 1));
}

Eigen::MatrixXd momentum_inversion(int modes) {
    Eigen::VectorXd diag(2 * modes);
    for (int i = 0; i < modes; ++i) {
        diag[2 * i] = 1.0;
        diag[2 * i + 1] = -1.0;
    }
    return diag.asDiagonal();
}

}  // namespace erl
