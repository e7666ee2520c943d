#include "erl/state.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "erl/linalg.hpp"
#include "erl/rng.hpp"

namespace erl {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

Eigen::MatrixXcd cup_matrix(const Eigen::MatrixXd& gamma, double lambda) {
    const int modes = static_cast<int>(gamma.rows()) / 2;
    const std::complex<double> imag_unit(0.0, 1.0);
    return gamma.cast<std::complex<double>>() +
           imag_unit * lambda * build_sigma(modes).cast<std::complex<double>>();
}

ValidityReport cup_report(const Eigen::MatrixXd& gamma, double lambda, double tol, bool max_ent) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(cup_matrix(gamma, lambda),
                                                           Eigen::EigenvaluesOnly);
    ValidityReport report;
    report.min_eigenvalue = solver.eigenvalues().minCoeff();
    report.cup_satisfied = report.min_eigenvalue >= -tol;
    report.saturating = report.cup_satisfied && report.min_eigenvalue <= tol;
    report.max_ent_satisfied = max_ent;
    return report;
}

}  // namespace

GaussianState::GaussianState(double lambda, Eigen::VectorXd means, Eigen::MatrixXd moments,
                             double symmetry_tol)
    : lambda_(lambda), means_(std::move(means)), moments_(std::move(moments)) {
    if (lambda_ <= 0.0) throw ConfigError("GaussianState: lambda must be positive");
    if (moments_.rows() != moments_.cols())
        throw DimensionError("GaussianState: moment matrix must be square");
    if (means_.size() != moments_.rows())
        throw DimensionError("GaussianState: means and moments disagree in dimension");
    if (means_.size() % 2 != 0 || means_.size() == 0)
        throw DimensionError("GaussianState: phase-space dimension must be even and positive");
    const double scale = std::max(1.0, moments_.cwiseAbs().maxCoeff());
    if ((moments_ - moments_.transpose()).cwiseAbs().maxCoeff() > symmetry_tol * scale)
        throw DimensionError("GaussianState: moment matrix is not symmetric within tolerance");
    moments_ = symmetrize(moments_);
    modes_ = static_cast<int>(means_.size()) / 2;
}

ValidityReport validate(const GaussianState& state, double tol) {
    // Gaussians maximize entropy for given moments, so max-ent holds by construction.
    return cup_report(state.gamma(), state.lambda(), tol, true);
}

double density_at(const GaussianState& state, const PhaseVector& z) {
    if (z.size() != state.dim()) throw DimensionError("density_at: point dimension mismatch");
    const auto dec = decompose_symmetric(state.moments());
    const Eigen::VectorXd centered = dec.eigenvectors.transpose() * (z - state.means());
    double log_density = 0.0;
    const double null_tol = 1e-8 * (1.0 + state.means().cwiseAbs().maxCoeff());
    for (int i = 0; i < centered.size(); ++i) {
        if (dec.eigenvalues[i] > dec.cutoff) {
            log_density -= 0.5 * centered[i] * centered[i] / dec.eigenvalues[i];
            log_density -= 0.5 * std::log(kTwoPi * dec.eigenvalues[i]);
        } else if (std::abs(centered[i]) > null_tol) {
            return 0.0;  // off the support subspace
        }
    }
    return std::exp(log_density);
}

double entropy(const GaussianState& state) {
    const auto dec = decompose_symmetric(state.moments());
    if (dec.eigenvalues.minCoeff() <= dec.cutoff)
        return -std::numeric_limits<double>::infinity();
    double log_det = 0.0;
    for (int i = 0; i < dec.eigenvalues.size(); ++i) log_det += std::log(dec.eigenvalues[i]);
    return 0.5 * (state.dim() * std::log(kTwoPi * std::exp(1.0)) + log_det);
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
    if (a.lambda() != b.lambda()) throw ConfigError("tensor: lambda mismatch");
    Eigen::VectorXd means(a.dim() + b.dim());
    means << a.means(), b.means();
    Eigen::MatrixXd moments = Eigen::MatrixXd::Zero(a.dim() + b.dim(), a.dim() + b.dim());
    moments.topLeftCorner(a.dim(), a.dim()) = a.moments();
    moments.bottomRightCorner(b.dim(), b.dim()) = b.moments();
    return GaussianState(a.lambda(), std::move(means), std::move(moments));
}

GaussianState marginal(const GaussianState& state, const std::vector<int>& modes) {
    if (modes.empty()) throw ConfigError("marginal: mode subset must be nonempty");
    std::vector<int> idx;
    idx.reserve(2 * modes.size());
    std::vector<bool> seen(state.modes(), false);
    for (int m : modes) {
        if (m < 0 || m >= state.modes()) throw ConfigError("marginal: mode index out of range");
        if (seen[m]) throw ConfigError("marginal: repeated mode index");
        seen[m] = true;
        idx.push_back(2 * m);
        idx.push_back(2 * m + 1);
    }
    const int dim = static_cast<int>(idx.size());
    Eigen::VectorXd means(dim);
    Eigen::MatrixXd moments(dim, dim);
    for (int r = 0; r < dim; ++r) {
        means[r] = state.means()[idx[r]];
        for (int c = 0; c < dim; ++c) moments(r, c) = state.moments()(idx[r], idx[c]);
    }
    return GaussianState(state.lambda(), std::move(means), std::move(moments));
}

GaussianState transform(const GaussianState& state, const SymplecticMap& map,
                        const PhaseVector& displacement) {
    if (map.dim() != state.dim()) throw DimensionError("transform: map dimension mismatch");
    if (displacement.size() != state.dim())
        throw DimensionError("transform: displacement dimension mismatch");
    const Eigen::MatrixXd& s = map.matrix;
    return GaussianState(state.lambda(), s.transpose() * state.means() + displacement,
                         symmetrize(s.transpose() * state.moments() * s));
}

GaussianState transform(const GaussianState& state, const SymplecticMap& map) {
    return transform(state, map, PhaseVector::Zero(state.dim()));
}

GaussianState vacuum_state(int modes, double lambda) {
    if (modes < 1) throw DimensionError("vacuum_state: mode count must be >= 1");
    return GaussianState(lambda, Eigen::VectorXd::Zero(2 * modes),
                         0.5 * lambda * Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

GaussianState quadrature_state(double theta, double a, double r, double lambda) {
    if (r < 0.0) throw ConfigError("quadrature_state: squeezing must be nonnegative");
    Eigen::VectorXd means(2);
    means << a, 0.0;
    Eigen::MatrixXd moments = Eigen::MatrixXd::Zero(2, 2);
    moments(0, 0) = 0.5 * lambda * std::exp(-2.0 * r);
    moments(1, 1) = 0.5 * lambda * std::exp(2.0 * r);
    const GaussianState squeezed(lambda, std::move(means), std::move(moments));
    // Rotating by -theta sends the sharp direction onto q_theta and the mean
    // to (a cos(theta), a sin(theta)).
    return transform(squeezed, make_rotation(-theta, 0, 1));
}

Eigen::MatrixXd epr_d_plus(double r, double lambda, int modes) {
    Eigen::VectorXd diag(2 * modes);
    for (int i = 0; i < modes; ++i) {
        diag[2 * i] = 1.0;
        diag[2 * i + 1] = lambda * lambda;
    }
    return std::cosh(2.0 * r) * Eigen::MatrixXd(diag.asDiagonal());
}

Eigen::MatrixXd epr_d_minus(double r, double lambda, int modes) {
    Eigen::VectorXd diag(2 * modes);
    for (int i = 0; i < modes; ++i) {
        diag[2 * i] = 1.0;
        diag[2 * i + 1] = -lambda * lambda;
    }
    return std::sinh(2.0 * r) * Eigen::MatrixXd(diag.asDiagonal());
}

GaussianState epr_state(double r, double lambda) {
    if (r < 0.0) throw ConfigError("epr_state: squeezing must be nonnegative");
    Eigen::MatrixXd gamma(4, 4);
    gamma.topLeftCorner(2, 2) = epr_d_plus(r, lambda);
    gamma.bottomRightCorner(2, 2) = epr_d_plus(r, lambda);
    gamma.topRightCorner(2, 2) = epr_d_minus(r, lambda);
    gamma.bottomLeftCorner(2, 2) = epr_d_minus(r, lambda);
    return GaussianState(lambda, Eigen::VectorXd::Zero(4), 0.5 * gamma);
}

double bhattacharyya_fidelity(const GaussianState& a, const GaussianState& b, bool* degenerate) {
    if (a.dim() != b.dim()) throw DimensionError("bhattacharyya_fidelity: dimension mismatch");
    if (degenerate) *degenerate = false;
    const Eigen::MatrixXd mid = 0.5 * (a.moments() + b.moments());
    const auto dec_mid = decompose_symmetric(mid);
    const auto dec_a = decompose_symmetric(a.moments());
    const auto dec_b = decompose_symmetric(b.moments());
    if (degenerate && (dec_mid.singular() || dec_a.singular() || dec_b.singular()))
        *degenerate = true;
    const Eigen::VectorXd delta = a.means() - b.means();
    const double quad = delta.dot(dec_mid.pseudo_inverse() * delta);
    const double log_f = 0.25 * dec_a.log_pseudo_det() + 0.25 * dec_b.log_pseudo_det() -
                         0.5 * dec_mid.log_pseudo_det() - 0.125 * quad;
    return std::min(1.0, std::exp(log_f));
}

GaussianMixture::GaussianMixture(std::vector<double> weights, std::vector<GaussianState> components,
                                 double weight_tol)
    : weights_(std::move(weights)), components_(std::move(components)) {
    if (weights_.empty() || weights_.size() != components_.size())
        throw ConfigError("GaussianMixture: weights and components must be nonempty and equal in number");
    double total = 0.0;
    for (double w : weights_) {
        if (w <= 0.0) throw ConfigError("GaussianMixture: weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > weight_tol)
        throw ConfigError("GaussianMixture: weights must sum to 1");
    for (const auto& c : components_) {
        if (c.modes() != components_.front().modes())
            throw DimensionError("GaussianMixture: components disagree in dimension");
        if (c.lambda() != components_.front().lambda())
            throw ConfigError("GaussianMixture: components disagree in lambda");
    }
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> mixture_moments(const GaussianMixture& mix) {
    const int dim = 2 * mix.modes();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    for (int k = 0; k < mix.size(); ++k) mean += mix.weights()[k] * mix.components()[k].means();
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 0; k < mix.size(); ++k) {
        const auto& c = mix.components()[k];
        second += mix.weights()[k] * (c.moments() + c.means() * c.means().transpose());
    }
    return {mean, symmetrize(second - mean * mean.transpose())};
}

namespace {

bool all_components_identical(const GaussianMixture& mix) {
    for (int k = 1; k < mix.size(); ++k) {
        const auto& first = mix.components().front();
        const auto& c = mix.components()[k];
        if ((first.means() - c.means()).cwiseAbs().maxCoeff() > 1e-12) return false;
        if ((first.moments() - c.moments()).cwiseAbs().maxCoeff() > 1e-12) return false;
    }
    return true;
}

}  // namespace

ValidityReport mixture_validate(const GaussianMixture& mix, double tol) {
    const auto [mean, second] = mixture_moments(mix);
    (void)mean;
    return cup_report(2.0 * second, mix.lambda(), tol, all_components_identical(mix));
}

double mixture_density_at(const GaussianMixture& mix, const PhaseVector& z) {
    double density = 0.0;
    for (int k = 0; k < mix.size(); ++k)
        density += mix.weights()[k] * density_at(mix.components()[k], z);
    return density;
}

GaussianState random_valid_state(int modes, std::uint64_t seed, double lambda,
                                 double max_squeeze, bool saturating) {
    CounterRng rng(seed, 0x5354415445ULL);
    std::uint64_t counter = 0;
    GaussianState product = [&] {
        auto one = [&] {
            const double theta = kTwoPi * rng.uniform(counter++);
            const double r = max_squeeze * rng.uniform(counter++);
            const double a = 2.0 * rng.normal(counter++);
            return quadrature_state(theta, a, r, lambda);
        };
        GaussianState acc = one();
        for (int m = 1; m < modes; ++m) acc = tensor(acc, one());
        return acc;
    }();
    if (!saturating) {
        // stir in a small PSD perturbation so the state is strictly valid
        const int dim = 2 * modes;
        Eigen::MatrixXd noise(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) noise(i, j) = rng.normal(counter++);
        const Eigen::MatrixXd psd = 0.05 * lambda * noise * noise.transpose() / dim;
        product = GaussianState(lambda, product.means(), product.moments() + psd);
    }
    return transform(product, random_symplectic(modes, seed ^ 0xabcdef12345ULL));
}

}  // namespace erl
