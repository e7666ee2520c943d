#include "erl/wigner.hpp"

#include <cmath>
#include <complex>

#include "erl/linalg.hpp"
#include "erl/measurement.hpp"

namespace erl {

QuantumGaussianSpec::QuantumGaussianSpec(double hbar_in, Eigen::VectorXd means_in,
                                         Eigen::MatrixXd gamma_in)
    : hbar(hbar_in), means(std::move(means_in)), gamma(std::move(gamma_in)) {
    if (hbar <= 0.0) throw ConfigError("QuantumGaussianSpec: hbar must be positive");
    if (gamma.rows() != gamma.cols() || gamma.rows() != means.size())
        throw DimensionError("QuantumGaussianSpec: shape mismatch");
    if (means.size() % 2 != 0 || means.size() == 0)
        throw DimensionError("QuantumGaussianSpec: dimension must be even and positive");
    if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() >
        1e-10 * std::max(1.0, gamma.cwiseAbs().maxCoeff()))
        throw DimensionError("QuantumGaussianSpec: gamma must be symmetric");
    gamma = symmetrize(gamma);
}

PsdCheck quantum_uncertainty_check(const QuantumGaussianSpec& spec, double tol) {
    const std::complex<double> imag_unit(0.0, 1.0);
    const Eigen::MatrixXcd herm =
        spec.gamma.cast<std::complex<double>>() +
        imag_unit * spec.hbar * build_sigma(spec.modes()).cast<std::complex<double>>();
    return is_psd_hermitian(herm, tol);
}

GaussianState wigner_state(const QuantumGaussianSpec& spec, double tol) {
    if (!quantum_uncertainty_check(spec, tol).psd)
        throw PreconditionError("wigner_state: spec violates the quantum uncertainty relation");
    return GaussianState(spec.hbar, spec.means, 0.5 * spec.gamma);
}

QuantumGaussianSpec quantum_spec(const GaussianState& state) {
    return QuantumGaussianSpec(state.lambda(), state.means(), state.gamma());
}

double born_overlap(const QuantumGaussianSpec& state, const QuantumGaussianSpec& povm_element,
                    double povm_weight) {
    if (state.means.size() != povm_element.means.size())
        throw DimensionError("born_overlap: dimension mismatch");
    // overlap of two normal densities: N(d_E - d_rho; 0, V_rho + V_E)
    const GaussianState rho = wigner_state(state);
    const GaussianIndicator element(
        [&] {
            std::vector<int> all(state.modes());
            for (int i = 0; i < state.modes(); ++i) all[i] = i;
            return all;
        }(),
        Eigen::MatrixXd::Identity(state.means.size(), state.means.size()), povm_element.means,
        0.5 * povm_element.gamma, povm_weight);
    return outcome_density(rho, element, Eigen::VectorXd::Zero(state.means.size()));
}

double purity(const QuantumGaussianSpec& spec) {
    const auto dec = decompose_symmetric(spec.gamma);
    if (dec.eigenvalues.minCoeff() <= dec.cutoff)
        throw NumericError("purity: singular covariance matrix");
    const double log_purity =
        spec.modes() * std::log(spec.hbar) - 0.5 * dec.log_pseudo_det();
    return std::min(1.0, std::exp(log_purity));
}

TransitionKernel wigner_map(const GaussianChannel& channel, double tol) {
    if (!channel_valid(channel, tol).cup_satisfied)
        throw PreconditionError("wigner_map: channel is not a valid transformation");
    return {channel.x, channel.delta, channel.noise};
}

}  // namespace erl
