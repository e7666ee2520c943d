#include "erl/channel.hpp"

#include <cmath>
#include <complex>

#include "erl/linalg.hpp"

namespace erl {

GaussianChannel::GaussianChannel(Eigen::MatrixXd x_in, Eigen::MatrixXd noise_in,
                                 Eigen::VectorXd delta_in, double lambda_in)
    : x(std::move(x_in)), noise(std::move(noise_in)), delta(std::move(delta_in)), lambda(lambda_in) {
    if (lambda <= 0.0) throw ConfigError("GaussianChannel: lambda must be positive");
    if (x.rows() != x.cols() || x.rows() % 2 != 0 || x.rows() == 0)
        throw DimensionError("GaussianChannel: X must be square with even dimension");
    if (noise.rows() != x.rows() || noise.cols() != x.cols())
        throw DimensionError("GaussianChannel: N must match X in shape");
    if (delta.size() != x.rows())
        throw DimensionError("GaussianChannel: displacement dimension mismatch");
    if ((noise - noise.transpose()).cwiseAbs().maxCoeff() >
        1e-10 * std::max(1.0, noise.cwiseAbs().maxCoeff()))
        throw DimensionError("GaussianChannel: N must be symmetric");
    noise = symmetrize(noise);
}

GaussianState apply(const GaussianChannel& channel, const GaussianState& state) {
    if (channel.dim() != state.dim()) throw DimensionError("apply: dimension mismatch");
    if (channel.lambda != state.lambda()) throw ConfigError("apply: lambda mismatch");
    return GaussianState(state.lambda(), channel.x.transpose() * state.means() + channel.delta,
                         symmetrize(channel.x.transpose() * state.moments() * channel.x +
                                    channel.noise));
}

ValidityReport channel_valid(const GaussianChannel& channel, double tol) {
    const std::complex<double> imag_unit(0.0, 1.0);
    const Eigen::MatrixXd sigma = build_sigma(channel.modes());
    const Eigen::MatrixXcd herm =
        channel.y_view().cast<std::complex<double>>() -
        imag_unit * channel.lambda * sigma.cast<std::complex<double>>() +
        imag_unit * channel.lambda *
            (channel.x.transpose() * sigma * channel.x).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    ValidityReport report;
    report.min_eigenvalue = solver.eigenvalues().minCoeff();
    report.cup_satisfied = report.min_eigenvalue >= -tol;
    report.saturating = report.cup_satisfied && report.min_eigenvalue <= tol;
    report.max_ent_satisfied = true;  // vacuous for channels
    return report;
}

GaussianChannel identity_channel(int modes, double lambda) {
    const int dim = 2 * modes;
    return GaussianChannel(Eigen::MatrixXd::Identity(dim, dim), Eigen::MatrixXd::Zero(dim, dim),
                           Eigen::VectorXd::Zero(dim), lambda);
}

GaussianChannel attenuation_channel(double eta, int modes, double lambda) {
    if (eta < 0.0 || eta > 1.0) throw ConfigError("attenuation_channel: eta must lie in [0,1]");
    const int dim = 2 * modes;
    return GaussianChannel(std::sqrt(eta) * Eigen::MatrixXd::Identity(dim, dim),
                           (1.0 - eta) * 0.5 * lambda * Eigen::MatrixXd::Identity(dim, dim),
                           Eigen::VectorXd::Zero(dim), lambda);
}

GaussianChannel dilation_induced_channel(const SymplecticMap& joint, int system_modes,
                                         const GaussianState& env) {
    if (system_modes < 1 || system_modes + env.modes() != joint.modes)
        throw DimensionError("dilation_induced_channel: block sizes do not add up");
    if (!validate(env).cup_satisfied)
        throw PreconditionError("dilation_induced_channel: environment state is invalid");
    const int na = 2 * system_modes;
    const int ne = 2 * env.modes();
    const Eigen::MatrixXd s_aa = joint.matrix.topLeftCorner(na, na);
    const Eigen::MatrixXd s_ea = joint.matrix.bottomLeftCorner(ne, na);
    return GaussianChannel(s_aa, symmetrize(s_ea.transpose() * env.moments() * s_ea),
                           s_ea.transpose() * env.means(), env.lambda());
}

GaussianChannel tensor_with_identity(const GaussianChannel& channel, int extra_modes) {
    const int dim = channel.dim();
    const int ext = 2 * extra_modes;
    Eigen::MatrixXd x = Eigen::MatrixXd::Identity(dim + ext, dim + ext);
    x.topLeftCorner(dim, dim) = channel.x;
    Eigen::MatrixXd noise = Eigen::MatrixXd::Zero(dim + ext, dim + ext);
    noise.topLeftCorner(dim, dim) = channel.noise;
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(dim + ext);
    delta.head(dim) = channel.delta;
    return GaussianChannel(std::move(x), std::move(noise), std::move(delta), channel.lambda);
}

GaussianState choi_state(const GaussianChannel& channel, double r) {
    if (r < 0.0) throw ConfigError("choi_state: regularization must be nonnegative");
    const int modes = channel.modes();
    const int dim = channel.dim();
    const Eigen::MatrixXd d_plus = epr_d_plus(r, channel.lambda, modes);
    const Eigen::MatrixXd d_minus = epr_d_minus(r, channel.lambda, modes);
    Eigen::MatrixXd gamma(2 * dim, 2 * dim);
    gamma.topLeftCorner(dim, dim) =
        channel.x.transpose() * d_plus * channel.x + channel.y_view();
    gamma.topRightCorner(dim, dim) = channel.x.transpose() * d_minus;
    gamma.bottomLeftCorner(dim, dim) = d_minus * channel.x;
    gamma.bottomRightCorner(dim, dim) = d_plus;
    Eigen::VectorXd means = Eigen::VectorXd::Zero(2 * dim);
    means.head(dim) = channel.delta;
    return GaussianState(channel.lambda, std::move(means), 0.5 * symmetrize(gamma));
}

GaussianChannel channel_from_choi(const GaussianState& choi, double r) {
    if (choi.modes() % 2 != 0)
        throw DimensionError("channel_from_choi: state must cover an even number of modes");
    if (r <= 0.0)
        throw NumericError("channel_from_choi: D-(r) is singular at r = 0; use r > 0");
    const int modes = choi.modes() / 2;
    const int dim = 2 * modes;
    const Eigen::MatrixXd gamma = choi.gamma();
    const Eigen::MatrixXd gamma_a = gamma.topLeftCorner(dim, dim);
    const Eigen::MatrixXd cross = gamma.topRightCorner(dim, dim);
    const Eigen::MatrixXd d_plus = epr_d_plus(r, choi.lambda(), modes);
    const Eigen::VectorXd d_minus_diag = epr_d_minus(r, choi.lambda(), modes).diagonal();
    const Eigen::MatrixXd d_minus_inv =
        d_minus_diag.cwiseInverse().asDiagonal();
    const Eigen::MatrixXd x = d_minus_inv * cross.transpose();
    const Eigen::MatrixXd y =
        gamma_a - cross * d_minus_inv * d_plus * d_minus_inv * cross.transpose();
    return GaussianChannel(x, 0.5 * symmetrize(y), choi.means().head(dim), choi.lambda());
}

GaussianChannel compose(const GaussianChannel& second, const GaussianChannel& first) {
    if (second.dim() != first.dim()) throw DimensionError("compose: dimension mismatch");
    if (second.lambda != first.lambda) throw ConfigError("compose: lambda mismatch");
    return GaussianChannel(
        first.x * second.x,
        symmetrize(second.noise + second.x.transpose() * first.noise * second.x),
        second.x.transpose() * first.delta + second.delta, first.lambda);
}

GaussianChannel random_valid_channel(int modes, std::uint64_t seed, double lambda) {
    const auto joint = random_symplectic(2 * modes, seed);
    const auto env = random_valid_state(modes, seed ^ 0x454e56ULL, lambda);
    return dilation_induced_channel(joint, modes, env);
}

}  // namespace erl
