#include "erl/symplectic.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "erl/rng.hpp"

namespace erl {

Eigen::MatrixXd build_sigma(int modes) {
    if (modes < 1) throw DimensionError("build_sigma: mode count must be >= 1");
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int i = 0; i < modes; ++i) {
        sigma(2 * i, 2 * i + 1) = -1.0;
        sigma(2 * i + 1, 2 * i) = 1.0;
    }
    return sigma;
}

bool is_symplectic(const Eigen::MatrixXd& a, double tol) {
    if (a.rows() != a.cols()) throw DimensionError("is_symplectic: matrix must be square");
    if (a.rows() % 2 != 0 || a.rows() == 0) throw DimensionError("is_symplectic: dimension must be even and positive");
    const Eigen::MatrixXd sigma = build_sigma(static_cast<int>(a.rows()) / 2);
    return (a.transpose() * sigma * a - sigma).cwiseAbs().maxCoeff() <= tol;
}

PsdCheck is_psd_hermitian(const Eigen::MatrixXcd& m, double tol) {
    if (m.rows() != m.cols()) throw DimensionError("is_psd_hermitian: matrix must be square");
    const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (dev > tol * scale && dev > tol)
        throw DimensionError("is_psd_hermitian: matrix is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    return {min_eig >= -tol, min_eig};
}

Eigen::MatrixXd schur_complement(const Eigen::MatrixXd& m, int k) {
    if (m.rows() != m.cols()) throw DimensionError("schur_complement: matrix must be square");
    if (k <= 0 || k >= m.rows()) throw DimensionError("schur_complement: partition index out of range");
    const int rest = static_cast<int>(m.rows()) - k;
    const Eigen::MatrixXd a = m.topLeftCorner(k, k);
    const Eigen::MatrixXd b = m.topRightCorner(k, rest);
    const Eigen::MatrixXd c = m.bottomRightCorner(rest, rest);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (a + a.transpose()));
    const Eigen::VectorXd eigs = solver.eigenvalues();
    const double cutoff = 1e-10 * std::max(eigs.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(k);
    for (int i = 0; i < k; ++i)
        if (std::abs(eigs[i]) > cutoff) inv[i] = 1.0 / eigs[i];
    const Eigen::MatrixXd a_pinv = solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().transpose();
    return c - b.transpose() * a_pinv * b;
}

double poisson_bracket_linear(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (u.size() != v.size()) throw DimensionError("poisson_bracket_linear: length mismatch");
    if (u.size() % 2 != 0 || u.size() == 0) throw DimensionError("poisson_bracket_linear: length must be even");
    double sum = 0.0;
    for (int i = 0; i < u.size(); i += 2) sum += u[i] * v[i + 1] - u[i + 1] * v[i];
    return sum;
}

SymplecticMap::SymplecticMap(Eigen::MatrixXd m, double tol) : matrix(std::move(m)) {
    if (!is_symplectic(matrix, tol))
        throw PreconditionError("SymplecticMap: matrix is not symplectic within tolerance");
    modes = static_cast<int>(matrix.rows()) / 2;
}

namespace {

Eigen::MatrixXd embed_two_mode(const Eigen::Matrix4d& block, int mode_a, int mode_b, int modes) {
    if (mode_a == mode_b) throw ConfigError("two-mode map: target modes must be distinct");
    if (mode_a < 0 || mode_b < 0 || mode_a >= modes || mode_b >= modes)
        throw ConfigError("two-mode map: mode index out of range");
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
    const int ia = 2 * mode_a, ib = 2 * mode_b;
    const int idx[4] = {ia, ia + 1, ib, ib + 1};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) s(idx[r], idx[c]) = block(r, c);
    return s;
}

}  // namespace

SymplecticMap make_rotation(double theta, int mode, int modes) {
    if (!std::isfinite(theta)) throw ConfigError("make_rotation: angle must be finite");
    if (mode < 0 || mode >= modes) throw ConfigError("make_rotation: mode index out of range");
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
    const double c = std::cos(theta), sn = std::sin(theta);
    s(2 * mode, 2 * mode) = c;
    s(2 * mode, 2 * mode + 1) = -sn;
    s(2 * mode + 1, 2 * mode) = sn;
    s(2 * mode + 1, 2 * mode + 1) = c;
    return SymplecticMap(std::move(s));
}

SymplecticMap make_squeeze(double r, int mode, int modes) {
    if (!std::isfinite(r)) throw ConfigError("make_squeeze: parameter must be finite");
    if (mode < 0 || mode >= modes) throw ConfigError("make_squeeze: mode index out of range");
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
    s(2 * mode, 2 * mode) = std::exp(-r);
    s(2 * mode + 1, 2 * mode + 1) = std::exp(r);
    return SymplecticMap(std::move(s));
}

SymplecticMap make_beamsplitter(double theta, int mode_a, int mode_b, int modes) {
    if (!std::isfinite(theta)) throw ConfigError("make_beamsplitter: angle must be finite");
    const double c = std::cos(theta), sn = std::sin(theta);
    Eigen::Matrix4d block;
    block << c, 0, sn, 0,
             0, c, 0, sn,
             -sn, 0, c, 0,
             0, -sn, 0, c;
    return SymplecticMap(embed_two_mode(block, mode_a, mode_b, modes));
}

SymplecticMap make_qp_coupling(double chi_t, int mode_a, int mode_b, int modes) {
    if (!std::isfinite(chi_t)) throw ConfigError("make_qp_coupling: coupling must be finite");
    // Generated by H = chi q_A p_B: the flow sends q_B -> q_B + chi t q_A and
    // p_A -> p_A - chi t p_B. The point map is z -> S^T z, so S holds the
    // transpose of the flow matrix.
    Eigen::Matrix4d flow = Eigen::Matrix4d::Identity();
    flow(2, 0) = chi_t;   // q_B += chi_t * q_A
    flow(1, 3) = -chi_t;  // p_A -= chi_t * p_B
    return SymplecticMap(embed_two_mode(flow.transpose(), mode_a, mode_b, modes));
}

SymplecticMap make_mode_permutation(const std::vector<int>& perm) {
    const int modes = static_cast<int>(perm.size());
    if (modes < 1) throw ConfigError("make_mode_permutation: empty permutation");
    std::vector<bool> seen(modes, false);
    for (int p : perm) {
        if (p < 0 || p >= modes || seen[p]) throw ConfigError("make_mode_permutation: not a permutation");
        seen[p] = true;
    }
    // Mode i ends up at slot perm[i]: z'_{perm[i]} = z_i, i.e. (S^T)_{perm[i], i} = 1.
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int i = 0; i < modes; ++i) {
        s(2 * i, 2 * perm[i]) = 1.0;
        s(2 * i + 1, 2 * perm[i] + 1) = 1.0;
    }
    return SymplecticMap(std::move(s));
}

SymplecticMap identity_map(int modes) {
    return SymplecticMap(Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

SymplecticMap make_symplectic(const SymplecticSpec& spec) {
    auto need_params = [&](std::size_t n) {
        if (spec.params.size() < n)
            throw ConfigError("make_symplectic: missing parameters for kind '" + spec.kind + "'");
    };
    auto need_targets = [&](std::size_t n) {
        if (spec.target_modes.size() < n)
            throw ConfigError("make_symplectic: missing target modes for kind '" + spec.kind + "'");
    };
    if (spec.kind == "rotation") {
        need_params(1);
        need_targets(1);
        return make_rotation(spec.params[0], spec.target_modes[0], spec.modes);
    }
    if (spec.kind == "squeeze") {
        need_params(1);
        need_targets(1);
        return make_squeeze(spec.params[0], spec.target_modes[0], spec.modes);
    }
    if (spec.kind == "beamsplitter") {
        need_params(1);
        need_targets(2);
        return make_beamsplitter(spec.params[0], spec.target_modes[0], spec.target_modes[1],
                                 spec.modes);
    }
    if (spec.kind == "qp-coupling") {
        need_params(1);
        need_targets(2);
        return make_qp_coupling(spec.params[0], spec.target_modes[0], spec.target_modes[1],
                                spec.modes);
    }
    if (spec.kind == "permutation") {
        need_targets(1);
        return make_mode_permutation(spec.target_modes);
    }
    throw ConfigError("make_symplectic: unknown kind '" + spec.kind + "'");
}

SymplecticMap random_symplectic(int modes, std::uint64_t seed) {
    if (modes < 1) throw DimensionError("random_symplectic: mode count must be >= 1");
    const int dim = 2 * modes;
    CounterRng rng(seed, 0x53594d50ULL);
    Eigen::MatrixXd h(dim, dim);
    std::uint64_t counter = 0;
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
            const double value = rng.normal(counter++) / (2.0 * modes);
            h(i, j) = value;
            h(j, i) = value;
        }
    const Eigen::MatrixXd exponent = build_sigma(modes) * h;
    return SymplecticMap(exponent.exp(), 1e-8);
}

}  // namespace erl
