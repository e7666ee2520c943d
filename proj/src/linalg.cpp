#include "erl/linalg.hpp"

#include <cmath>

namespace erl {

Eigen::MatrixXd SymmetricDecomposition::pseudo_inverse() const {
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(eigenvalues.size());
    for (int i = 0; i < eigenvalues.size(); ++i)
        if (std::abs(eigenvalues[i]) > cutoff) inv[i] = 1.0 / eigenvalues[i];
    return eigenvectors * inv.asDiagonal() * eigenvectors.transpose();
}

bool SymmetricDecomposition::singular() const {
    for (int i = 0; i < eigenvalues.size(); ++i)
        if (std::abs(eigenvalues[i]) <= cutoff) return true;
    return false;
}

double SymmetricDecomposition::log_pseudo_det() const {
    double sum = 0.0;
    for (int i = 0; i < eigenvalues.size(); ++i)
        if (std::abs(eigenvalues[i]) > cutoff) sum += std::log(std::abs(eigenvalues[i]));
    return sum;
}

SymmetricDecomposition decompose_symmetric(const Eigen::MatrixXd& m, double rel_threshold) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrize(m));
    SymmetricDecomposition out;
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    out.cutoff = rel_threshold * std::max(out.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
    return out;
}

Eigen::MatrixXd solve_psd(const Eigen::MatrixXd& m, const Eigen::MatrixXd& b, bool* used_pseudo) {
    if (used_pseudo) *used_pseudo = false;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(symmetrize(m));
    if (ldlt.info() == Eigen::Success) {
        Eigen::MatrixXd x = ldlt.solve(b);
        const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
        if ((m * x - b).cwiseAbs().maxCoeff() <= 1e-8 * scale) return x;
    }
    if (used_pseudo) *used_pseudo = true;
    return decompose_symmetric(m).pseudo_inverse() * b;
}

}  // namespace erl
