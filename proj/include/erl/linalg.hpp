#pragma once

#include <Eigen/Dense>

namespace erl {

/// 0.5 * (M + M^T).
inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
    return 0.5 * (m + m.transpose());
}

struct SymmetricDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    double cutoff = 0.0;  // eigenvalues with |e| <= cutoff are treated as zero

    Eigen::MatrixXd pseudo_inverse() const;
    bool singular() const;            // any eigenvalue at or below the cutoff
    double log_pseudo_det() const;    // sum of log of retained eigenvalues
};

/// Eigendecomposition of a symmetric matrix with a relative null threshold.
SymmetricDecomposition decompose_symmetric(const Eigen::MatrixXd& m,
                                           double rel_threshold = 1e-10);

/// Solve M x = b for symmetric positive (semi)definite M. Uses LDLT and falls
/// back to the thresholded pseudoinverse when the factorization is unreliable;
/// *used_pseudo reports which path was taken.
Eigen::MatrixXd solve_psd(const Eigen::MatrixXd& m, const Eigen::MatrixXd& b,
                          bool* used_pseudo = nullptr);

}  // namespace erl
