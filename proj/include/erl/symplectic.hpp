#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "erl/errors.hpp"

namespace erl {

// Phase-space coordinates are interleaved: z = (q1, p1, q2, p2, ..., qn, pn).
// Much of the continuous-variable literature orders (q...q, p...p) instead;
// every matrix in this library uses the interleaved ordering.
using PhaseVector = Eigen::VectorXd;

/// The symplectic form: block-diagonal with 2x2 blocks [[0,-1],[1,0]].
Eigen::MatrixXd build_sigma(int modes);

/// True iff A' * Sigma * A == Sigma entrywise within tol.
bool is_symplectic(const Eigen::MatrixXd& a, double tol);

struct PsdCheck {
    bool psd = false;
    double min_eigenvalue = 0.0;
};

/// Smallest eigenvalue of a Hermitian matrix; psd iff min eig >= -tol.
/// Throws DimensionError if M deviates from Hermitian by more than tol.
PsdCheck is_psd_hermitian(const Eigen::MatrixXcd& m, double tol);

/// Bottom-right Schur complement c - b' a^{-1} b of M = [[a, b], [b', c]]
/// with the leading k x k block a. Near-singular a falls back to an
/// eigenvalue-thresholded pseudoinverse (threshold 1e-10 * max eigenvalue).
Eigen::MatrixXd schur_complement(const Eigen::MatrixXd& m, int k);

/// Poisson bracket of the linear observables u.z and v.z; zero iff the pair
/// is jointly knowable. {q_i, p_j} = delta_ij with this sign convention.
double poisson_bracket_linear(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// A linear canonical transformation. Acts on points as z -> S^T z, on means
/// as d -> S^T d and on second moments as V -> S^T V S.
struct SymplecticMap {
    Eigen::MatrixXd matrix;
    int modes = 0;

    SymplecticMap(Eigen::MatrixXd m, double tol = 1e-10);

    int dim() const { return 2 * modes; }
};

// Generators. Mode indices are zero-based; all factories return maps over
// `modes` total modes acting trivially outside their targets.
SymplecticMap make_rotation(double theta, int mode, int modes);          // exp(theta * Sigma_1)
SymplecticMap make_squeeze(double r, int mode, int modes);               // diag(e^-r, e^r)
SymplecticMap make_beamsplitter(double theta, int mode_a, int mode_b, int modes);
SymplecticMap make_qp_coupling(double chi_t, int mode_a, int mode_b, int modes);
SymplecticMap make_mode_permutation(const std::vector<int>& perm);
SymplecticMap identity_map(int modes);

/// Haar-flavoured generator for property tests: exp(Sigma H) with H random
/// symmetric, entries N(0,1)/(2n). Deterministic in the seed.
SymplecticMap random_symplectic(int modes, std::uint64_t seed);

/// String-dispatched construction, used by the CLI and bindings.
/// Kinds: "rotation" (theta), "squeeze" (r), "beamsplitter" (theta),
/// "qp-coupling" (chi_t), "permutation" (params ignored, targets = image).
struct SymplecticSpec {
    std::string kind;
    std::vector<double> params;
    std::vector<int> target_modes;
    int modes = 1;
};

SymplecticMap make_symplectic(const SymplecticSpec& spec);

}  // namespace erl
