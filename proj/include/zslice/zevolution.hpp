#pragma once

#include <cstdint>

#include "zslice/operator_matrix.hpp"

namespace zslice::zevo {

/// Biorthogonal pair evolving under H' (right) and H'^dagger (left).
struct StatePair {
    VectorXc left;
    VectorXc right;
    double z = 0.0;

    /// Both vectors set to `initial` at z = 0.
    static StatePair at_origin(const VectorXc& initial);
};

/// Eigenvector matrices with a condition number above this are rejected.
inline constexpr double kConditioningThreshold = 1e12;

/// H' together with its cached eigendecomposition H' = V D V^-1.
/// Immutable after construction.
class EvolutionContext {
public:
    explicit EvolutionContext(OperatorMatrix hprime);

    const OperatorMatrix& hprime() const noexcept { return hprime_; }
    const VectorXc& eigenvalues() const noexcept { return values_; }
    const MatrixXc& right_vectors() const noexcept { return right_; }
    const MatrixXc& right_vectors_inverse() const noexcept { return right_inv_; }
    double condition_number() const noexcept { return condition_; }
    Eigen::Index dim() const noexcept { return hprime_.dim(); }

    /// exp(s * H') for complex s, through the cached decomposition.
    MatrixXc exp_scaled(complex s) const;

private:
    OperatorMatrix hprime_;
    VectorXc values_;
    MatrixXc right_;
    MatrixXc right_inv_;
    double condition_ = 1.0;
};

/// right -> exp(-i H' dz) right, left -> exp(-i H'^dagger dz) left, z -> z + dz.
StatePair evolve_pair(const StatePair& p, double dz, const EvolutionContext& ctx);

/// exp(i H' z) op exp(-i H' z).
OperatorMatrix heisenberg_transport(const OperatorMatrix& op, double z, const EvolutionContext& ctx);

/// <left| op |right>, no normalization.
complex expectation(const StatePair& p, const OperatorMatrix& op);

struct EigenPairReport {
    double right_residual = 0.0;   // max_j |phi(z) r_j - phi_j r_j| / |r_j|
    double left_residual = 0.0;    // max_j |l_j phi(z) - phi_j l_j| / |l_j|
    double overlap_defect = 0.0;   // max_j |r_j - l_j^dagger|
};

/// Transports the eigenvectors of hermitian `op` (taken at z = 0) and checks
/// that exp(iH'z)|phi> is a right eigenvector and <phi|exp(-iH'z) a left
/// eigenvector of op(z) with the unchanged eigenvalue.
EigenPairReport left_right_eigen_check(const OperatorMatrix& op, double z, const EvolutionContext& ctx);

/// max |H' H'^dagger - H'^dagger H'|, optionally restricted by a corner mask.
double normality_check(const OperatorMatrix& hprime);
double normality_check(const OperatorMatrix& hprime, const CornerMask& mask);

/// Seeded non-hermitian test generator S D S^-1 with
/// S = I + (0.25 / sqrt(dim)) R, R having entries uniform in the complex unit
/// square [-1,1]^2 (splitmix64-counter stream `seed`), and
/// D_j = (j + 1) + i (-1)^j 0.5^(j / 2). For dim = 2, D = diag(1+i, 2-i).
OperatorMatrix nonhermitian_fixture(int dim, std::uint64_t seed);

/// Seeded normal but non-hermitian U D U^dagger with U unitary (QR of a seeded
/// random matrix) and D the same diagonal as nonhermitian_fixture.
OperatorMatrix normal_fixture(int dim, std::uint64_t seed);

/// Seeded hermitian matrix (R + R^dagger) / 2.
OperatorMatrix hermitian_fixture(int dim, std::uint64_t seed);

/// Seeded normalized complex vector.
VectorXc random_state(int dim, std::uint64_t seed);

}  // namespace zslice::zevo
