#include "zslice/zevolution.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "zslice/errors.hpp"
#include "zslice/random.hpp"

namespace zslice::zevo {

namespace {

constexpr complex kI{0.0, 1.0};

MatrixXc random_matrix(int dim, std::uint64_t seed) {
    CounterRng rng(seed);
    MatrixXc r(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const double re = rng.uniform(-1.0, 1.0);
            const double im = rng.uniform(-1.0, 1.0);
            r(i, j) = complex(re, im);
        }
    }
    return r;
}

VectorXc fixture_spectrum(int dim) {
    VectorXc d(dim);
    for (int j = 0; j < dim; ++j) {
        const double sign = j % 2 == 0 ? 1.0 : -1.0;
        d(j) = complex(j + 1.0, sign * std::pow(0.5, j / 2));
    }
    return d;
}

void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
    if (got != want) {
        std::ostringstream os;
        os << what << " has dimension " << got << ", expected " << want;
        throw DimensionMismatch(os.str());
    }
}

}  // namespace

StatePair StatePair::at_origin(const VectorXc& initial) {
    return {initial, initial, 0.0};
}

EvolutionContext::EvolutionContext(OperatorMatrix hprime) : hprime_(std::move(hprime)) {
    if (hprime_.dim() == 0) throw PreconditionError("empty H'");
    Eigen::ComplexEigenSolver<MatrixXc> es(hprime_.entries, true);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition of H' failed");
    values_ = es.eigenvalues();
    right_ = es.eigenvectors();
    const Eigen::JacobiSVD<MatrixXc> svd(right_);
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    condition_ = smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
    if (!(condition_ <= kConditioningThreshold)) {
        std::ostringstream os;
        os << "H' eigenvector matrix condition number " << condition_ << " exceeds " << kConditioningThreshold;
        throw ConditioningError(os.str());
    }
    right_inv_ = right_.partialPivLu().inverse();
}

MatrixXc EvolutionContext::exp_scaled(complex s) const {
    const VectorXc e = (s * values_).array().exp();
    return right_ * e.asDiagonal() * right_inv_;
}

StatePair evolve_pair(const StatePair& p, double dz, const EvolutionContext& ctx) {
    require_dim(p.right.size(), ctx.dim(), "right state");
    require_dim(p.left.size(), ctx.dim(), "left state");
    // exp(-i H'^dagger dz) = (exp(i H' dz))^dagger
    return {ctx.exp_scaled(kI * dz).adjoint() * p.left, ctx.exp_scaled(-kI * dz) * p.right, p.z + dz};
}

OperatorMatrix heisenberg_transport(const OperatorMatrix& op, double z, const EvolutionContext& ctx) {
    require_dim(op.dim(), ctx.dim(), "operator");
    return {ctx.exp_scaled(kI * z) * op.entries * ctx.exp_scaled(-kI * z), op.label + "(z)"};
}

complex expectation(const StatePair& p, const OperatorMatrix& op) {
    require_dim(p.right.size(), op.dim(), "right state");
    require_dim(p.left.size(), op.dim(), "left state");
    return p.left.dot(op.entries * p.right);
}

EigenPairReport left_right_eigen_check(const OperatorMatrix& op, double z, const EvolutionContext& ctx) {
    require_dim(op.dim(), ctx.dim(), "operator");
    if (hermiticity_defect(op) > 1e-12 * std::max(1.0, max_abs(op.entries))) {
        throw PreconditionError("left/right eigen check needs a hermitian operator at z = 0");
    }
    const Eigen::SelfAdjointEigenSolver<MatrixXc> es(op.entries);
    const MatrixXc fwd = ctx.exp_scaled(kI * z);
    const MatrixXc bwd = ctx.exp_scaled(-kI * z);
    const MatrixXc transported = fwd * op.entries * bwd;

    EigenPairReport rep;
    for (Eigen::Index j = 0; j < op.dim(); ++j) {
        const double value = es.eigenvalues()(j);
        const VectorXc basis = es.eigenvectors().col(j);
        const VectorXc right = fwd * basis;
        const Eigen::RowVectorXcd left = basis.adjoint() * bwd;
        rep.right_residual =
            std::max(rep.right_residual, (transported * right - value * right).norm() / right.norm());
        rep.left_residual =
            std::max(rep.left_residual, (left * transported - value * left).norm() / left.norm());
        rep.overlap_defect = std::max(rep.overlap_defect, (right - left.adjoint()).norm());
    }
    return rep;
}

double normality_check(const OperatorMatrix& hprime) {
    return normality_check(hprime, CornerMask::keep_all(hprime.dim()));
}

double normality_check(const OperatorMatrix& hprime, const CornerMask& mask) {
    const MatrixXc& h = hprime.entries;
    return mask.restricted_max_abs(h * h.adjoint() - h.adjoint() * h);
}

OperatorMatrix nonhermitian_fixture(int dim, std::uint64_t seed) {
    if (dim < 1) throw PreconditionError("fixture dim must be positive");
    const MatrixXc s = MatrixXc::Identity(dim, dim) + (0.25 / std::sqrt(static_cast<double>(dim))) * random_matrix(dim, seed);
    const MatrixXc h = s * fixture_spectrum(dim).asDiagonal() * s.partialPivLu().inverse();
    return {h, "H'_fixture"};
}

OperatorMatrix normal_fixture(int dim, std::uint64_t seed) {
    if (dim < 1) throw PreconditionError("fixture dim must be positive");
    const Eigen::HouseholderQR<MatrixXc> qr(random_matrix(dim, seed));
    const MatrixXc u = qr.householderQ() * MatrixXc::Identity(dim, dim);
    return {u * fixture_spectrum(dim).asDiagonal() * u.adjoint(), "H'_normal"};
}

OperatorMatrix hermitian_fixture(int dim, std::uint64_t seed) {
    if (dim < 1) throw PreconditionError("fixture dim must be positive");
    const MatrixXc r = random_matrix(dim, seed);
    return {0.5 * (r + r.adjoint()), "H'_hermitian"};
}

VectorXc random_state(int dim, std::uint64_t seed) {
    if (dim < 1) throw PreconditionError("state dim must be positive");
    CounterRng rng(seed);
    VectorXc v(dim);
    for (int i = 0; i < dim; ++i) {
        const double re = rng.uniform(-1.0, 1.0);
        const double im = rng.uniform(-1.0, 1.0);
        v(i) = complex(re, im);
    }
    return v / v.norm();
}

}  // namespace zslice::zevo
