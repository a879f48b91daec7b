#include "zslice/operator_matrix.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include "zslice/errors.hpp"

namespace zslice {

namespace {

void require_same_dim(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.entries.rows() != b.entries.rows() || a.entries.cols() != b.entries.cols()) {
        throw DimensionMismatch("operator dimensions differ: " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
    }
}

}  // namespace

OperatorMatrix::OperatorMatrix(MatrixXc m, std::string l) : entries(std::move(m)), label(std::move(l)) {
    if (entries.rows() != entries.cols()) throw DimensionMismatch("operator matrix must be square");
}

OperatorMatrix OperatorMatrix::adjoint() const {
    return {entries.adjoint(), label + "^dagger"};
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_dim(a, b);
    return {a.entries + b.entries, a.label + "+" + b.label};
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_dim(a, b);
    return {a.entries - b.entries, a.label + "-" + b.label};
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_dim(a, b);
    return {a.entries * b.entries, a.label + b.label};
}

OperatorMatrix operator*(std::complex<double> s, const OperatorMatrix& a) {
    return {s * a.entries, a.label};
}

OperatorMatrix identity_operator(Eigen::Index dim, std::string label) {
    return {MatrixXc::Identity(dim, dim), std::move(label)};
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_dim(a, b);
    return {a.entries * b.entries - b.entries * a.entries, "[" + a.label + "," + b.label + "]"};
}

double max_abs(const MatrixXc& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const OperatorMatrix& a) {
    return max_abs(a.entries - a.entries.adjoint());
}

CornerMask::CornerMask(std::vector<int> oscillator_dims, int corner_levels) {
    std::size_t total = 1;
    for (int d : oscillator_dims) {
        if (d < 1) throw PreconditionError("oscillator dimension must be positive");
        total *= static_cast<std::size_t>(d);
    }
    keep_.assign(total, 1);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (auto it = oscillator_dims.rbegin(); it != oscillator_dims.rend(); ++it) {
            const auto d = static_cast<std::size_t>(*it);
            const auto level = static_cast<int>(rest % d);
            rest /= d;
            if (level >= *it - corner_levels) keep_[idx] = 0;
        }
    }
}

CornerMask CornerMask::keep_all(Eigen::Index dim) {
    CornerMask mask;
    mask.keep_.assign(static_cast<std::size_t>(dim), 1);
    return mask;
}

Eigen::Index CornerMask::kept_count() const noexcept {
    Eigen::Index n = 0;
    for (char k : keep_) n += k != 0;
    return n;
}

double CornerMask::restricted_max_abs(const MatrixXc& m) const {
    if (m.rows() != dim() || m.cols() != dim()) {
        throw DimensionMismatch("corner mask dimension " + std::to_string(dim()) +
                                " does not match matrix dimension " + std::to_string(m.rows()));
    }
    double best = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (!keeps(j)) continue;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (keeps(i)) best = std::max(best, std::abs(m(i, j)));
        }
    }
    return best;
}

MatrixXc embed(const MatrixXc& op, const std::vector<int>& dims, std::size_t slot) {
    if (slot >= dims.size()) throw PreconditionError("tensor slot out of range");
    if (op.rows() != dims[slot] || op.cols() != dims[slot]) {
        throw DimensionMismatch("factor operator does not match its slot dimension");
    }
    MatrixXc out = MatrixXc::Identity(1, 1);
    for (std::size_t s = 0; s < dims.size(); ++s) {
        const MatrixXc factor = s == slot ? op : MatrixXc::Identity(dims[s], dims[s]);
        MatrixXc next = Eigen::kroneckerProduct(out, factor);
        out = std::move(next);
    }
    return out;
}

}  // namespace zslice
