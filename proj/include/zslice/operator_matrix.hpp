#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace zslice {

using complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// Dense complex square matrix realizing an operator on a truncated space.
struct OperatorMatrix {
    MatrixXc entries;
    std::string label;

    OperatorMatrix() = default;
    OperatorMatrix(MatrixXc m, std::string l = {});

    Eigen::Index dim() const noexcept { return entries.rows(); }
    OperatorMatrix adjoint() const;

    friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator*(std::complex<double> s, const OperatorMatrix& a);
};

OperatorMatrix identity_operator(Eigen::Index dim, std::string label = "I");

/// [a, b] = ab - ba.
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// Largest |entry|.
double max_abs(const MatrixXc& m);

/// max |A - A^dagger|.
double hermiticity_defect(const OperatorMatrix& a);

/// Basis states of a tensor product of truncated oscillators that sit below
/// the truncation corner. A basis state is kept when every oscillator level
/// is below dim - corner_levels.
class CornerMask {
public:
    CornerMask() = default;
    explicit CornerMask(std::vector<int> oscillator_dims, int corner_levels = 2);

    static CornerMask keep_all(Eigen::Index dim);

    Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(keep_.size()); }
    bool keeps(Eigen::Index i) const { return keep_[static_cast<std::size_t>(i)] != 0; }
    Eigen::Index kept_count() const noexcept;

    /// max |m_ij| over kept rows i and kept columns j.
    double restricted_max_abs(const MatrixXc& m) const;

private:
    std::vector<char> keep_;
};

/// Operator `op` on factor `slot` of a tensor product with the given factor
/// dimensions (slot 0 is the most significant index).
MatrixXc embed(const MatrixXc& op, const std::vector<int>& dims, std::size_t slot);

}  // namespace zslice
