#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "zslice/dispersion.hpp"
#include "zslice/operator_matrix.hpp"

namespace zslice::algebra {

enum class OpKind { A, ABar };

/// a'(k') or abar'(k').
struct ModeOpSymbol {
    OpKind kind = OpKind::A;
    MomentumTriple mode;

    friend constexpr bool operator==(const ModeOpSymbol&, const ModeOpSymbol&) = default;
    friend constexpr auto operator<=>(const ModeOpSymbol&, const ModeOpSymbol&) = default;
};

std::string to_string(const ModeOpSymbol& s);

enum class VacuumConvention {
    PrimedVacuum,       // a'(k)|0'> = 0 for all k
    DoublePrimedVacuum  // <0''|abar'(k) = 0 for all k
};

/// Hermitian conjugate of a symbol. P1 (and boundary) modes swap A <-> ABar on
/// the same momentum; P2 modes keep the kind and negate the momentum.
ModeOpSymbol conjugate_symbol(const ModeOpSymbol& op, const MassParam& m);

/// |lambda| / lambda, the c-number in [a'(k), abar'(k)].
complex commutator_constant(const MomentumTriple& kp, const MassParam& m);

/// Coefficient of the Kronecker delta in [op1, op2].
complex commutator_coeff(const ModeOpSymbol& op1, const ModeOpSymbol& op2, const MassParam& m);

/// -lambda^2 / |lambda|, the per-mode coefficient of abar' a' in H'.
complex hprime_coeff(const MomentumTriple& kp, const MassParam& m);

/// Finite zero-point analog E'_0 = sum over modes of hprime_coeff * commutator_constant / 2.
complex zero_point_constant(const std::vector<MomentumTriple>& modes, const MassParam& m);

/// Finite linear combination of ladder-operator words of length <= 2.
class AlgebraElement {
public:
    using Word = std::vector<ModeOpSymbol>;

    AlgebraElement() = default;

    static AlgebraElement scalar(complex c);
    static AlgebraElement symbol(const ModeOpSymbol& s, complex c = 1.0);

    const std::map<Word, complex>& terms() const noexcept { return terms_; }
    complex coefficient(const Word& w) const;
    int degree() const noexcept;

    AlgebraElement& operator+=(const AlgebraElement& other);
    AlgebraElement& operator-=(const AlgebraElement& other);
    AlgebraElement& operator*=(complex s);

    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    friend AlgebraElement operator*(complex s, AlgebraElement a) { return a *= s; }
    /// Word concatenation; throws if a product word would exceed length 2.
    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

    /// Hermitian conjugate: words reversed, symbols conjugated, coefficients
    /// complex-conjugated.
    AlgebraElement adjoint(const MassParam& m) const;

    /// max |coefficient| of (*this - other).
    double distance(const AlgebraElement& other) const;

private:
    void add_term(const Word& w, complex c);
    std::map<Word, complex> terms_;
};

/// [x, y] reduced with the c-number ladder commutators via the Leibniz rule.
AlgebraElement commutator(const AlgebraElement& x, const AlgebraElement& y, const MassParam& m);

/// sum over modes of hprime_coeff * abar' a' plus E'_0.
AlgebraElement hprime_element(const std::vector<MomentumTriple>& modes, const MassParam& m);

/// Matrices realizing ladder symbols on a tensor product of truncated
/// oscillators.
struct TruncatedRealization {
    std::vector<int> oscillator_dims;
    std::map<ModeOpSymbol, OperatorMatrix> matrices;

    Eigen::Index dim() const noexcept;
    bool contains(const ModeOpSymbol& s) const { return matrices.count(s) != 0; }
    const OperatorMatrix& at(const ModeOpSymbol& s) const;
    CornerMask corner_mask(int corner_levels = 2) const;
};

/// Standard truncated lowering operator: superdiagonal sqrt(1) .. sqrt(dim-1).
MatrixXc lowering_matrix(int dim);

/// One oscillator: A = lowering matrix, ABar = its hermitian transpose.
TruncatedRealization realize_p1_mode(int dim, const MomentumTriple& mode = {});

/// Two oscillators b+ (slot 0) and b- (slot 1):
///   A(k)  = alpha b+ + conj(alpha) b-^dag,  A(-k)  = alpha b- + conj(alpha) b+^dag,
///   ABar(k) = gamma b+^dag + conj(gamma) b-, ABar(-k) = gamma b-^dag + conj(gamma) b+,
/// with alpha = 1, gamma = -i/2, so [A(k), ABar(k)] = -i off the corner.
TruncatedRealization realize_p2_pair(const MomentumTriple& kp, const MassParam& m, int dim);

inline constexpr complex kP2Alpha{1.0, 0.0};
inline constexpr complex kP2Gamma{0.0, -0.5};

/// Tensor product of several realizations on disjoint oscillators.
TruncatedRealization combine(const std::vector<TruncatedRealization>& parts);

/// Realization covering every mode in the list: one oscillator per P1 mode,
/// one oscillator pair per P2 mode (shared by k and -k).
TruncatedRealization realize_modes(const std::vector<MomentumTriple>& modes, const MassParam& m, int dim);

/// H' = sum_modes hprime_coeff * ABar A + E'_0 I on the given realization.
OperatorMatrix build_hprime_modes(const std::vector<MomentumTriple>& modes, const MassParam& m,
                                  const TruncatedRealization& realization);

}  // namespace zslice::algebra
