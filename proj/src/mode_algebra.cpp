#include "zslice/mode_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zslice/errors.hpp"

namespace zslice::algebra {

namespace {

DispersionValue nondegenerate_lambda(const MomentumTriple& kp, const MassParam& m) {
    const DispersionValue d = lambda_of(kp, m);
    if (d.region == Region::Boundary || std::abs(d.lambda) == 0.0) {
        std::ostringstream os;
        os << "mode (" << kp.kx << ", " << kp.ky << ", " << kp.kt << ") lies on the lambda = 0 boundary";
        throw DegenerateModeError(os.str());
    }
    return d;
}

using Word = AlgebraElement::Word;
using TermMap = std::map<Word, complex>;

void accumulate(TermMap& out, const Word& w, complex c) {
    if (c == complex(0.0)) return;
    out[w] += c;
}

Word concat(const Word& a, const Word& b) {
    Word w = a;
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

// [u, v] for single words, expanded with the Leibniz rule down to c-number
// commutators of single symbols.
TermMap commutator_words(const Word& u, const Word& v, const MassParam& m) {
    TermMap out;
    if (u.empty() || v.empty()) return out;
    if (u.size() == 1 && v.size() == 1) {
        accumulate(out, {}, commutator_coeff(u.front(), v.front(), m));
        return out;
    }
    if (u.size() > 1) {
        // [x u', v] = x [u', v] + [x, v] u'
        const Word head{u.front()};
        const Word tail(u.begin() + 1, u.end());
        for (const auto& [w, c] : commutator_words(tail, v, m)) accumulate(out, concat(head, w), c);
        for (const auto& [w, c] : commutator_words(head, v, m)) accumulate(out, concat(w, tail), c);
        return out;
    }
    // [u, y v'] = [u, y] v' + y [u, v']
    const Word head{v.front()};
    const Word tail(v.begin() + 1, v.end());
    for (const auto& [w, c] : commutator_words(u, head, m)) accumulate(out, concat(w, tail), c);
    for (const auto& [w, c] : commutator_words(u, tail, m)) accumulate(out, concat(head, w), c);
    return out;
}

}  // namespace

std::string to_string(const ModeOpSymbol& s) {
    std::ostringstream os;
    os << (s.kind == OpKind::A ? "a'" : "abar'") << "(" << s.mode.kx << "," << s.mode.ky << "," << s.mode.kt
       << ")";
    return os.str();
}

ModeOpSymbol conjugate_symbol(const ModeOpSymbol& op, const MassParam& m) {
    if (classify_region(op.mode, m) == Region::P2) {
        return {op.kind, op.mode.negated()};
    }
    return {op.kind == OpKind::A ? OpKind::ABar : OpKind::A, op.mode};
}

complex commutator_constant(const MomentumTriple& kp, const MassParam& m) {
    const complex lam = nondegenerate_lambda(kp, m).lambda;
    return std::abs(lam) / lam;
}

complex commutator_coeff(const ModeOpSymbol& op1, const ModeOpSymbol& op2, const MassParam& m) {
    if (op1.mode != op2.mode || op1.kind == op2.kind) return 0.0;
    const complex kappa = commutator_constant(op1.mode, m);
    return op1.kind == OpKind::A ? kappa : -kappa;
}

complex hprime_coeff(const MomentumTriple& kp, const MassParam& m) {
    const complex lam = nondegenerate_lambda(kp, m).lambda;
    return -lam * lam / std::abs(lam);
}

complex zero_point_constant(const std::vector<MomentumTriple>& modes, const MassParam& m) {
    complex e0 = 0.0;
    for (const auto& kp : modes) e0 += hprime_coeff(kp, m) * commutator_constant(kp, m) / 2.0;
    return e0;
}

AlgebraElement AlgebraElement::scalar(complex c) {
    AlgebraElement e;
    e.add_term({}, c);
    return e;
}

AlgebraElement AlgebraElement::symbol(const ModeOpSymbol& s, complex c) {
    AlgebraElement e;
    e.add_term({s}, c);
    return e;
}

complex AlgebraElement::coefficient(const Word& w) const {
    const auto it = terms_.find(w);
    return it == terms_.end() ? complex(0.0) : it->second;
}

int AlgebraElement::degree() const noexcept {
    int d = 0;
    for (const auto& [w, c] : terms_) d = std::max(d, static_cast<int>(w.size()));
    return d;
}

void AlgebraElement::add_term(const Word& w, complex c) {
    if (w.size() > 2) throw PreconditionError("algebra elements carry words of length <= 2");
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("non-finite coefficient");
    auto& slot = terms_[w];
    slot += c;
    if (slot == complex(0.0)) terms_.erase(w);
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
    for (const auto& [w, c] : other.terms_) add_term(w, c);
    return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
    for (const auto& [w, c] : other.terms_) add_term(w, -c);
    return *this;
}

AlgebraElement& AlgebraElement::operator*=(complex s) {
    for (auto& [w, c] : terms_) c *= s;
    std::erase_if(terms_, [](const auto& kv) { return kv.second == complex(0.0); });
    return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    AlgebraElement out;
    for (const auto& [wa, ca] : a.terms_) {
        for (const auto& [wb, cb] : b.terms_) out.add_term(concat(wa, wb), ca * cb);
    }
    return out;
}

AlgebraElement AlgebraElement::adjoint(const MassParam& m) const {
    AlgebraElement out;
    for (const auto& [w, c] : terms_) {
        Word r;
        for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(conjugate_symbol(*it, m));
        out.add_term(r, std::conj(c));
    }
    return out;
}

double AlgebraElement::distance(const AlgebraElement& other) const {
    const AlgebraElement diff = *this - other;
    double d = 0.0;
    for (const auto& [w, c] : diff.terms_) d = std::max(d, std::abs(c));
    return d;
}

AlgebraElement commutator(const AlgebraElement& x, const AlgebraElement& y, const MassParam& m) {
    AlgebraElement out;
    for (const auto& [wx, cx] : x.terms()) {
        for (const auto& [wy, cy] : y.terms()) {
            for (const auto& [w, c] : commutator_words(wx, wy, m)) {
                AlgebraElement term;
                if (w.empty()) {
                    term = AlgebraElement::scalar(cx * cy * c);
                } else if (w.size() == 1) {
                    term = AlgebraElement::symbol(w.front(), cx * cy * c);
                } else {
                    term = AlgebraElement::symbol(w[0], cx * cy * c) * AlgebraElement::symbol(w[1]);
                }
                out += term;
            }
        }
    }
    return out;
}

AlgebraElement hprime_element(const std::vector<MomentumTriple>& modes, const MassParam& m) {
    if (modes.empty()) throw PreconditionError("H' needs at least one mode");
    AlgebraElement h = AlgebraElement::scalar(zero_point_constant(modes, m));
    for (const auto& kp : modes) {
        h += hprime_coeff(kp, m) * (AlgebraElement::symbol({OpKind::ABar, kp}) * AlgebraElement::symbol({OpKind::A, kp}));
    }
    return h;
}

Eigen::Index TruncatedRealization::dim() const noexcept {
    Eigen::Index d = 1;
    for (int n : oscillator_dims) d *= n;
    return d;
}

const OperatorMatrix& TruncatedRealization::at(const ModeOpSymbol& s) const {
    const auto it = matrices.find(s);
    if (it == matrices.end()) throw PreconditionError("realization has no matrix for " + to_string(s));
    return it->second;
}

CornerMask TruncatedRealization::corner_mask(int corner_levels) const {
    return CornerMask(oscillator_dims, corner_levels);
}

MatrixXc lowering_matrix(int dim) {
    if (dim < 2) throw PreconditionError("oscillator truncation dim must be >= 2");
    MatrixXc a = MatrixXc::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

TruncatedRealization realize_p1_mode(int dim, const MomentumTriple& mode) {
    const MatrixXc a = lowering_matrix(dim);
    TruncatedRealization r;
    r.oscillator_dims = {dim};
    r.matrices.emplace(ModeOpSymbol{OpKind::A, mode}, OperatorMatrix(a, "a'"));
    r.matrices.emplace(ModeOpSymbol{OpKind::ABar, mode}, OperatorMatrix(a.adjoint(), "abar'"));
    return r;
}

TruncatedRealization realize_p2_pair(const MomentumTriple& kp, const MassParam& m, int dim) {
    if (classify_region(kp, m) != Region::P2) throw WrongRegionError("P2 pair realization needs a P2 mode");
    if (kp == kp.negated()) throw PreconditionError("P2 pair realization needs k != -k");
    const MatrixXc a = lowering_matrix(dim);
    const std::vector<int> dims{dim, dim};
    const MatrixXc bp = embed(a, dims, 0);
    const MatrixXc bm = embed(a, dims, 1);
    const complex alpha = kP2Alpha;
    const complex gamma = kP2Gamma;

    TruncatedRealization r;
    r.oscillator_dims = dims;
    const MomentumTriple km = kp.negated();
    r.matrices.emplace(ModeOpSymbol{OpKind::A, kp},
                       OperatorMatrix(alpha * bp + std::conj(alpha) * bm.adjoint(), "a'(k)"));
    r.matrices.emplace(ModeOpSymbol{OpKind::A, km},
                       OperatorMatrix(alpha * bm + std::conj(alpha) * bp.adjoint(), "a'(-k)"));
    r.matrices.emplace(ModeOpSymbol{OpKind::ABar, kp},
                       OperatorMatrix(gamma * bp.adjoint() + std::conj(gamma) * bm, "abar'(k)"));
    r.matrices.emplace(ModeOpSymbol{OpKind::ABar, km},
                       OperatorMatrix(gamma * bm.adjoint() + std::conj(gamma) * bp, "abar'(-k)"));
    return r;
}

TruncatedRealization combine(const std::vector<TruncatedRealization>& parts) {
    if (parts.empty()) throw PreconditionError("nothing to combine");
    TruncatedRealization out;
    for (const auto& p : parts) {
        out.oscillator_dims.insert(out.oscillator_dims.end(), p.oscillator_dims.begin(), p.oscillator_dims.end());
    }
    const Eigen::Index total = out.dim();
    Eigen::Index before = 1;
    for (const auto& p : parts) {
        const Eigen::Index block = p.dim();
        const Eigen::Index after = total / (before * block);
        for (const auto& [sym, op] : p.matrices) {
            if (out.contains(sym)) throw PreconditionError("symbol realized twice: " + to_string(sym));
            std::vector<int> dims{static_cast<int>(before), static_cast<int>(block), static_cast<int>(after)};
            out.matrices.emplace(sym, OperatorMatrix(embed(op.entries, dims, 1), op.label));
        }
        before *= block;
    }
    return out;
}

TruncatedRealization realize_modes(const std::vector<MomentumTriple>& modes, const MassParam& m, int dim) {
    if (modes.empty()) throw PreconditionError("mode list is empty");
    std::vector<TruncatedRealization> parts;
    auto covered = [&](const MomentumTriple& kp) {
        return std::any_of(parts.begin(), parts.end(),
                           [&](const auto& p) { return p.contains(ModeOpSymbol{OpKind::A, kp}); });
    };
    for (const auto& kp : modes) {
        if (covered(kp)) continue;
        switch (classify_region(kp, m)) {
            case Region::P1: parts.push_back(realize_p1_mode(dim, kp)); break;
            case Region::P2: parts.push_back(realize_p2_pair(kp, m, dim)); break;
            case Region::Boundary:
                throw DegenerateModeError("boundary modes have no realization");
        }
    }
    return parts.size() == 1 ? parts.front() : combine(parts);
}

OperatorMatrix build_hprime_modes(const std::vector<MomentumTriple>& modes, const MassParam& m,
                                  const TruncatedRealization& realization) {
    if (modes.empty()) throw PreconditionError("H' needs at least one mode");
    const Eigen::Index n = realization.dim();
    const complex e0 = zero_point_constant(modes, m);
    MatrixXc h = e0 * MatrixXc::Identity(n, n);
    for (const auto& kp : modes) {
        const complex c = hprime_coeff(kp, m);
        h += c * realization.at({OpKind::ABar, kp}).entries * realization.at({OpKind::A, kp}).entries;
    }
    return {std::move(h), "H'"};
}

}  // namespace zslice::algebra
