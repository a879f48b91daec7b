#include "zslice/field_ops.hpp"

#include <cmath>
#include <numbers>

#include "zslice/errors.hpp"

namespace zslice::field {

namespace {

constexpr double kPacketWidthFraction = 0.11;

MatrixXc unitary_dft(int n) {
    MatrixXc f(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            // reduce j*l mod n first so the phase argument stays small
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((j * l) % n) / n;
            f(j, l) = std::polar(norm, angle);
        }
    }
    return f;
}

void require_same_dims(const OperatorMatrix& a, const OperatorMatrix& b, const OperatorMatrix& c) {
    if (a.dim() != b.dim() || a.dim() != c.dim()) throw DimensionMismatch("operators must share a dimension");
}

}  // namespace

void SiteGrid::validate() const {
    if (n_phi < 8 || (n_phi & (n_phi - 1)) != 0) {
        throw PreconditionError("n_phi must be a power of two >= 8, got " + std::to_string(n_phi));
    }
    if (!(phi_max > 0.0) || !std::isfinite(phi_max)) throw PreconditionError("phi_max must be positive");
}

void WavefunctionalSample::validate() const {
    if (!amplitudes.allFinite()) throw DomainError("wavefunctional has non-finite amplitudes");
    if (!(amplitudes.norm() > 0.0)) throw DomainError("wavefunctional has zero norm");
}

OperatorMatrix build_phi_grid(const SiteGrid& g) {
    g.validate();
    MatrixXc phi = MatrixXc::Zero(g.n_phi, g.n_phi);
    for (int j = 0; j < g.n_phi; ++j) phi(j, j) = -g.phi_max + j * g.spacing();
    return {std::move(phi), "phi"};
}

std::vector<double> grid_wavenumbers(const SiteGrid& g) {
    g.validate();
    const int n = g.n_phi;
    const double dk = 2.0 * std::numbers::pi / (n * g.spacing());
    std::vector<double> k(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const int signed_j = j < n / 2 ? j : j - n;
        k[static_cast<std::size_t>(j)] = j == n / 2 ? 0.0 : signed_j * dk;
    }
    return k;
}

OperatorMatrix build_pi_grid(const SiteGrid& g) {
    const std::vector<double> k = grid_wavenumbers(g);
    const MatrixXc f = unitary_dft(g.n_phi);
    Eigen::VectorXd kv = Eigen::Map<const Eigen::VectorXd>(k.data(), static_cast<Eigen::Index>(k.size()));
    MatrixXc pi = f.adjoint() * kv.cast<complex>().asDiagonal() * f;
    // Exact hermiticity; the product above is hermitian only up to roundoff.
    MatrixXc sym = 0.5 * (pi + pi.adjoint());
    return {std::move(sym), "Pi"};
}

WavefunctionalSample plane_wave(const SiteGrid& g, int fourier_index) {
    const std::vector<double> k = grid_wavenumbers(g);
    if (fourier_index < 0 || fourier_index >= g.n_phi) throw PreconditionError("Fourier index out of range");
    const double kj = k[static_cast<std::size_t>(fourier_index)];
    VectorXc v(g.n_phi);
    for (int j = 0; j < g.n_phi; ++j) v(j) = std::polar(1.0, kj * (-g.phi_max + j * g.spacing()));
    return {v};
}

std::vector<WavefunctionalSample> band_limited_test_vectors(const SiteGrid& g, int count) {
    g.validate();
    const double s = kPacketWidthFraction * g.phi_max;
    std::vector<WavefunctionalSample> out;
    for (int n = 0; n < count; ++n) {
        VectorXc v(g.n_phi);
        for (int j = 0; j < g.n_phi; ++j) {
            const double x = (-g.phi_max + j * g.spacing()) / s;
            // physicists' Hermite recurrence
            double h_prev = 1.0;
            double h = 2.0 * x;
            double hn = n == 0 ? 1.0 : h;
            for (int r = 2; r <= n; ++r) {
                const double next = 2.0 * x * h - 2.0 * (r - 1) * h_prev;
                h_prev = h;
                h = next;
                hn = h;
            }
            v(j) = hn * std::exp(-0.5 * x * x);
        }
        v /= v.norm();
        out.push_back({v});
    }
    return out;
}

double out_of_band_fraction(const SiteGrid& g, const WavefunctionalSample& psi) {
    g.validate();
    psi.validate();
    if (psi.amplitudes.size() != g.n_phi) throw DimensionMismatch("sample does not live on this grid");
    const VectorXc spec = unitary_dft(g.n_phi) * psi.amplitudes;
    double outside = 0.0;
    for (int j = 0; j < g.n_phi; ++j) {
        const int signed_j = j < g.n_phi / 2 ? j : j - g.n_phi;
        if (std::abs(signed_j) >= g.n_phi / 4) outside += std::norm(spec(j));
    }
    return outside / spec.squaredNorm();
}

double grid_commutator_residual(const SiteGrid& g, const WavefunctionalSample& psi) {
    psi.validate();
    const OperatorMatrix phi = build_phi_grid(g);
    const OperatorMatrix pi = build_pi_grid(g);
    if (psi.amplitudes.size() != g.n_phi) throw DimensionMismatch("sample does not live on this grid");
    const VectorXc lhs = commutator(pi, phi).entries * psi.amplitudes + complex(0.0, 1.0) * psi.amplitudes;
    return lhs.norm() / psi.amplitudes.norm();
}

FockPair build_phi_pi_fock(double mode_omega, int dim) {
    if (!(mode_omega > 0.0) || !std::isfinite(mode_omega)) throw PreconditionError("mode frequency must be positive");
    if (dim < 4) throw PreconditionError("Fock truncation dim must be >= 4");
    const MatrixXc a = algebra::lowering_matrix(dim);
    const MatrixXc ad = a.adjoint();
    const complex i(0.0, 1.0);
    return {OperatorMatrix((a + ad) / std::sqrt(2.0 * mode_omega), "phi"),
            OperatorMatrix(-i * std::sqrt(mode_omega / 2.0) * (a - ad), "Pi")};
}

OperatorMatrix quadratic_hamiltonian(const FockPair& fields, double mode_omega) {
    const MatrixXc& p = fields.pi.entries;
    const MatrixXc& f = fields.phi.entries;
    return {0.5 * (p * p + mode_omega * mode_omega * f * f), "H"};
}

OperatorMatrix build_H_modes(const std::vector<SpatialMomentum>& modes, const MassParam& m, int dim) {
    if (modes.empty()) throw PreconditionError("H needs at least one mode");
    const MatrixXc a = algebra::lowering_matrix(dim);
    const MatrixXc number = a.adjoint() * a;
    const std::vector<int> dims(modes.size(), dim);
    Eigen::Index total = 1;
    for (int d : dims) total *= d;
    MatrixXc h = MatrixXc::Zero(total, total);
    double zero_point = 0.0;
    for (std::size_t s = 0; s < modes.size(); ++s) {
        const double w = omega(modes[s], m);
        h += w * embed(number, dims, s);
        zero_point += 0.5 * w;
    }
    h += zero_point * MatrixXc::Identity(total, total);
    return {std::move(h), "H"};
}

OperatorMatrix build_Hprime_modes(const std::vector<MomentumTriple>& modes, const MassParam& m, int dim) {
    const algebra::TruncatedRealization r = algebra::realize_modes(modes, m, dim);
    return algebra::build_hprime_modes(modes, m, r);
}

double evolution_residual(const OperatorMatrix& generator, const OperatorMatrix& phi, const OperatorMatrix& pi,
                          double sign, const CornerMask& mask) {
    require_same_dims(generator, phi, pi);
    const complex i(0.0, 1.0);
    const MatrixXc r = i * commutator(generator, phi).entries - sign * pi.entries;
    return mask.restricted_max_abs(r);
}

EvolutionCommutatorReport check_evolution_commutators(const OperatorMatrix& h, const OperatorMatrix& hprime,
                                                      const OperatorMatrix& phi, const OperatorMatrix& pi,
                                                      const CornerMask& mask) {
    require_same_dims(h, phi, pi);
    require_same_dims(hprime, phi, pi);
    return {evolution_residual(h, phi, pi, +1.0, mask), evolution_residual(hprime, phi, pi, -1.0, mask),
            evolution_residual(hprime, phi, pi, +1.0, mask)};
}

}  // namespace zslice::field
