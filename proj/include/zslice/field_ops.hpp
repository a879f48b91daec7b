#pragma once

#include <vector>

#include "zslice/dispersion.hpp"
#include "zslice/mode_algebra.hpp"
#include "zslice/operator_matrix.hpp"

namespace zslice::field {

/// Uniform periodic grid of field values: phi_j = -phi_max + j * spacing.
struct SiteGrid {
    int n_phi = 64;
    double phi_max = 4.0;

    double spacing() const noexcept { return 2.0 * phi_max / n_phi; }
    void validate() const;
};

struct WavefunctionalSample {
    VectorXc amplitudes;

    void validate() const;
};

OperatorMatrix build_phi_grid(const SiteGrid& g);

/// Wavenumbers of the discrete Fourier basis in FFT order. The Nyquist entry
/// is set to zero so that the derivative stays hermitian.
std::vector<double> grid_wavenumbers(const SiteGrid& g);

/// -i d/dphi as a spectral differentiation matrix on the periodic grid.
OperatorMatrix build_pi_grid(const SiteGrid& g);

/// exp(i * k_j * phi) sampled on the grid, with k_j = grid_wavenumbers(g)[j].
WavefunctionalSample plane_wave(const SiteGrid& g, int fourier_index);

/// Hermite-Gauss packets H_n(phi / s) exp(-phi^2 / 2 s^2), n = 0..count-1,
/// with s = 0.11 phi_max. For n_phi >= 64 and n <= 3 they vanish at the grid
/// edges and carry at most ~1e-9 of their weight outside the central half of
/// the Fourier grid, which is the regime where [Pi, phi] = -i holds on the grid.
std::vector<WavefunctionalSample> band_limited_test_vectors(const SiteGrid& g, int count);

/// Fraction of |psi|^2 carried by Fourier modes outside the central half.
double out_of_band_fraction(const SiteGrid& g, const WavefunctionalSample& psi);

/// ||([Pi, phi] + i) psi|| / ||psi|| for the grid realization.
double grid_commutator_residual(const SiteGrid& g, const WavefunctionalSample& psi);

struct FockPair {
    OperatorMatrix phi;
    OperatorMatrix pi;
};

/// phi = (a + a^dag) / sqrt(2 w), Pi = -i sqrt(w / 2) (a - a^dag) on a
/// truncated Fock space.
FockPair build_phi_pi_fock(double mode_omega, int dim);

/// (Pi^2 + w^2 phi^2) / 2 assembled from a Fock pair.
OperatorMatrix quadratic_hamiltonian(const FockPair& fields, double mode_omega);

/// H = sum_k omega(k) (a_k^dag a_k + 1/2) on the tensor product of one
/// truncated oscillator per mode.
OperatorMatrix build_H_modes(const std::vector<SpatialMomentum>& modes, const MassParam& m, int dim);

/// H' over the given z-modes; delegates to the mode algebra.
OperatorMatrix build_Hprime_modes(const std::vector<MomentumTriple>& modes, const MassParam& m, int dim);

/// max over the kept block of |i [G, phi] - sign * Pi|.
double evolution_residual(const OperatorMatrix& generator, const OperatorMatrix& phi, const OperatorMatrix& pi,
                          double sign, const CornerMask& mask);

struct EvolutionCommutatorReport {
    double t_residual = 0.0;             // |i[H, phi] - Pi|
    double z_residual = 0.0;             // |i[H', phi] + Pi|
    double z_residual_same_sign = 0.0;   // |i[H', phi] - Pi|, nonzero when the signs really differ
};

EvolutionCommutatorReport check_evolution_commutators(const OperatorMatrix& h, const OperatorMatrix& hprime,
                                                      const OperatorMatrix& phi, const OperatorMatrix& pi,
                                                      const CornerMask& mask);

}  // namespace zslice::field
