#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "zslice/operator_matrix.hpp"

namespace zslice::lattice {

/// Interior sites of the discretized box. The box is open in t and z (with
/// one layer of fixed boundary sites beyond each end) and periodic in x and y.
struct LatticeSpec4D {
    int n_t = 3;
    int n_x = 2;
    int n_y = 2;
    int n_z = 3;
    double spacing = 1.0;
    double m = 1.0;
    double delta = 0.1;

    int interior_sites() const noexcept { return n_t * n_x * n_y * n_z; }
    int t_wall_sites() const noexcept { return n_x * n_y * n_z; }
    int z_wall_sites() const noexcept { return n_t * n_x * n_y; }
    int boundary_sites() const noexcept { return 2 * t_wall_sites() + 2 * z_wall_sites(); }
    void validate() const;
};

inline constexpr int kMaxInteriorSites = 4096;

enum class Axis { T, Z };

std::string_view to_string(Axis a) noexcept;

/// Discretized action S = (1/2) phi^T Q phi split into interior and boundary
/// blocks. Interior sites are ordered (t, x, y, z) row-major. Boundary sites
/// are ordered as four walls: t = -1 and t = n_t (each over (x, y, z)), then
/// z = -1 and z = n_z (each over (t, x, y)).
struct QuadraticLatticeForm {
    LatticeSpec4D spec;
    MatrixXc interior;   // Q_II, complex symmetric
    MatrixXc coupling;   // Q_IB
    MatrixXc boundary;   // Q_BB
};

/// Boundary values seen along `axis`: `initial` and `final` are the walls
/// before and after the sliced axis, `side_initial` and `side_final` the
/// walls of the other open axis. Each wall is ordered by its remaining
/// coordinates in (t, x, y, z) order.
struct BoundaryData {
    Axis axis = Axis::T;
    std::vector<double> initial;
    std::vector<double> final;
    std::vector<double> side_initial;
    std::vector<double> side_final;
};

/// The same boundary configuration seen along the other axis.
BoundaryData reorient(const BoundaryData& b);

BoundaryData zero_boundary(const LatticeSpec4D& spec, Axis axis);

/// Configuration `index` of the stream `seed`: values uniform in [-1, 1)
/// drawn from CounterRng(splitmix64(seed, index)) in the order initial,
/// final, side_initial, side_final of the T view, then reoriented to `axis`.
BoundaryData random_boundary(const LatticeSpec4D& spec, Axis axis, std::uint64_t seed, std::uint64_t index);

/// Boundary values in the canonical wall order of QuadraticLatticeForm.
Eigen::VectorXd boundary_vector(const LatticeSpec4D& spec, const BoundaryData& b);

/// Forward-difference action with m^2 -> m^2 - i delta. Site weight
/// spacing^4, t links enter with +, x/y/z links with -.
QuadraticLatticeForm build_action(const LatticeSpec4D& spec);

/// Gaussian amplitude carried as its logarithm. The common factor
/// (2 pi)^{N/2} over interior sites is dropped for every method.
struct Amplitude {
    complex log_value;

    complex value() const { return std::exp(log_value); }
};

/// |A / B - 1|.
double relative_deviation(const Amplitude& a, const Amplitude& b);

/// All interior variables integrated at once:
/// log A = -1/2 log det(-i Q_II) + (i/2)(b^T Q_BB b - J^T Q_II^-1 J), J = Q_IB b.
Amplitude amplitude_direct(const QuadraticLatticeForm& form, const BoundaryData& b);

/// Interior variables integrated slice by slice along `axis`, each step a
/// Schur complement that composes one transfer kernel onto the running one.
Amplitude amplitude_sliced(const QuadraticLatticeForm& form, const BoundaryData& b, Axis axis);

/// A(b) / A(0).
Amplitude normalized(const Amplitude& a, const Amplitude& reference);

}  // namespace zslice::lattice
