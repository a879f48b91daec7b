#pragma once

#include <complex>
#include <string_view>

namespace zslice {

using complex = std::complex<double>;

/// Spatial wave vector (k_x, k_y, k_z) of the ordinary t-sliced expansion.
struct SpatialMomentum {
    double kx = 0.0;
    double ky = 0.0;
    double kz = 0.0;
};

/// Wave vector (k_x, k_y, k_t) labelling modes of the z-sliced expansion.
struct MomentumTriple {
    double kx = 0.0;
    double ky = 0.0;
    double kt = 0.0;

    constexpr MomentumTriple negated() const noexcept { return {-kx, -ky, -kt}; }
    friend constexpr bool operator==(const MomentumTriple&, const MomentumTriple&) = default;
    friend constexpr auto operator<=>(const MomentumTriple&, const MomentumTriple&) = default;
};

/// Mass and i*eps regulator. m^2 is replaced by m^2 - i*eps wherever the
/// regulator is active.
struct MassParam {
    double m = 1.0;
    double eps = 0.0;

    void validate() const;
};

enum class Region { P1, P2, Boundary };

std::string_view to_string(Region r) noexcept;

struct DispersionValue {
    complex lambda;
    Region region = Region::P1;
};

/// Absolute tolerance on k_t^2 - k_x^2 - k_y^2 - m^2 below which a point is
/// placed on the P1/P2 boundary.
inline constexpr double kBoundaryTolerance = 1e-12;

/// sqrt(k^2 + m^2). Squares are summed in ascending order, so the result is
/// bitwise invariant under permutations and sign flips of the components.
double omega(const SpatialMomentum& k, const MassParam& m);

/// sqrt(k^2 + m^2 - i*eps) on the branch with Re > 0 (so Im <= 0).
complex omega_regulated(const SpatialMomentum& k, const MassParam& m);

/// k_t^2 - k_x^2 - k_y^2 - m^2, the real part of lambda^2.
double lambda_squared_real(const MomentumTriple& kp, const MassParam& m);

/// Principal square root of k_t^2 - k_x^2 - k_y^2 - m^2 + i*eps with the sign
/// fixed so that Im(lambda) >= 0. Real lambda comes out positive, imaginary
/// lambda has phase +pi/2.
DispersionValue lambda_of(const MomentumTriple& kp, const MassParam& m);

Region classify_region(const MomentumTriple& kp, const MassParam& m);

}  // namespace zslice
