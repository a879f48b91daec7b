#include "zslice/dispersion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "zslice/errors.hpp"

namespace zslice {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string("non-finite ") + what);
    }
}

double sorted_sum(std::array<double, 4> terms) {
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
}

}  // namespace

void MassParam::validate() const {
    require_finite(m, "mass");
    require_finite(eps, "eps");
    if (!(m > 0.0)) throw DomainError("mass must be positive, got " + std::to_string(m));
    if (eps < 0.0) throw DomainError("eps must be non-negative, got " + std::to_string(eps));
}

std::string_view to_string(Region r) noexcept {
    switch (r) {
        case Region::P1: return "P1";
        case Region::P2: return "P2";
        case Region::Boundary: return "Boundary";
    }
    return "?";
}

double omega(const SpatialMomentum& k, const MassParam& m) {
    m.validate();
    require_finite(k.kx, "k_x");
    require_finite(k.ky, "k_y");
    require_finite(k.kz, "k_z");
    return std::sqrt(sorted_sum({k.kx * k.kx, k.ky * k.ky, k.kz * k.kz, m.m * m.m}));
}

complex omega_regulated(const SpatialMomentum& k, const MassParam& m) {
    const double w = omega(k, m);
    complex r = std::sqrt(complex(w * w, -m.eps));
    if (r.real() < 0.0) r = -r;
    return r;
}

double lambda_squared_real(const MomentumTriple& kp, const MassParam& m) {
    m.validate();
    require_finite(kp.kx, "k_x");
    require_finite(kp.ky, "k_y");
    require_finite(kp.kt, "k_t");
    const double transverse = sorted_sum({kp.kx * kp.kx, kp.ky * kp.ky, m.m * m.m, 0.0});
    return kp.kt * kp.kt - transverse;
}

DispersionValue lambda_of(const MomentumTriple& kp, const MassParam& m) {
    const double re = lambda_squared_real(kp, m);
    // +0.0 imaginary part keeps std::sqrt on the upper side of its cut when
    // eps == 0 and the argument is negative.
    complex lam = std::sqrt(complex(re, m.eps > 0.0 ? m.eps : +0.0));
    if (lam.imag() < 0.0) lam = -lam;
    return {lam, classify_region(kp, m)};
}

Region classify_region(const MomentumTriple& kp, const MassParam& m) {
    const double re = lambda_squared_real(kp, m);
    if (std::abs(re) <= kBoundaryTolerance) return Region::Boundary;
    return re > 0.0 ? Region::P1 : Region::P2;
}

}  // namespace zslice
