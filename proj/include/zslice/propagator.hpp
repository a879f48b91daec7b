#pragma once

#include <string_view>

#include "zslice/dispersion.hpp"

namespace zslice::prop {

struct SpacetimePoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double t = 0.0;
};

struct FourMomentum {
    double kx = 0.0;
    double ky = 0.0;
    double kz = 0.0;
    double kt = 0.0;
};

/// Midpoint rule on an offset tensor grid over [-cutoff, cutoff] per axis:
/// node_i = -cutoff + (i + offset) * h, h = 2 cutoff / nodes.
struct QuadratureSpec {
    double cutoff = 6.0;
    int nodes = 48;
    double offset = 0.5;

    void validate() const;
    double spacing() const noexcept { return 2.0 * cutoff / nodes; }
    double node(int i) const noexcept { return -cutoff + (i + offset) * spacing(); }
    QuadratureSpec halved() const noexcept { return {cutoff, nodes / 2, offset}; }
};

/// Desk-scale defaults: cutoff 6/m, 48 nodes per axis for the 3D methods and
/// 32 for the 4D method.
QuadratureSpec default_quadrature_3d(const MassParam& m);
QuadratureSpec default_quadrature_4d(const MassParam& m);

enum class Method { ZForm, TForm, FourD };

std::string_view to_string(Method method) noexcept;

struct PropagatorValue {
    complex value;
    Method method = Method::FourD;
    /// |I(nodes) - I(nodes / 2)| at the same cutoff.
    double error_estimate = 0.0;
};

/// [e^{i lambda z} Theta(z) + e^{-i lambda z} Theta(-z)] / (2 lambda) with
/// Theta(0) = 1/2.
complex bracket_closed(complex lambda, double z);

/// -i/(2 pi) * integral over k_z in [-cutoff, cutoff] of
/// e^{-i k_z z} / (k_z^2 - lambda^2). Requires Im(lambda) > 0.
complex kz_contour_numeric(complex lambda, double z, const QuadratureSpec& q);

/// z-ordered mode integral over (k_x, k_y, k_t) with lambda from lambda_of.
PropagatorValue propagator_zform(const SpacetimePoint& p, const MassParam& m, const QuadratureSpec& q);

/// t-ordered mode integral over (k_x, k_y, k_z) with omega = sqrt(k^2 + m^2 - i eps).
PropagatorValue propagator_tform(const SpacetimePoint& p, const MassParam& m, const QuadratureSpec& q);

/// Direct 4D momentum integral of momentum_propagator.
PropagatorValue propagator_4d(const SpacetimePoint& p, const MassParam& m, const QuadratureSpec& q);

PropagatorValue propagator(Method method, const SpacetimePoint& p, const MassParam& m, const QuadratureSpec& q);

/// 1 / (k_t^2 - k_x^2 - k_y^2 - k_z^2 - m^2 + i eps).
complex momentum_propagator(const FourMomentum& k, const MassParam& m);

/// Worker threads used by the quadratures: ZSLICE_THREADS if set and
/// positive, otherwise the hardware concurrency. Results do not depend on it.
unsigned thread_count();

}  // namespace zslice::prop
