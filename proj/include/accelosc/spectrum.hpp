#pragma once

#include "accelosc/core_model.hpp"
#include "accelosc/errors.hpp"

#include <cmath>
#include <numbers>

namespace accelosc {

/// Thermal enhancement coth(pi/s) of the zero-point spectrum seen by an
/// oscillator with s = a/(omega c). Equals 1 at s = 0.
///
/// The three branches keep the value finite and correctly rounded across
/// s in [0, inf): the exponential form avoids overflow of cosh/sinh for
/// small s, and the Laurent series avoids 1/tanh of a tiny argument for
/// huge s.
inline double coth_factor(double s)
{
    if (!(s >= 0.0)) {
        throw DomainError("coth_factor: s must be non-negative");
    }
    if (s == 0.0) {
        return 1.0;
    }
    const double x = std::numbers::pi / s;
    if (s < 1e-3) {
        // 1 + 2/(e^{2x} - 1); expm1 overflows to inf, giving exactly 1.
        return 1.0 + 2.0 / std::expm1(2.0 * x);
    }
    if (s > 1e3) {
        const double x2 = x * x;
        return 1.0 / x + x * (1.0 / 3.0 - x2 * (1.0 / 45.0 - x2 * (2.0 / 945.0)));
    }
    return 1.0 / std::tanh(x);
}

/// coth(pi/s) - 1 = 2/(e^{2 pi/s} - 1), twice the Planck occupation at the
/// Unruh temperature. Computed directly so it keeps full relative precision
/// when it is tiny.
inline double planck_excess(double s)
{
    if (!(s >= 0.0)) {
        throw DomainError("planck_excess: s must be non-negative");
    }
    if (s == 0.0) {
        return 0.0;
    }
    return 2.0 / std::expm1(2.0 * std::numbers::pi / s);
}

/// Unruh-Davies temperature hbar a / (2 pi c kB), in kelvin.
inline double unruh_temperature(double accel, const PhysicalConstants& k)
{
    if (!(accel >= 0.0)) {
        throw DomainError("unruh_temperature: acceleration must be non-negative");
    }
    return k.hbar * accel / (2.0 * std::numbers::pi * k.c * k.kB);
}

/// Inverse of unruh_temperature.
inline double acceleration_for_temperature(double kelvin, const PhysicalConstants& k)
{
    if (!(kelvin >= 0.0)) {
        throw DomainError("acceleration_for_temperature: temperature must be non-negative");
    }
    return 2.0 * std::numbers::pi * k.c * k.kB * kelvin / k.hbar;
}

/// Field spectrum <eps(w) eps*(w)> seen by the accelerated oscillator,
/// split into its zero-point and Planck (Unruh) parts.
struct SpectralPoint
{
    double omega = 0.0;
    double density = 0.0;
    double vacuum_part = 0.0;
    double thermal_part = 0.0;
};

/// (4 hbar w^3 / 3c^3) [1 + (a/cw)^2] coth(pi c w / a).
inline SpectralPoint spectral_density(double omega, double accel, const PhysicalConstants& k)
{
    if (!(omega > 0.0)) {
        throw DomainError("spectral_density: omega must be positive");
    }
    if (!(accel >= 0.0)) {
        throw DomainError("spectral_density: acceleration must be non-negative");
    }
    const double ratio = accel / (k.c * omega);
    const double vacuum = 4.0 * k.hbar * omega * omega * omega / (3.0 * k.c * k.c * k.c)
                          * (1.0 + ratio * ratio);
    const double thermal_weight = planck_excess(ratio);
    SpectralPoint p;
    p.omega = omega;
    p.vacuum_part = vacuum;
    p.thermal_part = vacuum * thermal_weight;
    p.density = p.vacuum_part + p.thermal_part;
    return p;
}

/// The free-space spectral energy density exactly as it enters the
/// alternative form (8 pi^2 / 3c)[1 + (a/cw)^2] rho(w) coth(...) of the
/// field spectrum: rho(w) = hbar w^3 / (2 pi^2 c^2). Note the c^2; the
/// conventional energy density per unit angular frequency carries c^3.
inline double printed_energy_density(double omega, const PhysicalConstants& k)
{
    return k.hbar * omega * omega * omega / (2.0 * std::numbers::pi * std::numbers::pi * k.c * k.c);
}

} // namespace accelosc
