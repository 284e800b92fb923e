#pragma once

#include "accelosc/errors.hpp"

#include <cmath>
#include <numbers>

namespace accelosc {

/// Physical constants in Gaussian-cgs units. Defaults are CODATA 2018 values
/// for the electron.
struct PhysicalConstants
{
    double e = 4.803204712570263e-10;  // esu
    double m = 9.1093837015e-28;       // g
    double c = 2.99792458e10;          // cm/s
    double hbar = 1.054571817e-27;     // erg s
    double kB = 1.380649e-16;          // erg/K

    bool valid() const noexcept
    {
        return e > 0.0 && m > 0.0 && c > 0.0 && hbar > 0.0 && kB > 0.0;
    }

    /// Classical electron radius e^2/(m c^2) in cm.
    double classical_radius() const noexcept { return e * e / (m * c * c); }
};

/// Radiation-reaction time 2e^2/(3mc^3) = 2 r0/(3c), in seconds.
inline double damping_time(const PhysicalConstants& k)
{
    if (!k.valid()) {
        throw DomainError("damping_time: all physical constants must be positive");
    }
    return 2.0 * k.e * k.e / (3.0 * k.m * k.c * k.c * k.c);
}

/// Dimensionless pair controlling every commutator and variance integral:
/// s = a/(omega0 c) and g = gamma omega0.
struct DimensionlessParams
{
    double s = 0.0;
    double g = 0.0;
};

/// Oscillator problem statement. Construct with make_params() or
/// from_dimensionless(); s and g are always derived from the dimensional
/// fields, never set independently.
class OscillatorParams
{
public:
    double omega0() const noexcept { return omega0_; }
    double accel() const noexcept { return accel_; }
    double gamma() const noexcept { return gamma_; }
    double c() const noexcept { return c_; }
    double s() const noexcept { return accel_ / (omega0_ * c_); }
    double g() const noexcept { return gamma_ * omega0_; }
    DimensionlessParams dimensionless() const noexcept { return {s(), g()}; }

    /// Effective damping rate gamma (omega0^2 + a^2/c^2) of the reduced equation.
    double effective_damping_rate() const noexcept
    {
        return gamma_ * (omega0_ * omega0_ + accel_ * accel_ / (c_ * c_));
    }

    friend OscillatorParams make_params(double omega0, double accel, const PhysicalConstants& k);
    friend OscillatorParams from_dimensionless(double omega0, double s, double g,
                                               const PhysicalConstants& k);

private:
    OscillatorParams(double omega0, double accel, double gamma, double c)
        : omega0_(omega0), accel_(accel), gamma_(gamma), c_(c)
    {
    }

    double omega0_;
    double accel_;
    double gamma_;
    double c_;
};

/// Electron oscillator with damping time taken from the constants.
inline OscillatorParams make_params(double omega0, double accel, const PhysicalConstants& k)
{
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
        throw DomainError("make_params: omega0 must be positive and finite");
    }
    if (!(accel >= 0.0) || !std::isfinite(accel)) {
        throw DomainError("make_params: acceleration must be non-negative and finite");
    }
    return OscillatorParams(omega0, accel, damping_time(k), k.c);
}

/// Oscillator with an arbitrary damping time chosen through g = gamma omega0.
/// Used for numerical studies where g is far larger than the electron value.
inline OscillatorParams from_dimensionless(double omega0, double s, double g,
                                           const PhysicalConstants& k)
{
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
        throw DomainError("from_dimensionless: omega0 must be positive and finite");
    }
    if (!(s >= 0.0) || !(g > 0.0)) {
        throw DomainError("from_dimensionless: need s >= 0 and g > 0");
    }
    return OscillatorParams(omega0, s * omega0 * k.c, g / omega0, k.c);
}

} // namespace accelosc
