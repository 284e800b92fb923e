#pragma once

#include "accelosc/core_model.hpp"
#include "accelosc/errors.hpp"
#include "accelosc/quadrature.hpp"
#include "accelosc/spectrum.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>

namespace accelosc {

// Which part of the frequency axis a spectral integral covers.

/// Substitute z = u^2 - 1, freeze every slowly varying factor at u = 1 and
/// integrate the remaining Lorentzian in z over [0, inf).
struct PaperHalfResonance
{
};

/// Full integrand over z = u^2 - 1 in [-W, W], i.e. u in [sqrt(1-W), sqrt(1+W)].
struct SymmetricResonance
{
    double half_width = 1e-2;
};

/// Full integrand over u in (0, cutoff].
struct FullAxis
{
    double cutoff = 1e3;
};

using WindowSpec = std::variant<PaperHalfResonance, SymmetricResonance, FullAxis>;

inline void validate(const WindowSpec& window)
{
    if (const auto* sym = std::get_if<SymmetricResonance>(&window)) {
        if (!(sym->half_width > 0.0) || !(sym->half_width < 1.0)) {
            throw DomainError("SymmetricResonance: half width W must satisfy 0 < W < 1");
        }
    }
    if (const auto* full = std::get_if<FullAxis>(&window)) {
        if (!(full->cutoff > 1.0) || !std::isfinite(full->cutoff)) {
            throw DomainError("FullAxis: cutoff must be finite and greater than 1");
        }
    }
}

/// Short textual form used on the command line and in output records:
/// "paper", "sym:W" or "full:L".
inline std::string to_string(const WindowSpec& window)
{
    std::ostringstream out;
    out.precision(17);
    std::visit(
        [&](const auto& w) {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, PaperHalfResonance>) {
                out << "paper";
            } else if constexpr (std::is_same_v<W, SymmetricResonance>) {
                out << "sym:" << w.half_width;
            } else {
                out << "full:" << w.cutoff;
            }
        },
        window);
    return out.str();
}

/// Spectral moment being integrated. The integrand weight is u^k F(u) with
/// k = 4 for the commutator, 3 for <x^2> and 5 for <xdot^2>.
enum class SpectralMoment : int
{
    Position = 3,
    Commutator = 4,
    Velocity = 5,
};

/// Dimensionless integrand
///   (4/pi) g u^k F(u) coth(pi u/s) / [(u^2 - 1)^2 + g^2 u^6 F(u)^2],
/// F(u) = 1 + (s/u)^2, whose integral over u is the moment in natural units
/// (i hbar, hbar/(2 m omega0) or hbar omega0/(2m)).
inline double spectral_integrand(SpectralMoment moment, double u, double s, double g)
{
    if (!(u > 0.0)) {
        throw DomainError("spectral_integrand: u must be positive");
    }
    const double u2 = u * u;
    const double shifted = u2 + s * s;  // u^2 F(u)
    const double detune = u2 - 1.0;
    const double width = g * u * shifted;  // g u^3 F(u)
    const double thermal = s == 0.0 ? 1.0 : coth_factor(s / u);
    const int k = static_cast<int>(moment);
    // u^k F = u^(k-2) (u^2 + s^2)
    const double weight = std::pow(u, k - 2) * shifted;
    return 4.0 / std::numbers::pi * g * weight * thermal / (detune * detune + width * width);
}

/// The [x, p] integrand in units of i hbar.
inline double integrand(double u, double s, double g)
{
    if (!(g > 0.0) || !(g < 1.0) || !(s >= 0.0)) {
        throw DomainError("integrand: need s >= 0 and 0 < g < 1");
    }
    return spectral_integrand(SpectralMoment::Commutator, u, s, g);
}

/// Narrow-resonance closed form of <[x, p]> / (i hbar): coth(pi/s).
inline double commutator_closed_form(double s)
{
    return coth_factor(s);
}

/// Commutator divided by its thermal factor. Identically 1: dividing out
/// coth(pi/s) restores [x, p] = i hbar and Dx Dp >= hbar/2.
inline double normalized_commutator(double s)
{
    return commutator_closed_form(s) / coth_factor(s);
}

struct CommutatorResult
{
    double value = 0.0;
    WindowSpec window;
    /// Empty when the value comes from a closed form.
    std::optional<QuadratureResult> quadrature;

    bool converged() const noexcept { return !quadrature || quadrature->converged; }
};

namespace detail {

inline void check_numeric_params(const DimensionlessParams& p)
{
    if (!(p.g > 0.0) || !(p.g <= 1e-2)) {
        throw DomainError("spectral integrals require 0 < g <= 1e-2");
    }
    if (!(p.s >= 0.0) || !std::isfinite(p.s)) {
        throw DomainError("spectral integrals require finite s >= 0");
    }
}

/// Resonance half width A = g (1 + s^2) in z = u^2 - 1.
inline double resonance_width(const DimensionlessParams& p)
{
    return p.g * (1.0 + p.s * p.s);
}

inline CommutatorResult spectral_moment(SpectralMoment moment, const DimensionlessParams& p,
                                        const WindowSpec& window, const QuadratureSpec& spec)
{
    check_numeric_params(p);
    validate(window);
    const double A = resonance_width(p);

    if (std::holds_alternative<PaperHalfResonance>(window)) {
        // Frozen amplitude: integrand numerator at u = 1 times du/dz = 1/2,
        // which leaves amplitude * A/(z^2 + A^2).
        const double numerator_at_peak =
            spectral_integrand(moment, 1.0, p.s, p.g) * A * A;
        const double amplitude = numerator_at_peak / (2.0 * A);
        const auto lorentzian = [A](double z) { return A / (z * z + A * A); };
        QuadratureResult q = integrate(lorentzian, 0.0, std::numeric_limits<double>::infinity(), spec.with_peak(0.0, A));
        q.value *= amplitude;
        q.error_estimate *= amplitude;
        return CommutatorResult{q.value, window, q};
    }

    const auto f = [moment, p](double u) { return spectral_integrand(moment, u, p.s, p.g); };
    const QuadratureSpec hinted = spec.with_peak(1.0, 0.5 * A);
    QuadratureResult q;
    if (const auto* sym = std::get_if<SymmetricResonance>(&window)) {
        q = integrate(f, std::sqrt(1.0 - sym->half_width), std::sqrt(1.0 + sym->half_width), hinted);
    } else {
        q = integrate(f, 0.0, std::get<FullAxis>(window).cutoff, hinted);
    }
    return CommutatorResult{q.value, window, q};
}

} // namespace detail

/// <[x, p]> in units of i hbar, integrated under the chosen window.
inline CommutatorResult commutator_numeric(const DimensionlessParams& p, const WindowSpec& window,
                                           const QuadratureSpec& spec = {})
{
    return detail::spectral_moment(SpectralMoment::Commutator, p, window, spec);
}

/// <x^2> in units of hbar/(2 m omega0).
inline CommutatorResult variance_x(const DimensionlessParams& p, const WindowSpec& window,
                                   const QuadratureSpec& spec = {})
{
    return detail::spectral_moment(SpectralMoment::Position, p, window, spec);
}

/// <p^2> = m^2 <xdot^2> in units of m hbar omega0 / 2.
inline CommutatorResult variance_p(const DimensionlessParams& p, const WindowSpec& window,
                                   const QuadratureSpec& spec = {})
{
    return detail::spectral_moment(SpectralMoment::Velocity, p, window, spec);
}

struct UncertaintyResult
{
    CommutatorResult dx2;
    CommutatorResult dp2;
    /// sqrt(<x^2><p^2>) in units of hbar/2.
    double product = 0.0;

    bool converged() const noexcept { return dx2.converged() && dp2.converged(); }
};

inline UncertaintyResult uncertainty_product(const DimensionlessParams& p,
                                             const WindowSpec& window,
                                             const QuadratureSpec& spec = {})
{
    UncertaintyResult out{variance_x(p, window, spec), variance_p(p, window, spec), 0.0};
    out.product = std::sqrt(out.dx2.value * out.dp2.value);
    return out;
}

} // namespace accelosc
