#pragma once

#include "accelosc/core_model.hpp"
#include "accelosc/errors.hpp"
#include "accelosc/response.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <vector>

namespace accelosc {

/// Contravariant four-vector (x^0, x^1, x^2, x^3) with x^0 = ct.
template <typename T>
using FourVector = std::array<T, 4>;

/// Minkowski inner product, signature (+, -, -, -).
template <typename T>
T minkowski_dot(const FourVector<T>& a, const FourVector<T>& b)
{
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

template <typename T>
FourVector<T> operator+(const FourVector<T>& a, const FourVector<T>& b)
{
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

template <typename T>
FourVector<T> operator*(const T& s, const FourVector<T>& a)
{
    return {s * a[0], s * a[1], s * a[2], s * a[3]};
}

template <typename T>
T max_abs(const FourVector<T>& a)
{
    using std::abs;
    T m = abs(a[0]);
    for (int i = 1; i < 4; ++i) {
        m = std::max<T>(m, abs(a[i]));
    }
    return m;
}

/// Proper-time derivatives of a worldline at one instant.
template <typename T>
struct Kinematics
{
    FourVector<T> position{};
    FourVector<T> velocity{};
    FourVector<T> acceleration{};
    FourVector<T> jerk{};
    /// Richardson error estimates, present for finite-difference derivatives.
    std::optional<std::array<FourVector<T>, 3>> error;
};

/// A worldline x^mu(tau) parameterized by proper time. Derivatives come from
/// an analytic callback when one is given, otherwise from 4th-order central
/// differences with step h and one Richardson extrapolation.
template <typename T = double>
class Worldline
{
public:
    using PositionFn = std::function<FourVector<T>(T)>;
    using KinematicsFn = std::function<Kinematics<T>(T)>;

    Worldline(T c, PositionFn position, T step)
        : c_(c), position_(std::move(position)), step_(step)
    {
    }

    Worldline(T c, PositionFn position, KinematicsFn analytic)
        : c_(c), position_(std::move(position)), analytic_(std::move(analytic))
    {
    }

    T c() const { return c_; }
    bool analytic() const { return static_cast<bool>(analytic_); }

    FourVector<T> position(T tau) const { return checked_position(tau); }

    Kinematics<T> at(T tau) const
    {
        if (analytic_) {
            return analytic_(tau);
        }
        return finite_difference(tau, step_);
    }

    /// Finite-difference kinematics regardless of whether an analytic form
    /// exists.
    Kinematics<T> finite_difference(T tau, T h) const
    {
        const auto coarse = stencils(tau, h);
        const auto fine = stencils(tau, h / T(2));
        Kinematics<T> k;
        k.position = checked_position(tau);
        std::array<FourVector<T>, 3> err{};
        std::array<FourVector<T>*, 3> out{&k.velocity, &k.acceleration, &k.jerk};
        using std::abs;
        for (int order = 0; order < 3; ++order) {
            for (int mu = 0; mu < 4; ++mu) {
                const T d = fine[order][mu] - coarse[order][mu];
                (*out[order])[mu] = fine[order][mu] + d / T(15);
                err[order][mu] = abs(d) / T(15);
            }
        }
        k.error = err;
        return k;
    }

private:
    FourVector<T> checked_position(T tau) const
    {
        FourVector<T> x = position_(tau);
        for (const T& v : x) {
            using std::isfinite;
            if (!isfinite(v)) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "worldline position is not finite at tau = " << static_cast<double>(tau);
                throw EvaluationError(msg.str(), static_cast<double>(tau));
            }
        }
        return x;
    }

    // 4th-order central stencils for the first three derivatives.
    std::array<FourVector<T>, 3> stencils(T tau, T h) const
    {
        std::array<FourVector<T>, 7> f;
        for (int j = -3; j <= 3; ++j) {
            f[j + 3] = checked_position(tau + T(j) * h);
        }
        std::array<FourVector<T>, 3> d{};
        for (int mu = 0; mu < 4; ++mu) {
            const T m3 = f[0][mu], m2 = f[1][mu], m1 = f[2][mu], z = f[3][mu];
            const T p1 = f[4][mu], p2 = f[5][mu], p3 = f[6][mu];
            d[0][mu] = (-p2 + T(8) * p1 - T(8) * m1 + m2) / (T(12) * h);
            d[1][mu] = (-p2 + T(16) * p1 - T(30) * z + T(16) * m1 - m2) / (T(12) * h * h);
            d[2][mu] = (-p3 + T(8) * p2 - T(13) * p1 + T(13) * m1 - T(8) * m2 + m3)
                       / (T(8) * h * h * h);
        }
        return d;
    }

    T c_;
    PositionFn position_;
    KinematicsFn analytic_;
    T step_{};
};

/// Uniform proper acceleration a along z:
/// ct = (c^2/a) sinh(a tau/c), z = (c^2/a) cosh(a tau/c).
template <typename T>
Worldline<T> hyperbolic_worldline(T a, T c)
{
    if (!(a > T(0))) {
        throw DomainError("hyperbolic_worldline: acceleration must be positive");
    }
    const T radius = c * c / a;
    auto position = [=](T tau) {
        using std::cosh;
        using std::sinh;
        const T eta = a * tau / c;
        return FourVector<T>{radius * sinh(eta), T(0), T(0), radius * cosh(eta)};
    };
    auto kin = [=](T tau) {
        using std::cosh;
        using std::sinh;
        const T eta = a * tau / c;
        const T ch = cosh(eta);
        const T sh = sinh(eta);
        Kinematics<T> k;
        k.position = {radius * sh, T(0), T(0), radius * ch};
        k.velocity = {c * ch, T(0), T(0), c * sh};
        k.acceleration = {a * sh, T(0), T(0), a * ch};
        const T rate = a * a / c;
        k.jerk = {rate * ch, T(0), T(0), rate * sh};
        return k;
    };
    return Worldline<T>(c, position, kin);
}

inline Worldline<double> hyperbolic_worldline(double a, const PhysicalConstants& k)
{
    return hyperbolic_worldline<double>(a, k.c);
}

/// Constant three-velocity v (|v| < c).
template <typename T>
Worldline<T> inertial_worldline(std::array<T, 3> v, T c)
{
    using std::sqrt;
    const T beta2 = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) / (c * c);
    if (!(beta2 < T(1))) {
        throw DomainError("inertial_worldline: speed must be below c");
    }
    const T lorentz = T(1) / sqrt(T(1) - beta2);
    const FourVector<T> u{lorentz * c, lorentz * v[0], lorentz * v[1], lorentz * v[2]};
    auto position = [=](T tau) { return tau * u; };
    auto kin = [=](T tau) {
        Kinematics<T> k;
        k.position = tau * u;
        k.velocity = u;
        return k;
    };
    return Worldline<T>(c, position, kin);
}

/// Circular orbit of radius r at speed beta c in the x-y plane. The proper
/// angular frequency is lorentz * beta c / r.
template <typename T>
Worldline<T> circular_worldline(T radius, T beta, T c)
{
    using std::sqrt;
    if (!(radius > T(0)) || !(beta > T(0)) || !(beta < T(1))) {
        throw DomainError("circular_worldline: need radius > 0 and 0 < beta < 1");
    }
    const T lorentz = T(1) / sqrt(T(1) - beta * beta);
    const T omega = lorentz * beta * c / radius;
    auto position = [=](T tau) {
        using std::cos;
        using std::sin;
        return FourVector<T>{lorentz * c * tau, radius * cos(omega * tau),
                             radius * sin(omega * tau), T(0)};
    };
    auto kin = [=](T tau) {
        using std::cos;
        using std::sin;
        const T cp = cos(omega * tau);
        const T sp = sin(omega * tau);
        const T w2 = omega * omega;
        Kinematics<T> k;
        k.position = {lorentz * c * tau, radius * cp, radius * sp, T(0)};
        k.velocity = {lorentz * c, -radius * omega * sp, radius * omega * cp, T(0)};
        k.acceleration = {T(0), -radius * w2 * cp, -radius * w2 * sp, T(0)};
        k.jerk = {T(0), radius * w2 * omega * sp, -radius * w2 * omega * cp, T(0)};
        return k;
    };
    return Worldline<T>(c, position, kin);
}

/// Self-force bracket of the LAD equation per unit mass,
/// gamma (x''' + (x''.x'') x' / c^2), split into its two terms.
template <typename T>
struct LadDecomposition
{
    FourVector<T> schott{};
    FourVector<T> drag{};
    FourVector<T> total_self{};
};

template <typename T>
LadDecomposition<T> lad_self_force(const Worldline<T>& w, T tau, T gamma)
{
    const Kinematics<T> k = w.at(tau);
    const T c = w.c();
    LadDecomposition<T> out;
    out.schott = gamma * k.jerk;
    out.drag = (gamma * minkowski_dot(k.acceleration, k.acceleration) / (c * c)) * k.velocity;
    out.total_self = out.schott + out.drag;
    return out;
}

/// Larmor power 2 e^2 a^2 / (3 c^3), erg/s. Even in a.
inline double larmor_power(double a, const PhysicalConstants& k)
{
    return 2.0 * k.e * k.e * a * a / (3.0 * k.c * k.c * k.c);
}

/// Poynting-Robertson drag -R v / c^2 on a body radiating power R.
inline double pr_drag_force(double v, double radiated_power, const PhysicalConstants& k)
{
    if (!(std::abs(v) < k.c)) {
        throw DomainError("pr_drag_force: |v| must be below c");
    }
    if (!(radiated_power >= 0.0)) {
        throw DomainError("pr_drag_force: radiated power must be non-negative");
    }
    return -radiated_power * v / (k.c * k.c);
}

/// Sampled drive field on the trajectory's time grid.
struct FieldRecord
{
    std::vector<double> times;
    std::vector<double> field;
};

inline FieldRecord sample_field(const DriveSpec& drive, const std::vector<double>& times)
{
    FieldRecord out;
    out.times = times;
    out.field.reserve(times.size());
    for (double t : times) {
        out.field.push_back(drive.field(t));
    }
    return out;
}

struct ResidualRecord
{
    std::vector<double> times;
    std::vector<double> residual;
    double max_abs_residual = 0.0;
    /// max |(e/m) E| over the same samples, for relative comparisons.
    double drive_scale = 0.0;

    double relative() const { return drive_scale > 0.0 ? max_abs_residual / drive_scale : max_abs_residual; }
};

/// Pointwise residual of x'' + w0^2 x - gamma x''' - (e/m) E on a uniform
/// grid; w0 = 0 is the free-charge Lorentz equation. Second and third
/// derivatives come from 4th-order central differences of the velocity
/// samples. omega_scale is the fastest frequency present and must satisfy
/// omega_scale * dt <= 0.05.
inline ResidualRecord lorentz_nonrel_residual(const TrajectoryRecord& x, double gamma,
                                              const FieldRecord& drive, double omega0,
                                              double omega_scale,
                                              const PhysicalConstants& k = {})
{
    if (x.size() != drive.field.size() || x.size() < 5) {
        throw DomainError("lorentz_nonrel_residual: trajectory and field records must match (>= 5 samples)");
    }
    const double h = x.times[1] - x.times[0];
    if (!(h > 0.0)) {
        throw DomainError("lorentz_nonrel_residual: times must be increasing");
    }
    if (!(h * omega_scale <= max_phase_step)) {
        throw ResolutionError("lorentz_nonrel_residual: grid too coarse for third derivatives (need dt * omega <= 0.05)");
    }
    const double charge_ratio = k.e / k.m;
    const auto& v = x.velocities;
    ResidualRecord out;
    for (std::size_t i = 2; i + 2 < x.size(); ++i) {
        const double acc = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h);
        const double jerk =
            (-v[i + 2] + 16.0 * v[i + 1] - 30.0 * v[i] + 16.0 * v[i - 1] - v[i - 2]) / (12.0 * h * h);
        const double forcing = charge_ratio * drive.field[i];
        const double r = acc + omega0 * omega0 * x.positions[i] - gamma * jerk - forcing;
        out.times.push_back(x.times[i]);
        out.residual.push_back(r);
        out.max_abs_residual = std::max(out.max_abs_residual, std::abs(r));
        out.drive_scale = std::max(out.drive_scale, std::abs(forcing));
    }
    return out;
}

} // namespace accelosc
