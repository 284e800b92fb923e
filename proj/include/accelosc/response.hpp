#pragma once

#include "accelosc/core_model.hpp"
#include "accelosc/errors.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace accelosc {

using complex = std::complex<double>;

/// (w^2 - w0^2) + i gamma (w^3 + a^2 w / c^2), the response denominator of
/// the accelerated oscillator for the e^{-i w t} component.
inline complex denominator(double omega, const OscillatorParams& p)
{
    const double w0 = p.omega0();
    const double ac = p.accel() / p.c();
    return {omega * omega - w0 * w0, p.gamma() * (omega * omega * omega + ac * ac * omega)};
}

/// Dimensionless form in u = w/w0: (u^2 - 1) + i g u (u^2 + s^2).
inline complex denominator(double u, double s, double g)
{
    return {u * u - 1.0, g * u * (u * u + s * s)};
}

/// Monochromatic drive E(t) = E0 cos(w t - phase) = Re[E0 e^{i phase} e^{-i w t}].
struct DriveSpec
{
    double amplitude = 0.0;  // statvolt/cm
    double omega_drive = 1.0;
    double phase = 0.0;

    void validate() const
    {
        if (!(amplitude >= 0.0) || !(omega_drive > 0.0)) {
            throw DomainError("DriveSpec: need amplitude >= 0 and omega_drive > 0");
        }
    }

    double field(double t) const { return amplitude * std::cos(omega_drive * t - phase); }
    double field_rate(double t) const
    {
        return -amplitude * omega_drive * std::sin(omega_drive * t - phase);
    }
    complex phasor() const { return std::polar(amplitude, phase); }
};

/// Complex steady-state displacement X of the full third-order equation,
/// x(t) = Re[X e^{-i w t}].
inline complex steady_amplitude(const DriveSpec& drive, const OscillatorParams& p,
                                const PhysicalConstants& k = {})
{
    drive.validate();
    return -(k.e / k.m) * drive.phasor() / denominator(drive.omega_drive, p);
}

/// Steady state of the reduced-order equation
///   x'' + Gamma x' + w0^2 x = (e/m)(E + gamma E'),  Gamma = gamma (w0^2 + a^2/c^2).
/// Differs from steady_amplitude() at relative order (gamma w)^2 near resonance.
inline complex reduced_order_amplitude(const DriveSpec& drive, const OscillatorParams& p,
                                       const PhysicalConstants& k = {})
{
    drive.validate();
    const double w = drive.omega_drive;
    const double w0 = p.omega0();
    const complex forcing = (k.e / k.m) * drive.phasor() * complex(1.0, -p.gamma() * w);
    return forcing / complex(w0 * w0 - w * w, -w * p.effective_damping_rate());
}

struct TrajectoryRecord
{
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<double> velocities;

    std::size_t size() const noexcept { return times.size(); }
    double duration() const { return times.empty() ? 0.0 : times.back() - times.front(); }
};

struct InitialState
{
    double position = 0.0;
    double velocity = 0.0;
};

/// Largest allowed omega0 * dt.
inline constexpr double max_phase_step = 0.05;

/// Classical RK4 on the reduced-order equation. The third-order equation has
/// runaway solutions growing like e^{t/gamma}; the order-reduced form keeps
/// its O(gamma) content and is unconditionally well behaved.
inline TrajectoryRecord integrate_time_domain(const DriveSpec& drive, const OscillatorParams& p,
                                              double duration, double dt,
                                              const PhysicalConstants& k = {},
                                              InitialState initial = {})
{
    drive.validate();
    if (!(dt > 0.0) || !(duration > 0.0)) {
        throw DomainError("integrate_time_domain: duration and dt must be positive");
    }
    if (!(dt * p.omega0() < max_phase_step)) {
        throw ResolutionError("integrate_time_domain: dt must satisfy dt < 0.05/omega0");
    }

    const double w0sq = p.omega0() * p.omega0();
    const double damping = p.effective_damping_rate();
    const double charge_ratio = k.e / k.m;
    const double gamma = p.gamma();
    const auto accel = [&](double t, double x, double v) {
        return -w0sq * x - damping * v
               + charge_ratio * (drive.field(t) + gamma * drive.field_rate(t));
    };

    const auto steps = static_cast<std::size_t>(std::ceil(duration / dt - 1e-9));
    TrajectoryRecord out;
    out.times.reserve(steps + 1);
    out.positions.reserve(steps + 1);
    out.velocities.reserve(steps + 1);

    double x = initial.position;
    double v = initial.velocity;
    out.times.push_back(0.0);
    out.positions.push_back(x);
    out.velocities.push_back(v);
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double k1x = v;
        const double k1v = accel(t, x, v);
        const double k2x = v + 0.5 * dt * k1v;
        const double k2v = accel(t + 0.5 * dt, x + 0.5 * dt * k1x, k2x);
        const double k3x = v + 0.5 * dt * k2v;
        const double k3v = accel(t + 0.5 * dt, x + 0.5 * dt * k2x, k3x);
        const double k4x = v + dt * k3v;
        const double k4v = accel(t + dt, x + dt * k3x, k4x);
        x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        out.times.push_back(static_cast<double>(i + 1) * dt);
        out.positions.push_back(x);
        out.velocities.push_back(v);
    }
    return out;
}

struct SteadyStateFit
{
    /// x(t) ~ Re[amplitude e^{-i w t}] = A cos(w t) + B sin(w t), amplitude = A + iB.
    complex amplitude;
    double rms_residual = 0.0;
    std::size_t samples = 0;
};

/// Least-squares fit of A cos(w t) + B sin(w t) over the trailing 20% of the
/// record. Requires the record to span at least ten amplitude damping times
/// 2/Gamma so the start-up transient has decayed.
inline SteadyStateFit fit_steady_state(const TrajectoryRecord& rec, double omega,
                                       const OscillatorParams& p)
{
    const double damping_time = 2.0 / p.effective_damping_rate();
    if (rec.size() < 10 || rec.duration() < 10.0 * damping_time) {
        throw PreconditionError(
            "fit_steady_state: record must cover at least 10 damping times 2/(gamma(w0^2+a^2/c^2))");
    }
    const std::size_t first = rec.size() - rec.size() / 5;
    double cc = 0.0;
    double ss = 0.0;
    double cs = 0.0;
    double xc = 0.0;
    double xs = 0.0;
    for (std::size_t i = first; i < rec.size(); ++i) {
        const double c = std::cos(omega * rec.times[i]);
        const double s = std::sin(omega * rec.times[i]);
        const double x = rec.positions[i];
        cc += c * c;
        ss += s * s;
        cs += c * s;
        xc += x * c;
        xs += x * s;
    }
    const double det = cc * ss - cs * cs;
    const double A = (xc * ss - xs * cs) / det;
    const double B = (xs * cc - xc * cs) / det;

    double sq = 0.0;
    for (std::size_t i = first; i < rec.size(); ++i) {
        const double r = rec.positions[i] - A * std::cos(omega * rec.times[i])
                          - B * std::sin(omega * rec.times[i]);
        sq += r * r;
    }
    SteadyStateFit fit;
    fit.amplitude = {A, B};
    fit.samples = rec.size() - first;
    fit.rms_residual = std::sqrt(sq / static_cast<double>(fit.samples));
    return fit;
}

/// Exponential decay rate of the oscillation envelope, from a least-squares
/// line through log|x| at the interpolated turning points.
inline double fit_decay_rate(const TrajectoryRecord& rec)
{
    std::vector<double> ts;
    std::vector<double> logs;
    for (std::size_t i = 1; i + 1 < rec.size(); ++i) {
        const double v0 = rec.velocities[i];
        const double v1 = rec.velocities[i + 1];
        if ((v0 > 0.0 && v1 <= 0.0) || (v0 < 0.0 && v1 >= 0.0)) {
            // parabola through the three positions around the turning point
            const double xm = rec.positions[i - 1];
            const double x0 = rec.positions[i];
            const double xp = rec.positions[i + 1];
            const double curv = xm - 2.0 * x0 + xp;
            double offset = 0.0;
            if (curv != 0.0) {
                offset = 0.5 * (xm - xp) / curv;
            }
            const double peak = x0 + 0.25 * (xp - xm) * offset;
            const double h = rec.times[i + 1] - rec.times[i];
            if (peak != 0.0) {
                ts.push_back(rec.times[i] + offset * h);
                logs.push_back(std::log(std::abs(peak)));
            }
        }
    }
    if (ts.size() < 3) {
        throw PreconditionError("fit_decay_rate: fewer than three turning points in the record");
    }
    const double n = static_cast<double>(ts.size());
    double st = 0.0;
    double sl = 0.0;
    double stt = 0.0;
    double stl = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sl += logs[i];
        stt += ts[i] * ts[i];
        stl += ts[i] * logs[i];
    }
    const double slope = (n * stl - st * sl) / (n * stt - st * st);
    return -slope;
}

struct PowerBalance
{
    double drive_power = 0.0;
    double dissipated_power = 0.0;
};

/// Time-averaged power delivered by the drive term and dissipated by the
/// effective damping, over the largest whole number of drive periods in the
/// trailing 20% of the record.
inline PowerBalance power_balance(const TrajectoryRecord& rec, const DriveSpec& drive,
                                  const OscillatorParams& p, const PhysicalConstants& k = {})
{
    const double period = 2.0 * std::numbers::pi / drive.omega_drive;
    const double t_end = rec.times.back();
    const double window = std::floor(0.2 * rec.duration() / period) * period;
    if (!(window > 0.0)) {
        throw PreconditionError("power_balance: trailing window shorter than one drive period");
    }
    const double t_start = t_end - window;
    double drive_sum = 0.0;
    double loss_sum = 0.0;
    double weight_sum = 0.0;
    for (std::size_t i = 1; i < rec.size(); ++i) {
        const double t0 = rec.times[i - 1];
        const double t1 = rec.times[i];
        if (t0 < t_start) {
            continue;
        }
        const auto drive_term = [&](std::size_t j) {
            const double t = rec.times[j];
            return k.e * (drive.field(t) + p.gamma() * drive.field_rate(t)) * rec.velocities[j];
        };
        const auto loss_term = [&](std::size_t j) {
            return k.m * p.effective_damping_rate() * rec.velocities[j] * rec.velocities[j];
        };
        const double h = t1 - t0;
        drive_sum += 0.5 * h * (drive_term(i - 1) + drive_term(i));
        loss_sum += 0.5 * h * (loss_term(i - 1) + loss_term(i));
        weight_sum += h;
    }
    return {drive_sum / weight_sum, loss_sum / weight_sum};
}

} // namespace accelosc
