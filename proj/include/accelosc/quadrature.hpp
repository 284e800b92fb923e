#pragma once

#include "accelosc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <sstream>
#include <vector>

namespace accelosc {

struct QuadratureSpec
{
    double rel_tol = 1e-10;
    double abs_tol = 1e-30;
    int max_depth = 60;
    /// Location and width of a known sharp peak. The domain is pre-split at
    /// center and center +- {1, 10, 1e3, 1e6} * width.
    std::optional<double> peak_center;
    std::optional<double> peak_width;
    std::int64_t max_evaluations = 4'000'000;

    void validate() const
    {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
            throw DomainError("QuadratureSpec: tolerances must be positive");
        }
        if (max_depth < 10) {
            throw DomainError("QuadratureSpec: max_depth must be at least 10");
        }
        if (peak_center.has_value() != peak_width.has_value()) {
            throw DomainError("QuadratureSpec: peak_center and peak_width go together");
        }
        if (peak_width && !(*peak_width > 0.0)) {
            throw DomainError("QuadratureSpec: peak_width must be positive");
        }
    }

    QuadratureSpec with_peak(double center, double width) const
    {
        QuadratureSpec out = *this;
        out.peak_center = center;
        out.peak_width = width;
        return out;
    }
};

struct QuadratureResult
{
    double value = 0.0;
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
    bool converged = false;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1] (QUADPACK qk15 abscissae).
inline constexpr std::array<double, 8> kronrod_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel
{
    double a;
    double b;
    double value;
    double error;
    int depth;
    std::size_t segment;
};

struct PanelOrder
{
    bool operator()(const Panel& lhs, const Panel& rhs) const
    {
        if (lhs.error != rhs.error) {
            return lhs.error < rhs.error;
        }
        if (lhs.segment != rhs.segment) {
            return lhs.segment > rhs.segment;
        }
        return lhs.a > rhs.a;
    }
};

// Integrand on one segment, either the identity map on [lo, hi] or the
// semi-infinite map x = lo + scale * t / (1 - t) on t in [0, 1].
template <typename F>
class SegmentIntegrand
{
public:
    SegmentIntegrand(const F& f, double lo, double scale, bool infinite)
        : f_(f), lo_(lo), scale_(scale), infinite_(infinite)
    {
    }

    double operator()(double t) const
    {
        double x = t;
        double jacobian = 1.0;
        if (infinite_) {
            const double one_minus = 1.0 - t;
            x = lo_ + scale_ * t / one_minus;
            jacobian = scale_ / (one_minus * one_minus);
            if (!std::isfinite(x)) {
                return 0.0;
            }
        }
        const double y = f_(x);
        if (!std::isfinite(y)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "integrand returned " << y << " at x = " << x;
            throw EvaluationError(msg.str(), x);
        }
        return y * jacobian;
    }

private:
    const F& f_;
    double lo_;
    double scale_;
    bool infinite_;
};

template <typename G>
Panel kronrod_panel(const G& g, double a, double b, int depth, std::size_t segment)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = g(center);
    double kronrod = fc * kronrod_weights[7];
    double gauss = fc * gauss_weights[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        const double sum = g(center - dx) + g(center + dx);
        kronrod += kronrod_weights[j] * sum;
        if (j % 2 == 1) {
            gauss += gauss_weights[j / 2] * sum;
        }
    }
    return Panel{a, b, kronrod * half, std::abs((kronrod - gauss) * half), depth, segment};
}

inline std::vector<double> breakpoints(double lo, double hi, const QuadratureSpec& spec)
{
    std::vector<double> pts{lo, hi};
    if (spec.peak_center) {
        const double c = *spec.peak_center;
        const double w = *spec.peak_width;
        pts.push_back(c);
        for (double k : {1.0, 10.0, 1e3, 1e6}) {
            pts.push_back(c - k * w);
            pts.push_back(c + k * w);
        }
    }
    std::vector<double> inside;
    for (double p : pts) {
        if (p == lo || p == hi || (p > lo && p < hi && std::isfinite(p))) {
            inside.push_back(p);
        }
    }
    std::sort(inside.begin(), inside.end());
    inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
    return inside;
}

} // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration of f over [lo, hi], where hi
/// may be +infinity.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate meets max(rel_tol |value|, abs_tol). A panel bisected max_depth
/// times is never split again; if the tolerance cannot be met the best
/// estimate is returned with converged = false. Results depend only on the
/// inputs.
template <typename F>
QuadratureResult integrate(const F& f, double lo, double hi, const QuadratureSpec& spec = {})
{
    spec.validate();
    if (!std::isfinite(lo) || std::isnan(hi) || !(lo < hi)) {
        throw DomainError("integrate: need finite lo < hi (hi may be +infinity)");
    }
    if (std::isinf(hi) && hi < 0.0) {
        throw DomainError("integrate: upper limit cannot be -infinity");
    }

    const std::vector<double> pts = detail::breakpoints(lo, hi, spec);
    using Segment = detail::SegmentIntegrand<F>;
    std::vector<Segment> segments;
    segments.reserve(pts.size());

    std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelOrder> work;
    std::vector<detail::Panel> done;
    long double total = 0.0L;
    long double total_error = 0.0L;
    std::int64_t evaluations = 0;

    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        if (std::isinf(b)) {
            double scale = std::max(1.0, std::abs(a));
            if (spec.peak_width) {
                scale = std::max(scale, *spec.peak_width);
            }
            segments.emplace_back(f, a, scale, true);
            work.push(detail::kronrod_panel(segments.back(), 0.0, 1.0, 0, i));
        } else {
            segments.emplace_back(f, 0.0, 1.0, false);
            work.push(detail::kronrod_panel(segments.back(), a, b, 0, i));
        }
        evaluations += 15;
    }
    {
        auto copy = work;
        while (!copy.empty()) {
            total += copy.top().value;
            total_error += copy.top().error;
            copy.pop();
        }
    }

    auto target = [&] {
        return std::max(spec.rel_tol * std::abs(static_cast<double>(total)), spec.abs_tol);
    };

    bool converged = static_cast<double>(total_error) <= target();
    while (!converged && !work.empty()) {
        if (evaluations + 30 > spec.max_evaluations) {
            break;
        }
        detail::Panel p = work.top();
        work.pop();
        if (p.depth >= spec.max_depth) {
            done.push_back(p);
            continue;
        }
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) {
            done.push_back(p);
            continue;
        }
        const Segment& g = segments[p.segment];
        detail::Panel left = detail::kronrod_panel(g, p.a, mid, p.depth + 1, p.segment);
        detail::Panel right = detail::kronrod_panel(g, mid, p.b, p.depth + 1, p.segment);
        evaluations += 30;
        total += static_cast<long double>(left.value) + right.value - p.value;
        total_error += static_cast<long double>(left.error) + right.error - p.error;
        work.push(left);
        work.push(right);
        converged = static_cast<double>(total_error) <= target();
    }

    while (!work.empty()) {
        done.push_back(work.top());
        work.pop();
    }
    std::sort(done.begin(), done.end(), [](const detail::Panel& l, const detail::Panel& r) {
        return l.segment != r.segment ? l.segment < r.segment : l.a < r.a;
    });
    long double value = 0.0L;
    long double error = 0.0L;
    for (const auto& p : done) {
        value += p.value;
        error += p.error;
    }

    QuadratureResult out;
    out.value = static_cast<double>(value);
    out.error_estimate = static_cast<double>(error);
    out.evaluations = evaluations;
    out.converged = out.error_estimate
                    <= std::max(spec.rel_tol * std::abs(out.value), spec.abs_tol);
    return out;
}

} // namespace accelosc
