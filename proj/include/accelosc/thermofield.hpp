#pragma once

#include "accelosc/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace accelosc {

using SparseOperator = Eigen::SparseMatrix<double>;

/// Physical mode (a) times fictitious tilde mode (ã), each truncated at
/// n_max quanta. Basis state |n, ñ> has index n * (n_max + 1) + ñ.
struct TwoModeFock
{
    int n_max = 40;
    SparseOperator a;
    SparseOperator a_dag;
    SparseOperator at;
    SparseOperator at_dag;

    Eigen::Index levels() const { return n_max + 1; }
    Eigen::Index dim() const { return levels() * levels(); }
    Eigen::Index index(int n, int nt) const { return Eigen::Index(n) * levels() + nt; }

    Eigen::VectorXd vacuum() const
    {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(dim());
        v(0) = 1.0;
        return v;
    }

    SparseOperator identity() const
    {
        SparseOperator id(dim(), dim());
        id.setIdentity();
        return id;
    }

    /// Indices of states with n + ñ <= n_max / 2, where truncation does not
    /// disturb low-order operator identities.
    std::vector<Eigen::Index> safe_block() const
    {
        std::vector<Eigen::Index> out;
        for (int n = 0; n <= n_max; ++n) {
            for (int nt = 0; nt <= n_max; ++nt) {
                if (2 * (n + nt) <= n_max) {
                    out.push_back(index(n, nt));
                }
            }
        }
        return out;
    }
};

inline TwoModeFock build_fock(int n_max = 40)
{
    if (n_max < 2 || n_max > 200) {
        throw DomainError("build_fock: n_max must lie in [2, 200]");
    }
    TwoModeFock f;
    f.n_max = n_max;
    const Eigen::Index dim = f.dim();
    std::vector<Eigen::Triplet<double>> phys;
    std::vector<Eigen::Triplet<double>> tilde;
    for (int n = 0; n <= n_max; ++n) {
        for (int nt = 0; nt <= n_max; ++nt) {
            if (n > 0) {
                phys.emplace_back(f.index(n - 1, nt), f.index(n, nt), std::sqrt(double(n)));
            }
            if (nt > 0) {
                tilde.emplace_back(f.index(n, nt - 1), f.index(n, nt), std::sqrt(double(nt)));
            }
        }
    }
    f.a.resize(dim, dim);
    f.a.setFromTriplets(phys.begin(), phys.end());
    f.at.resize(dim, dim);
    f.at.setFromTriplets(tilde.begin(), tilde.end());
    f.a_dag = f.a.transpose();
    f.at_dag = f.at.transpose();
    return f;
}

/// exp(M) by scaling and squaring around a Taylor kernel. The series is cut
/// once a term falls below 1e-16 of the partial sum in the scaled norm.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& m)
{
    const Eigen::Index n = m.rows();
    const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    }
    const Eigen::MatrixXd scaled = m / std::ldexp(1.0, squarings);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k < 60; ++k) {
        term = term * scaled / double(k);
        sum += term;
        const double tnorm = term.cwiseAbs().colwise().sum().maxCoeff();
        if (tnorm < 1e-16 * sum.cwiseAbs().colwise().sum().maxCoeff()) {
            break;
        }
    }
    for (int i = 0; i < squarings; ++i) {
        sum = sum * sum;
    }
    return sum;
}

/// Generator K = a† ã† - a ã, so that T(theta) = exp[-theta (a ã - a† ã†)]
/// = exp(theta K).
inline SparseOperator squeeze_generator(const TwoModeFock& f)
{
    SparseOperator k = f.a_dag * f.at_dag - f.a * f.at;
    k.prune(0.0);
    return k;
}

namespace detail {

// K conserves d = n - ñ; basis of sector d ordered by the smaller occupation.
inline std::vector<Eigen::Index> sector_states(const TwoModeFock& f, int d)
{
    std::vector<Eigen::Index> out;
    for (int j = 0; j <= f.n_max; ++j) {
        const int n = d >= 0 ? d + j : j;
        const int nt = d >= 0 ? j : j - d;
        if (n > f.n_max || nt > f.n_max) {
            break;
        }
        out.push_back(f.index(n, nt));
    }
    return out;
}

inline Eigen::MatrixXd sector_generator(const TwoModeFock& f, int d)
{
    const auto states = sector_states(f, d);
    const Eigen::Index m = static_cast<Eigen::Index>(states.size());
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index j = 0; j + 1 < m; ++j) {
        // state j holds (j + |d|, j) quanta in some order
        const int lo = int(j);
        const int hi = int(j) + std::abs(d);
        // <j+1| a† ã† |j> = sqrt((n+1)(ñ+1))
        const double amp = std::sqrt(double(lo + 1) * double(hi + 1));
        k(j + 1, j) = amp;
        k(j, j + 1) = -amp;
    }
    return k;
}

} // namespace detail

/// T(theta) on the truncated space, exponentiated sector by sector (the
/// generator is block diagonal in n - ñ).
inline SparseOperator squeeze_operator(const TwoModeFock& f, double theta)
{
    std::vector<Eigen::Triplet<double>> trips;
    for (int d = -f.n_max; d <= f.n_max; ++d) {
        const auto states = detail::sector_states(f, d);
        const Eigen::MatrixXd block = expm(theta * detail::sector_generator(f, d));
        for (std::size_t i = 0; i < states.size(); ++i) {
            for (std::size_t j = 0; j < states.size(); ++j) {
                const double v = block(Eigen::Index(i), Eigen::Index(j));
                if (v != 0.0) {
                    trips.emplace_back(states[i], states[j], v);
                }
            }
        }
    }
    SparseOperator t(f.dim(), f.dim());
    t.setFromTriplets(trips.begin(), trips.end());
    return t;
}

/// Frobenius norm of an operator restricted to rows and columns in `block`.
inline double block_frobenius(const SparseOperator& op, const std::vector<Eigen::Index>& block,
                              Eigen::Index dim)
{
    std::vector<char> in(static_cast<std::size_t>(dim), 0);
    for (auto i : block) {
        in[static_cast<std::size_t>(i)] = 1;
    }
    double sum = 0.0;
    for (int col = 0; col < op.outerSize(); ++col) {
        if (!in[static_cast<std::size_t>(col)]) {
            continue;
        }
        for (SparseOperator::InnerIterator it(op, col); it; ++it) {
            if (in[static_cast<std::size_t>(it.row())]) {
                sum += it.value() * it.value();
            }
        }
    }
    return std::sqrt(sum);
}

/// Largest squeezing the thermofield routines accept: artanh(1 - 1e-6).
inline double max_theta()
{
    return std::atanh(1.0 - 1e-6);
}

/// Norm-loss bound for the truncated squeezed vacuum: tanh(|theta|)^n_max.
inline constexpr double truncation_tolerance = 1e-12;

inline void check_truncation(const TwoModeFock& f, double theta)
{
    if (!(std::abs(theta) <= max_theta())) {
        throw DomainError("thermofield: |theta| must not exceed artanh(1 - 1e-6)");
    }
    const double r = std::tanh(std::abs(theta));
    if (r == 0.0) {
        return;
    }
    const double tail = std::pow(r, f.n_max);
    if (!(tail < truncation_tolerance)) {
        const int required =
            static_cast<int>(std::floor(std::log(truncation_tolerance) / std::log(r))) + 1;
        throw TruncationError("thermofield: tanh(theta)^n_max = " + std::to_string(tail)
                                  + " exceeds 1e-12; need n_max >= " + std::to_string(required),
                              required);
    }
}

/// theta = artanh(e^{-alpha}), the positive root of sinh^2(theta) = 1/(e^{2 alpha} - 1).
inline double theta_from_alpha(double alpha)
{
    if (!(alpha > 0.0)) {
        throw DomainError("theta_from_alpha: alpha must be positive");
    }
    return std::atanh(std::exp(-alpha));
}

struct ThermofieldState
{
    double theta = 0.0;
    /// pi c omega0 / a; infinite at theta = 0.
    double alpha = std::numeric_limits<double>::infinity();
    Eigen::VectorXd state_vector;
};

/// |0>_T = T(theta) |0, 0̃>.
inline ThermofieldState thermofield_vacuum(const TwoModeFock& f, double theta)
{
    check_truncation(f, theta);
    ThermofieldState out;
    out.theta = theta;
    out.alpha = theta == 0.0 ? std::numeric_limits<double>::infinity()
                             : -std::log(std::tanh(std::abs(theta)));
    out.state_vector = Eigen::VectorXd::Zero(f.dim());
    const auto states = detail::sector_states(f, 0);
    const Eigen::MatrixXd block = expm(theta * detail::sector_generator(f, 0));
    for (std::size_t i = 0; i < states.size(); ++i) {
        out.state_vector(states[i]) = block(Eigen::Index(i), 0);
    }
    return out;
}

/// (1/cosh theta) tanh^n theta on |n, ñ>.
inline double squeezed_vacuum_amplitude(double theta, int n)
{
    return std::pow(std::tanh(theta), n) / std::cosh(theta);
}

struct BogoliubovPair
{
    /// Closed forms a cosh(theta) - ã† sinh(theta) and a† cosh(theta) - ã sinh(theta).
    SparseOperator a_T;
    SparseOperator a_dag_T;
    /// Safe-block Frobenius distance between T a T† (matrix exponentials)
    /// and the closed form, and likewise for a†.
    double residual_a = 0.0;
    double residual_a_dag = 0.0;
};

inline SparseOperator bogoliubov_closed_form(const TwoModeFock& f, double theta)
{
    SparseOperator out = std::cosh(theta) * f.a - std::sinh(theta) * f.at_dag;
    return out;
}

/// T(theta) B T†(theta) for B = a and B = a†, checked against the closed form.
inline BogoliubovPair bogoliubov_conjugate(const TwoModeFock& f, double theta)
{
    check_truncation(f, theta);
    const SparseOperator t = squeeze_operator(f, theta);
    const SparseOperator t_dag = t.transpose();
    const SparseOperator conj_a = t * f.a * t_dag;
    const SparseOperator conj_a_dag = t * f.a_dag * t_dag;

    BogoliubovPair out;
    out.a_T = bogoliubov_closed_form(f, theta);
    out.a_dag_T = std::cosh(theta) * f.a_dag - std::sinh(theta) * f.at;
    const auto safe = f.safe_block();
    out.residual_a = block_frobenius(SparseOperator(conj_a - out.a_T), safe, f.dim());
    out.residual_a_dag = block_frobenius(SparseOperator(conj_a_dag - out.a_dag_T), safe, f.dim());
    return out;
}

struct BchResult
{
    SparseOperator value;
    /// Safe-block Frobenius norm of the last term kept.
    double truncation_residual = 0.0;
    /// Safe-block Frobenius distance to the closed form.
    double closed_form_distance = 0.0;
};

/// e^{A} B e^{-A} = B + [A, B] + [A, [A, B]]/2! + ... with A = theta K and
/// B = a, summed through the term of order `order`.
inline BchResult bch_conjugate(const TwoModeFock& f, double theta, int order)
{
    if (order < 1) {
        throw DomainError("bch_conjugate: order must be at least 1");
    }
    const SparseOperator gen = theta * squeeze_generator(f);
    SparseOperator term = f.a;
    SparseOperator sum = f.a;
    const auto safe = f.safe_block();
    BchResult out;
    for (int k = 1; k <= order; ++k) {
        SparseOperator next = (gen * term - term * gen) / double(k);
        next.prune(0.0);
        term = next;
        sum += term;
    }
    out.truncation_residual = block_frobenius(term, safe, f.dim());
    out.closed_form_distance =
        block_frobenius(SparseOperator(sum - bogoliubov_closed_form(f, theta)), safe, f.dim());
    out.value = sum;
    return out;
}

struct ThermalExpectations
{
    double alpha = 0.0;
    double theta = 0.0;
    /// <0 0̃| a_T† a_T |0 0̃>.
    double number = 0.0;
    /// <0 0̃| a_T† a_T + a_T a_T† |0 0̃> = sinh^2 + cosh^2; this is the
    /// thermal weight that replaces [a, a†] = 1 in the spectral integrals.
    double commutator = 0.0;
    /// <0 0̃| a_T a_T† - a_T† a_T |0 0̃>; the Bogoliubov map is canonical so
    /// this stays 1.
    double operator_commutator = 0.0;
    double closed_number = 0.0;
    double closed_commutator = 0.0;
};

/// Matrix evaluation of the thermofield number and thermal commutator weight
/// at theta = artanh(e^{-alpha}), with the operators a_T = T a T† built from
/// matrix exponentials.
inline ThermalExpectations thermal_expectations(const TwoModeFock& f, double alpha)
{
    if (!(alpha > 0.0)) {
        throw DomainError("thermal_expectations: alpha must be positive");
    }
    if (!(std::exp(-alpha * f.n_max) < truncation_tolerance)) {
        const int required = static_cast<int>(std::floor(-std::log(truncation_tolerance) / alpha)) + 1;
        throw TruncationError("thermal_expectations: exp(-alpha n_max) exceeds 1e-12; need n_max >= "
                                  + std::to_string(required),
                              required);
    }
    ThermalExpectations out;
    out.alpha = alpha;
    out.theta = theta_from_alpha(alpha);

    const SparseOperator t = squeeze_operator(f, out.theta);
    const SparseOperator t_dag = t.transpose();
    const Eigen::VectorXd vac = f.vacuum();
    const Eigen::VectorXd pulled = t_dag * vac;
    const Eigen::VectorXd lowered = t * (f.a * pulled);      // a_T |0 0̃>
    const Eigen::VectorXd raised = t * (f.a_dag * pulled);   // a_T† |0 0̃>
    const double n_lo = lowered.squaredNorm();               // <a_T† a_T>
    const double n_hi = raised.squaredNorm();                // <a_T a_T†>
    out.number = n_lo;
    out.commutator = n_hi + n_lo;
    out.operator_commutator = n_hi - n_lo;
    out.closed_number = 1.0 / std::expm1(2.0 * alpha);
    out.closed_commutator = 1.0 / std::tanh(alpha);
    return out;
}

} // namespace accelosc
