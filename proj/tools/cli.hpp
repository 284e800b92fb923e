#pragma once

#include "accelosc/commutator.hpp"
#include "accelosc/core_model.hpp"
#include "accelosc/errors.hpp"
#include "accelosc/response.hpp"
#include "accelosc/spectrum.hpp"
#include "accelosc/thermofield.hpp"
#include "accelosc/worldline.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace accelosc::cli {

/// Bad command line; exit code 2.
class UsageError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// A result that exists but missed its tolerance; exit code 3.
struct NonConvergence
{
    bool failed = false;
    std::string message;

    void note(const std::string& what)
    {
        if (!failed) {
            failed = true;
            message = what;
        }
    }
};

inline std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

using Value = std::variant<double, long long, std::string, bool>;

struct Field
{
    std::string name;
    Value value;
    bool json_only = false;
};

using Row = std::vector<Field>;

inline std::string csv_cell(const Value& v)
{
    return std::visit(
        [](const auto& x) -> std::string {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, double>) {
                return format_double(x);
            } else if constexpr (std::is_same_v<X, long long>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<X, bool>) {
                return x ? "true" : "false";
            } else {
                return x;
            }
        },
        v);
}

inline nlohmann::ordered_json to_json(const Row& row)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& f : row) {
        std::visit([&](const auto& x) { j[f.name] = x; }, f.value);
    }
    return j;
}

inline void write_csv(std::ostream& out, const std::vector<Row>& rows)
{
    if (rows.empty()) {
        return;
    }
    bool first = true;
    for (const auto& f : rows.front()) {
        if (f.json_only) {
            continue;
        }
        out << (first ? "" : ",") << f.name;
        first = false;
    }
    out << '\n';
    for (const auto& row : rows) {
        first = true;
        for (const auto& f : row) {
            if (f.json_only) {
                continue;
            }
            out << (first ? "" : ",") << csv_cell(f.value);
            first = false;
        }
        out << '\n';
    }
}

inline void write_rows(std::ostream& out, const std::vector<Row>& rows, const std::string& format)
{
    if (format == "csv") {
        write_csv(out, rows);
        return;
    }
    if (rows.size() == 1) {
        out << to_json(rows.front()).dump(2) << '\n';
        return;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        arr.push_back(to_json(r));
    }
    out << arr.dump(2) << '\n';
}

inline std::vector<double> split_numbers(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError(what + ": '" + item + "' is not a number");
        }
        if (used != item.size()) {
            throw UsageError(what + ": '" + item + "' is not a number");
        }
        out.push_back(v);
    }
    return out;
}

inline WindowSpec parse_window(const std::string& text)
{
    WindowSpec w;
    if (text == "paper") {
        w = PaperHalfResonance{};
    } else if (text.rfind("sym:", 0) == 0) {
        w = SymmetricResonance{split_numbers(text.substr(4), "--window sym:W").at(0)};
    } else if (text.rfind("full:", 0) == 0) {
        w = FullAxis{split_numbers(text.substr(5), "--window full:L").at(0)};
    } else {
        throw UsageError("--window must be paper, sym:W or full:L");
    }
    try {
        validate(w);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return w;
}

struct SweepConfig
{
    std::string variable;
    double start = 0.0;
    double stop = 0.0;
    int points = 0;
    std::string scale = "linear";

    void validate() const
    {
        if (points < 2) {
            throw UsageError("sweep: --points must be at least 2");
        }
        if (!(start < stop)) {
            throw UsageError("sweep: need --start < --stop");
        }
        if (scale != "linear" && scale != "log") {
            throw UsageError("sweep: --scale must be linear or log");
        }
        if (scale == "log" && !(start > 0.0)) {
            throw UsageError("sweep: log scale needs --start > 0");
        }
    }

    std::vector<double> grid() const
    {
        validate();
        std::vector<double> out(static_cast<std::size_t>(points));
        const double last = static_cast<double>(points - 1);
        for (int i = 0; i < points; ++i) {
            const double t = static_cast<double>(i) / last;
            if (scale == "log") {
                out[i] = std::exp(std::log(start) + t * (std::log(stop) - std::log(start)));
            } else {
                out[i] = start + t * (stop - start);
            }
        }
        out.front() = start;
        out.back() = stop;
        return out;
    }
};

struct Args
{
    double s = 0.0;
    double g = 0.0;
    std::string window;
    double tol = 1e-10;

    double omega0 = 1e15;
    std::string sweep_range;

    double accel = 0.0;

    std::string drive;
    double duration = 0.0;
    double dt = 0.0;
    bool no_fit = false;

    double tau_range = 10.0;
    int samples = 100;

    double alpha = 0.0;
    int nmax = 40;

    std::string format = "json";
    std::string out;

    SweepConfig sweep;
};

// ---------------------------------------------------------------- evaluators

inline QuadratureSpec quadrature_spec(const Args& a)
{
    if (!(a.tol > 0.0) || !(a.tol < 1.0)) {
        throw UsageError("--tol must be in (0, 1)");
    }
    QuadratureSpec q;
    q.rel_tol = a.tol;
    return q;
}

inline Row commutator_row(const Args& a, NonConvergence& nc)
{
    const WindowSpec w = parse_window(a.window);
    const CommutatorResult r = commutator_numeric({a.s, a.g}, w, quadrature_spec(a));
    const QuadratureResult& q = *r.quadrature;
    if (!r.converged()) {
        nc.note("commutator did not converge at s = " + format_double(a.s)
                + ": error estimate " + format_double(q.error_estimate));
    }
    return {{"s", a.s},
            {"g", a.g},
            {"window", to_string(w)},
            {"value", r.value},
            {"error_estimate", q.error_estimate},
            {"evaluations", static_cast<long long>(q.evaluations)},
            {"converged", r.converged()},
            {"closed_form", commutator_closed_form(a.s)}};
}

inline Row uncertainty_row(const Args& a, NonConvergence& nc)
{
    const WindowSpec w = parse_window(a.window);
    const UncertaintyResult r = uncertainty_product({a.s, a.g}, w, quadrature_spec(a));
    if (!r.converged()) {
        nc.note("uncertainty did not converge at s = " + format_double(a.s) + ": error estimates "
                + format_double(r.dx2.quadrature->error_estimate) + ", "
                + format_double(r.dp2.quadrature->error_estimate));
    }
    return {{"s", a.s},
            {"g", a.g},
            {"window", to_string(w)},
            {"dx2", r.dx2.value},
            {"dp2", r.dp2.value},
            {"product", r.product},
            {"closed_form", coth_factor(a.s)}};
}

inline Row unruh_row(const Args& a)
{
    const PhysicalConstants k;
    return {{"accel", a.accel}, {"temperature", unruh_temperature(a.accel, k)}};
}

inline DriveSpec parse_drive(const std::string& text)
{
    const auto v = split_numbers(text, "--drive");
    if (v.size() != 3) {
        throw UsageError("--drive takes E0,W,PHI");
    }
    return {v[0], v[1], v[2]};
}

inline Row trajectory_summary(const Args& a, const DriveSpec& drive, const OscillatorParams& p,
                              const TrajectoryRecord& rec)
{
    const PhysicalConstants k;
    const SteadyStateFit fit = fit_steady_state(rec, drive.omega_drive, p);
    const double analytic = std::abs(steady_amplitude(drive, p, k));
    const double reduced = std::abs(reduced_order_amplitude(drive, p, k));
    const double fitted = std::abs(fit.amplitude);
    return {{"omega0", a.omega0},
            {"s", a.s},
            {"g", a.g},
            {"omega_drive", drive.omega_drive},
            {"fitted_amplitude", fitted},
            {"analytic_amplitude", analytic},
            {"reduced_amplitude", reduced},
            {"relative_error", std::abs(fitted - analytic) / analytic},
            {"rms_residual", fit.rms_residual}};
}

inline TrajectoryRecord run_trajectory(const Args& a, const DriveSpec& drive,
                                       const OscillatorParams& p)
{
    if (!(a.duration > 0.0) || !(a.dt > 0.0)) {
        throw UsageError("trajectory: --duration and --dt must be positive");
    }
    return integrate_time_domain(drive, p, a.duration, a.dt);
}

inline Row trajectory_row(const Args& a)
{
    const DriveSpec drive = parse_drive(a.drive);
    const OscillatorParams p = from_dimensionless(a.omega0, a.s, a.g, PhysicalConstants{});
    return trajectory_summary(a, drive, p, run_trajectory(a, drive, p));
}

inline Row thermofield_row(const Args& a)
{
    const ThermalExpectations r = thermal_expectations(build_fock(a.nmax), a.alpha);
    return {{"alpha", a.alpha},
            {"theta", r.theta},
            {"n_max", static_cast<long long>(a.nmax), true},
            {"number", r.number},
            {"commutator", r.commutator},
            {"operator_commutator", r.operator_commutator, true},
            {"closed_number", r.closed_number},
            {"closed_commutator", r.closed_commutator}};
}

// ---------------------------------------------------------------- commands

inline std::ostream& open_out(const Args& a, std::ofstream& file, std::ostream& fallback)
{
    if (a.out.empty()) {
        return fallback;
    }
    file.open(a.out, std::ios::binary);
    if (!file) {
        throw UsageError("cannot open --out " + a.out);
    }
    return file;
}

inline void check_format(const Args& a, bool allow_csv, bool allow_json)
{
    if ((a.format == "csv" && allow_csv) || (a.format == "json" && allow_json)) {
        return;
    }
    throw UsageError("--format " + a.format + " is not available for this command");
}

inline int cmd_spectrum(const Args& a, std::ostream& out)
{
    const auto v = split_numbers(a.sweep_range, "--sweep");
    if (v.size() < 3 || v.size() > 4) {
        throw UsageError("--sweep takes START,STOP,POINTS[,log]");
    }
    if (!(a.s >= 0.0) || !(a.omega0 > 0.0)) {
        throw UsageError("spectrum: need --s >= 0 and --omega0 > 0");
    }
    SweepConfig sw{"u", v[0], v[1], static_cast<int>(v[2]), "linear"};
    if (static_cast<double>(sw.points) != v[2]) {
        throw UsageError("--sweep POINTS must be an integer");
    }
    if (v.size() == 4) {
        if (v[3] != 0.0 && v[3] != 1.0) {
            throw UsageError("--sweep fourth field is 1 for log spacing");
        }
        sw.scale = v[3] == 1.0 ? "log" : "linear";
    }
    if (!(sw.start > 0.0)) {
        throw UsageError("--sweep START must be positive");
    }
    const PhysicalConstants k;
    const double accel = a.s * a.omega0 * k.c;
    std::vector<Row> rows;
    for (double u : sw.grid()) {
        const SpectralPoint p = spectral_density(u * a.omega0, accel, k);
        rows.push_back({{"omega", p.omega},
                        {"density", p.density},
                        {"vacuum_part", p.vacuum_part},
                        {"thermal_part", p.thermal_part}});
    }
    std::ofstream file;
    write_rows(open_out(a, file, out), rows, a.format);
    return 0;
}

inline int cmd_trajectory(const Args& a, std::ostream& out, std::ostream& err)
{
    const DriveSpec drive = parse_drive(a.drive);
    const OscillatorParams p = from_dimensionless(a.omega0, a.s, a.g, PhysicalConstants{});
    const TrajectoryRecord rec = run_trajectory(a, drive, p);
    std::vector<Row> samples;
    samples.reserve(rec.size());
    for (std::size_t i = 0; i < rec.size(); ++i) {
        samples.push_back({{"t", rec.times[i]}, {"x", rec.positions[i]}, {"v", rec.velocities[i]}});
    }
    std::ofstream file;
    std::ostream& data = open_out(a, file, out);
    write_csv(data, samples);
    if (!a.no_fit) {
        std::ostream& summary = a.out.empty() ? err : out;
        write_rows(summary, {trajectory_summary(a, drive, p, rec)}, "json");
    }
    return 0;
}

inline int cmd_worldline(const Args& a, std::ostream& out, std::ostream& err)
{
    if (!(a.accel > 0.0)) {
        throw UsageError("worldline: --accel must be positive");
    }
    if (!(a.tau_range > 0.0) || a.samples < 2) {
        throw UsageError("worldline: need --tau-range > 0 and --samples >= 2");
    }
    // quad precision: cosh^2 - sinh^2 loses e^{2R} ulps in double
    using quad = boost::multiprecision::cpp_bin_float_quad;
    const PhysicalConstants k;
    const quad c(k.c);
    const quad accel(a.accel);
    const auto w = hyperbolic_worldline<quad>(accel, c);
    const quad gamma(damping_time(k));
    const quad span = quad(a.tau_range) * c / accel;
    std::vector<Row> samples;
    double worst = 0.0;
    double worst_abs = 0.0;
    for (int i = 0; i < a.samples; ++i) {
        const quad tau = -span + quad(2) * span * quad(i) / quad(a.samples - 1);
        const auto kin = w.at(tau);
        const auto lad = lad_self_force(w, tau, gamma);
        worst_abs = std::max(worst_abs, static_cast<double>(max_abs(lad.total_self)));
        worst = std::max(worst, static_cast<double>(max_abs(lad.total_self) / max_abs(lad.schott)));
        Row row{{"tau", static_cast<double>(tau)}};
        const char* names[] = {"ct", "x", "y", "z", "u0", "u1", "u2", "u3"};
        for (int mu = 0; mu < 4; ++mu) {
            row.push_back({names[mu], static_cast<double>(kin.position[mu])});
        }
        for (int mu = 0; mu < 4; ++mu) {
            row.push_back({names[4 + mu], static_cast<double>(kin.velocity[mu])});
        }
        samples.push_back(std::move(row));
    }
    std::ofstream file;
    write_csv(open_out(a, file, out), samples);
    std::ostream& summary = a.out.empty() ? err : out;
    write_rows(summary,
               {{{"accel", a.accel},
                 {"tau_range", a.tau_range},
                 {"samples", static_cast<long long>(a.samples)},
                 {"max_relative_residual", worst},
                 {"max_abs_residual", worst_abs}}},
               "json");
    return 0;
}

inline std::vector<Row> sweep_rows(const std::string& sub, const Args& base, NonConvergence& nc)
{
    const SweepConfig& sw = base.sweep;
    std::vector<double> values = sw.grid();
    if (sw.variable == "n_max") {
        for (double& v : values) {
            v = std::round(v);
        }
        for (std::size_t i = 1; i < values.size(); ++i) {
            if (!(values[i] > values[i - 1])) {
                throw UsageError("sweep: n_max grid repeats after rounding; use fewer points");
            }
        }
    }
    std::vector<Row> rows;
    for (double v : values) {
        Args a = base;
        if (sw.variable == "s") {
            a.s = v;
        } else if (sw.variable == "alpha") {
            a.alpha = v;
        } else if (sw.variable == "n_max") {
            a.nmax = static_cast<int>(v);
        }
        Row row;
        if (sub == "commutator") {
            row = commutator_row(a, nc);
        } else if (sub == "uncertainty") {
            row = uncertainty_row(a, nc);
        } else if (sub == "thermofield") {
            row = thermofield_row(a);
        } else {
            if (sw.variable == "omega_drive") {
                DriveSpec d = parse_drive(a.drive);
                a.drive = format_double(d.amplitude) + "," + format_double(v) + ","
                          + format_double(d.phase);
            }
            row = trajectory_row(a);
        }
        Row out{{sw.variable, sw.variable == "n_max" ? Value{static_cast<long long>(v)} : Value{v}}};
        for (auto& f : row) {
            if (f.name != sw.variable) {
                out.push_back(std::move(f));
            }
        }
        rows.push_back(std::move(out));
    }
    return rows;
}

// ---------------------------------------------------------------- parser

enum class Need
{
    S,
    G,
    Window,
    Alpha,
    Drive,
    Duration,
    Dt,
};

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Args a;
    CLI::App app{"Accelerated charged oscillator toolkit", "accelosc"};
    app.require_subcommand(1);

    struct Required
    {
        const CLI::App* parent;
        CLI::Option* opt;
        std::string var;
    };
    std::vector<Required> required;
    auto need = [&](const CLI::App* parent, CLI::Option* opt, const std::string& var) {
        required.push_back({parent, opt, var});
    };

    auto add_commutator = [&](CLI::App* c) {
        need(c, c->add_option("--s", a.s, "a/(omega0 c)"), "s");
        need(c, c->add_option("--g", a.g, "gamma omega0"), "g");
        need(c, c->add_option("--window", a.window, "paper | sym:W | full:L"), "");
        c->add_option("--tol", a.tol, "relative quadrature tolerance");
        c->add_option("--format", a.format, "json | csv");
    };
    auto add_thermofield = [&](CLI::App* c) {
        need(c, c->add_option("--alpha", a.alpha, "pi c omega0 / a"), "alpha");
        c->add_option("--nmax", a.nmax, "Fock cutoff per mode");
        c->add_option("--format", a.format, "json | csv");
    };
    auto add_trajectory = [&](CLI::App* c) {
        need(c, c->add_option("--omega0", a.omega0, "rad/s"), "");
        need(c, c->add_option("--s", a.s, "a/(omega0 c)"), "s");
        need(c, c->add_option("--g", a.g, "gamma omega0"), "g");
        need(c, c->add_option("--drive", a.drive, "E0,W,PHI (statvolt/cm, rad/s, rad)"), "");
        need(c, c->add_option("--duration", a.duration, "s"), "");
        need(c, c->add_option("--dt", a.dt, "s"), "");
    };

    std::vector<CLI::App*> singles;
    auto* commutator = app.add_subcommand("commutator", "<[x,p]>/(i hbar) under a window");
    add_commutator(commutator);
    auto* uncertainty = app.add_subcommand("uncertainty", "sqrt(<x^2><p^2>) in units of hbar/2");
    add_commutator(uncertainty);

    auto* spectrum = app.add_subcommand("spectrum", "field spectrum over omega");
    need(spectrum, spectrum->add_option("--s", a.s, "a/(omega0 c)"), "");
    spectrum->add_option("--omega0", a.omega0, "rad/s");
    need(spectrum, spectrum->add_option("--sweep", a.sweep_range, "START,STOP,POINTS[,1 for log] in omega/omega0"), "");
    spectrum->add_option("--format", a.format, "csv | json");
    spectrum->add_option("--out", a.out, "output file");

    auto* unruh = app.add_subcommand("unruh", "Unruh-Davies temperature in K");
    need(unruh, unruh->add_option("--accel", a.accel, "cm/s^2"), "");
    unruh->add_option("--format", a.format, "json | csv");

    auto* trajectory = app.add_subcommand("trajectory", "time-domain response");
    add_trajectory(trajectory);
    trajectory->add_option("--out", a.out, "trajectory CSV file");
    trajectory->add_flag("--no-fit", a.no_fit, "skip the steady-state fit");

    auto* worldline = app.add_subcommand("worldline", "hyperbolic worldline and LAD self-force");
    need(worldline, worldline->add_option("--accel", a.accel, "cm/s^2"), "");
    worldline->add_option("--tau-range", a.tau_range, "sample |a tau / c| <= R");
    worldline->add_option("--samples", a.samples, "number of proper-time samples");
    worldline->add_option("--out", a.out, "samples CSV file");

    auto* thermofield = app.add_subcommand("thermofield", "thermofield-double expectations");
    add_thermofield(thermofield);

    auto* sweep = app.add_subcommand("sweep", "one CSV row per grid point");
    sweep->require_subcommand(1);
    auto add_sweep_options = [&](CLI::App* c) {
        c->add_option("--var", a.sweep.variable, "s | alpha | omega_drive | n_max")->required();
        c->add_option("--start", a.sweep.start)->required();
        c->add_option("--stop", a.sweep.stop)->required();
        c->add_option("--points", a.sweep.points)->required();
        c->add_option("--scale", a.sweep.scale, "linear | log");
        c->add_option("--out", a.out, "output file");
    };
    auto* sw_commutator = sweep->add_subcommand("commutator");
    auto* sw_uncertainty = sweep->add_subcommand("uncertainty");
    auto* sw_thermofield = sweep->add_subcommand("thermofield");
    auto* sw_trajectory = sweep->add_subcommand("trajectory");
    const std::size_t top_level_required = required.size();
    add_commutator(sw_commutator);
    add_commutator(sw_uncertainty);
    add_thermofield(sw_thermofield);
    add_trajectory(sw_trajectory);
    for (auto* c : {sw_commutator, sw_uncertainty, sw_thermofield, sw_trajectory}) {
        add_sweep_options(c);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    const bool sweeping = chosen == sweep;
    if (sweeping) {
        chosen = sweep->get_subcommands().front();
    }
    for (std::size_t i = sweeping ? top_level_required : 0;
         i < (sweeping ? required.size() : top_level_required); ++i) {
        const auto& [parent, opt, var] = required[i];
        if (parent != chosen || opt->count() > 0) {
            continue;
        }
        if (sweeping && var == a.sweep.variable) {
            continue;
        }
        err << "error: " << opt->get_name() << " is required\n";
        return 2;
    }

    NonConvergence nc;
    try {
        if (sweeping) {
            const std::string sub = chosen->get_name();
            const std::string& var = a.sweep.variable;
            const bool ok = ((sub == "commutator" || sub == "uncertainty") && var == "s")
                            || (sub == "thermofield" && (var == "alpha" || var == "n_max"))
                            || (sub == "trajectory" && (var == "s" || var == "omega_drive"));
            if (!ok) {
                throw UsageError("sweep " + sub + " cannot vary " + var);
            }
            for (const auto& [parent, opt, v] : required) {
                if (parent == chosen && v == var && opt->count() > 0) {
                    throw UsageError("--" + var + " is set by the sweep");
                }
            }
            if (var == "omega_drive" && chosen->get_option("--drive")->count() == 0) {
                a.drive = "0,1,0";
            }
            a.sweep.validate();
            const auto rows = sweep_rows(sub, a, nc);
            std::ofstream file;
            write_csv(open_out(a, file, out), rows);
        } else if (chosen == commutator || chosen == uncertainty) {
            check_format(a, true, true);
            const Row row = chosen == commutator ? commutator_row(a, nc) : uncertainty_row(a, nc);
            write_rows(out, {row}, a.format);
        } else if (chosen == spectrum) {
            if (spectrum->get_option("--format")->count() == 0) {
                a.format = "csv";
            }
            check_format(a, true, true);
            return cmd_spectrum(a, out);
        } else if (chosen == unruh) {
            check_format(a, true, true);
            write_rows(out, {unruh_row(a)}, a.format);
        } else if (chosen == trajectory) {
            return cmd_trajectory(a, out, err);
        } else if (chosen == worldline) {
            return cmd_worldline(a, out, err);
        } else if (chosen == thermofield) {
            check_format(a, true, true);
            write_rows(out, {thermofield_row(a)}, a.format);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const EvaluationError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        // domain, resolution, precondition and truncation errors
        err << "error: " << e.what() << '\n';
        return 2;
    }
    if (nc.failed) {
        err << "error: " << nc.message << '\n';
        return 3;
    }
    return 0;
}

} // namespace accelosc::cli
