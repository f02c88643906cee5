// commands.hpp — The qbath command-line front end
//
//   correlators  A(t), C(t), <Q0^2>, <P0^2> and the two-time correlators
//   variance     <Q0^2>, <P0^2>, the zero-temperature closed form, sum rule
//   profile      P(x, t) with sum / interference decomposition
//   figures      the two-slit figures 1-4 (no dissipation, sigma/d = 0.05)
//   bath-check   discrete-bath oracle against the spectral integrals
//   fock-check   truncated Fock-space oracles
//
// Exit codes: 0 success, 1 configuration or domain error, 2 numerical or
// tolerance failure.

#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qbath/aperture.hpp"
#include "qbath/bath.hpp"
#include "qbath/cli/config.hpp"
#include "qbath/cli/parallel.hpp"
#include "qbath/correlators.hpp"
#include "qbath/errors.hpp"
#include "qbath/evolution.hpp"
#include "qbath/fockcheck.hpp"
#include "qbath/io/csv.hpp"
#include "qbath/io/svg.hpp"
#include "qbath/model.hpp"

namespace qbath::cli {

using io::format_number;

inline constexpr double default_omega_c = 1e5;

inline const char* usage() {
    return "usage: qbath <command> [--config FILE] [--key value]...\n"
           "commands: correlators, variance, profile, figures, bath-check, fock-check\n"
           "see README.md for the keys accepted by each command\n";
}

namespace detail {

inline std::string beta_text(InverseTemperature b) { return b.is_infinite() ? "inf" : format_number(b.value()); }

inline ModelParams model(const RunConfig& c, double omega0, double eta, InverseTemperature beta, double omega_c) {
    ModelParams p;
    p.omega0 = c.omega0.value_or(omega0);
    p.eta = c.eta.value_or(eta);
    p.beta = c.beta.value_or(beta);
    p.omega_c = c.omega_c.value_or(omega_c);
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return p;
}

inline std::string describe(const ModelParams& p) {
    return "omega0=" + format_number(p.omega0) + " eta=" + format_number(p.eta) + " beta=" + beta_text(p.beta) +
           " omega_c=" + format_number(p.omega_c);
}

// Output stream for `path` ("-" = the given default stream).
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (path != "-" && !path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw ConfigError("cannot write '" + path + "'");
            os_ = file_.get();
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

// Rendered text is assembled in memory and written once.
inline void emit(const std::string& path, std::ostream& out, const std::string& text) {
    Sink s(path, out);
    s.stream() << text;
    s.stream().flush();
}

} // namespace detail

// ---------------------------------------------------------------- correlators

inline int cmd_correlators(const RunConfig& c, std::ostream& out) {
    const ModelParams p = detail::model(c, 1.0, 0.1, InverseTemperature::infinite(), default_omega_c);
    if (c.time_unit && *c.time_unit != "abs") throw ConfigError("correlators takes times in absolute units");
    const std::vector<double> times = c.times.value_or(std::vector<double>{0.0, 0.5, 1.0, 2.0, 5.0});
    for (double t : times)
        if (!(t >= 0.0)) throw ConfigError("times must be >= 0");
    const auto rows = parallel_map(times.size(), [&](std::size_t i) { return correlators::assemble(p, times[i]); });

    std::ostringstream ss;
    io::CsvWriter w(ss);
    w.comment("command=correlators " + detail::describe(p));
    w.header({"t", "A", "C", "varQ", "varP", "qq_re", "qq_im", "pq_re", "pq_im"});
    for (const auto& cs : rows) {
        w.cell(cs.t).cell(cs.A).cell(cs.C).cell(cs.varQ).cell(cs.varP).cell(cs.qq_t()).cell(cs.pq_t);
        w.end_row();
    }
    detail::emit(c.output, out, ss.str());
    return 0;
}

// ---------------------------------------------------------------- variance

inline int cmd_variance(const RunConfig& c, std::ostream& out) {
    const ModelParams p = detail::model(c, 1.0, 0.1, InverseTemperature::infinite(), default_omega_c);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double vq = p.free_particle() ? std::numeric_limits<double>::infinity() : correlators::variance_Q0(p);
    const double closed = (p.beta.is_infinite() && p.underdamped()) ? correlators::variance_Q0_closed_T0(p) : nan;
    std::ostringstream ss;
    io::CsvWriter w(ss);
    w.comment("command=variance " + detail::describe(p));
    w.header({"varQ", "varP", "varQ_closed_T0", "sum_rule"});
    w.cell(vq).cell(correlators::variance_P0(p)).cell(closed).cell(correlators::sum_rule(p));
    w.end_row();
    detail::emit(c.output, out, ss.str());
    return 0;
}

// ---------------------------------------------------------------- profiles

struct ProfileRun {
    ModelParams params;
    evolution::Dynamics mode{evolution::Dynamics::no_dissipation};
    double d{1.0}, sigma{0.05};
    evolution::Timescales scales{};
    bool has_tau{false};
    std::string unit{"t_mix"};
    std::vector<double> times_in_unit, times;
    std::string title;
};

inline evolution::Dynamics parse_mode(const std::string& m) {
    if (m == "oscillator") return evolution::Dynamics::oscillator;
    if (m == "free") return evolution::Dynamics::free;
    return evolution::Dynamics::no_dissipation;
}

inline ProfileRun plan_profile(const RunConfig& c) {
    ProfileRun r;
    if (!(c.d > 0.0)) throw ConfigError("d must be positive");
    if (!(c.sigma_over_d > 0.0)) throw ConfigError("sigma_over_d must be positive");
    r.d = c.d;
    r.sigma = c.sigma_over_d * c.d;

    InverseTemperature beta = InverseTemperature::finite(evolution::beta_from_thermal_length(c.d));
    if (c.l_th_over_d && c.beta) throw ConfigError("give either beta or l_th_over_d, not both");
    if (c.l_th_over_d) {
        if (!(*c.l_th_over_d > 0.0) || std::isinf(*c.l_th_over_d)) throw ConfigError("l_th_over_d must be positive");
        beta = InverseTemperature::finite(evolution::beta_from_thermal_length(*c.l_th_over_d * c.d));
    }
    r.params = detail::model(c, 0.0, 0.0, beta, default_omega_c);
    if (c.mode)
        r.mode = parse_mode(*c.mode);
    else
        r.mode = r.params.omega0 > 0.0 ? evolution::Dynamics::oscillator
                 : r.params.eta > 0.0  ? evolution::Dynamics::free
                                       : evolution::Dynamics::no_dissipation;
    try {
        evolution::check_dynamics(r.params, r.mode);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }

    r.has_tau = !r.params.beta.is_infinite();
    r.scales.t_mix = 2.0 * r.sigma * r.d;
    if (r.has_tau) r.scales = evolution::timescales(r.sigma, r.d, 1.0, r.params.beta.value(), 1.0);
    r.unit = c.time_unit.value_or(c.fig == 4 ? "tau_flo" : "t_mix");
    if (r.unit == "tau_flo" && !r.has_tau) throw ConfigError("tau_flo needs a finite temperature");
    const double scale = r.unit == "abs" ? 1.0 : r.unit == "t_mix" ? r.scales.t_mix : r.scales.tau_flo;
    r.times_in_unit = c.times.value_or(std::vector<double>{0.25, 0.5, 1.0, 2.0});
    for (double t : r.times_in_unit) {
        if (!(t >= 0.0) || std::isinf(t)) throw ConfigError("times must be finite and >= 0");
        r.times.push_back(t * scale);
    }
    return r;
}

inline std::vector<evolution::ProbabilityProfile> run_profiles(const RunConfig& c, const ProfileRun& r) {
    const Aperture ap = Aperture::two_slit(r.d, r.sigma);
    evolution::ProfileOptions opt;
    opt.small_time = 1e-6 * r.scales.t_mix;
    if (c.x_count == 1 || (c.x_count > 1 && !(c.x_max > c.x_min)))
        throw ConfigError("x grid needs x_count >= 2 and x_max > x_min");
    const auto init = evolution::pair_terms(ap, 0.0, r.params, r.mode, opt);
    auto profiles = parallel_map(r.times.size(), [&](std::size_t i) {
        const auto pt = evolution::pair_terms(ap, r.times[i], r.params, r.mode, opt);
        std::vector<double> xs;
        if (c.x_count > 1) {
            xs.resize(c.x_count);
            for (std::size_t k = 0; k < c.x_count; ++k)
                xs[k] = r.d * (c.x_min + (c.x_max - c.x_min) * static_cast<double>(k) / static_cast<double>(c.x_count - 1));
        } else {
            xs = evolution::auto_grid(pt);
            if (xs.size() < c.min_points) {
                const double lo = xs.front(), hi = xs.back();
                xs.resize(c.min_points);
                for (std::size_t k = 0; k < xs.size(); ++k)
                    xs[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(xs.size() - 1);
            }
        }
        return evolution::evaluate_profile(ap, pt, xs, r.params, r.mode, &init);
    });
    for (const auto& p : profiles) p.validate();
    return profiles;
}

inline std::string render_profiles(const std::string& command, const ProfileRun& r,
                                   const std::vector<evolution::ProbabilityProfile>& profiles) {
    std::ostringstream ss;
    io::CsvWriter w(ss);
    w.comment("command=" + command + " mode=" + evolution::to_string(r.mode) + " " + detail::describe(r.params));
    std::string scales = "d=" + format_number(r.d) + " sigma=" + format_number(r.sigma) +
                         " t_mix=" + format_number(r.scales.t_mix);
    if (r.has_tau)
        scales += " tau_flo=" + format_number(r.scales.tau_flo) + " l_th=" + format_number(r.scales.l_th);
    w.comment(scales);
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const auto& p = profiles[i];
        w.comment("t=" + format_number(p.t) + " t_over_" + r.unit + "=" + format_number(r.times_in_unit[i]) +
                  " attenuation=" + format_number(p.attenuation) + " midpoint_ratio=" +
                  format_number(p.midpoint_ratio) + " cross_ratio=" + format_number(p.cross_ratio) +
                  " norm=" + format_number(p.norm) + " points=" + std::to_string(p.xs.size()));
    }
    w.header({"t", "x", "p_total", "p_sum", "p_interference"});
    for (const auto& p : profiles)
        for (std::size_t k = 0; k < p.xs.size(); ++k) {
            w.cell(p.t).cell(p.xs[k]).cell(p.p_total[k]).cell(p.p_sum[k]).cell(p.p_interference[k]);
            w.end_row();
        }
    return ss.str();
}

inline void write_profile_svg(const std::string& path, const ProfileRun& r,
                              const std::vector<evolution::ProbabilityProfile>& profiles) {
    io::Plot plot;
    plot.title = r.title;
    plot.xlabel = "x / d";
    plot.ylabel = "P(x, t) d";
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const auto& p = profiles[i];
        io::Series total, sum;
        total.label = "t = " + format_number(r.times_in_unit[i]) + " " + r.unit;
        sum.label = "sum term";
        total.color = sum.color = static_cast<int>(i);
        sum.dashed = true;
        for (std::size_t k = 0; k < p.xs.size(); ++k) {
            total.x.push_back(p.xs[k] / r.d);
            total.y.push_back(p.p_total[k] * r.d);
            sum.x.push_back(p.xs[k] / r.d);
            sum.y.push_back(p.p_sum[k] * r.d);
        }
        plot.series.push_back(std::move(total));
        plot.series.push_back(std::move(sum));
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    io::write_svg(f, plot);
}

inline int cmd_profile(const RunConfig& c, std::ostream& out) {
    if (c.fig != 0) throw ConfigError("'fig' applies to the figures command");
    ProfileRun r = plan_profile(c);
    r.title = std::string("P(x, t), ") + evolution::to_string(r.mode);
    const auto profiles = run_profiles(c, r);
    detail::emit(c.output, out, render_profiles("profile", r, profiles));
    if (!c.svg.empty()) write_profile_svg(c.svg, r, profiles);
    return 0;
}

inline double figure_thermal_length(int fig) {
    switch (fig) {
        case 1: return 1.0;
        case 2: return 1.0 / std::sqrt(5.0);
        default: return 0.2;
    }
}

inline int cmd_figures(const RunConfig& c, std::ostream& out) {
    if (c.fig == 0) throw ConfigError("figures needs --fig 1..4");
    if (c.omega0 || c.eta || c.beta || c.l_th_over_d || c.mode)
        throw ConfigError("figures fix the model (no dissipation) and l_th/d; use profile for other settings");
    if (c.sigma_over_d != 0.05) throw ConfigError("figures use sigma_over_d = 0.05");
    RunConfig fc = c;
    fc.l_th_over_d = figure_thermal_length(c.fig);
    fc.omega0 = 0.0;
    fc.eta = 0.0;
    fc.mode = "no-dissipation";
    ProfileRun r = plan_profile(fc);
    r.title = "Fig. " + std::to_string(c.fig) + ": l_th/d = " + format_number(*fc.l_th_over_d) +
              ", sigma/d = 0.05, no dissipation";
    const auto profiles = run_profiles(fc, r);
    detail::emit(c.output, out, render_profiles("figures fig=" + std::to_string(c.fig), r, profiles));
    if (!c.svg.empty()) write_profile_svg(c.svg, r, profiles);
    return 0;
}

// ---------------------------------------------------------------- oracles

struct CheckRow {
    std::string name;
    double measured;
    double budget;
    bool ok() const { return measured <= budget; }
};

inline std::string render_checks(const std::string& header, const std::vector<CheckRow>& rows, bool& all_ok) {
    std::ostringstream ss;
    io::CsvWriter w(ss);
    w.comment(header);
    w.header({"check", "measured", "budget", "status"});
    all_ok = true;
    for (const auto& r : rows) {
        w.cell(r.name).cell(r.measured).cell(r.budget).cell(r.ok() ? "pass" : "FAIL");
        w.end_row();
        all_ok = all_ok && r.ok();
    }
    return ss.str();
}

inline int cmd_bath_check(const RunConfig& c, std::ostream& out) {
    const ModelParams p = detail::model(c, 1.0, 1.0, InverseTemperature::infinite(), 50.0);
    if (p.free_particle()) throw ConfigError("bath-check needs omega0 > 0");
    if (!p.underdamped()) throw ConfigError("bath-check needs an underdamped oscillator");
    if (c.n_modes < 2) throw ConfigError("n_modes must be >= 2");
    if (!(c.t_max > 0.0)) throw ConfigError("t_max must be positive");
    const auto bath = bath::discretize_ohmic(c.n_modes, p);
    const auto modes = bath::normal_modes(bath, p, false);
    const double delta = p.omega_c / static_cast<double>(c.n_modes);
    if (c.t_max >= 2.0 * std::numbers::pi / delta)
        throw ConfigError("t_max beyond the recurrence time 2 pi / Delta");

    std::vector<CheckRow> rows;
    const double norm = bath::mode_sum(modes, [](double) { return 1.0; });
    rows.push_back({"sum_X0_squared", std::abs(norm - 1.0), 1e-10});
    const auto ms_q = bath::mode_sum(modes, [&](double w) { return p.beta.coth_half(w) / (2.0 * w); });
    const double q_q = correlators::variance_Q0(p);
    rows.push_back({"varQ_mode_sum_vs_quadrature", std::abs(ms_q - q_q) / q_q, 1e-2});
    double worst = 0.0;
    for (int k = 0; k <= 500; ++k) {
        const double t = c.t_max * k / 500.0;
        worst = std::max(worst, std::abs(bath::classical_response(modes, p.omega0, t) - bath::damped_cosine(p, t)));
    }
    rows.push_back({"classical_response_vs_damped_cosine", worst, 1e-2});
    // the secular-equation modes against a dense eigensolver on a smaller bath
    const auto small = bath::discretize_ohmic(std::min<std::size_t>(c.n_modes, 400), p);
    const auto dense = bath::normal_modes(small, p, true), secular = bath::normal_modes(small, p, false);
    double mode_gap = 0.0;
    for (std::size_t nu = 0; nu < dense.freqs.size(); ++nu)
        mode_gap = std::max({mode_gap, std::abs(dense.freqs[nu] - secular.freqs[nu]) / p.omega_c,
                             std::abs(dense.x0[nu] - secular.x0[nu])});
    rows.push_back({"secular_vs_dense_modes", mode_gap, 1e-8});
    rows.push_back({"amplitude_identity_dense", bath::amplitude_identity_defect(small, dense), 1e-8});

    bool ok = true;
    const std::string text = render_checks(
        "command=bath-check " + detail::describe(p) + " n_modes=" + std::to_string(c.n_modes), rows, ok);
    detail::emit(c.output, out, text);
    return ok ? 0 : 2;
}

inline int cmd_fock_check(const RunConfig& c, std::ostream& out) {
    if (c.bath_omegas.size() != c.bath_couplings.size())
        throw ConfigError("bath_omegas and bath_couplings differ in length");
    if (c.dims.size() != c.bath_omegas.size() + 1) throw ConfigError("dims needs one entry per oscillator");
    fockcheck::SmallBathSystem sys;
    sys.omega0 = c.omega0.value_or(1.2);
    sys.beta = c.beta.value_or(InverseTemperature::finite(2.0));
    if (c.eta || c.omega_c || c.l_th_over_d) throw ConfigError("fock-check takes the bath as bath_omegas/bath_couplings");
    sys.bath.omegas = c.bath_omegas;
    sys.bath.couplings = c.bath_couplings;
    sys.bath.omega_c = c.bath_omegas.empty() ? 0.0 : c.bath_omegas.back();
    sys.dims = c.dims;
    try {
        sys.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    const std::vector<double> times = c.times.value_or(std::vector<double>{0.0, 0.5});

    std::vector<CheckRow> rows;
    {
        const fockcheck::TruncatedOscillator osc(1.0, 80);
        const auto beta2 = InverseTemperature::finite(2.0);
        rows.push_back({"debye_waller_c0", fockcheck::debye_waller_check(osc, beta2, 0.0).relative_gap(), 1e-12});
        const auto dw = fockcheck::debye_waller_check(osc, beta2, 1.0);
        rows.push_back({"debye_waller_w1_beta2_c1", dw.relative_gap(), 1e-8});
        const fockcheck::TruncatedOscillator osc2(2.0, 80);
        rows.push_back({"debye_waller_ground_w2_c1",
                        fockcheck::debye_waller_check(osc2, InverseTemperature::infinite(), 1.0).relative_gap(), 1e-10});
        const cplx I{0.0, 1.0};
        rows.push_back({"bch_b_zero", fockcheck::bch_convention_check(osc, {I * 0.3, 0.0}, {0.0, 0.0}), 1e-12});
        rows.push_back({"bch_q_p", fockcheck::bch_convention_check(osc, {I * 0.3, 0.0}, {0.0, I * 0.7}), 1e-9});
        rows.push_back({"bch_commuting", fockcheck::bch_convention_check(osc, {I * 0.3, 0.0}, {I * 0.5, 0.0}), 1e-12});
    }
    rows.push_back({"hamiltonian_symmetry", fockcheck::hamiltonian_symmetry_defect(sys), 1e-9});
    rows.push_back({"ground_energy_negative_part", std::max(0.0, -fockcheck::ground_energy(sys)), 1e-8});

    fockcheck::SmallBathOptions opt;
    opt.max_budget = c.max_budget;
    std::vector<fockcheck::TQuery> queries{{0.0, 0.0, 0.0, 0.0, 0.0}};
    for (double t : times) {
        if (!(t >= 0.0)) throw ConfigError("times must be >= 0");
        queries.push_back({c.a, c.b, c.u, c.v, t});
    }
    const auto res = fockcheck::small_bath_T(sys, queries, opt);
    rows.push_back({"T_trivial", std::abs(res[0].T_exact - 1.0) + std::abs(res[0].T_formula - 1.0), 1e-12});
    for (std::size_t i = 1; i < res.size(); ++i)
        rows.push_back({"T_t" + format_number(queries[i].t), res[i].relative_gap(), 1e-3});
    rows.push_back({"truncation_budget", res[0].budget, c.max_budget});

    std::string dims;
    for (auto d : sys.dims) dims += (dims.empty() ? "" : ",") + std::to_string(d);
    bool ok = true;
    const std::string text = render_checks("command=fock-check omega0=" + format_number(sys.omega0) +
                                               " beta=" + detail::beta_text(sys.beta) + " dims=" + dims,
                                           rows, ok);
    detail::emit(c.output, out, text);
    return ok ? 0 : 2;
}

// ---------------------------------------------------------------- dispatch

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        if (args.empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
            (args.empty() ? err : out) << usage();
            return args.empty() ? 1 : 0;
        }
        const RunConfig c = parse_args(args);
        if (c.command == "correlators") return cmd_correlators(c, out);
        if (c.command == "variance") return cmd_variance(c, out);
        if (c.command == "profile") return cmd_profile(c, out);
        if (c.command == "figures") return cmd_figures(c, out);
        if (c.command == "bath-check") return cmd_bath_check(c, out);
        if (c.command == "fock-check") return cmd_fock_check(c, out);
        throw ConfigError("unknown command '" + c.command + "'");
    } catch (const ConfigError& e) {
        err << "qbath: " << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        err << "qbath: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "qbath: " << e.what() << '\n';
        return 2;
    }
}

} // namespace qbath::cli
