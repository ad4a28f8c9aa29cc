#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "singlim/verification.hpp"

namespace singlim {

Tolerances::Tolerances(std::map<std::string, double> overrides) : overrides_(std::move(overrides)) {
    for (const auto& [key, value] : overrides_) {
        if (!defaults().contains(key)) throw std::invalid_argument("unknown tolerance key: " + key);
        if (!(value >= 0.0) || !std::isfinite(value)) {
            throw std::invalid_argument("tolerance " + key + " must be finite and >= 0");
        }
    }
}

const std::map<std::string, double>& Tolerances::defaults() {
    static const std::map<std::string, double> table = {
        {"u1_decomposition", 1e-8},
        {"z_decomposition", 1e-8},
        {"tilde_u1_decomposition", 1e-8},
        {"tilde_u2_decomposition", 1e-8},
        {"w1_decomposition", 1e-8},
        {"w2_decomposition", 1e-8},
        {"superposition", 1e-10},
        {"initial_layer_identity", 1e-8},
        {"w_ode", 1e-8},
        {"w_initial_data", 1e-10},
        {"v_second_derivative", 1e-12},
        {"inequality_slack", 1e-8},
        {"duhamel_quadrature", 1e-6},
        {"quadrature_crosscheck", 1e-6},
        {"max_reg_constant", 1e-8},
        {"max_reg_limit", 1e-6},
        {"rate_slack", 0.05},
        {"rate_r2", 0.99},
    };
    return table;
}

double Tolerances::get(const std::string& key) const {
    if (auto it = overrides_.find(key); it != overrides_.end()) return it->second;
    if (auto it = defaults().find(key); it != defaults().end()) return it->second;
    throw std::invalid_argument("unknown tolerance key: " + key);
}

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

CheckReport bound_report(std::string id, double measured, double bound, double slack, std::string note) {
    const double tol = slack * std::max(1.0, std::fabs(bound));
    CheckReport r;
    r.id = std::move(id);
    r.margin = bound + tol - measured;
    r.pass = r.margin >= 0.0 && std::isfinite(measured);
    r.tolerance = tol;
    r.note = std::move(note);
    return r;
}

CheckReport identity_report(std::string id, const ProfileFunction& residual, const TimeGrid& g,
                            double scale, double tol, std::string note) {
    const double worst = sup_norm(residual, g);
    CheckReport r;
    r.id = std::move(id);
    r.tolerance = tol * scale;
    r.margin = r.tolerance - worst;
    r.pass = std::isfinite(worst) && worst <= r.tolerance;
    r.note = "max residual " + fmt(worst) + (note.empty() ? "" : "; " + note);
    return r;
}

CheckReport failed_report(std::string id, double tol, const std::exception& e) {
    CheckReport r;
    r.id = std::move(id);
    r.pass = false;
    r.margin = -std::numeric_limits<double>::infinity();
    r.tolerance = tol;
    r.note = e.what();
    return r;
}

double data_scale(const ProblemData& pd) { return norm(pd.u0) + norm(pd.u1); }

/// eps ||F'(t)||^2 + ||A^{1/2} F(t)||^2 + int_0^t ||F'||^2 on the grid.
std::vector<double> energy_curve(const ProblemData& pd, const ProfileFunction& f, const TimeGrid& g) {
    const ProfileFunction df = f.derivative();
    const ProfileFunction half = f.powered(pd.spec, 0.5);
    const auto sq = df.squared_modes();
    std::vector<double> out;
    out.reserve(g.size());
    for (double t : g.times()) {
        const double nd = norm(df(t));
        const double nh = norm(half(t));
        Real integral = 0.0L;
        for (const auto& s : sq) integral += s.integral(t);
        out.push_back(pd.eps * nd * nd + nh * nh + static_cast<double>(integral));
    }
    return out;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

double sq(double x) { return x * x; }

constexpr double kPi = 3.14159265358979323846;

}  // namespace

std::vector<CheckReport> identity_checks(const ProblemData& pd, const TimeGrid& g, const Tolerances& tol) {
    std::vector<CheckReport> out;
    const double scale = data_scale(pd);
    const Real e = pd.eps;
    const auto [u1eps, u2eps] = split_components(pd);
    const ProfileFunction u = exact_solution(pd);

    {
        const SpecVector g0 = pd.u0 + pd.eps * resolvent(pd.spec, pd.eps, pd.u1);
        ProfileFunction r = u - kernel_profile(pd.spec, 0, 0.0, g0) - e * aux_U1(pd).derivative();
        out.push_back(identity_report("u1_decomposition", r, g, scale, tol.get("u1_decomposition"),
                                      "u = e^{-tA}(u0 + eps J u1) + eps U1'"));
    }
    {
        ProfileFunction r = u1eps - kernel_profile(pd.spec, 0, 0.0, pd.u0) -
                            e * aux_Z(pd).powered(pd.spec, 0.5);
        out.push_back(identity_report("z_decomposition", r, g, scale, tol.get("z_decomposition"),
                                      "u_1eps = e^{-tA}u0 + eps A^{1/2} Z with forcing -A^{3/2}e^{-tA}u0"));
        // Same identity with the opposite forcing sign, reported for reference.
        ProfileFunction flipped = u1eps - kernel_profile(pd.spec, 0, 0.0, pd.u0) -
                                  e * aux_Z_plus(pd).powered(pd.spec, 0.5);
        CheckReport info;
        info.id = "z_forcing_sign";
        info.pass = true;
        info.tolerance = 0.0;
        info.margin = 0.0;
        info.note = "informational: with forcing +A^{3/2}e^{-tA}u0 the identity residual is " +
                    fmt(sup_norm(flipped, g)) + "; the minus sign is the one that holds";
        out.push_back(info);
    }
    {
        const SpecVector ju0 = resolvent(pd.spec, pd.eps, pd.u0);
        ProfileFunction r = u1eps - kernel_profile(pd.spec, 0, 0.0, ju0) - e * aux_tilde_U(pd, 1).derivative();
        out.push_back(identity_report("tilde_u1_decomposition", r, g, scale, tol.get("tilde_u1_decomposition"),
                                      "u_1eps = e^{-tA} J u0 + eps U~1'"));
    }
    {
        const SpecVector jv1 = resolvent(pd.spec, pd.eps, pd.v1);
        ProfileFunction r = u2eps - e * kernel_profile(pd.spec, 0, 0.0, jv1) - e * aux_tilde_U(pd, 2).derivative();
        out.push_back(identity_report("tilde_u2_decomposition", r, g, scale, tol.get("tilde_u2_decomposition"),
                                      "u_2eps = eps e^{-tA} J v1 + eps U~2'"));
    }
    for (int j = 1; j <= 2; ++j) {
        const std::string tag = "w" + std::to_string(j);
        try {
            const AuxW w = aux_W(pd, j);
            ProfileFunction r = aux_tilde_U(pd, j) - aux_V(pd, j) - e * w.w_from_ode;
            if (j == 2) r += u2eps;
            out.push_back(identity_report(tag + "_decomposition", r, g, scale, tol.get(tag + "_decomposition"),
                                          "W solved from its forced equation with the realized data"));

            CheckReport ode;
            ode.id = tag + "_ode";
            ode.tolerance = tol.get("w_ode");
            ode.margin = ode.tolerance - w.max_relative_ode_residual;
            ode.pass = ode.margin >= 0.0;
            ode.note = "relative residual of eps W'' + A W + W' + V'' = 0: " + fmt(w.max_relative_ode_residual);
            out.push_back(ode);

            // Expected initial data derived from the decomposition.
            const SpecVector ju0 = resolvent(pd.spec, pd.eps, pd.u0);
            const SpecVector jv1 = resolvent(pd.spec, pd.eps, pd.v1);
            SpecVector want0, want1, opposite1;
            std::string note;
            if (j == 1) {
                want0 = -1.0 * apply_power(pd.spec, 1.0, ju0);
                want1 = 2.0 * apply_power(pd.spec, 2.0, ju0);
                opposite1 = -1.0 * want1;
                note = "realized (W1, W1')(0) = (-A J u0, +2 A^2 J u0); the value -2 A^2 J u0 is off by " +
                       fmt(norm(w.initial_velocity - opposite1));
            } else {
                want0 = jv1;
                want1 = -2.0 * apply_power(pd.spec, 1.0, jv1);
                note = "realized (W2, W2')(0) = (J v1, -2 A J v1)";
            }
            const double dev = norm(w.initial_value - want0) + norm(w.initial_velocity - want1);
            const double dscale = norm(want0) + norm(want1) + scale;
            CheckReport data;
            data.id = tag + "_initial_data";
            data.tolerance = tol.get("w_initial_data") * dscale;
            data.margin = data.tolerance - dev;
            data.pass = data.margin >= 0.0;
            data.note = note;
            out.push_back(data);
        } catch (const std::exception& ex) {
            out.push_back(failed_report(tag + "_decomposition", tol.get(tag + "_decomposition"), ex));
            out.push_back(failed_report(tag + "_ode", tol.get("w_ode"), ex));
        }
    }
    for (int j = 1; j <= 2; ++j) {
        const ProfileFunction vdd = aux_V(pd, j).derivative().derivative();
        const ProfileFunction formula = aux_V_second_derivative_formula(pd, j);
        const double worst = sup_norm_error(vdd, formula, g);
        const double vscale = std::max(sup_norm(formula, g), std::numeric_limits<double>::min());
        CheckReport r;
        r.id = "v" + std::to_string(j) + "_second_derivative";
        r.tolerance = tol.get("v_second_derivative") * vscale;
        r.margin = r.tolerance - worst;
        r.pass = r.margin >= 0.0;
        r.note = "differentiated V vs closed-form V'': " + fmt(worst);
        out.push_back(r);
    }
    {
        ProfileFunction r = u1eps + u2eps - u;
        out.push_back(identity_report("superposition", r, g, scale, tol.get("superposition"),
                                      "u_1eps + u_2eps = u_eps"));
    }
    try {
        const Real e32 = e * std::sqrt(e);
        ProfileFunction r = e * u2eps.derivative() + u2eps - e * kernel_profile(pd.spec, 0, 0.0, pd.v1) -
                            e32 * tilde_V2(pd);
        CheckReport rep = identity_report("initial_layer_identity", r, g, scale, tol.get("initial_layer_identity"),
                                          "eps u_2eps' + u_2eps = eps e^{-tA} v1 + eps^{3/2} V~2");
        const double bound = sup_norm(tilde_V2(pd), g);
        const double a_half_v1 = norm(apply_power(pd.spec, 0.5, pd.v1));
        rep.note += "; sup ||V~2|| = " + fmt(bound) +
                    (a_half_v1 > 0 ? ", ratio to ||A^{1/2} v1|| = " + fmt(bound / a_half_v1) : "");
        out.push_back(rep);
    } catch (const std::exception& ex) {
        out.push_back(failed_report("initial_layer_identity", tol.get("initial_layer_identity"), ex));
    }
    return out;
}

std::vector<CheckReport> energy_inequality_checks(const ProblemData& pd, const TimeGrid& g, const Tolerances& tol) {
    std::vector<CheckReport> out;
    const double slack = tol.get("inequality_slack");
    const double a_half_u0 = norm(apply_power(pd.spec, 0.5, pd.u0));
    const double au0 = norm(apply_power(pd.spec, 1.0, pd.u0));

    {
        const double lhs = max_of(energy_curve(pd, aux_U1(pd), g));
        const double bound = sq(a_half_u0) + 3.0 * pd.eps * sq(norm(pd.u1));
        out.push_back(bound_report("u1_aux_energy", lhs, bound, slack,
                                   "max energy of U1 " + fmt(lhs) + " vs ||A^{1/2}u0||^2 + 3 eps ||u1||^2 = " +
                                       fmt(bound)));
    }
    {
        const double lhs = max_of(energy_curve(pd, aux_Z(pd), g));
        const double bound = sq(au0) / 2.0;
        out.push_back(bound_report("z_energy", lhs, bound, slack,
                                   "max energy of Z " + fmt(lhs) + " vs ||A u0||^2 / 2 = " + fmt(bound)));
    }
    for (int j = 1; j <= 2; ++j) {
        const std::string tag = "w" + std::to_string(j);
        try {
            const AuxW w = aux_W(pd, j);
            const std::vector<double> energy = energy_curve(pd, w.w, g);
            const double lhs = max_of(energy);
            Real forcing = 0.0L;
            for (const auto& s : aux_V_second_derivative_formula(pd, j).squared_modes()) {
                forcing += s.integral_to_infinity();
            }
            const double start = energy.front();
            const double chain = start + static_cast<double>(forcing);
            out.push_back(bound_report(tag + "_energy_chain", lhs, chain, slack,
                                       "max energy " + fmt(lhs) + " vs initial energy " + fmt(start) +
                                           " + int ||V''||^2 = " + fmt(static_cast<double>(forcing))));

            const double denom = j == 1 ? sq(norm(apply_power(pd.spec, 1.5, pd.u0)))
                                        : sq(norm(apply_power(pd.spec, 0.5, pd.v1)));
            CheckReport c;
            c.id = tag + "_energy_constant";
            c.tolerance = 0.0;
            if (denom > 0.0) {
                const double constant = lhs / denom;
                c.pass = std::isfinite(constant);
                c.margin = 0.0;
                c.note = std::string("measured C") + std::to_string(j) + " = " + fmt(constant) +
                         (j == 1 ? " (relative to ||A^{3/2}u0||^2)" : " (relative to ||A^{1/2}v1||^2)");
            } else {
                c.pass = lhs <= slack;
                c.margin = slack - lhs;
                c.note = "reference norm vanishes; energy must vanish too";
            }
            out.push_back(c);
        } catch (const std::exception& ex) {
            out.push_back(failed_report(tag + "_energy_chain", slack, ex));
        }
    }
    return out;
}

CheckReport kisynski_explicit_bound(const ProblemData& pd, const TimeGrid& g, const Tolerances& tol) {
    const double err = sup_norm_error(exact_solution(pd), parabolic_profile(pd), g);
    const double nu1 = norm(pd.u1);
    const double a_half_u0 = norm(apply_power(pd.spec, 0.5, pd.u0));
    const double bound = pd.eps * nu1 + std::sqrt(pd.eps) * std::sqrt(sq(a_half_u0) + 3.0 * pd.eps * sq(nu1));
    CheckReport r;
    r.id = "order0_explicit_bound";
    r.tolerance = std::max(1e-10, tol.get("inequality_slack") * 1e-2);
    r.margin = bound + r.tolerance - err;
    r.pass = r.margin >= 0.0;
    r.note = "sup ||u_eps - e^{-tA}u0|| = " + fmt(err) + " vs " + fmt(bound);
    return r;
}

std::vector<CheckReport> l2_remark_bounds(const ProblemData& pd, const TimeGrid& g, std::optional<SpecVector> w1,
                                          const Tolerances& tol) {
    std::vector<CheckReport> out;
    const double slack = tol.get("inequality_slack");
    {
        const SpecVector shift = pd.u0 + pd.eps * pd.u1;
        const ProfileFunction diff = exact_solution(pd) - kernel_profile(pd.spec, 0, 0.0, shift);
        const double bound = 2.0 * sq(pd.eps) * sq(norm(apply_power(pd.spec, 0.5, pd.u0))) +
                             7.0 * std::pow(pd.eps, 3) * sq(norm(pd.u1));
        try {
            const double lhs = l2_time_norm(diff, g, 0);
            out.push_back(bound_report("l2_first_order_bound", lhs, bound, slack,
                                       "int ||u_eps - e^{-tA}(u0 + eps u1)||^2 = " + fmt(lhs) + " vs " + fmt(bound)));
            const double quad = l2_time_norm_quadrature(diff, g, 0);
            const double rel = std::fabs(quad - lhs) / std::max(lhs, 1e-300);
            CheckReport x;
            x.id = "l2_quadrature_crosscheck";
            x.tolerance = tol.get("quadrature_crosscheck");
            x.margin = lhs == 0.0 ? x.tolerance - std::fabs(quad) : x.tolerance - rel;
            x.pass = x.margin >= 0.0;
            x.note = "closed form " + fmt(lhs) + " vs panel quadrature " + fmt(quad);
            out.push_back(x);
        } catch (const std::exception& ex) {
            out.push_back(failed_report("l2_first_order_bound", slack, ex));
        }
    }
    {
        SpecVector range_u1 = pd.u1;
        std::string note;
        SpecVector w;
        if (w1) {
            if (w1->size() != pd.spec.size()) throw std::invalid_argument("w1 length mismatch");
            const SpecVector image = apply_power(pd.spec, 0.5, *w1);
            if (norm(image - pd.u1) > 1e-12 * std::max(1.0, norm(pd.u1))) {
                throw std::invalid_argument("w1 inconsistent with u1: A^{1/2} w1 != u1");
            }
            w = *w1;
        } else {
            w = SpecVector(pd.spec.size());
            bool excluded = false;
            for (std::size_t i = 0; i < pd.spec.size(); ++i) {
                if (pd.spec[i] > 0.0) {
                    w[i] = pd.u1[i] / std::sqrt(pd.spec[i]);
                } else if (pd.u1[i] != 0.0) {
                    range_u1[i] = 0.0;
                    excluded = true;
                }
            }
            if (excluded) note = "kernel component of u1 excluded (not square integrable in time); ";
        }
        Real integral = 0.0L;
        for (std::size_t i = 0; i < pd.spec.size(); ++i) {
            if (pd.spec[i] > 0.0) integral += static_cast<Real>(range_u1[i]) * range_u1[i] / (2.0L * pd.spec[i]);
        }
        const double lhs = static_cast<double>(integral);
        const double bound = sq(norm(w)) / 2.0;
        CheckReport r = bound_report("semigroup_l2_bound", lhs, bound, slack,
                                     note + "int ||e^{-tA}u1||^2 = " + fmt(lhs) + " vs ||w1||^2/2 = " + fmt(bound));
        r.tolerance = slack * std::max(bound, 1e-300);
        r.margin = bound + r.tolerance - lhs;
        r.pass = r.margin >= 0.0;
        out.push_back(r);
    }
    return out;
}

namespace {

/// int_0^t e^{(s-t)/eps} e^{-lambda s} ds
Real layer_convolution(Real lambda, Real eps, Real t) {
    const Real kappa = 1.0L / eps - lambda;
    if (kappa == 0.0L) return t * std::exp(-lambda * t);
    const Real x = kappa * t;
    if (x > -700.0L) return -std::exp(-lambda * t) * std::expm1(-x) / kappa;
    return (std::exp(-t / eps) - std::exp(-lambda * t)) / (-kappa);
}

/// Layer points, every 4th point up to t = 1, every 20th after, and the end.
std::vector<double> duhamel_times(const TimeGrid& g, double eps) {
    std::vector<double> out;
    const auto times = g.times();
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double t = times[k];
        const bool layer = t <= 10.0 * eps * (1.0 + 1e-12) && std::fabs(t / eps - std::round(t / eps)) < 1e-9;
        if (layer || k % (t <= 1.0 ? 4 : 20) == 0 || k + 1 == times.size()) out.push_back(t);
    }
    return out;
}

/// Panel boundaries on [a, b]: geometric from a starting at h_left and
/// from b starting at h_right (0 disables a side), then capped at `width`
/// below `reach`.
std::vector<double> graded_cuts(double a, double b, double h_left, double h_right, double width, double reach) {
    std::vector<double> cuts{a, b, 0.5 * (a + b)};
    for (double h = h_left; h > 0.0 && h < 0.5 * (b - a); h *= 2.0) cuts.push_back(a + h);
    for (double h = h_right; h > 0.0 && h < 0.5 * (b - a); h *= 2.0) cuts.push_back(b - h);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (width <= 0.0) return cuts;
    std::vector<double> refined{cuts.front()};
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double lo = cuts[c];
        const double hi = cuts[c + 1];
        if (lo < reach && hi - lo > width) {
            const auto pieces = static_cast<std::size_t>(std::ceil((hi - lo) / width));
            for (std::size_t p = 1; p < pieces; ++p) {
                refined.push_back(lo + (hi - lo) * static_cast<double>(p) / static_cast<double>(pieces));
            }
        }
        refined.push_back(hi);
    }
    return refined;
}

}  // namespace

std::vector<CheckReport> duhamel_residual(const ProblemData& pd, const TimeGrid& g, const Tolerances& tol) {
    std::vector<CheckReport> out;
    const std::size_t n = pd.spec.size();
    const ProfileFunction u2eps = split_components(pd).second;
    const double nv1 = norm(pd.v1);
    const double eps = pd.eps;

    using Rule = boost::math::quadrature::gauss<double, 10>;
    const auto& x = Rule::abscissa();
    const auto& wts = Rule::weights();

    double worst = 0.0;
    double worst_bypart = 0.0;
    try {
        const ProfileFunction tv2 = tilde_V2(pd);
        const double lmax = pd.spec.max_eigenvalue();
        const double h_fast = lmax > 0.0 ? 1.0 / (16.0 * lmax) : 0.0;
        const double sqrt_eps = std::sqrt(eps);
        double omega = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = 4.0 * eps * pd.spec[i] - 1.0;
            if (d > 0.0) omega = std::max(omega, std::sqrt(d) / (2.0 * eps));
        }
        // One period per panel while the underdamped envelope e^{-s/(2 eps)} matters.
        const double width = omega > 0.0 ? 2.0 * kPi / omega : 0.0;
        const double reach = 60.0 * eps;

        // I(t) = e^{-(t - t_prev)/eps} I(t_prev) + integral over [t_prev, t]. The kernel is below
        // e^{-45} before t - 45 eps, so that part of the interval is dropped.
        const double cutoff = 45.0 * eps;
        SpecVector integral(n);
        double t0 = 0.0;
        for (double t : duhamel_times(g, eps)) {
            integral *= std::exp(-(t - t0) / eps);
            t0 = std::max(t0, t - cutoff);
            // Fast modes e^{-lambda s} near s = 0, the kernel e^{(s-t)/eps} near s = t.
            const double h_left = t0 * lmax < 40.0 ? h_fast : 0.0;
            const std::vector<double> cuts = graded_cuts(t0, t, h_left, eps / 16.0, width, reach);
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
                const double half = 0.5 * (cuts[c + 1] - cuts[c]);
                for (std::size_t q = 0; q < x.size(); ++q) {
                    for (double sign : {-1.0, 1.0}) {
                        const double s = mid + sign * half * x[q];
                        const double kernel = std::exp((s - t) / eps) * half * wts[q];
                        const SpecVector tv = tv2(s);
                        for (std::size_t i = 0; i < n; ++i) {
                            integral[i] += kernel * (std::exp(-pd.spec[i] * s) * pd.v1[i] + sqrt_eps * tv[i]);
                        }
                    }
                }
            }
            worst = std::max(worst, norm(u2eps(t) - integral));

            SpecVector bypart(n);
            for (std::size_t i = 0; i < n; ++i) {
                bypart[i] = static_cast<double>(eps * pd.spec[i] * pd.v1[i] * layer_convolution(pd.spec[i], eps, t));
            }
            worst_bypart = std::max(worst_bypart, norm(bypart));
            t0 = t;
        }
    } catch (const std::exception& ex) {
        out.push_back(failed_report("duhamel_representation", tol.get("duhamel_quadrature"), ex));
        return out;
    }

    CheckReport r;
    r.id = "duhamel_representation";
    r.tolerance = tol.get("duhamel_quadrature") * nv1;
    r.margin = r.tolerance - worst;
    r.pass = r.margin >= 0.0;
    r.note = "max ||u_2eps - quadrature of the representation|| = " + fmt(worst);
    out.push_back(r);

    const double bound = std::pow(eps, 1.5) / 2.0 * norm(apply_power(pd.spec, 0.5, pd.v1));
    out.push_back(bound_report("duhamel_by_parts_bound", worst_bypart, bound, tol.get("inequality_slack"),
                               "max ||eps int e^{(s-t)/eps} A e^{-sA} v1 ds|| = " + fmt(worst_bypart) +
                                   " vs eps^{3/2}/2 ||A^{1/2} v1|| = " + fmt(bound)));
    return out;
}

std::vector<CheckReport> resolvent_bound_checks(const ProblemData& pd, const Tolerances& tol) {
    std::vector<CheckReport> out;
    const std::pair<const char*, const SpecVector*> items[] = {
        {"resolvent_bound_u0", &pd.u0}, {"resolvent_bound_u1", &pd.u1}, {"resolvent_bound_v1", &pd.v1}};
    for (const auto& [id, f] : items) {
        const double margin = resolvent_bound_margin(pd.spec, pd.eps, *f);
        const double scale = inner(*f, *f) / pd.eps;
        CheckReport r;
        r.id = id;
        r.tolerance = tol.get("inequality_slack") * std::max(scale, 1e-300);
        r.margin = margin + r.tolerance;
        r.pass = r.margin >= 0.0;
        r.note = "(1/eps)||f||^2 - ||A^{1/2} J f||^2 = " + fmt(margin);
        out.push_back(r);
    }
    return out;
}

std::vector<CheckReport> max_reg_checks(const Spectrum& spec, const SpecVector& f, const TimeGrid& g,
                                        const std::string& tag, const Tolerances& tol) {
    std::vector<CheckReport> out;
    const double f2 = inner(f, f);
    const double half = f2 / 2.0;
    const double ctol = tol.get("max_reg_constant") * std::max(f2, 1e-300);
    const double ltol = tol.get("max_reg_limit") * std::max(f2, 1e-300);

    {
        const auto m0 = max_reg_functional(spec, f, 0, g);
        double dev = 0.0;
        for (double m : m0) dev = std::max(dev, std::fabs(m - half));
        CheckReport r;
        r.id = "max_reg_n0_constant_" + tag;
        r.tolerance = ctol;
        r.margin = ctol - dev;
        r.pass = r.margin >= 0.0;
        r.note = "max |M_0(t) - ||f||^2/2| = " + fmt(dev);
        out.push_back(r);
    }
    const double horizon = integration_horizon(spec);
    for (int n = 1; n <= 2; ++n) {
        const auto m = max_reg_functional(spec, f, n, g);
        bool monotone = true;
        bool functional_monotone = true;
        double deficit = 0.0;
        double deficit_at = 0.0;
        double excess = 0.0;
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (k > 0) {
                // Subtracting ||e^{-tA} f||^2/2 leaves the weighted integral.
                const double norm_now = sq(norm(semigroup(spec, g.times()[k], f)));
                const double norm_before = sq(norm(semigroup(spec, g.times()[k - 1], f)));
                const double floor = 1e-14 * std::max(f2, 1e-300);
                if ((m[k] - norm_now / 2.0) < (m[k - 1] - norm_before / 2.0) - floor) monotone = false;
                if (m[k] < m[k - 1] - floor) functional_monotone = false;
            }
            excess = std::max(excess, m[k] - half);
            if (half - m[k] > deficit) {
                deficit = half - m[k];
                deficit_at = g.times()[k];
            }
        }
        const TimeGrid end_grid({0.0, horizon});
        const double at_horizon = max_reg_functional(spec, f, n, end_grid).back();
        const double limit_gap = std::fabs(at_horizon - half);

        CheckReport r;
        r.id = "max_reg_n" + std::to_string(n) + "_" + tag;
        r.tolerance = ctol;
        r.margin = std::min(ctol - excess, ltol - limit_gap);
        r.pass = monotone && excess <= ctol && limit_gap <= ltol;
        r.note = std::string(monotone ? "weighted integral nondecreasing" : "weighted integral NOT monotone") +
                 (functional_monotone ? "; M_n nondecreasing" : "; M_n itself dips below its initial value") +
                 "; max excess over ||f||^2/2 = " +
                 fmt(excess) + "; |M(T) - ||f||^2/2| = " + fmt(limit_gap) + " at T = " + fmt(horizon) +
                 "; finite-t equality does not hold for n >= 1: largest deficit " + fmt(deficit) + " at t = " +
                 fmt(deficit_at);
        out.push_back(r);
    }
    for (int n = 0; n <= 2; ++n) {
        const auto closed = max_reg_functional(spec, f, n, g);
        const auto quad = max_reg_functional_quadrature(spec, f, n, g);
        double dev = 0.0;
        for (std::size_t k = 0; k < closed.size(); ++k) dev = std::max(dev, std::fabs(closed[k] - quad[k]));
        CheckReport r;
        r.id = "max_reg_n" + std::to_string(n) + "_quadrature_" + tag;
        r.tolerance = ctol;
        r.margin = ctol - dev;
        r.pass = r.margin >= 0.0;
        r.note = "closed form vs panel quadrature: " + fmt(dev);
        out.push_back(r);
    }
    return out;
}

}  // namespace singlim
