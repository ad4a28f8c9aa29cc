#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "singlim/verification.hpp"

namespace singlim {

namespace {

constexpr double kNoiseFloor = 1e-14;

struct ComparisonInfo {
    Comparison id;
    std::string_view name;
    double exponent;
    bool il0;
};

constexpr std::array<ComparisonInfo, 7> kComparisons{{
    {Comparison::order0_thm11i, "order0_thm11i", 0.5, false},
    {Comparison::order0_thm11ii, "order0_thm11ii", 1.0, false},
    {Comparison::order1_theta, "order1_theta", 1.0, false},
    {Comparison::order2_mainthm, "order2_mainthm", 1.5, false},
    {Comparison::cor1, "cor1", 1.5, true},
    {Comparison::cor2, "cor2", 1.5, true},
    {Comparison::synthetic, "synthetic", 0.0, false},
}};

const ComparisonInfo& info(Comparison c) {
    for (const auto& e : kComparisons) {
        if (e.id == c) return e;
    }
    throw std::logic_error("unknown comparison");
}

}  // namespace

std::string_view to_string(Comparison c) noexcept { return info(c).name; }

std::optional<Comparison> parse_comparison(std::string_view name) noexcept {
    for (const auto& e : kComparisons) {
        if (e.name == name) return e.id;
    }
    return std::nullopt;
}

double nominal_exponent(Comparison c) noexcept { return info(c).exponent; }

bool requires_il0(Comparison c) noexcept { return info(c).il0; }

RateFit fit_rate(const ErrorCurve& c) {
    if (c.eps.size() != c.error.size()) throw std::invalid_argument("error curve length mismatch");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < c.eps.size(); ++i) {
        if (c.eps[i] > 0.0 && c.error[i] > kNoiseFloor && std::isfinite(c.error[i])) {
            xs.push_back(std::log(c.eps[i]));
            ys.push_back(std::log(c.error[i]));
        }
    }
    if (xs.size() < 3) {
        throw std::invalid_argument("rate fit needs at least 3 points above the noise floor, got " +
                                    std::to_string(xs.size()));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("rate fit needs distinct eps values");

    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.points_used = xs.size();
    double sse = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        fit.residuals.push_back(r);
        sse += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return fit;
}

RateExperiment run_rate_experiment(const Spectrum& spec, const SpecVector& u0, const SpecVector& u1,
                                   std::span<const double> eps_values, Comparison c, const GridParams& grid,
                                   double synthetic_exponent) {
    if (eps_values.size() < 3) throw std::invalid_argument("rate experiment needs at least 3 eps values");
    RateExperiment out;
    out.curve.label = std::string(to_string(c));
    out.expected_exponent = c == Comparison::synthetic ? synthetic_exponent : nominal_exponent(c);
    for (double eps : eps_values) {
        double err = 0.0;
        if (c == Comparison::synthetic) {
            if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0, 1]");
            err = std::pow(eps, synthetic_exponent);
        } else {
            const ProblemData pd = make_problem(spec, eps, u0, u1);
            if (requires_il0(c) && !pd.il0_satisfied) {
                throw std::invalid_argument(std::string(to_string(c)) +
                                            " requires data with u1 + A u0 = 0");
            }
            const TimeGrid g = problem_grid(grid, spec, eps);
            const ProfileFunction u = exact_solution(pd);
            switch (c) {
                case Comparison::order0_thm11i:
                case Comparison::order0_thm11ii:
                    err = sup_norm_error(u, parabolic_profile(pd), g);
                    break;
                case Comparison::order1_theta:
                    err = sup_norm_error(u, parabolic_profile(pd) + theta_layer(pd), g);
                    break;
                case Comparison::order2_mainthm:
                    err = sup_norm_error(u, main_expansion_profile(pd), g);
                    break;
                case Comparison::cor1:
                    err = sup_norm_error(u, il0_expansion_profile(pd), g);
                    break;
                case Comparison::cor2:
                    err = sup_norm_error(u.derivative(), derivative_expansion_profile(pd), g);
                    break;
                case Comparison::synthetic:
                    break;
            }
        }
        out.curve.eps.push_back(eps);
        out.curve.error.push_back(err);
    }
    out.fit = fit_rate(out.curve);
    return out;
}

CheckReport rate_check(const RateExperiment& e, Comparison c, const std::string& tag, const Tolerances& tol) {
    const double min_slope = e.expected_exponent - tol.get("rate_slack");
    const double min_r2 = tol.get("rate_r2");
    CheckReport r;
    r.id = "rate_" + std::string(to_string(c)) + (tag.empty() ? "" : "_" + tag);
    r.tolerance = tol.get("rate_slack");
    r.margin = std::min(e.fit.slope - min_slope, e.fit.r2 - min_r2);
    r.pass = e.fit.slope >= min_slope && e.fit.r2 >= min_r2;
    std::ostringstream note;
    note.precision(6);
    note << "slope " << e.fit.slope << " (need >= " << min_slope << "), R^2 " << e.fit.r2 << " (need >= " << min_r2
         << "), " << e.fit.points_used << " points";
    r.note = note.str();
    return r;
}

}  // namespace singlim
