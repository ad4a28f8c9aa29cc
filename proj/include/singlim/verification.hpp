#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "singlim/profiles.hpp"
#include "singlim/spectral.hpp"

namespace singlim {

struct GridParams {
    double t_max = 20.0;
    int linear_count = 2000;
    int log_count = 200;
    double log_floor = 1e-6;

    friend bool operator==(const GridParams&, const GridParams&) = default;
};

/// Sorted sample times starting at 0. Panels are the intervals between
/// consecutive times; quadrature uses Simpson's rule with the panel
/// midpoint, which is exact for cubics on every panel.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> times);

    /// Uniform points on [0, t_max], logarithmic points on [log_floor, 1],
    /// and {0, eps, 2eps, 5eps, 10eps} for every eps given.
    static TimeGrid standard(const GridParams& params, std::span<const double> eps_values = {});

    std::span<const double> times() const noexcept { return times_; }
    std::size_t size() const noexcept { return times_.size(); }
    double back() const noexcept { return times_.back(); }

    /// Nodes and weights of the composite rule (grid points and midpoints).
    std::vector<double> quadrature_nodes() const;
    std::vector<double> quadrature_weights() const;

    double simpson(const std::function<double(double)>& f) const;
    /// Adaptive Simpson inside every panel to relative tolerance tol.
    double adaptive_simpson(const std::function<double(double)>& f, double tol) const;

private:
    std::vector<double> times_;
};

/// Grid adapted to the problem: horizon max(t_max, 20/lambda_min+) and
/// layer points for eps.
TimeGrid problem_grid(const GridParams& params, const Spectrum& spec, double eps);
/// max(20, 20/lambda_min+).
double integration_horizon(const Spectrum& spec);

struct ErrorCurve {
    std::string label;
    std::vector<double> eps;
    std::vector<double> error;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::vector<double> residuals;
    std::size_t points_used = 0;
};

struct CheckReport {
    std::string id;
    bool pass = false;
    double margin = 0.0;
    double tolerance = 0.0;
    std::string note;
};

/// Named tolerances with defaults. Identity tolerances are relative to the
/// data scale ||u0|| + ||u1||.
class Tolerances {
public:
    Tolerances() = default;
    explicit Tolerances(std::map<std::string, double> overrides);

    double get(const std::string& key) const;
    const std::map<std::string, double>& overrides() const noexcept { return overrides_; }

    static const std::map<std::string, double>& defaults();

private:
    std::map<std::string, double> overrides_;
};

double sup_norm(const ProfileFunction& a, const TimeGrid& g);
double sup_norm_error(const ProfileFunction& a, const ProfileFunction& b, const TimeGrid& g);

/// Integral of t^w ||a(t)||^2 over [0, T], T = last grid time, computed in
/// closed form. Throws std::runtime_error if the integrand at T exceeds
/// 1e-14 times its peak on the grid.
double l2_time_norm(const ProfileFunction& a, const TimeGrid& g, int weight_power);
/// Same integral by adaptive panel quadrature.
double l2_time_norm_quadrature(const ProfileFunction& a, const TimeGrid& g, int weight_power,
                               double tol = 1e-10);

/// M_n(t) = ||e^{-tA} f||^2/2 + (2^n/n!) int_0^t s^n ||A^{(n+1)/2} e^{-sA} f||^2 ds
/// at every grid time, from the incomplete gamma closed form. n in {0,1,2}.
std::vector<double> max_reg_functional(const Spectrum& spec, const SpecVector& f, int n,
                                       const TimeGrid& g);
/// Same curve with the integral accumulated by panel quadrature.
std::vector<double> max_reg_functional_quadrature(const Spectrum& spec, const SpecVector& f, int n,
                                                  const TimeGrid& g);

/// (1/eps)||f||^2 - ||A^{1/2} J_eps f||^2.
double resolvent_bound_margin(const Spectrum& spec, double eps, const SpecVector& f);

std::vector<CheckReport> identity_checks(const ProblemData& pd, const TimeGrid& g,
                                         const Tolerances& tol = {});
std::vector<CheckReport> energy_inequality_checks(const ProblemData& pd, const TimeGrid& g,
                                                  const Tolerances& tol = {});
CheckReport kisynski_explicit_bound(const ProblemData& pd, const TimeGrid& g,
                                    const Tolerances& tol = {});
/// When w1 is omitted it is derived from the part of u1 outside ker A.
std::vector<CheckReport> l2_remark_bounds(const ProblemData& pd, const TimeGrid& g,
                                          std::optional<SpecVector> w1 = std::nullopt,
                                          const Tolerances& tol = {});
/// Duhamel representation of u_2eps by quadrature, and the integration by
/// parts bound (eps^{3/2}/2)||A^{1/2} v1||.
std::vector<CheckReport> duhamel_residual(const ProblemData& pd, const TimeGrid& g,
                                          const Tolerances& tol = {});
std::vector<CheckReport> resolvent_bound_checks(const ProblemData& pd, const Tolerances& tol = {});
std::vector<CheckReport> max_reg_checks(const Spectrum& spec, const SpecVector& f, const TimeGrid& g,
                                        const std::string& tag, const Tolerances& tol = {});

/// Least squares on (log eps, log E), ignoring E below 1e-14.
RateFit fit_rate(const ErrorCurve& c);

enum class Comparison {
    order0_thm11i,
    order0_thm11ii,
    order1_theta,
    order2_mainthm,
    cor1,
    cor2,
    synthetic,
};

std::string_view to_string(Comparison c) noexcept;
std::optional<Comparison> parse_comparison(std::string_view name) noexcept;
/// Exponent the comparison is measured against.
double nominal_exponent(Comparison c) noexcept;
bool requires_il0(Comparison c) noexcept;

struct RateExperiment {
    ErrorCurve curve;
    RateFit fit;
    /// Nominal exponent, or the injected one for Comparison::synthetic.
    double expected_exponent = 0.0;
};

/// Builds the profile pair of `c` for each eps and fits the decay rate of
/// the grid sup error. Throws std::invalid_argument for unmet data
/// requirements. `synthetic_exponent` is only used by Comparison::synthetic.
RateExperiment run_rate_experiment(const Spectrum& spec, const SpecVector& u0, const SpecVector& u1,
                                   std::span<const double> eps_values, Comparison c,
                                   const GridParams& grid, double synthetic_exponent = 2.0);

/// slope >= expected exponent - rate_slack and R^2 >= rate_r2.
CheckReport rate_check(const RateExperiment& e, Comparison c, const std::string& tag,
                       const Tolerances& tol = {});

}  // namespace singlim
