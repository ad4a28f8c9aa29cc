#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "singlim/verification.hpp"

namespace singlim {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.size() < 2) throw std::invalid_argument("TimeGrid needs at least two points");
    if (times_.front() != 0.0) throw std::invalid_argument("TimeGrid must start at t = 0");
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1]) || !std::isfinite(times_[i])) {
            throw std::invalid_argument("TimeGrid times must be finite and strictly increasing");
        }
    }
}

TimeGrid TimeGrid::standard(const GridParams& p, std::span<const double> eps_values) {
    if (!(p.t_max > 0.0) || p.linear_count < 2 || p.log_count < 0 || !(p.log_floor > 0.0) ||
        (p.log_count > 0 && !(p.log_floor < 1.0))) {
        throw std::invalid_argument("invalid grid parameters");
    }
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(p.linear_count + p.log_count) + 5 * eps_values.size() + 1);
    for (int k = 0; k < p.linear_count; ++k) t.push_back(p.t_max * k / (p.linear_count - 1));
    const double log_lo = std::log(p.log_floor);
    for (int k = 0; k < p.log_count; ++k) {
        const double frac = p.log_count == 1 ? 0.0 : static_cast<double>(k) / (p.log_count - 1);
        t.push_back(std::exp(log_lo * (1.0 - frac)));
    }
    for (double eps : eps_values) {
        for (double m : {1.0, 2.0, 5.0, 10.0}) t.push_back(m * eps);
    }
    t.push_back(0.0);
    std::sort(t.begin(), t.end());
    std::vector<double> unique;
    unique.reserve(t.size());
    for (double x : t) {
        if (x > p.t_max) continue;
        if (unique.empty() || x - unique.back() > 1e-12 * std::max(1.0, x)) unique.push_back(x);
    }
    return TimeGrid(std::move(unique));
}

std::vector<double> TimeGrid::quadrature_nodes() const {
    std::vector<double> nodes;
    nodes.reserve(2 * times_.size() - 1);
    for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
        nodes.push_back(times_[i]);
        nodes.push_back(0.5 * (times_[i] + times_[i + 1]));
    }
    nodes.push_back(times_.back());
    return nodes;
}

std::vector<double> TimeGrid::quadrature_weights() const {
    std::vector<double> w(2 * times_.size() - 1, 0.0);
    for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
        const double h = times_[i + 1] - times_[i];
        w[2 * i] += h / 6.0;
        w[2 * i + 1] += 4.0 * h / 6.0;
        w[2 * i + 2] += h / 6.0;
    }
    return w;
}

double TimeGrid::simpson(const std::function<double(double)>& f) const {
    double sum = 0.0;
    double fa = f(times_[0]);
    for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
        const double a = times_[i];
        const double b = times_[i + 1];
        const double fb = f(b);
        sum += (b - a) / 6.0 * (fa + 4.0 * f(0.5 * (a + b)) + fb);
        fa = fb;
    }
    return sum;
}

namespace {

double adaptive_panel(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                      double fb, double whole, double abs_tol, int depth) {
    const double m = 0.5 * (a + b);
    const double flm = f(0.5 * (a + m));
    const double frm = f(0.5 * (m + b));
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::fabs(diff) <= 15.0 * abs_tol) return left + right + diff / 15.0;
    return adaptive_panel(f, a, m, fa, flm, fm, left, abs_tol / 2.0, depth - 1) +
           adaptive_panel(f, m, b, fm, frm, fb, right, abs_tol / 2.0, depth - 1);
}

}  // namespace

double TimeGrid::adaptive_simpson(const std::function<double(double)>& f, double tol) const {
    const double coarse = simpson(f);
    const double span = times_.back();
    const double scale = std::max(std::fabs(coarse), 1e-300);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
        const double a = times_[i];
        const double b = times_[i + 1];
        const double fa = f(a);
        const double fm = f(0.5 * (a + b));
        const double fb = f(b);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        sum += adaptive_panel(f, a, b, fa, fm, fb, whole, tol * scale * (b - a) / span, 40);
    }
    return sum;
}

double integration_horizon(const Spectrum& spec) {
    const double lmin = spec.min_positive();
    return lmin > 0.0 ? std::max(20.0, 20.0 / lmin) : 20.0;
}

TimeGrid problem_grid(const GridParams& params, const Spectrum& spec, double eps) {
    GridParams p = params;
    p.t_max = std::max(p.t_max, integration_horizon(spec));
    const double e[] = {eps};
    return TimeGrid::standard(p, e);
}

double sup_norm(const ProfileFunction& a, const TimeGrid& g) {
    double worst = 0.0;
    for (double t : g.times()) worst = std::max(worst, norm(a(t)));
    return worst;
}

double sup_norm_error(const ProfileFunction& a, const ProfileFunction& b, const TimeGrid& g) {
    if (a.size() != b.size()) throw std::invalid_argument("sup_norm_error: incompatible profiles");
    double worst = 0.0;
    for (double t : g.times()) worst = std::max(worst, norm(a(t) - b(t)));
    return worst;
}

namespace {

double weighted_square(const ProfileFunction& a, double t, int w) {
    const double n = norm(a(t));
    return std::pow(t, w) * n * n;
}

}  // namespace

double l2_time_norm(const ProfileFunction& a, const TimeGrid& g, int weight_power) {
    if (weight_power < 0) throw std::invalid_argument("l2_time_norm: weight_power must be >= 0");
    const double horizon = g.back();
    double peak = 0.0;
    for (double t : g.times()) peak = std::max(peak, weighted_square(a, t, weight_power));
    const double tail = weighted_square(a, horizon, weight_power);
    if (tail > 1e-14 * peak) {
        throw std::runtime_error("l2_time_norm: integrand has not decayed at T = " + std::to_string(horizon));
    }
    Real sum = 0.0L;
    for (const auto& sq : a.squared_modes()) sum += sq.shifted(weight_power, 0.0L).integral(horizon);
    return static_cast<double>(sum);
}

double l2_time_norm_quadrature(const ProfileFunction& a, const TimeGrid& g, int weight_power, double tol) {
    return g.adaptive_simpson([&](double t) { return weighted_square(a, t, weight_power); }, tol);
}

namespace {

void require_max_reg_order(int n) {
    if (n < 0 || n > 2) throw std::invalid_argument("max_reg_functional: n must be 0, 1 or 2");
}

double max_reg_value(const Spectrum& spec, const SpecVector& f, int n, double t) {
    const Real weight = n == 0 ? 1.0L : 2.0L;  // 2^n / n! for n <= 2
    Real sum = 0.0L;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const Real l = spec[i];
        const Real c2 = static_cast<Real>(f[i]) * f[i];
        Real m = std::exp(-2.0L * l * t) * c2 / 2.0L;
        if (l > 0) {
            Real lp = 1.0L;
            for (int k = 0; k <= n; ++k) lp *= l;
            m += weight * lp * c2 * moment_integral(n, Complex(-2.0L * l, 0), t).real();
        }
        sum += m;
    }
    return static_cast<double>(sum);
}

}  // namespace

std::vector<double> max_reg_functional(const Spectrum& spec, const SpecVector& f, int n, const TimeGrid& g) {
    require_max_reg_order(n);
    if (f.size() != spec.size()) throw std::invalid_argument("max_reg_functional: size mismatch");
    std::vector<double> out;
    out.reserve(g.size());
    for (double t : g.times()) out.push_back(max_reg_value(spec, f, n, t));
    return out;
}

std::vector<double> max_reg_functional_quadrature(const Spectrum& spec, const SpecVector& f, int n,
                                                  const TimeGrid& g) {
    require_max_reg_order(n);
    if (f.size() != spec.size()) throw std::invalid_argument("max_reg_functional: size mismatch");
    const double weight = n == 0 ? 1.0 : 2.0;
    auto integrand = [&](double s) {
        double sum = 0.0;
        for (std::size_t i = 0; i < spec.size(); ++i) {
            const double l = spec[i];
            sum += std::pow(l, n + 1) * f[i] * f[i] * std::exp(-2.0 * l * s);
        }
        return weight * std::pow(s, n) * sum;
    };
    std::vector<double> out;
    out.reserve(g.size());
    double acc = 0.0;
    const auto times = g.times();
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (k > 0) {
            const TimeGrid panel({0.0, times[k] - times[k - 1]});
            acc += panel.adaptive_simpson([&](double s) { return integrand(times[k - 1] + s); }, 1e-12);
        }
        const SpecVector e = semigroup(spec, times[k], f);
        out.push_back(0.5 * inner(e, e) + acc);
    }
    return out;
}

double resolvent_bound_margin(const Spectrum& spec, double eps, const SpecVector& f) {
    const SpecVector g = apply_power(spec, 0.5, resolvent(spec, eps, f));
    return inner(f, f) / eps - inner(g, g);
}

}  // namespace singlim
