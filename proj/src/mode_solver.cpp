#include "singlim/mode_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace singlim {

std::string_view to_string(Damping d) noexcept {
    switch (d) {
        case Damping::overdamped: return "overdamped";
        case Damping::critical: return "critical";
        case Damping::underdamped: return "underdamped";
        case Damping::degenerate_lambda_zero: return "degenerate_lambda_zero";
    }
    return "unknown";
}

double ForcingTerm::operator()(double t) const { return (a + b * t) * std::exp(-nu * t); }

namespace {

void validate(double eps, double lambda) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("mode solver: eps must be > 0");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("mode solver: lambda must be >= 0");
    }
}

}  // namespace

RootPair characteristic_roots(double eps, double lambda) {
    validate(eps, lambda);
    const Real e = eps;
    const Real l = lambda;
    RootPair r;
    r.discriminant = 1.0L - 4.0L * e * l;
    if (lambda == 0.0) {
        r.plus = Complex(0, 0);
        r.minus = Complex(-1.0L / e, 0);
        r.classification = Damping::degenerate_lambda_zero;
        return r;
    }
    const Real d = r.discriminant;
    if (d > kCriticalThreshold) {
        const Real sq = std::sqrt(d);
        r.plus = Complex(-2.0L * l / (1.0L + sq), 0);
        r.minus = Complex(-(1.0L + sq) / (2.0L * e), 0);
        r.classification = Damping::overdamped;
    } else if (d >= -kCriticalThreshold) {
        // Reported roots are the exact ones; the solution uses the
        // double-root expansion.
        const Real alpha = -1.0L / (2.0L * e);
        const Complex half_gap = std::sqrt(Complex(d, 0)) / (2.0L * e);
        r.plus = alpha + half_gap;
        r.minus = alpha - half_gap;
        r.classification = Damping::critical;
    } else {
        const Real alpha = -1.0L / (2.0L * e);
        const Real omega = std::sqrt(-d) / (2.0L * e);
        r.plus = Complex(alpha, omega);
        r.minus = Complex(alpha, -omega);
        r.classification = Damping::underdamped;
    }
    return r;
}

namespace {

struct HomogeneousPart {
    std::array<Complex, 2> coefficients;
    ExpPoly form;
};

HomogeneousPart build_homogeneous(double eps, const RootPair& roots, Real y0, Real y1) {
    const Real e = eps;
    HomogeneousPart h;
    switch (roots.classification) {
        case Damping::degenerate_lambda_zero: {
            const Real c_slow = y0 + e * y1;
            const Real c_fast = -e * y1;
            h.coefficients = {Complex(c_slow, 0), Complex(c_fast, 0)};
            h.form.add(Complex(c_slow, 0), 0, Complex(0, 0));
            h.form.add(Complex(c_fast, 0), 0, roots.minus);
            break;
        }
        case Damping::overdamped: {
            const Complex gap = roots.plus - roots.minus;
            const Complex cp = (y1 - roots.minus * y0) / gap;
            const Complex cm = (roots.plus * y0 - y1) / gap;
            h.coefficients = {cp, cm};
            h.form.add(cp, 0, roots.plus);
            h.form.add(cm, 0, roots.minus);
            break;
        }
        case Damping::critical: {
            // e^{at}[y0 cosh(bt) + w sinh(bt)/b] to second order in b^2 = d/(4 eps^2).
            const Real alpha = -1.0L / (2.0L * e);
            const Real beta_sq = roots.discriminant / (4.0L * e * e);
            const Real w = y1 - alpha * y0;
            const Complex rate(alpha, 0);
            h.coefficients = {Complex(y0, 0), Complex(w, 0)};
            h.form.add(Complex(y0, 0), 0, rate);
            h.form.add(Complex(w, 0), 1, rate);
            h.form.add(Complex(y0 * beta_sq / 2.0L, 0), 2, rate);
            h.form.add(Complex(w * beta_sq / 6.0L, 0), 3, rate);
            break;
        }
        case Damping::underdamped: {
            const Real alpha = roots.plus.real();
            const Real omega = roots.plus.imag();
            const Real c1 = y0;
            const Real c2 = (y1 - alpha * y0) / omega;
            h.coefficients = {Complex(c1, 0), Complex(c2, 0)};
            h.form.add(Complex(c1 / 2.0L, -c2 / 2.0L), 0, roots.plus);
            h.form.add(Complex(c1 / 2.0L, c2 / 2.0L), 0, roots.minus);
            break;
        }
    }
    return h;
}

}  // namespace

ExpPoly homogeneous_form(double eps, double lambda, Real y0, Real y1) {
    return build_homogeneous(eps, characteristic_roots(eps, lambda), y0, y1).form;
}

ModeTrajectory::ModeTrajectory(ModeParams params, ForcingTerm forcing, RootPair roots,
                               std::array<Complex, 2> homogeneous, std::array<Real, 4> particular,
                               int resonance_order, ExpPoly solution)
    : params_(params),
      forcing_(forcing),
      roots_(roots),
      homogeneous_(homogeneous),
      particular_(particular),
      resonance_order_(resonance_order),
      solution_(std::move(solution)),
      velocity_(solution_.derivative()),
      acceleration_(velocity_.derivative()) {}

double ModeTrajectory::ode_residual(double t) const {
    const Real lhs = static_cast<Real>(params_.eps) * acceleration_.value(t) + velocity_.value(t) +
                     static_cast<Real>(params_.lambda) * solution_.value(t);
    const Real f = (static_cast<Real>(forcing_.a) + static_cast<Real>(forcing_.b) * t) *
                   std::exp(-static_cast<Real>(forcing_.nu) * t);
    return static_cast<double>(std::fabs(lhs - f));
}

ModeTrajectory solve_homogeneous(const ModeParams& p) { return solve_forced(p, ForcingTerm{}); }

ModeTrajectory solve_forced(const ModeParams& p, const ForcingTerm& f) {
    validate(p.eps, p.lambda);
    if (!(f.nu >= 0.0) || !std::isfinite(f.nu) || !std::isfinite(f.a) || !std::isfinite(f.b)) {
        throw std::invalid_argument("solve_forced: forcing must be finite with nu >= 0");
    }
    const RootPair roots = characteristic_roots(p.eps, p.lambda);
    const Real e = p.eps;
    const Real l = p.lambda;
    const Real nu = f.nu;
    const Real a = f.a;
    const Real b = f.b;

    // P(t) e^{-nu t} solves the equation iff eps P'' + sigma P' + rho P = a + b t.
    std::array<Real, 4> q{0, 0, 0, 0};
    int resonance = 0;
    if (!f.is_zero()) {
        const Real rho = e * nu * nu - nu + l;
        const Real sigma = 1.0L - 2.0L * e * nu;
        const Real rho_scale = std::max({1.0L, e * nu * nu, nu, l});
        if (std::fabs(rho) > kResonanceThreshold * rho_scale) {
            q[1] = b / rho;
            q[0] = (a - sigma * q[1]) / rho;
        } else if (std::fabs(sigma) > kResonanceThreshold * std::max(1.0L, 2.0L * e * nu)) {
            resonance = 1;
            q[2] = b / (2.0L * sigma);
            q[1] = (a - 2.0L * e * q[2]) / sigma;
        } else {
            resonance = 2;
            q[2] = a / (2.0L * e);
            q[3] = b / (6.0L * e);
        }
    }

    const Real y0h = p.y0 - q[0];
    const Real y1h = p.y1 - (q[1] - nu * q[0]);
    HomogeneousPart h = build_homogeneous(p.eps, roots, y0h, y1h);
    ExpPoly y = std::move(h.form);
    for (int k = 0; k < 4; ++k) {
        if (q[k] != 0) y.add(Complex(q[k], 0), k, Complex(-nu, 0));
    }
    return ModeTrajectory(p, f, roots, h.coefficients, q, resonance, std::move(y));
}

}  // namespace singlim
