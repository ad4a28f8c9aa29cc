#include "singlim/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "singlim/mode_solver.hpp"

namespace singlim {

ProblemData make_problem(Spectrum spec, double eps, SpecVector u0, SpecVector u1) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("ProblemData: eps must lie in (0, 1]");
    if (u0.size() != spec.size() || u1.size() != spec.size()) {
        throw std::invalid_argument("ProblemData: u0/u1 length must match the spectrum");
    }
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (!std::isfinite(u0[i]) || !std::isfinite(u1[i])) {
            throw std::invalid_argument("ProblemData: data must be finite");
        }
    }
    const SpecVector au0 = apply_power(spec, 1.0, u0);
    SpecVector v1 = au0 + u1;
    const bool il0 = norm(v1) <= 1e-12 * (norm(au0) + norm(u1) + 1.0);
    return ProblemData{std::move(spec), eps, std::move(u0), std::move(u1), std::move(v1), il0};
}

ProfileFunction::ProfileFunction(std::string label, std::vector<ExpPoly> modes)
    : label_(std::move(label)), modes_(std::move(modes)) {}

SpecVector ProfileFunction::operator()(double t) const {
    SpecVector out(modes_.size());
    for (std::size_t i = 0; i < modes_.size(); ++i) out[i] = modes_[i](t);
    return out;
}

ProfileFunction ProfileFunction::derivative() const {
    std::vector<ExpPoly> d;
    d.reserve(modes_.size());
    for (const auto& m : modes_) d.push_back(m.derivative());
    return ProfileFunction(label_ + "'", std::move(d));
}

std::vector<ExpPoly> ProfileFunction::squared_modes() const {
    std::vector<ExpPoly> out;
    out.reserve(modes_.size());
    for (const auto& m : modes_) out.push_back(m * m);
    return out;
}

ProfileFunction& ProfileFunction::operator+=(const ProfileFunction& other) {
    if (other.size() != size()) throw std::invalid_argument("ProfileFunction size mismatch");
    for (std::size_t i = 0; i < modes_.size(); ++i) modes_[i] += other.modes_[i];
    return *this;
}

ProfileFunction& ProfileFunction::operator-=(const ProfileFunction& other) {
    if (other.size() != size()) throw std::invalid_argument("ProfileFunction size mismatch");
    for (std::size_t i = 0; i < modes_.size(); ++i) modes_[i] -= other.modes_[i];
    return *this;
}

ProfileFunction& ProfileFunction::operator*=(Real s) {
    for (auto& m : modes_) m *= s;
    return *this;
}

ProfileFunction ProfileFunction::powered(const Spectrum& spec, double s) const {
    if (spec.size() != size()) throw std::invalid_argument("ProfileFunction size mismatch");
    if (!(s >= 0.0)) throw std::invalid_argument("powered: exponent must be >= 0");
    ProfileFunction out = *this;
    for (std::size_t i = 0; i < modes_.size(); ++i) out.modes_[i] *= eigen_power(spec[i], s);
    return out;
}

ProfileFunction ProfileFunction::relabeled(std::string label) const {
    ProfileFunction out = *this;
    out.label_ = std::move(label);
    return out;
}

ProfileFunction constant_profile(const SpecVector& f, std::string label) {
    std::vector<ExpPoly> modes(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) modes[i] = ExpPoly::constant(f[i]);
    return ProfileFunction(std::move(label), std::move(modes));
}

ProfileFunction kernel_profile(const Spectrum& spec, int n, double m, const SpecVector& f,
                               std::string label) {
    if (n < 0 || !(m >= 0.0)) throw std::invalid_argument("kernel_profile: need n >= 0, m >= 0");
    if (f.size() != spec.size()) throw std::invalid_argument("kernel_profile: size mismatch");
    std::vector<ExpPoly> modes(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Real coef = static_cast<Real>(eigen_power(spec[i], m)) * f[i];
        modes[i] = ExpPoly::term(Complex(coef, 0), n, Complex(-static_cast<Real>(spec[i]), 0));
    }
    return ProfileFunction(std::move(label), std::move(modes));
}

ProfileFunction layer_profile(double eps, const SpecVector& f, std::string label) {
    std::vector<ExpPoly> modes(f.size());
    const Real rate = -1.0L / static_cast<Real>(eps);
    for (std::size_t i = 0; i < f.size(); ++i) modes[i] = ExpPoly::exponential(f[i], rate);
    return ProfileFunction(std::move(label), std::move(modes));
}

namespace {

ProfileFunction homogeneous_profile(const ProblemData& pd, const SpecVector& y0, const SpecVector& y1,
                                    std::string label) {
    std::vector<ExpPoly> modes(pd.spec.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        modes[i] = homogeneous_form(pd.eps, pd.spec[i], y0[i], y1[i]);
    }
    return ProfileFunction(std::move(label), std::move(modes));
}

/// Per mode: eps y'' + y' + lambda y = (a_i + b_i t) e^{-lambda t}.
ProfileFunction forced_profile(const ProblemData& pd, const SpecVector& y0, const SpecVector& y1,
                               const SpecVector& a, const SpecVector& b, std::string label) {
    std::vector<ExpPoly> modes(pd.spec.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const ModeParams p{pd.eps, pd.spec[i], y0[i], y1[i]};
        const ForcingTerm f{a[i], b[i], pd.spec[i]};
        modes[i] = solve_forced(p, f).closed_form();
    }
    return ProfileFunction(std::move(label), std::move(modes));
}

void require_j(int j) {
    if (j != 1 && j != 2) throw std::invalid_argument("auxiliary index j must be 1 or 2");
}

}  // namespace

ProfileFunction exact_solution(const ProblemData& pd) {
    return homogeneous_profile(pd, pd.u0, pd.u1, "u_eps");
}

ProfileFunction parabolic_profile(const ProblemData& pd) {
    return kernel_profile(pd.spec, 0, 0.0, pd.u0, "v");
}

ProfileFunction theta_layer(const ProblemData& pd) {
    ProfileFunction out = constant_profile(pd.v1) - layer_profile(pd.eps, pd.v1);
    out *= pd.eps;
    return out.relabeled("theta");
}

ProfileFunction main_expansion_profile(const ProblemData& pd) {
    ProfileFunction correction = kernel_profile(pd.spec, 0, 0.0, pd.v1) -
                                 kernel_profile(pd.spec, 1, 2.0, pd.u0) -
                                 layer_profile(pd.eps, pd.v1);
    correction *= pd.eps;
    return (kernel_profile(pd.spec, 0, 0.0, pd.u0) + correction).relabeled("order2_expansion");
}

ProfileFunction il0_expansion_profile(const ProblemData& pd) {
    ProfileFunction correction = kernel_profile(pd.spec, 1, 2.0, pd.u0);
    correction *= -pd.eps;
    return (kernel_profile(pd.spec, 0, 0.0, pd.u0) + correction).relabeled("il0_expansion");
}

ProfileFunction derivative_expansion_profile(const ProblemData& pd) {
    if (!pd.il0_satisfied) {
        throw std::invalid_argument("derivative_expansion_profile requires u1 + A u0 = 0");
    }
    const SpecVector a2u0 = apply_power(pd.spec, 2.0, pd.u0);
    ProfileFunction correction = kernel_profile(pd.spec, 1, 3.0, pd.u0) -
                                 kernel_profile(pd.spec, 0, 2.0, pd.u0) +
                                 layer_profile(pd.eps, a2u0);
    correction *= pd.eps;
    ProfileFunction out = kernel_profile(pd.spec, 0, 1.0, pd.u0);
    out *= -1.0L;
    return (out + correction).relabeled("derivative_expansion");
}

std::pair<ProfileFunction, ProfileFunction> split_components(const ProblemData& pd) {
    const SpecVector minus_au0 = -1.0 * apply_power(pd.spec, 1.0, pd.u0);
    return {homogeneous_profile(pd, pd.u0, minus_au0, "u_1eps"),
            homogeneous_profile(pd, SpecVector(pd.spec.size()), pd.v1, "u_2eps")};
}

ProfileFunction aux_U1(const ProblemData& pd) {
    const SpecVector ju1 = resolvent(pd.spec, pd.eps, pd.u1);
    const SpecVector g = pd.u0 + pd.eps * ju1;
    const std::size_t n = pd.spec.size();
    return forced_profile(pd, -pd.eps * ju1, -1.0 * ju1, apply_power(pd.spec, 1.0, g), SpecVector(n),
                          "U_1eps");
}

ProfileFunction aux_Z(const ProblemData& pd) {
    const std::size_t n = pd.spec.size();
    return forced_profile(pd, SpecVector(n), SpecVector(n), -1.0 * apply_power(pd.spec, 1.5, pd.u0),
                          SpecVector(n), "Z_eps");
}

ProfileFunction aux_Z_plus(const ProblemData& pd) {
    const std::size_t n = pd.spec.size();
    return forced_profile(pd, SpecVector(n), SpecVector(n), apply_power(pd.spec, 1.5, pd.u0),
                          SpecVector(n), "Z_eps_plus");
}

ProfileFunction aux_tilde_U(const ProblemData& pd, int j) {
    require_j(j);
    const std::size_t n = pd.spec.size();
    if (j == 1) {
        const SpecVector aju0 = apply_power(pd.spec, 1.0, resolvent(pd.spec, pd.eps, pd.u0));
        return forced_profile(pd, pd.eps * aju0, aju0, aju0, SpecVector(n), "U~_1eps");
    }
    const SpecVector jv1 = resolvent(pd.spec, pd.eps, pd.v1);
    return forced_profile(pd, -pd.eps * jv1, -1.0 * jv1,
                          pd.eps * apply_power(pd.spec, 1.0, jv1), SpecVector(n), "U~_2eps");
}

ProfileFunction aux_V(const ProblemData& pd, int j) {
    require_j(j);
    if (j == 1) {
        const SpecVector ju0 = resolvent(pd.spec, pd.eps, pd.u0);
        ProfileFunction first = kernel_profile(pd.spec, 0, 1.0, ju0);
        first *= 2.0L * pd.eps;
        return (first + kernel_profile(pd.spec, 1, 1.0, ju0)).relabeled("V_1eps");
    }
    const SpecVector jv1 = resolvent(pd.spec, pd.eps, pd.v1);
    ProfileFunction first = kernel_profile(pd.spec, 0, 0.0, jv1);
    first *= -2.0L * pd.eps;
    ProfileFunction second = kernel_profile(pd.spec, 1, 1.0, jv1);
    second *= pd.eps;
    return (first + second).relabeled("V_2eps");
}

ProfileFunction aux_V_second_derivative_formula(const ProblemData& pd, int j) {
    require_j(j);
    if (j == 1) {
        const SpecVector ju0 = resolvent(pd.spec, pd.eps, pd.u0);
        ProfileFunction bracket = kernel_profile(pd.spec, 0, 3.0, ju0);
        bracket *= pd.eps;
        bracket -= kernel_profile(pd.spec, 0, 2.0, ju0);
        bracket *= 2.0L;
        return (bracket + kernel_profile(pd.spec, 1, 3.0, ju0)).relabeled("V_1eps''");
    }
    const SpecVector jv1 = resolvent(pd.spec, pd.eps, pd.v1);
    ProfileFunction first = kernel_profile(pd.spec, 0, 2.0, jv1);
    first *= -4.0L * pd.eps;
    ProfileFunction second = kernel_profile(pd.spec, 1, 3.0, jv1);
    second *= pd.eps;
    return (first + second).relabeled("V_2eps''");
}

AuxW aux_W(const ProblemData& pd, int j) {
    require_j(j);
    const std::size_t n = pd.spec.size();
    ProfileFunction w = aux_tilde_U(pd, j) - aux_V(pd, j);
    if (j == 2) w += split_components(pd).second;
    w *= 1.0L / pd.eps;
    w = w.relabeled(j == 1 ? "W_1eps" : "W_2eps");

    const ProfileFunction dw = w.derivative();
    const ProfileFunction ddw = dw.derivative();
    const SpecVector w0 = w(0.0);
    const SpecVector w1 = dw(0.0);

    // -V'' per mode is (a + b t) e^{-lambda t}.
    SpecVector a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double l = pd.spec[i];
        if (j == 1) {
            const double ju0 = pd.u0[i] / (1.0 + pd.eps * l);
            a[i] = -2.0 * l * l * (pd.eps * l - 1.0) * ju0;
            b[i] = -l * l * l * ju0;
        } else {
            const double jv1 = pd.v1[i] / (1.0 + pd.eps * l);
            a[i] = 4.0 * pd.eps * l * l * jv1;
            b[i] = -pd.eps * l * l * l * jv1;
        }
    }
    ProfileFunction w_ode = forced_profile(pd, w0, w1, a, b, w.label() + "_ode");

    const ProfileFunction vdd = aux_V_second_derivative_formula(pd, j);
    const double e = pd.eps;
    const double check_times[] = {0.0,   0.5 * e, e,   2 * e, 5 * e, 10 * e, 20 * e, 1e-2,
                                  0.1,   0.5,     1.0, 2.0,   5.0,   10.0,   20.0};
    double worst = 0.0;
    for (double t : check_times) {
        const SpecVector term_dd = e * ddw(t);
        const SpecVector term_d = dw(t);
        const SpecVector term_a = apply_power(pd.spec, 1.0, w(t));
        const SpecVector term_f = vdd(t);
        const double residual = norm(term_dd + term_d + term_a + term_f);
        const double scale = norm(term_dd) + norm(term_d) + norm(term_a) + norm(term_f);
        if (scale > 0.0) worst = std::max(worst, residual / scale);
    }
    if (!(worst <= kAuxWOdeTolerance)) {
        throw std::runtime_error(w.label() + " violates its forced equation: relative residual " +
                                 std::to_string(worst));
    }
    return AuxW{std::move(w), std::move(w_ode), w0, w1, worst};
}

ProfileFunction tilde_V2(const ProblemData& pd) {
    const AuxW w2 = aux_W(pd, 2);
    const SpecVector jv1 = resolvent(pd.spec, pd.eps, pd.v1);
    ProfileFunction bracket = kernel_profile(pd.spec, 0, 1.0, jv1);
    bracket *= 2.0L;
    bracket -= kernel_profile(pd.spec, 1, 2.0, jv1);
    ProfileFunction out = w2.w.derivative() + bracket;
    out *= std::sqrt(static_cast<Real>(pd.eps));
    return out.relabeled("V~_2eps");
}

}  // namespace singlim
