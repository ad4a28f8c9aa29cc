#pragma once

#include <array>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "singlim/exp_poly.hpp"

namespace singlim {

/// Absolute threshold on the discriminant 1 - 4 eps lambda below which the
/// two roots are treated as coalesced.
inline constexpr double kCriticalThreshold = 1e-9;
/// Relative threshold for detecting that -nu is a characteristic root.
inline constexpr double kResonanceThreshold = 1e-9;

/// One eigenmode of eps y'' + y' + lambda y = f(t).
struct ModeParams {
    double eps = 1.0;
    double lambda = 0.0;
    double y0 = 0.0;
    double y1 = 0.0;
};

enum class Damping { overdamped, critical, underdamped, degenerate_lambda_zero };

std::string_view to_string(Damping d) noexcept;

/// Roots of eps mu^2 + mu + lambda = 0. `plus` is the slow root.
struct RootPair {
    Complex plus;
    Complex minus;
    Damping classification = Damping::overdamped;
    Real discriminant = 0;
};

/// f(t) = (a + b t) e^{-nu t}
struct ForcingTerm {
    double a = 0.0;
    double b = 0.0;
    double nu = 0.0;

    double operator()(double t) const;
    bool is_zero() const noexcept { return a == 0.0 && b == 0.0; }
};

RootPair characteristic_roots(double eps, double lambda);

/// Closed-form solution of one mode equation.
class ModeTrajectory {
public:
    ModeTrajectory(ModeParams params, ForcingTerm forcing, RootPair roots,
                   std::array<Complex, 2> homogeneous, std::array<Real, 4> particular,
                   int resonance_order, ExpPoly solution);

    double value(double t) const { return solution_(t); }
    double derivative(double t) const { return velocity_(t); }
    double second_derivative(double t) const { return acceleration_(t); }
    std::pair<double, double> operator()(double t) const { return {value(t), derivative(t)}; }

    const ModeParams& params() const noexcept { return params_; }
    const ForcingTerm& forcing() const noexcept { return forcing_; }
    const RootPair& roots() const noexcept { return roots_; }
    /// Coefficients multiplying the two homogeneous modes (c+, c-), or
    /// (c1, c2) in the critical and underdamped branches.
    const std::array<Complex, 2>& homogeneous_coefficients() const noexcept { return homogeneous_; }
    /// Particular solution q0 + q1 t + q2 t^2 + q3 t^3, times e^{-nu t}.
    const std::array<Real, 4>& particular_coefficients() const noexcept { return particular_; }
    /// 0 for the plain particular solution, 1 or 2 when the degree was raised
    /// because -nu is a simple or double characteristic root.
    int resonance_order() const noexcept { return resonance_order_; }

    const ExpPoly& closed_form() const noexcept { return solution_; }

    /// |eps y'' + y' + lambda y - f| at t.
    double ode_residual(double t) const;

private:
    ModeParams params_;
    ForcingTerm forcing_;
    RootPair roots_;
    std::array<Complex, 2> homogeneous_;
    std::array<Real, 4> particular_;
    int resonance_order_;
    ExpPoly solution_;
    ExpPoly velocity_;
    ExpPoly acceleration_;
};

ModeTrajectory solve_homogeneous(const ModeParams& p);
ModeTrajectory solve_forced(const ModeParams& p, const ForcingTerm& f);

/// Homogeneous solution with data (y0, y1) as an exponential polynomial.
ExpPoly homogeneous_form(double eps, double lambda, Real y0, Real y1);

struct ReferenceState {
    double y = 0.0;
    double dy = 0.0;
};

/// Adaptive Runge-Kutta-Fehlberg 7(8) integration of the mode equation,
/// independent of the closed form. Throws std::runtime_error when the step
/// budget is exhausted.
ReferenceState rk_reference(const ModeParams& p, const ForcingTerm& f, double t, double tol);
/// Same, sampled at an increasing list of times in one pass.
std::vector<ReferenceState> rk_reference(const ModeParams& p, const ForcingTerm& f,
                                         std::span<const double> times, double tol);

}  // namespace singlim
