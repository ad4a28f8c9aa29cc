#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "singlim/mode_solver.hpp"

namespace singlim {

namespace {

constexpr long kMaxSteps = 20'000'000;

}  // namespace

std::vector<ReferenceState> rk_reference(const ModeParams& p, const ForcingTerm& f,
                                         std::span<const double> times, double tol) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;

    if (!(p.eps > 0.0) || !(p.lambda >= 0.0)) throw std::invalid_argument("rk_reference: invalid params");
    if (!(tol >= 1e-13 && tol <= 1e-6)) throw std::invalid_argument("rk_reference: tol must be in [1e-13, 1e-6]");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || (i > 0 && times[i] < times[i - 1])) {
            throw std::invalid_argument("rk_reference: times must be nonnegative and nondecreasing");
        }
    }

    const double eps = p.eps;
    const double lambda = p.lambda;
    auto rhs = [&](const State& x, State& dxdt, double t) {
        dxdt[0] = x[1];
        dxdt[1] = (f(t) - x[1] - lambda * x[0]) / eps;
    };

    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
    State x{p.y0, p.y1};
    double t = 0.0;
    double dt = eps / 2.0;
    long steps = 0;

    std::vector<ReferenceState> out;
    out.reserve(times.size());
    for (double target : times) {
        while (t < target) {
            double step = std::min(dt, target - t);
            const bool clipped = step < dt;
            if (stepper.try_step(rhs, x, t, step) == odeint::success) {
                // A step shortened to land on the target says nothing about dt.
                if (!clipped) dt = step;
            } else {
                dt = step;
            }
            if (++steps > kMaxSteps) {
                throw std::runtime_error("rk_reference: step budget exhausted (eps too small for the oracle)");
            }
        }
        out.push_back({x[0], x[1]});
    }
    return out;
}

ReferenceState rk_reference(const ModeParams& p, const ForcingTerm& f, double t, double tol) {
    const double times[] = {t};
    return rk_reference(p, f, times, tol)[0];
}

}  // namespace singlim
