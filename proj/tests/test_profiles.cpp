#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "singlim/mode_solver.hpp"
#include "singlim/profiles.hpp"

using namespace singlim;
using doctest::Approx;

namespace {

const std::vector<double> kTimes{0.0, 1e-4, 1e-3, 0.01, 0.05, 0.1, 0.3, 1.0, 2.0, 5.0, 12.0};

double sup(const ProfileFunction& f) {
    double m = 0.0;
    for (double t : kTimes) m = std::max(m, norm(f(t)));
    return m;
}

ProblemData three_mode(double eps) { return make_problem({0.0, 1.0, 4.0}, eps, {1.0, 0.25, 0.5}, {0.3, -1.0, 2.0}); }

ProblemData three_mode_il0(double eps) { return make_problem({0.0, 1.0, 4.0}, eps, {1.0, 0.25, 0.5}, {0.0, -0.25, -2.0}); }

}  // namespace

TEST_CASE("problem validation") {
    CHECK_THROWS_AS(make_problem({1.0}, 0.0, {1}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(make_problem({1.0}, 1.5, {1}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(make_problem({1.0, 2.0}, 0.1, {1}, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(make_problem({1.0}, 0.1, {NAN}, {0}), std::invalid_argument);
    const ProblemData pd = make_problem({0.0, 2.0}, 0.1, {1, 3}, {5, -6});
    CHECK(pd.v1 == SpecVector{5, 0});
    CHECK_FALSE(pd.il0_satisfied);
    CHECK(three_mode_il0(0.1).il0_satisfied);
}

TEST_CASE("exact solution") {
    const ProblemData kernel = make_problem({0.0}, 0.3, {1}, {0});
    for (double t : kTimes) CHECK(exact_solution(kernel)(t)[0] == 1.0);

    const ProblemData critical = make_problem({1.0}, 0.25, {1}, {0});
    CHECK(exact_solution(critical)(1.0)[0] == Approx(3.0 * std::exp(-2.0)).epsilon(1e-13));

    // Every mode against the reference integrator.
    const ProblemData pd = three_mode(0.05);
    const ProfileFunction u = exact_solution(pd);
    const ProfileFunction du = u.derivative();
    for (std::size_t i = 0; i < pd.spec.size(); ++i) {
        const ModeParams p{pd.eps, pd.spec[i], pd.u0[i], pd.u1[i]};
        for (double t : {0.0, 0.1, 1.0, 3.0}) {
            const ReferenceState r = rk_reference(p, {}, t, 1e-12);
            CHECK(u(t)[i] == Approx(r.y).epsilon(1e-9).scale(1.0));
            CHECK(du(t)[i] == Approx(r.dy).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("limit profile and layer") {
    const ProblemData pd = make_problem({1.0}, 0.1, {1}, {0});
    CHECK(parabolic_profile(pd)(0.0) == pd.u0);
    CHECK(parabolic_profile(pd)(std::log(2.0))[0] == Approx(0.5).epsilon(1e-15));

    const ProblemData layer = make_problem({0.0}, 0.1, {0}, {1});
    CHECK(theta_layer(layer)(0.0)[0] == 0.0);
    CHECK(theta_layer(layer)(0.2)[0] == Approx(0.1 * (1 - std::exp(-2.0))).epsilon(1e-14));
    CHECK(theta_layer(layer)(0.2)[0] == Approx(0.0864665).epsilon(1e-6));
    CHECK(sup(theta_layer(three_mode_il0(0.1))) == 0.0);
}

TEST_CASE("second-order expansion") {
    const ProblemData pd = three_mode(0.02);
    const SpecVector at0 = main_expansion_profile(pd)(0.0);
    CHECK(norm(at0 - pd.u0) <= 1e-15);

    const ProblemData one = make_problem({1.0}, 0.01, {1}, {0});
    const double want = std::exp(-1.0) + 0.01 * (std::exp(-1.0) - std::exp(-1.0) - std::exp(-100.0));
    CHECK(main_expansion_profile(one)(1.0)[0] == Approx(want).epsilon(1e-14));
    CHECK(main_expansion_profile(one)(1.0)[0] == Approx(0.3678794).epsilon(1e-7));

    const ProblemData il0 = three_mode_il0(0.02);
    CHECK(norm(il0_expansion_profile(il0)(0.0) - il0.u0) <= 1e-15);
    for (double t : kTimes) {
        CHECK(norm(il0_expansion_profile(il0)(t) - main_expansion_profile(il0)(t)) <= 1e-15);
    }
}

TEST_CASE("derivative expansion") {
    const ProblemData il0 = three_mode_il0(0.01);
    CHECK(norm(derivative_expansion_profile(il0)(0.0) - il0.u1) <= 1e-14);
    const ProblemData kernel_only = make_problem({0.0, 0.0}, 0.1, {1, 2}, {0, 0});
    CHECK(sup(derivative_expansion_profile(kernel_only)) == 0.0);
    CHECK_THROWS_AS(derivative_expansion_profile(three_mode(0.01)), std::invalid_argument);
}

TEST_CASE("split components") {
    const ProblemData il0 = three_mode_il0(0.1);
    CHECK(sup(split_components(il0).second) == 0.0);
    const ProblemData no_u0 = make_problem({0.0, 1.0, 4.0}, 0.1, {0, 0, 0}, {1, 2, 3});
    CHECK(sup(split_components(no_u0).first) == 0.0);
    const ProblemData pd = three_mode(0.1);
    const auto [a, b] = split_components(pd);
    CHECK(norm(a(0.0) - pd.u0) <= 1e-15);
    CHECK(norm(b(0.0)) <= 1e-15);
    CHECK(norm(a.derivative()(0.0) + apply_power(pd.spec, 1.0, pd.u0)) <= 1e-13);
    CHECK(norm(b.derivative()(0.0) - pd.v1) <= 1e-13);
}

TEST_CASE("auxiliary profiles vanish for vanishing data") {
    const ProblemData zero = make_problem({0.0, 1.0, 4.0}, 0.1, {0, 0, 0}, {0, 0, 0});
    CHECK(sup(aux_U1(zero)) == 0.0);
    CHECK(sup(aux_Z(zero)) == 0.0);
    CHECK(sup(aux_tilde_U(zero, 1)) == 0.0);
    CHECK(sup(aux_W(zero, 1).w) == 0.0);
    const ProblemData il0 = three_mode_il0(0.1);
    CHECK(sup(aux_tilde_U(il0, 2)) == 0.0);
    CHECK(sup(tilde_V2(il0)) == 0.0);
    const ProblemData kernel = make_problem({0.0}, 0.1, {2}, {1});
    CHECK(sup(aux_Z(kernel)) == 0.0);
    CHECK(sup(aux_V(kernel, 1)) == 0.0);
}

TEST_CASE("kernel mode first decomposition holds exactly") {
    const ProblemData pd = make_problem({0.0}, 0.1, {1.5}, {-2.0});
    const ProfileFunction rhs = kernel_profile(pd.spec, 0, 0.0, pd.u0 + pd.eps * resolvent(pd.spec, pd.eps, pd.u1)) +
                                pd.eps * aux_U1(pd).derivative();
    CHECK(sup(exact_solution(pd) - rhs) <= 1e-15);
}

TEST_CASE("decompositions on a single mode") {
    const ProblemData pd = make_problem({1.0}, 0.1, {1}, {0.5});
    const double e = pd.eps;
    const auto [u1e, u2e] = split_components(pd);
    const SpecVector ju0 = resolvent(pd.spec, e, pd.u0);
    const SpecVector jv1 = resolvent(pd.spec, e, pd.v1);
    CHECK(sup(u1e - kernel_profile(pd.spec, 0, 0.0, ju0) - e * aux_tilde_U(pd, 1).derivative()) <= 1e-9);
    CHECK(sup(u2e - e * kernel_profile(pd.spec, 0, 0.0, jv1) - e * aux_tilde_U(pd, 2).derivative()) <= 1e-9);
    CHECK(sup(u1e - kernel_profile(pd.spec, 0, 0.0, pd.u0) - e * aux_Z(pd).powered(pd.spec, 0.5)) <= 1e-9);
    // With the opposite forcing sign the same identity is far off.
    CHECK(sup(u1e - kernel_profile(pd.spec, 0, 0.0, pd.u0) - e * aux_Z_plus(pd).powered(pd.spec, 0.5)) > 1e-3);
}

TEST_CASE("V profiles") {
    const ProblemData pd = three_mode(0.1);
    const SpecVector ju0 = resolvent(pd.spec, pd.eps, pd.u0);
    const SpecVector jv1 = resolvent(pd.spec, pd.eps, pd.v1);
    CHECK(norm(aux_V(pd, 1)(0.0) - 2 * pd.eps * apply_power(pd.spec, 1.0, ju0)) <= 1e-15);
    CHECK(norm(aux_V(pd, 2)(0.0) + 2 * pd.eps * jv1) <= 1e-15);
    for (int j : {1, 2}) {
        const ProfileFunction diff = aux_V(pd, j).derivative().derivative() - aux_V_second_derivative_formula(pd, j);
        CHECK(sup(diff) <= 1e-12 * sup(aux_V_second_derivative_formula(pd, j)));
    }
}

TEST_CASE("W profiles") {
    const ProblemData pd = three_mode(0.1);
    const AuxW w1 = aux_W(pd, 1);
    CHECK(w1.max_relative_ode_residual <= 1e-8);
    const SpecVector ju0 = resolvent(pd.spec, pd.eps, pd.u0);
    CHECK(norm(w1.initial_value + apply_power(pd.spec, 1.0, ju0)) <= 1e-12);
    CHECK(norm(w1.initial_velocity - 2.0 * apply_power(pd.spec, 2.0, ju0)) <= 1e-11);

    const AuxW w2 = aux_W(pd, 2);
    const SpecVector jv1 = resolvent(pd.spec, pd.eps, pd.v1);
    CHECK(w2.max_relative_ode_residual <= 1e-8);
    CHECK(norm(w2.initial_value - jv1) <= 1e-12);
    CHECK(norm(w2.initial_velocity + 2.0 * apply_power(pd.spec, 1.0, jv1)) <= 1e-11);
    CHECK(sup(w2.w - w2.w_from_ode) <= 1e-10 * sup(w2.w));

    // Forced equation checked directly at a few times.
    const ProfileFunction vdd = aux_V_second_derivative_formula(pd, 1);
    const ProfileFunction d1 = w1.w.derivative();
    const ProfileFunction d2 = d1.derivative();
    for (double t : {0.0, 0.05, 0.5, 3.0}) {
        const SpecVector r = pd.eps * d2(t) + apply_power(pd.spec, 1.0, w1.w(t)) + d1(t) + vdd(t);
        CHECK(norm(r) <= 1e-9 * (1.0 + norm(vdd(t))));
    }
}

TEST_CASE("initial layer identity") {
    const ProblemData pd = three_mode(0.05);
    const ProfileFunction u2e = split_components(pd).second;
    const double e = pd.eps;
    const ProfileFunction r = e * u2e.derivative() + u2e - e * kernel_profile(pd.spec, 0, 0.0, pd.v1) -
                              e * std::sqrt(e) * tilde_V2(pd);
    CHECK(sup(r) <= 1e-9 * (norm(pd.u0) + norm(pd.u1)));
}

TEST_CASE("profile arithmetic and labels") {
    const ProblemData pd = three_mode(0.1);
    const ProfileFunction u = exact_solution(pd);
    ProfileFunction twice = u + u;
    twice *= 0.5L;
    CHECK(sup(twice - u) <= 1e-15);
    CHECK(u.relabeled("x").label() == "x");
    CHECK(u.size() == 3);
    const auto sq = u.squared_modes();
    for (double t : {0.0, 0.4}) {
        double s = 0.0;
        for (const auto& m : sq) s += m(t);
        CHECK(s == Approx(std::pow(norm(u(t)), 2)).epsilon(1e-13));
    }
    CHECK(norm(layer_profile(0.1, {2.0})(0.1) - SpecVector{2.0 * std::exp(-1.0)}) <= 1e-15);
    CHECK(norm(constant_profile({1.0, 2.0})(7.0) - SpecVector{1.0, 2.0}) == 0.0);
}
