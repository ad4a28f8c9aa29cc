#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "singlim/verification.hpp"

using namespace singlim;
using doctest::Approx;

namespace {

bool all_pass(const std::vector<CheckReport>& rs) {
    bool ok = true;
    for (const auto& r : rs) {
        if (!r.pass) {
            MESSAGE("failed: " << r.id << " " << r.note);
            ok = false;
        }
    }
    return ok;
}

const CheckReport& find(const std::vector<CheckReport>& rs, const std::string& id) {
    for (const auto& r : rs) {
        if (r.id == id) return r;
    }
    throw std::runtime_error("missing report " + id);
}

ProfileFunction decaying(double rate) { return kernel_profile(Spectrum{rate}, 0, 0.0, {1.0}); }

}  // namespace

TEST_CASE("time grid") {
    CHECK_THROWS_AS(TimeGrid({0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid({0.0, 1.0, 1.0}), std::invalid_argument);

    const std::vector<double> eps{0.01};
    const TimeGrid g = TimeGrid::standard(GridParams{}, eps);
    CHECK(g.times().front() == 0.0);
    CHECK(g.back() == 20.0);
    for (double t : {0.01, 0.02, 0.05, 0.1, 1e-6}) {
        bool found = false;
        for (double s : g.times()) found = found || std::fabs(s - t) <= 1e-12 * t;
        CHECK(found);
    }
    for (std::size_t k = 1; k < g.size(); ++k) CHECK(g.times()[k] > g.times()[k - 1]);

    const TimeGrid wide = problem_grid(GridParams{}, Spectrum{0.0, 0.5}, 0.1);
    CHECK(wide.back() == Approx(40.0));
    CHECK(integration_horizon(Spectrum{0.0, 4.0}) == 20.0);
}

TEST_CASE("composite quadrature") {
    const TimeGrid g({0.0, 0.5, 1.0, 3.0});
    // Simpson with midpoints is exact for cubics.
    CHECK(g.simpson([](double t) { return t * t * t - t; }) == Approx(81.0 / 4.0 - 4.5).epsilon(1e-14));
    const double w = g.adaptive_simpson([](double t) { return std::exp(-5 * t); }, 1e-12);
    CHECK(w == Approx((1 - std::exp(-15.0)) / 5.0).epsilon(1e-11));
    double sum = 0.0;
    for (double x : g.quadrature_weights()) sum += x;
    CHECK(sum == Approx(3.0).epsilon(1e-15));
    CHECK(g.quadrature_nodes().size() == g.quadrature_weights().size());
}

TEST_CASE("sup norms") {
    const TimeGrid g = TimeGrid::standard(GridParams{});
    const ProfileFunction a = decaying(1.0);
    CHECK(sup_norm_error(a, a, g) == 0.0);
    CHECK(sup_norm(a, g) == 1.0);

    // Order-zero error scales linearly in eps.
    const std::vector<double> eps{1e-3};
    const TimeGrid ge = TimeGrid::standard(GridParams{}, eps);
    const ProblemData pd = make_problem({1.0}, 1e-3, {1}, {0});
    const double err = sup_norm_error(exact_solution(pd), parabolic_profile(pd), ge);
    CHECK(err > 0.5e-3);
    CHECK(err < 2e-3);
}

TEST_CASE("time integrals") {
    const TimeGrid g = TimeGrid::standard(GridParams{});
    const ProfileFunction a = decaying(1.0);
    CHECK(l2_time_norm(a, g, 0) == Approx(0.5).epsilon(1e-8));
    GridParams longer;
    longer.t_max = 40.0;
    const TimeGrid g40 = TimeGrid::standard(longer);
    CHECK(l2_time_norm(a, g40, 2) == Approx(0.25).epsilon(1e-8));  // Gamma(3) / 2^3
    CHECK(l2_time_norm_quadrature(a, g40, 2) == Approx(0.25).epsilon(1e-8));
    CHECK(l2_time_norm(constant_profile({0.0}), g, 0) == 0.0);
    CHECK_THROWS_AS(l2_time_norm(constant_profile({1.0}), g, 0), std::runtime_error);
}

TEST_CASE("maximal regularity functional") {
    const Spectrum one{1.0};
    const TimeGrid g({0.0, 0.5, 1.0, 2.0, 20.0});
    const auto m0 = max_reg_functional(one, {1.0}, 0, g);
    for (double m : m0) CHECK(m == Approx(0.5).epsilon(1e-14));
    const auto m1 = max_reg_functional(one, {1.0}, 1, g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double t = g.times()[k];
        CHECK(m1[k] == Approx(0.5 - t * std::exp(-2 * t)).epsilon(1e-14));
    }
    CHECK(m1[2] == Approx(0.3646647).epsilon(1e-7));
    const auto m2 = max_reg_functional(one, {1.0}, 2, g);
    // 1/2 - (t + t^2) e^{-2t} for lambda = 1
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double t = g.times()[k];
        CHECK(m2[k] == Approx(0.5 - (t + t * t) * std::exp(-2 * t)).epsilon(1e-13));
    }
    const Spectrum s{0.0, 1.0, 4.0};
    const SpecVector f{1.0, -2.0, 0.5};
    for (int n : {0, 1, 2}) {
        const auto closed = max_reg_functional(s, f, n, g);
        const auto quad = max_reg_functional_quadrature(s, f, n, g);
        CHECK(closed[0] == Approx(inner(f, f) / 2));
        for (std::size_t k = 0; k < g.size(); ++k) CHECK(quad[k] == Approx(closed[k]).epsilon(1e-9));
    }
}

TEST_CASE("max_reg checks document the finite-time deficit") {
    const Spectrum s{0.0, 1.0, 4.0};
    const TimeGrid g = problem_grid(GridParams{}, s, 0.1);
    const auto rs = max_reg_checks(s, {1.0, 0.5, 0.25}, g, "f");
    CHECK(all_pass(rs));
    const auto& n1 = find(rs, "max_reg_n1_f");
    CHECK(n1.note.find("M_n itself dips") != std::string::npos);
    CHECK(n1.note.find("largest deficit") != std::string::npos);
}

TEST_CASE("resolvent bound margin") {
    CHECK(resolvent_bound_margin(Spectrum{0.0}, 0.2, {3.0}) == Approx(9.0 / 0.2));
    // lambda/(1+eps lambda)^2 peaks at 1/(4 eps), when eps lambda = 1.
    CHECK(resolvent_bound_margin(Spectrum{1.0}, 1.0, {1.0}) == Approx(0.75));
    for (double eps : {1.0, 0.1, 1e-3, 1e-6}) {
        CHECK(resolvent_bound_margin(Spectrum{1e-3, 1.0 / eps, 1e6}, eps, {1, 1, 1}) >= 0.0);
    }
}

TEST_CASE("check suites on a small problem") {
    for (double eps : {0.1, 1e-3}) {
        const ProblemData pd = make_problem({0.0, 1.0, 4.0}, eps, {1.0, 0.25, 0.111}, {1.0, 0.25, 0.111});
        const TimeGrid g = problem_grid(GridParams{}, pd.spec, eps);
        CHECK(all_pass(identity_checks(pd, g)));
        CHECK(all_pass(energy_inequality_checks(pd, g)));
        CHECK(kisynski_explicit_bound(pd, g).pass);
        const auto l2 = l2_remark_bounds(pd, g);
        CHECK(all_pass(l2));
        CHECK(find(l2, "semigroup_l2_bound").note.find("kernel component of u1 excluded") != std::string::npos);
        CHECK(all_pass(duhamel_residual(pd, g)));
        CHECK(all_pass(resolvent_bound_checks(pd)));
        const auto w = identity_checks(pd, g);
        CHECK(find(w, "w1_initial_data").note.find("+2 A^2 J u0") != std::string::npos);
    }
}

TEST_CASE("zero data passes trivially") {
    const ProblemData pd = make_problem({0.0, 1.0}, 0.1, {0, 0}, {0, 0});
    const TimeGrid g = problem_grid(GridParams{}, pd.spec, 0.1);
    CHECK(all_pass(identity_checks(pd, g)));
    CHECK(all_pass(energy_inequality_checks(pd, g)));
    CHECK(kisynski_explicit_bound(pd, g).pass);
    CHECK(all_pass(l2_remark_bounds(pd, g)));
    CHECK(all_pass(duhamel_residual(pd, g)));
}

TEST_CASE("explicit w1 for the semigroup bound") {
    const ProblemData pd = make_problem({1.0, 4.0}, 0.1, {0, 0}, {1.0, 2.0});
    const TimeGrid g = problem_grid(GridParams{}, pd.spec, 0.1);
    // int ||e^{-tA} u1||^2 = 1/2 + 4/8 equals ||w1||^2 / 2 with w1 = (1, 1)
    const auto rs = l2_remark_bounds(pd, g, SpecVector{1.0, 1.0});
    CHECK(all_pass(rs));
    CHECK_THROWS_AS(l2_remark_bounds(pd, g, SpecVector{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("duhamel representation on a single mode") {
    const ProblemData pd = make_problem({1.0}, 0.1, {0.0}, {1.0});
    const TimeGrid g = problem_grid(GridParams{}, pd.spec, 0.1);
    const auto rs = duhamel_residual(pd, g);
    CHECK(all_pass(rs));
    CHECK(find(rs, "duhamel_representation").tolerance == Approx(1e-6));
}

TEST_CASE("tolerances") {
    const Tolerances t;
    CHECK(t.get("superposition") == 1e-10);
    CHECK(t.get("u1_decomposition") == 1e-8);
    CHECK_THROWS_AS(t.get("nope"), std::invalid_argument);
    CHECK_THROWS_AS(Tolerances({{"nope", 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Tolerances({{"w_ode", -1.0}}), std::invalid_argument);
    CHECK(Tolerances({{"w_ode", 1e-3}}).get("w_ode") == 1e-3);

    const ProblemData pd = make_problem({1.0, 3.0}, 0.1, {1, 1}, {1, 0});
    const TimeGrid g = problem_grid(GridParams{}, pd.spec, 0.1);
    const auto rs = identity_checks(pd, g, Tolerances({{"superposition", 1e-20}}));
    CHECK_FALSE(find(rs, "superposition").pass);
}

TEST_CASE("rate fitting") {
    for (double p : {2.0, 1.5, 0.5}) {
        ErrorCurve c{"synthetic", {1e-1, 1e-2, 1e-3, 1e-4}, {}};
        for (double e : c.eps) c.error.push_back(3.0 * std::pow(e, p));
        const RateFit f = fit_rate(c);
        CHECK(std::fabs(f.slope - p) <= 1e-10);
        CHECK(f.intercept == Approx(std::log(3.0)).epsilon(1e-10));
        CHECK(f.r2 == Approx(1.0));
        CHECK(f.points_used == 4);
    }
    CHECK_THROWS_AS(fit_rate({"x", {0.1, 0.01}, {1e-2, 1e-4}}), std::invalid_argument);
    // Points at the noise floor are dropped.
    CHECK_THROWS_AS(fit_rate({"x", {0.1, 0.01, 0.001}, {1e-2, 1e-15, 1e-16}}), std::invalid_argument);
}

TEST_CASE("comparison names") {
    for (auto c : {Comparison::order0_thm11i, Comparison::order0_thm11ii, Comparison::order1_theta,
                   Comparison::order2_mainthm, Comparison::cor1, Comparison::cor2, Comparison::synthetic}) {
        CHECK(parse_comparison(to_string(c)) == c);
    }
    CHECK_FALSE(parse_comparison("order3").has_value());
    CHECK(nominal_exponent(Comparison::order2_mainthm) == 1.5);
    CHECK(requires_il0(Comparison::cor2));
    CHECK_FALSE(requires_il0(Comparison::order1_theta));
}

TEST_CASE("rate experiments on a single mode") {
    const Spectrum s{1.0};
    const std::vector<double> eps{1e-2, 1e-3, 1e-4};
    const GridParams grid;
    for (auto c : {Comparison::order0_thm11ii, Comparison::order2_mainthm, Comparison::order1_theta}) {
        const auto e = run_rate_experiment(s, {1.0}, {0.0}, eps, c, grid);
        CHECK(rate_check(e, c, "single").pass);
        CHECK(e.fit.slope >= nominal_exponent(c) - 0.05);
    }
    const auto d = run_rate_experiment(s, {1.0}, {-1.0}, eps, Comparison::cor2, grid);
    CHECK(d.fit.slope >= 1.45);
    CHECK_THROWS_AS(run_rate_experiment(s, {1.0}, {0.0}, eps, Comparison::cor2, grid), std::invalid_argument);
    CHECK_THROWS_AS(run_rate_experiment(s, {1.0}, {0.0}, std::vector<double>{0.1, 0.01}, Comparison::cor1, grid),
                    std::invalid_argument);

    const auto syn = run_rate_experiment(s, {1.0}, {0.0}, eps, Comparison::synthetic, grid, 2.0);
    CHECK(std::fabs(syn.fit.slope - 2.0) <= 1e-10);
    CHECK(rate_check(syn, Comparison::synthetic, "").pass);
    const auto off = run_rate_experiment(s, {1.0}, {0.0}, eps, Comparison::synthetic, grid, 1.0);
    RateExperiment wrong = off;
    wrong.expected_exponent = 2.0;
    CHECK_FALSE(rate_check(wrong, Comparison::synthetic, "").pass);
}
