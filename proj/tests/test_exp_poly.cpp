#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include "singlim/exp_poly.hpp"

using namespace singlim;
using doctest::Approx;

namespace {

double quad(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

}  // namespace

TEST_CASE("value, merging and zero coefficients") {
    ExpPoly p = ExpPoly::constant(2.0L);
    p.add(Complex(3, 0), 1, Complex(-1, 0));
    p.add(Complex(1, 0), 1, Complex(-1, 0));
    CHECK(p.terms().size() == 2);
    p.add(Complex(0, 0), 4, Complex(-7, 0));
    CHECK(p.terms().size() == 2);
    CHECK(p(0.5) == Approx(2.0 + 4.0 * 0.5 * std::exp(-0.5)).epsilon(1e-15));
}

TEST_CASE("conjugate pair evaluates to a real damped cosine") {
    // (1/2) e^{(-1+2i)t} + (1/2) e^{(-1-2i)t} = e^{-t} cos 2t
    ExpPoly p;
    p.add(Complex(0.5, 0), 0, Complex(-1, 2));
    p.add(Complex(0.5, 0), 0, Complex(-1, -2));
    for (double t : {0.0, 0.3, 1.7}) CHECK(p(t) == Approx(std::exp(-t) * std::cos(2 * t)).epsilon(1e-14));
    ExpPoly d = p.derivative();
    for (double t : {0.0, 0.3, 1.7}) {
        const double want = -std::exp(-t) * (std::cos(2 * t) + 2 * std::sin(2 * t));
        CHECK(d(t) == Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("derivative of t^2 e^{-3t}") {
    const ExpPoly p = ExpPoly::term(Complex(1, 0), 2, Complex(-3, 0));
    const ExpPoly d = p.derivative();
    for (double t : {0.0, 0.25, 2.0}) {
        CHECK(d(t) == Approx((2 * t - 3 * t * t) * std::exp(-3 * t)).epsilon(1e-14));
    }
}

TEST_CASE("integral against adaptive quadrature") {
    ExpPoly p;
    p.add(Complex(1.5, 0), 3, Complex(-2, 0));
    p.add(Complex(-0.7, 0.2), 1, Complex(-0.5, 4));
    p.add(Complex(-0.7, -0.2), 1, Complex(-0.5, -4));
    p.add(Complex(0.25, 0), 0, Complex(0, 0));
    for (double t : {1e-6, 0.1, 1.0, 5.0, 30.0}) {
        const double want = quad([&](double s) { return p(s); }, 0.0, t);
        CHECK(static_cast<double>(p.integral(t)) == Approx(want).epsilon(1e-11));
    }
}

TEST_CASE("moment integral branches agree with quadrature") {
    for (int k : {0, 1, 2, 4}) {
        for (double r : {-1e-3, -0.7, -3.0, -250.0}) {
            for (double t : {1e-4, 0.5, 2.0, 10.0}) {
                const double want = quad([&](double s) { return std::pow(s, k) * std::exp(r * s); }, 0.0, t);
                const double got = static_cast<double>(moment_integral(k, Complex(r, 0), t).real());
                CHECK(got == Approx(want).epsilon(1e-11).scale(1e-300));
            }
        }
    }
    CHECK(moment_integral(2, Complex(0, 0), 3.0L).real() == Approx(9.0));
}

TEST_CASE("integral to infinity") {
    // int_0^inf t e^{-2t} dt = 1/4
    CHECK(static_cast<double>(ExpPoly::term(Complex(1, 0), 1, Complex(-2, 0)).integral_to_infinity()) ==
          Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(ExpPoly::constant(1.0L).integral_to_infinity(), std::domain_error);
}

TEST_CASE("products and shifts") {
    const ExpPoly a = ExpPoly::exponential(2.0L, -1.0L) + ExpPoly::constant(1.0L);
    const ExpPoly b = ExpPoly::term(Complex(1, 0), 1, Complex(-0.5, 0));
    const ExpPoly ab = a * b;
    for (double t : {0.0, 0.4, 3.0}) CHECK(ab(t) == Approx(a(t) * b(t)).epsilon(1e-14));
    const ExpPoly s = a.shifted(2, -3.0L);
    for (double t : {0.1, 1.2}) CHECK(s(t) == Approx(a(t) * t * t * std::exp(-3 * t)).epsilon(1e-14));
    ExpPoly z = a;
    z *= 0.0L;
    CHECK(z.empty());
}
