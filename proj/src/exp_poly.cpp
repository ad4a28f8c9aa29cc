#include "singlim/exp_poly.hpp"

#include <cmath>
#include <stdexcept>

namespace singlim {

namespace {

Real int_pow(Real t, int k) {
    Real out = 1.0L;
    for (int i = 0; i < k; ++i) out *= t;
    return out;
}

Real factorial(int k) {
    Real out = 1.0L;
    for (int i = 2; i <= k; ++i) out *= i;
    return out;
}

}  // namespace

ExpPoly ExpPoly::constant(Real c) { return term(Complex(c, 0), 0, Complex(0, 0)); }

ExpPoly ExpPoly::exponential(Real coef, Real rate) {
    return term(Complex(coef, 0), 0, Complex(rate, 0));
}

ExpPoly ExpPoly::term(Complex coef, int power, Complex rate) {
    ExpPoly p;
    p.add(coef, power, rate);
    return p;
}

void ExpPoly::add(Complex coef, int power, Complex rate) {
    if (coef == Complex(0, 0)) return;
    auto slot = terms_.end();
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        if (it->rate != rate) continue;
        if (it->power == power) {
            it->coef += coef;
            return;
        }
        slot = it + 1;
    }
    // Terms sharing a rate stay adjacent so value() evaluates each exponential once.
    terms_.insert(slot, {coef, power, rate});
}

Real ExpPoly::value(Real t) const {
    Real sum = 0.0L;
    const ExpTerm* previous = nullptr;
    Real growth = 0.0L, cosine = 1.0L, sine = 0.0L;
    for (const auto& term : terms_) {
        if (previous == nullptr || previous->rate != term.rate) {
            growth = std::exp(term.rate.real() * t);
            if (term.rate.imag() != 0) {
                cosine = std::cos(term.rate.imag() * t);
                sine = std::sin(term.rate.imag() * t);
            } else {
                cosine = 1.0L;
                sine = 0.0L;
            }
            previous = &term;
        }
        const Real part = growth * (term.coef.real() * cosine - term.coef.imag() * sine);
        sum += part * int_pow(t, term.power);
    }
    return sum;
}

ExpPoly ExpPoly::derivative() const {
    ExpPoly out;
    for (const auto& term : terms_) {
        out.add(term.coef * term.rate, term.power, term.rate);
        if (term.power > 0) out.add(term.coef * Real(term.power), term.power - 1, term.rate);
    }
    return out;
}

Real ExpPoly::integral(Real t) const {
    Real sum = 0.0L;
    for (const auto& term : terms_) {
        const Complex m = moment_integral(term.power, term.rate, t);
        sum += term.coef.real() * m.real() - term.coef.imag() * m.imag();
    }
    return sum;
}

Real ExpPoly::integral_to_infinity() const {
    Real sum = 0.0L;
    for (const auto& term : terms_) {
        if (!(term.rate.real() < 0)) {
            throw std::domain_error("ExpPoly::integral_to_infinity: non-decaying term");
        }
        Complex denom(1, 0);
        for (int i = 0; i <= term.power; ++i) denom *= -term.rate;
        sum += (term.coef * factorial(term.power) / denom).real();
    }
    return sum;
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& other) {
    for (const auto& t : other.terms_) add(t.coef, t.power, t.rate);
    return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& other) {
    for (const auto& t : other.terms_) add(-t.coef, t.power, t.rate);
    return *this;
}

ExpPoly& ExpPoly::operator*=(Real s) {
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coef *= s;
    return *this;
}

ExpPoly ExpPoly::shifted(int power, Real rate) const {
    ExpPoly out;
    for (const auto& t : terms_) out.add(t.coef, t.power + power, t.rate + rate);
    return out;
}

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
    ExpPoly out;
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) {
            out.add(x.coef * y.coef, x.power + y.power, x.rate + y.rate);
        }
    }
    return out;
}

namespace {

template <class T>
T moment_impl(int k, T r, Real t) {
    if (t <= 0) return T(0);
    if (r == T(0)) return T(int_pow(t, k + 1) / (k + 1));

    const T x = -r * t;
    if (std::abs(x) < Real(k + 2)) {
        // t^{k+1} e^{-x} sum_j x^j / ((k+1)(k+2)...(k+1+j))
        T term = T(1.0L / (k + 1));
        T sum = term;
        for (int j = 1; j < 400; ++j) {
            term *= x / Real(k + 1 + j);
            sum += term;
            if (std::abs(term) <= 1e-21L * std::abs(sum)) break;
        }
        return int_pow(t, k + 1) * std::exp(-x) * sum;
    }

    // k!/(-r)^{k+1} (1 - e^{-x} sum_{j<=k} x^j/j!)
    T partial(0);
    T xj(1);
    for (int j = 0; j <= k; ++j) {
        partial += xj / factorial(j);
        xj *= x;
    }
    T denom(1);
    for (int i = 0; i <= k; ++i) denom *= -r;
    return factorial(k) / denom * (T(1) - std::exp(-x) * partial);
}

}  // namespace

Complex moment_integral(int k, Complex r, Real t) {
    if (r.imag() == 0) return Complex(moment_impl<Real>(k, r.real(), t), 0);
    return moment_impl<Complex>(k, r, t);
}

}  // namespace singlim
