#pragma once

#include <complex>
#include <vector>

namespace singlim {

using Real = long double;
using Complex = std::complex<Real>;

/// coef * t^power * exp(rate * t)
struct ExpTerm {
    Complex coef;
    int power = 0;
    Complex rate;
};

/// Real-valued exponential polynomial  sum_j c_j t^{k_j} e^{r_j t}.
///
/// Every per-mode object in the library (solutions of the mode equation,
/// semigroup terms, layer terms) lives in this class, so derivatives,
/// products and time integrals are available in closed form. Complex rates
/// are carried together with their conjugates and evaluation takes the real
/// part. Arithmetic runs in long double.
class ExpPoly {
public:
    ExpPoly() = default;

    static ExpPoly constant(Real c);
    static ExpPoly exponential(Real coef, Real rate);
    static ExpPoly term(Complex coef, int power, Complex rate);

    /// Adds a term, merging with an existing term of identical power and rate.
    void add(Complex coef, int power, Complex rate);

    const std::vector<ExpTerm>& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

    Real value(Real t) const;
    double operator()(double t) const { return static_cast<double>(value(t)); }

    ExpPoly derivative() const;
    /// Integral over [0, t].
    Real integral(Real t) const;
    /// Integral over [0, inf). Throws std::domain_error when a non-decaying
    /// term is present.
    Real integral_to_infinity() const;

    ExpPoly& operator+=(const ExpPoly& other);
    ExpPoly& operator-=(const ExpPoly& other);
    ExpPoly& operator*=(Real s);
    /// Multiplies by t^power e^{rate t}.
    ExpPoly shifted(int power, Real rate) const;

    friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
    friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
    friend ExpPoly operator*(ExpPoly a, Real s) { return a *= s; }
    friend ExpPoly operator*(Real s, ExpPoly a) { return a *= s; }
    friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);

private:
    std::vector<ExpTerm> terms_;
};

/// Integral of s^k e^{r s} over [0, t], via the lower incomplete gamma
/// function. Series for small |r t|, complement form otherwise.
Complex moment_integral(int k, Complex r, Real t);

}  // namespace singlim
