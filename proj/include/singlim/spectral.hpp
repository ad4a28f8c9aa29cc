#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace singlim {

/// Eigenvalues of a nonnegative self-adjoint operator A. Zero eigenvalues are
/// allowed; A is not assumed coercive.
class Spectrum {
public:
    explicit Spectrum(std::vector<double> eigenvalues);
    Spectrum(std::initializer_list<double> eigenvalues);

    std::size_t size() const noexcept { return eigenvalues_.size(); }
    double operator[](std::size_t i) const noexcept { return eigenvalues_[i]; }
    std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }

    bool has_kernel() const noexcept;
    /// Smallest strictly positive eigenvalue, or 0 if every eigenvalue is 0.
    double min_positive() const noexcept;
    double max_eigenvalue() const noexcept;

private:
    std::vector<double> eigenvalues_;
};

/// Coefficients of an element of H in the eigenbasis of A.
class SpecVector {
public:
    SpecVector() = default;
    explicit SpecVector(std::size_t n, double value = 0.0) : c_(n, value) {}
    explicit SpecVector(std::vector<double> coefficients) : c_(std::move(coefficients)) {}
    SpecVector(std::initializer_list<double> coefficients) : c_(coefficients) {}

    std::size_t size() const noexcept { return c_.size(); }
    double operator[](std::size_t i) const noexcept { return c_[i]; }
    double& operator[](std::size_t i) noexcept { return c_[i]; }
    std::span<const double> coefficients() const noexcept { return c_; }

    SpecVector& operator+=(const SpecVector& other);
    SpecVector& operator-=(const SpecVector& other);
    SpecVector& operator*=(double s) noexcept;

    friend SpecVector operator+(SpecVector a, const SpecVector& b) { return a += b; }
    friend SpecVector operator-(SpecVector a, const SpecVector& b) { return a -= b; }
    friend SpecVector operator*(double s, SpecVector a) noexcept { return a *= s; }
    friend SpecVector operator*(SpecVector a, double s) noexcept { return a *= s; }
    friend bool operator==(const SpecVector&, const SpecVector&) = default;

private:
    std::vector<double> c_;
};

/// Sum of c_i d_i accumulated left to right.
double inner(const SpecVector& f, const SpecVector& g);
double norm(const SpecVector& f);

/// A^s f. Negative s is rejected since A may have a kernel. 0^0 = 1.
SpecVector apply_power(const Spectrum& spec, double s, const SpecVector& f);
/// J_eps f = (I + eps A)^{-1} f.
SpecVector resolvent(const Spectrum& spec, double eps, const SpecVector& f);
/// e^{-tA} f.
SpecVector semigroup(const Spectrum& spec, double t, const SpecVector& f);
/// t^n A^m e^{-tA} f.
SpecVector weighted_kernel(const Spectrum& spec, double t, int n, double m, const SpecVector& f);

/// lambda^s with the conventions 0^0 = 1 and 0^s = 0 for s > 0.
double eigen_power(double lambda, double s);

}  // namespace singlim
