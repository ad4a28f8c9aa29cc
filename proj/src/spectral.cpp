#include "singlim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace singlim {

namespace {

void require_same_length(const SpecVector& f, const SpecVector& g) {
    if (f.size() != g.size()) {
        throw std::invalid_argument("SpecVector length mismatch: " + std::to_string(f.size()) +
                                    " vs " + std::to_string(g.size()));
    }
}

void require_matches(const Spectrum& spec, const SpecVector& f) {
    if (spec.size() != f.size()) {
        throw std::invalid_argument("SpecVector length " + std::to_string(f.size()) +
                                    " does not match spectrum size " + std::to_string(spec.size()));
    }
}

}  // namespace

Spectrum::Spectrum(std::vector<double> eigenvalues) : eigenvalues_(std::move(eigenvalues)) {
    if (eigenvalues_.empty()) {
        throw std::invalid_argument("Spectrum must be nonempty");
    }
    for (double lambda : eigenvalues_) {
        if (!std::isfinite(lambda) || lambda < 0.0) {
            throw std::invalid_argument("Spectrum eigenvalues must be finite and nonnegative");
        }
    }
}

Spectrum::Spectrum(std::initializer_list<double> eigenvalues)
    : Spectrum(std::vector<double>(eigenvalues)) {}

bool Spectrum::has_kernel() const noexcept {
    return std::any_of(eigenvalues_.begin(), eigenvalues_.end(), [](double l) { return l == 0.0; });
}

double Spectrum::min_positive() const noexcept {
    double best = 0.0;
    for (double lambda : eigenvalues_) {
        if (lambda > 0.0 && (best == 0.0 || lambda < best)) best = lambda;
    }
    return best;
}

double Spectrum::max_eigenvalue() const noexcept {
    return *std::max_element(eigenvalues_.begin(), eigenvalues_.end());
}

SpecVector& SpecVector::operator+=(const SpecVector& other) {
    require_same_length(*this, other);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
    return *this;
}

SpecVector& SpecVector::operator-=(const SpecVector& other) {
    require_same_length(*this, other);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
    return *this;
}

SpecVector& SpecVector::operator*=(double s) noexcept {
    for (double& c : c_) c *= s;
    return *this;
}

double inner(const SpecVector& f, const SpecVector& g) {
    require_same_length(f, g);
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * g[i];
    return sum;
}

double norm(const SpecVector& f) { return std::sqrt(inner(f, f)); }

double eigen_power(double lambda, double s) {
    if (s == 0.0) return 1.0;
    if (lambda == 0.0) return 0.0;
    if (s == 1.0) return lambda;
    if (s == 2.0) return lambda * lambda;
    return std::pow(lambda, s);
}

SpecVector apply_power(const Spectrum& spec, double s, const SpecVector& f) {
    if (!(s >= 0.0)) throw std::invalid_argument("apply_power: exponent must be >= 0");
    require_matches(spec, f);
    SpecVector out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = eigen_power(spec[i], s) * f[i];
    return out;
}

SpecVector resolvent(const Spectrum& spec, double eps, const SpecVector& f) {
    if (!(eps > 0.0)) throw std::invalid_argument("resolvent: eps must be > 0");
    require_matches(spec, f);
    SpecVector out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] / (1.0 + eps * spec[i]);
    return out;
}

SpecVector semigroup(const Spectrum& spec, double t, const SpecVector& f) {
    if (!(t >= 0.0)) throw std::invalid_argument("semigroup: t must be >= 0");
    require_matches(spec, f);
    SpecVector out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::exp(-spec[i] * t) * f[i];
    return out;
}

SpecVector weighted_kernel(const Spectrum& spec, double t, int n, double m, const SpecVector& f) {
    if (!(t >= 0.0)) throw std::invalid_argument("weighted_kernel: t must be >= 0");
    if (!(m >= 0.0)) throw std::invalid_argument("weighted_kernel: m must be >= 0");
    if (n < 0) throw std::invalid_argument("weighted_kernel: n must be >= 0");
    require_matches(spec, f);
    const double tn = n == 0 ? 1.0 : std::pow(t, n);
    SpecVector out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        out[i] = tn * eigen_power(spec[i], m) * std::exp(-spec[i] * t) * f[i];
    }
    return out;
}

}  // namespace singlim
