#pragma once

#include <string>
#include <utility>
#include <vector>

#include "singlim/exp_poly.hpp"
#include "singlim/spectral.hpp"

namespace singlim {

/// Data of the damped problem eps u'' + A u + u' = 0, (u, u')(0) = (u0, u1).
struct ProblemData {
    Spectrum spec;
    double eps;
    SpecVector u0;
    SpecVector u1;
    /// A u0 + u1, the initial velocity of the layer.
    SpecVector v1;
    /// True when u1 + A u0 vanishes, i.e. there is no initial layer.
    bool il0_satisfied;
};

/// Validates eps in (0, 1] and vector lengths, then derives v1 and the flag.
ProblemData make_problem(Spectrum spec, double eps, SpecVector u0, SpecVector u1);

/// A function of time with values in H, stored per mode in closed form and
/// evaluated on demand.
class ProfileFunction {
public:
    ProfileFunction(std::string label, std::vector<ExpPoly> modes);

    SpecVector operator()(double t) const;
    ProfileFunction derivative() const;

    const std::string& label() const noexcept { return label_; }
    std::size_t size() const noexcept { return modes_.size(); }
    const ExpPoly& mode(std::size_t i) const { return modes_[i]; }
    const std::vector<ExpPoly>& modes() const noexcept { return modes_; }

    /// Per-mode square sum ||f(t)||^2 as one exponential polynomial per mode.
    std::vector<ExpPoly> squared_modes() const;

    ProfileFunction& operator+=(const ProfileFunction& other);
    ProfileFunction& operator-=(const ProfileFunction& other);
    ProfileFunction& operator*=(Real s);
    /// A^s applied modewise.
    ProfileFunction powered(const Spectrum& spec, double s) const;
    ProfileFunction relabeled(std::string label) const;

    friend ProfileFunction operator+(ProfileFunction a, const ProfileFunction& b) { return a += b; }
    friend ProfileFunction operator-(ProfileFunction a, const ProfileFunction& b) { return a -= b; }
    friend ProfileFunction operator*(Real s, ProfileFunction a) { return a *= s; }

private:
    std::string label_;
    std::vector<ExpPoly> modes_;
};

// Building blocks.
ProfileFunction constant_profile(const SpecVector& f, std::string label = "constant");
/// t^n A^m e^{-tA} f.
ProfileFunction kernel_profile(const Spectrum& spec, int n, double m, const SpecVector& f,
                               std::string label = "kernel");
/// e^{-t/eps} f.
ProfileFunction layer_profile(double eps, const SpecVector& f, std::string label = "layer");

/// u_eps.
ProfileFunction exact_solution(const ProblemData& pd);
/// v(t) = e^{-tA} u0.
ProfileFunction parabolic_profile(const ProblemData& pd);
/// theta(t) = eps (1 - e^{-t/eps}) v1.
ProfileFunction theta_layer(const ProblemData& pd);
/// e^{-tA}u0 + eps (e^{-tA}v1 - t A^2 e^{-tA} u0 - e^{-t/eps} v1).
ProfileFunction main_expansion_profile(const ProblemData& pd);
/// e^{-tA}u0 - eps t A^2 e^{-tA} u0; the expansion when v1 = 0.
ProfileFunction il0_expansion_profile(const ProblemData& pd);
/// Expansion of u_eps' under v1 = 0. Throws std::invalid_argument otherwise.
ProfileFunction derivative_expansion_profile(const ProblemData& pd);

/// (u_1eps, u_2eps): data (u0, -A u0) and (0, v1) respectively.
std::pair<ProfileFunction, ProfileFunction> split_components(const ProblemData& pd);

/// U_1eps: forcing A e^{-tA}(u0 + eps J u1), data (-eps J u1, -J u1).
ProfileFunction aux_U1(const ProblemData& pd);
/// Z_eps: forcing -A^{3/2} e^{-tA} u0, zero data.
ProfileFunction aux_Z(const ProblemData& pd);
/// Z_eps with the forcing sign flipped (+A^{3/2} e^{-tA} u0), for diagnostics.
ProfileFunction aux_Z_plus(const ProblemData& pd);
/// U~_1eps (j = 1) or U~_2eps (j = 2).
ProfileFunction aux_tilde_U(const ProblemData& pd, int j);
/// V_1eps (j = 1) or V_2eps (j = 2).
ProfileFunction aux_V(const ProblemData& pd, int j);
/// V_jeps'' written out term by term, independent of differentiating aux_V.
ProfileFunction aux_V_second_derivative_formula(const ProblemData& pd, int j);

struct AuxW {
    ProfileFunction w;
    /// Solution of eps W'' + A W + W' = -V_j'' started from the realized data.
    ProfileFunction w_from_ode;
    SpecVector initial_value;
    SpecVector initial_velocity;
    /// Max over the check times of ||eps W'' + A W + W' + V''|| relative to
    /// the sum of the norms of the four terms.
    double max_relative_ode_residual;
};

/// Relative residual tolerance for the W equations.
inline constexpr double kAuxWOdeTolerance = 1e-8;

/// W_jeps defined by the decomposition residual
///   W_1 = (U~_1 - V_1)/eps,  W_2 = (U~_2 - V_2 + u_2eps)/eps,
/// then checked against its forced equation. Throws std::runtime_error when
/// the residual exceeds kAuxWOdeTolerance.
AuxW aux_W(const ProblemData& pd, int j);

/// eps^{1/2} W_2' + eps^{1/2} (2 A e^{-tA} J v1 - t A^2 e^{-tA} J v1).
ProfileFunction tilde_V2(const ProblemData& pd);

}  // namespace singlim
