#ifndef RISBC_SPECFUN_HPP
#define RISBC_SPECFUN_HPP

// Special-function kernel shared by the closed-form expressions.
// All functions are pure; safe to call from any thread.

namespace risbc::specfun {

// Constants of the exponential Q-function approximation
// Q(x) ~= exp(-A x^2 - B x - C) for x >= 0.
struct QApproxConstants {
    double a = 0.3842;
    double b = 0.7640;
    double c = 0.6964;
};
inline constexpr QApproxConstants kQApprox{};

// log Gamma(x), x > 0. Relative error <= 1e-12 on [1e-3, 1e3].
double ln_gamma(double x);

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a),
// a > 0, x >= 0. Series for x < a + 1, continued fraction otherwise.
double gamma_lower_reg(double a, double x);

// Gaussian tail Q(x) = erfc(x / sqrt 2) / 2.
double q_function(double x);

// Exponential approximation of Q for x >= 0.
double q_approx_exp(double x);

// Two-term exponential approximation: exp(-x^2/2)/12 + exp(-2x^2/3)/4.
double q_approx_two_term(double x);

// Parabolic cylinder function D_v(x) for v in [-60, 0], x in [0, 50].
// Evaluated through the integral representation
//   D_v(x) = exp(-x^2/4) / Gamma(-v) * int_0^inf t^{-v-1} exp(-t^2/2 - x t) dt
// with closed forms at v = 0 and v = -1. Values below the double range
// underflow to zero.
double parabolic_cylinder_D(double v, double x);

// log D_{-k}(x) for k > 0, x >= 0.  Exposed separately so that callers
// combining D with large exponential prefactors can stay in log space.
double ln_parabolic_cylinder_D_neg(double k, double x);

// log of int_0^inf t^{k-1} exp(-t^2/2 - x t) dt, k > 0, x >= 0.
double ln_cylinder_integral(double k, double x);

} // namespace risbc::specfun

#endif
