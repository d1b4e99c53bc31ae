#ifndef JDD_GAUSSIAN_HPP
#define JDD_GAUSSIAN_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jdd {

inline constexpr double kSqrt2 = 1.4142135623730950488;
inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;

/// Standard normal density.
inline double normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

/// Standard normal CDF Phi(x).
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / kSqrt2);
}

/// Gaussian tail function Q(x) = 1 - Phi(x).
inline double q_func(double x) {
    return 0.5 * std::erfc(x / kSqrt2);
}

namespace detail {

// Acklam's rational approximation to the inverse normal CDF,
// |relative error| < 1.15e-9 over (0,1). Used as a seed for Newton.
inline double norminv_acklam(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0]*q + c[1])*q + c[2])*q + c[3])*q + c[4])*q + c[5]) /
               ((((d[0]*q + d[1])*q + d[2])*q + d[3])*q + 1.0);
    }
    if (p > 1.0 - plow) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0]*q + c[1])*q + c[2])*q + c[3])*q + c[4])*q + c[5]) /
               ((((d[0]*q + d[1])*q + d[2])*q + d[3])*q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0]*r + a[1])*r + a[2])*r + a[3])*r + a[4])*r + a[5]) * q /
           (((((b[0]*r + b[1])*r + b[2])*r + b[3])*r + b[4])*r + 1.0);
}

} // namespace detail

/// Inverse standard normal CDF, refined to full double precision with one
/// Halley step on Phi(x) - p = 0 (the residual is evaluated via erfc).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("normal_quantile: p must be in [0,1]");
    }
    double x = detail::norminv_acklam(p);
    // Halley refinement: u = (Phi(x)-p)/phi(x); x -= u / (1 + x u / 2)
    double err = normal_cdf(x) - p;
    double u = err / normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

/// Inverse of the Gaussian tail function, Q^{-1}(p).
inline double q_inv(double p) {
    return -normal_quantile(p);
}

} // namespace jdd

#endif // JDD_GAUSSIAN_HPP
