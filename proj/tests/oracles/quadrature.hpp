#pragma once

#include <cmath>
#include <functional>

namespace failsim::oracle
{

// Adaptive Simpson with Richardson correction. Deliberately simple and
// independent of the library's Gauss-Kronrod and special-function paths.
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                        int max_depth = 50)
{
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Gamma(shape, rate) density written out directly.
inline double gamma_density(double x, double shape, double rate)
{
    if (x <= 0.0)
        return 0.0;
    return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x - std::lgamma(shape));
}

/// P(X <= x) by integrating the density; splits off [0, eps] analytically-free
/// by substitution x = s^{1/shape} would be overkill for shape >= 1.
inline double gamma_cdf_by_quadrature(double x, double shape, double rate)
{
    return integrate([&](double v) { return gamma_density(v, shape, rate); }, 0.0, x, 1e-14);
}

} // namespace failsim::oracle
