#pragma once

// Brute-force reference for Student's t tail probabilities: composite
// Simpson integration of the density in long double. Shares no code with the
// incomplete-beta route used by the library.

#include <cmath>

namespace mpt::test {

inline long double t_density(long double x, long double df) {
    const long double log_norm = std::lgamma((df + 1.0L) / 2.0L) - std::lgamma(df / 2.0L) -
                                 0.5L * std::log(df * 3.14159265358979323846264338327950288L);
    return std::exp(log_norm - (df + 1.0L) / 2.0L * std::log1p(x * x / df));
}

// P(|T| >= |t|) = 1 - 2 * integral_0^|t| density.
inline double t_two_sided_by_quadrature(double t, double df) {
    const long double upper = std::fabs(static_cast<long double>(t));
    if (upper == 0.0L) return 1.0;
    const long double step = 1e-3L;
    long n = static_cast<long>(std::ceil(upper / step));
    if (n % 2 != 0) ++n;
    const long double h = upper / static_cast<long double>(n);
    long double sum = t_density(0.0L, df) + t_density(upper, df);
    for (long i = 1; i < n; ++i) {
        sum += (i % 2 == 1 ? 4.0L : 2.0L) * t_density(h * static_cast<long double>(i), df);
    }
    const long double half_mass = sum * h / 3.0L;
    return static_cast<double>(1.0L - 2.0L * half_mass);
}

}  // namespace mpt::test
