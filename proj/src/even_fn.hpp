#pragma once

#include <array>
#include <cstddef>

#include "gptraj/so3.hpp"

namespace gptraj::detail {

// g = sum a[n] x^n with x = u^2, plus the matching h and k.
template <std::size_t N>
so3::EvenFn even_series(const std::array<double, N>& a, double x) {
    so3::EvenFn r;
    for (std::size_t i = N; i-- > 0;) {
        const double n = static_cast<double>(i);
        r.g = r.g * x + a[i];
        if (i >= 1) r.h = r.h * x + 2.0 * n * a[i];
        if (i >= 2) r.k = r.k * x + 2.0 * n * (2.0 * n - 2.0) * a[i];
    }
    return r;
}

// From closed-form value and first two derivatives at u > 0.
inline so3::EvenFn even_from_derivatives(double u, double g, double d1, double d2) {
    so3::EvenFn r;
    r.g = g;
    r.h = d1 / u;
    r.k = (d2 - r.h) / (u * u);
    return r;
}

// Coefficient table a[m] = sign^m * (m + 1)^p / (2m + off)!, filled at compile time.
template <std::size_t N>
constexpr std::array<double, N> factorial_series(int off, bool times_m_plus_1) {
    std::array<double, N> a{};
    for (std::size_t m = 0; m < N; ++m) {
        double fact = 1.0;
        for (int i = 2; i <= static_cast<int>(2 * m) + off; ++i) fact *= i;
        double v = 1.0 / fact;
        if (times_m_plus_1) v *= static_cast<double>(m + 1);
        a[m] = (m % 2 == 0) ? v : -v;
    }
    return a;
}

}  // namespace gptraj::detail
