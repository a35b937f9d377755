// Modular helpers and the Dirichlet-kernel magnitude f(x) = |sin(pi x) / sin(pi x / L)|.
#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>

#include "cazac/types.hpp"

namespace cazac {

/// Residue of x modulo n in the centered range: [-(n-1)/2, (n-1)/2] for odd n,
/// [-n/2, n/2) for even n.
constexpr std::int64_t centered_mod(std::int64_t x, std::int64_t n)
{
    std::int64_t r = x % n;
    if (r < 0) r += n;
    if (2 * r >= n) r -= n;
    return r;
}

/// Real-valued centered residue in [-n/2, n/2).
inline double centered_mod(double x, double n)
{
    return x - n * std::floor(x / n + 0.5);
}

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

constexpr bool coprime(std::int64_t a, std::int64_t b) { return std::gcd(a, b) == 1; }

constexpr bool is_square_free(std::int64_t m)
{
    if (m < 1) return false;
    for (std::int64_t d = 2; d * d <= m; ++d) {
        if (m % (d * d) == 0) return false;
    }
    return true;
}

constexpr bool is_prime(std::int64_t n)
{
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

/// f(x) for x = whole + frac, evaluated without cancellation: the numerator uses
/// |sin(pi frac)| and the denominator uses the residue of x reduced modulo L.
/// At x = 0 (mod L) the removable singularity evaluates to L.
inline double dirichlet_magnitude(std::int64_t whole, double frac, std::int64_t length)
{
    const double wrapped = centered_mod(static_cast<double>(centered_mod(whole, length)) + frac,
                                        static_cast<double>(length));
    const double den = std::abs(std::sin(pi * wrapped / static_cast<double>(length)));
    if (wrapped == 0.0 || den == 0.0) return static_cast<double>(length);
    return std::abs(std::sin(pi * frac)) / den;
}

inline double dirichlet_magnitude(double x, std::int64_t length)
{
    const double whole = std::nearbyint(x);
    return dirichlet_magnitude(static_cast<std::int64_t>(whole), x - whole, length);
}

} // namespace cazac
