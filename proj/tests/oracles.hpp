// Independent reference implementations for the tests. Nothing here calls the library's
// generators, FFT or PSLR code; formulas are evaluated directly in long double.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using ld = long double;
inline constexpr ld pi_l = std::numbers::pi_v<long double>;

inline cplx unit(ld phase) { return {static_cast<double>(std::cos(phase)), static_cast<double>(std::sin(phase))}; }

/// exp(-j pi p n (n+1) / N), phase wrapped with fmod in long double.
inline std::vector<cplx> zc(std::int64_t n_len, std::int64_t p)
{
    std::vector<cplx> s(static_cast<std::size_t>(n_len));
    for (std::int64_t n = 0; n < n_len; ++n) {
        const ld turns = std::fmod(static_cast<ld>(p) * static_cast<ld>(n) * static_cast<ld>(n + 1),
                                   static_cast<ld>(2 * n_len));
        s[static_cast<std::size_t>(n)] = unit(-pi_l * turns / static_cast<ld>(n_len));
    }
    return s;
}

/// Running product of the ZC samples.
inline std::vector<cplx> dzc(std::int64_t n_len, std::int64_t p)
{
    const auto s = zc(n_len, p);
    std::vector<cplx> x(s.size());
    std::complex<ld> acc{1.0L, 0.0L};
    for (std::size_t n = 0; n < s.size(); ++n) {
        acc *= std::complex<ld>(s[n].real(), s[n].imag());
        acc /= std::abs(acc);
        x[n] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
    }
    return x;
}

/// z[n] = exp(j 2 pi g / (r m)), g = m c_r phi beta^2 + varphi(gamma) beta + psi(gamma),
/// c_r = 1 for odd r and 1/2 for even r.
inline std::vector<cplx> cazac(std::int64_t r, std::int64_t m, std::int64_t phi, const std::vector<std::int64_t>& varphi,
                               const std::vector<double>& psi)
{
    const ld c_r = (r % 2 != 0) ? 1.0L : 0.5L;
    const ld rm = static_cast<ld>(r * m);
    std::vector<cplx> z(static_cast<std::size_t>(r * m * m));
    for (std::int64_t n = 0; n < r * m * m; ++n) {
        const std::int64_t beta = n / m;
        const std::int64_t gamma = n % m;
        const ld b = static_cast<ld>(beta);
        ld g = static_cast<ld>(m) * c_r * static_cast<ld>(phi) * b * b +
               static_cast<ld>(varphi[static_cast<std::size_t>(gamma)]) * b;
        g = std::fmod(g, rm);
        if (!psi.empty()) g += static_cast<ld>(psi[static_cast<std::size_t>(gamma)]);
        z[static_cast<std::size_t>(n)] = unit(2.0L * pi_l * g / rm);
    }
    return z;
}

inline std::vector<std::int64_t> linear_varphi(std::int64_t r, std::int64_t m, std::int64_t a)
{
    std::vector<std::int64_t> v(static_cast<std::size_t>(m));
    for (std::int64_t g = 0; g < m; ++g) v[static_cast<std::size_t>(g)] = (a * m * g + g) % (r * m);
    return v;
}

/// y[n] = s[<n - tau>] exp(j 2 pi n v).
inline std::vector<cplx> echo(const std::vector<cplx>& s, std::int64_t tau, double v)
{
    const auto n_len = static_cast<std::int64_t>(s.size());
    std::vector<cplx> y(s.size());
    for (std::int64_t n = 0; n < n_len; ++n) {
        const ld cycles = static_cast<ld>(n) * static_cast<ld>(v);
        y[static_cast<std::size_t>(n)] =
            s[static_cast<std::size_t>(((n - tau) % n_len + n_len) % n_len)] * unit(2.0L * pi_l * cycles);
    }
    return y;
}

/// r[n] = sum_i y[i] conj(s[<i - n>]), accumulated in long double.
inline std::vector<cplx> xcorr(const std::vector<cplx>& y, const std::vector<cplx>& s)
{
    const auto n_len = static_cast<std::int64_t>(y.size());
    std::vector<cplx> r(y.size());
    for (std::int64_t n = 0; n < n_len; ++n) {
        ld re = 0;
        ld im = 0;
        for (std::int64_t i = 0; i < n_len; ++i) {
            const cplx a = y[static_cast<std::size_t>(i)];
            const cplx b = std::conj(s[static_cast<std::size_t>(((i - n) % n_len + n_len) % n_len)]);
            re += static_cast<ld>(a.real()) * b.real() - static_cast<ld>(a.imag()) * b.imag();
            im += static_cast<ld>(a.real()) * b.imag() + static_cast<ld>(a.imag()) * b.real();
        }
        r[static_cast<std::size_t>(n)] = {static_cast<double>(re), static_cast<double>(im)};
    }
    return r;
}

inline std::vector<double> magnitudes(const std::vector<cplx>& r)
{
    std::vector<double> m(r.size());
    std::transform(r.begin(), r.end(), m.begin(), [](cplx c) { return std::abs(c); });
    return m;
}

/// Peak over the largest magnitude at lags 1 .. ceil(n_max)-1 after the (first) peak.
inline double pslr_after_peak(const std::vector<double>& mags, double n_max)
{
    const std::size_t n_len = mags.size();
    std::size_t peak = 0;
    for (std::size_t i = 1; i < n_len; ++i) {
        if (mags[i] > mags[peak]) peak = i;
    }
    const auto lags = static_cast<std::size_t>(std::min(std::ceil(n_max) - 1.0, static_cast<double>(n_len - 1)));
    double worst = 0;
    for (std::size_t k = 1; k <= lags; ++k) worst = std::max(worst, mags[(peak + k) % n_len]);
    return mags[peak] / worst;
}

/// Peak over the largest sidelobe at 0 < |n - tau| < 2 floor((N-1)/(2p)), brute force.
inline double window_pslr(std::int64_t n_len, std::int64_t p, double v)
{
    const auto s = zc(n_len, p);
    const auto mags = magnitudes(xcorr(echo(s, 0, v), s));
    const std::int64_t width = 2 * ((n_len - 1) / (2 * p));
    double worst = 0;
    for (std::int64_t d = 1; d < width; ++d) {
        worst = std::max(worst, mags[static_cast<std::size_t>(d)]);
        worst = std::max(worst, mags[static_cast<std::size_t>(n_len - d)]);
    }
    return mags[0] / worst;
}

/// Naive zero-padded DFT over k of column[k], evaluated at bins 0..k0-1.
inline std::vector<cplx> dft(const std::vector<cplx>& column, std::size_t k0)
{
    std::vector<cplx> out(k0);
    for (std::size_t q = 0; q < k0; ++q) {
        std::complex<ld> acc{};
        for (std::size_t k = 0; k < column.size(); ++k) {
            const ld angle = -2.0L * pi_l * static_cast<ld>((k * q) % k0) / static_cast<ld>(k0);
            acc += std::complex<ld>(column[k].real(), column[k].imag()) * std::polar(1.0L, angle);
        }
        out[q] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
    }
    return out;
}

/// Mean of |E|^2 over every cell except (n, q), by direct summation.
inline double theta_literal(const std::vector<cplx>& grid, std::size_t bins, std::size_t n, std::size_t q)
{
    ld total = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i == n * bins + q) continue;
        total += std::norm(grid[i]);
    }
    return static_cast<double>(total / static_cast<ld>(grid.size() - 1));
}

} // namespace oracle
