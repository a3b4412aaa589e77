#include "tieq/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tieq::detail {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft_pow2 needs a power-of-two size");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

namespace {

void bluestein(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    const double sign = inverse ? 1.0 : -1.0;
    // chirp c[m] = e(sign * m^2 / 2n); reduce m^2 mod 2n before the trig call
    std::vector<std::complex<double>> c(n);
    for (std::size_t m = 0; m < n; ++m) {
        std::size_t sq = (m * m) % (2 * n);
        double ang = sign * std::numbers::pi * static_cast<double>(sq) / static_cast<double>(n);
        c[m] = {std::cos(ang), std::sin(ang)};
    }
    const std::size_t M = next_pow2(2 * n - 1);
    std::vector<std::complex<double>> f(M, 0.0), g(M, 0.0);
    for (std::size_t j = 0; j < n; ++j) f[j] = a[j] * c[j];
    g[0] = std::conj(c[0]);
    for (std::size_t j = 1; j < n; ++j) g[j] = g[M - j] = std::conj(c[j]);
    fft_pow2(f, false);
    fft_pow2(g, false);
    for (std::size_t j = 0; j < M; ++j) f[j] *= g[j];
    fft_pow2(f, true);
    for (std::size_t k = 0; k < n; ++k) a[k] = c[k] * f[k] / static_cast<double>(M);
}

}  // namespace

void dft(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (is_pow2(n)) {
        fft_pow2(a, inverse);
    } else {
        bluestein(a, inverse);
    }
}

}  // namespace tieq::detail
