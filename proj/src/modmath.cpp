#include "tieq/modmath.hpp"

#include <numeric>
#include <stdexcept>

namespace tieq {

std::int64_t mod_reduce(std::int64_t x, std::int64_t n) noexcept {
    std::int64_t r = x % n;
    return r < 0 ? r + n : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t n) noexcept {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % n);
}

std::int64_t pow_mod(std::int64_t a, std::uint64_t e, std::int64_t n) noexcept {
    std::int64_t r = 1 % n;
    a = mod_reduce(a, n);
    while (e) {
        if (e & 1) r = mul_mod(r, a, n);
        a = mul_mod(a, a, n);
        e >>= 1;
    }
    return r;
}

std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
    std::int64_t g = std::gcd(a, b);
    __int128 l = static_cast<__int128>(a / g) * b;
    if (l > static_cast<__int128>(INT64_MAX)) throw std::overflow_error("lcm overflows 64 bits");
    return static_cast<std::int64_t>(l);
}

std::optional<std::int64_t> mod_inverse(std::int64_t a, std::int64_t n) noexcept {
    // extended Euclid on (a mod n, n)
    std::int64_t r0 = n, r1 = mod_reduce(a, n);
    std::int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1;
        std::int64_t t2 = t0 - q * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    if (r0 != 1) return std::nullopt;
    return mod_reduce(t0, n);
}

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t n) noexcept {
    std::uint64_t r = 1 % n;
    a %= n;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, n);
        a = mulmod_u64(a, a, n);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // this base set is a proven deterministic test below 2^64
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

__int128 det_exact(const std::vector<std::int64_t>& m, std::size_t d) {
    if (m.size() != d * d) throw std::invalid_argument("matrix size does not match dimension");
    if (d == 0) return 1;
    std::vector<__int128> a(m.begin(), m.end());
    __int128 sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < d; ++k) {
        if (a[k * d + k] == 0) {
            std::size_t piv = k + 1;
            while (piv < d && a[piv * d + k] == 0) ++piv;
            if (piv == d) return 0;
            for (std::size_t j = k; j < d; ++j) std::swap(a[k * d + j], a[piv * d + j]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < d; ++i) {
            for (std::size_t j = k + 1; j < d; ++j) {
                a[i * d + j] = (a[i * d + j] * a[k * d + k] - a[i * d + k] * a[k * d + j]) / prev;
            }
            a[i * d + k] = 0;
        }
        prev = a[k * d + k];
    }
    return sign * a[d * d - 1];
}

std::vector<__int128> adjugate_exact(const std::vector<std::int64_t>& m, std::size_t d) {
    if (m.size() != d * d) throw std::invalid_argument("matrix size does not match dimension");
    std::vector<__int128> adj(d * d, 0);
    if (d == 0) return adj;
    if (d == 1) { adj[0] = 1; return adj; }
    std::vector<std::int64_t> minor((d - 1) * (d - 1));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            std::size_t r = 0;
            for (std::size_t ii = 0; ii < d; ++ii) {
                if (ii == i) continue;
                std::size_t c = 0;
                for (std::size_t jj = 0; jj < d; ++jj) {
                    if (jj == j) continue;
                    minor[r * (d - 1) + c] = m[ii * d + jj];
                    ++c;
                }
                ++r;
            }
            __int128 cof = det_exact(minor, d - 1);
            if ((i + j) % 2 == 1) cof = -cof;
            adj[j * d + i] = cof;  // transpose of the cofactor matrix
        }
    }
    return adj;
}

}  // namespace tieq
