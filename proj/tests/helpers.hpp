// Shared generators and independent oracles for the test suites. Everything
// here is deliberately written against the definitions, not the library
// internals, so agreement means two different routes reached the same answer.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "tieq/endo.hpp"
#include "tieq/fourier.hpp"
#include "tieq/group.hpp"

namespace testutil {

using tieq::Index;

// std::mt19937_64 sequences are pinned by the standard, so seeds frozen here
// reproduce bit-identically everywhere.
using Rng = std::mt19937_64;

inline std::int64_t pick(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline double pick_real(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// random nonempty subset of G, each element kept with probability p
inline std::vector<Index> random_subset(Rng& rng, const tieq::FiniteAbelianGroup& g, double p) {
    std::vector<Index> out;
    std::bernoulli_distribution keep(p);
    for (Index x = 0; x < g.order(); ++x)
        if (keep(rng)) out.push_back(x);
    if (out.empty()) out.push_back(pick(rng, 0, g.order() - 1));
    return out;
}

// invertible scalar c, uniform over units of the lcm of the factors
inline std::int64_t random_unit(Rng& rng, const tieq::FiniteAbelianGroup& g) {
    std::int64_t l = 1;
    for (std::int64_t f : g.factors()) l = std::lcm(l, f);
    while (true) {
        std::int64_t c = pick(rng, 1, l - 1);
        if (std::gcd(c, l) == 1) return c;
    }
}

// random valid scalar system: unit coefficients summing to zero mod every
// factor. Throws when the modulus admits none (every unit pair is tried via
// rejection; 1000 draws is far past coupon-collector range for lcm <= 512).
inline tieq::EquationSystem random_scalar_system(Rng& rng, const tieq::FiniteAbelianGroup& g) {
    std::int64_t l = 1;
    for (std::int64_t f : g.factors()) l = std::lcm(l, f);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::int64_t c1 = random_unit(rng, g);
        std::int64_t c2 = random_unit(rng, g);
        std::int64_t c3 = ((-(c1 + c2)) % l + l) % l;
        if (c3 != 0 && std::gcd(c3, l) == 1)
            return tieq::EquationSystem::make(tieq::Endomorphism::scalar(g, c1),
                                              tieq::Endomorphism::scalar(g, c2),
                                              tieq::Endomorphism::scalar(g, c3));
    }
    throw std::invalid_argument("no valid scalar system for this modulus");
}

// canonical variant: T1 = Id, so c2 is a unit with -(1 + c2) a unit too
inline tieq::EquationSystem random_canonical_scalar_system(Rng& rng, const tieq::FiniteAbelianGroup& g) {
    std::int64_t l = 1;
    for (std::int64_t f : g.factors()) l = std::lcm(l, f);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::int64_t c2 = random_unit(rng, g);
        std::int64_t c3 = ((-(1 + c2)) % l + l) % l;
        if (c3 != 0 && std::gcd(c3, l) == 1)
            return tieq::EquationSystem::make(tieq::Endomorphism::identity(g),
                                              tieq::Endomorphism::scalar(g, c2),
                                              tieq::Endomorphism::scalar(g, c3));
    }
    throw std::invalid_argument("no valid canonical scalar system for this modulus");
}

// quadratic-time DFT straight from the definition, sharing nothing with the
// library's transform beyond the pairing
inline std::vector<std::complex<double>> naive_dft(const tieq::FiniteAbelianGroup& g,
                                                   const std::vector<std::complex<double>>& f) {
    const double pi = std::acos(-1.0);
    std::vector<std::complex<double>> out(f.size());
    for (Index chi = 0; chi < g.order(); ++chi) {
        std::complex<double> acc = 0.0;
        for (Index x = 0; x < g.order(); ++x) {
            // chi(x) = exp(2 pi i s / L) with s/L the exact rational phase
            double arg = -2.0 * pi * static_cast<double>(g.pairing_phase(chi, x)) /
                         static_cast<double>(g.phase_unit());
            acc += f[static_cast<std::size_t>(x)] * std::polar(1.0, arg);
        }
        out[static_cast<std::size_t>(chi)] = acc / static_cast<double>(g.order());
    }
    return out;
}

// cubic-time solution count straight from the equation
inline std::int64_t brute_count(const std::vector<Index>& a1, const std::vector<Index>& a2,
                                const std::vector<Index>& a3, const tieq::EquationSystem& sys) {
    const tieq::FiniteAbelianGroup& g = sys.group();
    std::int64_t n = 0;
    for (Index x : a1)
        for (Index y : a2)
            for (Index z : a3)
                if (g.add(g.add(sys.t1().apply(x), sys.t2().apply(y)), sys.t3().apply(z)) == 0) ++n;
    return n;
}

// Bohr membership evaluated from scratch: |1 - chi(x)| <= width + tol
inline bool bohr_member(const tieq::FiniteAbelianGroup& g, const std::vector<Index>& freqs,
                        const std::vector<double>& widths, Index x, double tol) {
    for (std::size_t i = 0; i < freqs.size(); ++i)
        if (g.pairing_distance(freqs[i], x) > widths[i] + tol) return false;
    return true;
}

}  // namespace testutil
