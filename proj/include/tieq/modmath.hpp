#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace tieq {

/// Canonical residue in [0, n). Works for any int64 input, n >= 1.
std::int64_t mod_reduce(std::int64_t x, std::int64_t n) noexcept;

/// a*b mod n for canonical residues, 128-bit intermediate.
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t n) noexcept;

std::int64_t pow_mod(std::int64_t a, std::uint64_t e, std::int64_t n) noexcept;

/// lcm with overflow check (throws std::overflow_error).
std::int64_t lcm_checked(std::int64_t a, std::int64_t b);

/// Inverse of a mod n, or nullopt when gcd(a, n) != 1.
std::optional<std::int64_t> mod_inverse(std::int64_t a, std::int64_t n) noexcept;

/// Deterministic Miller-Rabin, valid for the full 64-bit range.
bool is_prime_u64(std::uint64_t n) noexcept;

/// Exact determinant of a d x d integer matrix (row-major), Bareiss
/// fraction-free elimination with 128-bit intermediates.
__int128 det_exact(const std::vector<std::int64_t>& m, std::size_t d);

/// Adjugate of a d x d integer matrix (row-major), exact. adj(M)*M = det(M)*I.
std::vector<__int128> adjugate_exact(const std::vector<std::int64_t>& m, std::size_t d);

}  // namespace tieq
