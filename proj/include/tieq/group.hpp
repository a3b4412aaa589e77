#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tieq {

/// Elements and characters are both addressed by a mixed-radix index over the
/// factor list; index 0 is the identity element (resp. trivial character).
using Index = std::int64_t;

/// A finite abelian group presented as an explicit product of cyclic factors
/// Z/N_1 x ... x Z/N_k. Two presentations with different factor lists are
/// different objects even when isomorphic; nothing here normalizes to
/// invariant factors.
class FiniteAbelianGroup {
public:
    explicit FiniteAbelianGroup(std::vector<std::int64_t> factors);

    static FiniteAbelianGroup cyclic(std::int64_t n) { return FiniteAbelianGroup({n}); }
    static FiniteAbelianGroup power(std::int64_t n, std::size_t copies);

    const std::vector<std::int64_t>& factors() const noexcept { return factors_; }
    std::size_t num_factors() const noexcept { return factors_.size(); }
    std::int64_t order() const noexcept { return order_; }

    /// True when all factors share one modulus, so d x d integer matrices act.
    bool uniform_modulus() const noexcept { return uniform_; }
    std::int64_t modulus() const noexcept { return factors_[0]; }

    /// Coordinates may be arbitrary integers; they are reduced per factor.
    Index index_of(std::span<const std::int64_t> coords) const;
    std::vector<std::int64_t> coords_of(Index x) const;

    Index add(Index a, Index b) const noexcept;
    Index sub(Index a, Index b) const noexcept;
    Index neg(Index a) const noexcept;

    /// Phase of the pairing chi(x) = e(s / L) with L = lcm of the factors;
    /// returns s in [0, L). Exact integer arithmetic.
    std::int64_t pairing_phase(Index chi, Index x) const noexcept;
    std::int64_t phase_unit() const noexcept { return phase_unit_; }
    std::complex<double> pairing(Index chi, Index x) const noexcept;

    /// |1 - chi(x)| = 2|sin(pi s / L)|, the quantity Bohr membership tests.
    double pairing_distance(Index chi, Index x) const noexcept;

    bool operator==(const FiniteAbelianGroup& other) const noexcept {
        return factors_ == other.factors_;
    }

    std::string describe() const;

private:
    std::vector<std::int64_t> factors_;
    std::vector<std::int64_t> strides_;
    std::vector<std::int64_t> phase_scale_;  // phase_unit_ / factors_[j]
    std::int64_t order_ = 1;
    std::int64_t phase_unit_ = 1;
    bool uniform_ = true;
};

/// Sorted-vector set helpers used throughout (element index sets).
std::vector<Index> sorted_unique(std::vector<Index> v);
bool sorted_contains(const std::vector<Index>& v, Index x);
bool sorted_is_subset(const std::vector<Index>& sub, const std::vector<Index>& super);
std::vector<Index> sorted_intersect(const std::vector<Index>& a, const std::vector<Index>& b);

}  // namespace tieq
