#include "tieq/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tieq/modmath.hpp"

namespace tieq {

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::int64_t> factors)
    : factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("group needs at least one cyclic factor");
    for (std::int64_t n : factors_) {
        if (n < 2) throw std::invalid_argument("cyclic factors must be at least 2");
        __int128 next = static_cast<__int128>(order_) * n;
        if (next > (static_cast<__int128>(1) << 40))
            throw std::invalid_argument("group order too large for dense enumeration");
        order_ = static_cast<std::int64_t>(next);
        phase_unit_ = lcm_checked(phase_unit_, n);
        uniform_ = uniform_ && (n == factors_[0]);
    }
    strides_.assign(factors_.size(), 1);
    for (std::size_t j = factors_.size(); j-- > 1;) strides_[j - 1] = strides_[j] * factors_[j];
    phase_scale_.reserve(factors_.size());
    for (std::int64_t n : factors_) phase_scale_.push_back(phase_unit_ / n);
}

FiniteAbelianGroup FiniteAbelianGroup::power(std::int64_t n, std::size_t copies) {
    return FiniteAbelianGroup(std::vector<std::int64_t>(copies, n));
}

Index FiniteAbelianGroup::index_of(std::span<const std::int64_t> coords) const {
    if (coords.size() != factors_.size())
        throw std::invalid_argument("coordinate arity does not match the factor list");
    Index idx = 0;
    for (std::size_t j = 0; j < factors_.size(); ++j)
        idx += mod_reduce(coords[j], factors_[j]) * strides_[j];
    return idx;
}

std::vector<std::int64_t> FiniteAbelianGroup::coords_of(Index x) const {
    std::vector<std::int64_t> c(factors_.size());
    for (std::size_t j = 0; j < factors_.size(); ++j) c[j] = (x / strides_[j]) % factors_[j];
    return c;
}

Index FiniteAbelianGroup::add(Index a, Index b) const noexcept {
    Index idx = 0;
    for (std::size_t j = 0; j < factors_.size(); ++j) {
        std::int64_t s = (a / strides_[j]) % factors_[j] + (b / strides_[j]) % factors_[j];
        if (s >= factors_[j]) s -= factors_[j];
        idx += s * strides_[j];
    }
    return idx;
}

Index FiniteAbelianGroup::sub(Index a, Index b) const noexcept {
    Index idx = 0;
    for (std::size_t j = 0; j < factors_.size(); ++j) {
        std::int64_t s = (a / strides_[j]) % factors_[j] - (b / strides_[j]) % factors_[j];
        if (s < 0) s += factors_[j];
        idx += s * strides_[j];
    }
    return idx;
}

Index FiniteAbelianGroup::neg(Index a) const noexcept { return sub(0, a); }

std::int64_t FiniteAbelianGroup::pairing_phase(Index chi, Index x) const noexcept {
    __int128 s = 0;
    for (std::size_t j = 0; j < factors_.size(); ++j) {
        std::int64_t cj = (chi / strides_[j]) % factors_[j];
        std::int64_t xj = (x / strides_[j]) % factors_[j];
        s += static_cast<__int128>(cj) * xj % factors_[j] * phase_scale_[j];
    }
    return static_cast<std::int64_t>(s % phase_unit_);
}

std::complex<double> FiniteAbelianGroup::pairing(Index chi, Index x) const noexcept {
    double theta = 2.0 * std::numbers::pi * static_cast<double>(pairing_phase(chi, x)) /
                   static_cast<double>(phase_unit_);
    return {std::cos(theta), std::sin(theta)};
}

double FiniteAbelianGroup::pairing_distance(Index chi, Index x) const noexcept {
    double frac = static_cast<double>(pairing_phase(chi, x)) / static_cast<double>(phase_unit_);
    return 2.0 * std::abs(std::sin(std::numbers::pi * frac));
}

std::string FiniteAbelianGroup::describe() const {
    std::string s;
    for (std::size_t j = 0; j < factors_.size(); ++j) {
        if (j) s += " x ";
        s += "Z/" + std::to_string(factors_[j]);
    }
    return s;
}

std::vector<Index> sorted_unique(std::vector<Index> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool sorted_contains(const std::vector<Index>& v, Index x) {
    return std::binary_search(v.begin(), v.end(), x);
}

bool sorted_is_subset(const std::vector<Index>& sub, const std::vector<Index>& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

std::vector<Index> sorted_intersect(const std::vector<Index>& a, const std::vector<Index>& b) {
    std::vector<Index> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace tieq
