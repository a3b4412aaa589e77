#pragma once

#include <complex>
#include <span>
#include <vector>

#include "tieq/group.hpp"

namespace tieq {

/// Which index space a dense table of values lives on. Group-side quantities
/// are averaged over |G|; dual-side quantities are plain sums. Concretely:
///   <f,g>   = |G|^-1 sum_x f(x) conj(g(x))      (group side)
///   <F,H>   = sum_chi F(chi) conj(H(chi))       (dual side)
///   (f*g)(x) = |G|^-1 sum_y f(y) g(x-y)         (group side)
///   (F*H)(chi) = sum_xi F(xi) H(chi-xi)         (dual side)
enum class Side { group, dual };

class DensityFunction {
public:
    DensityFunction(FiniteAbelianGroup group, Side side)
        : group_(std::move(group)), side_(side), values_(group_.order(), 0.0) {}
    DensityFunction(FiniteAbelianGroup group, Side side, std::vector<std::complex<double>> values);

    const FiniteAbelianGroup& group() const noexcept { return group_; }
    Side side() const noexcept { return side_; }
    std::int64_t size() const noexcept { return group_.order(); }
    std::span<const std::complex<double>> values() const noexcept { return values_; }
    std::complex<double> operator[](Index i) const noexcept { return values_[static_cast<std::size_t>(i)]; }
    std::complex<double>& at(Index i) { return values_[static_cast<std::size_t>(i)]; }

private:
    FiniteAbelianGroup group_;
    Side side_;
    std::vector<std::complex<double>> values_;
};

/// fhat(chi) = |G|^-1 sum_x f(x) conj(chi(x)). With this scaling Parseval
/// reads sum_chi |fhat|^2 = |G|^-1 sum_x |f|^2 with no stray factors.
DensityFunction fourier_transform(const DensityFunction& f);

/// f(x) = sum_chi fhat(chi) chi(x); exact inverse of the forward transform.
DensityFunction inverse_fourier(const DensityFunction& fhat);

/// Side-aware convolution (see the Side comment for normalizations).
/// Group side runs through the transform; dual side is a direct sum.
DensityFunction convolve(const DensityFunction& f, const DensityFunction& g);

/// Side-aware inner product, conjugate-linear in the second slot.
std::complex<double> inner_product(const DensityFunction& f, const DensityFunction& g);

DensityFunction indicator(const FiniteAbelianGroup& g, std::span<const Index> set);

/// mu_X = mu(X)^-1 1_X, so that the group-side average of mu_X is 1.
/// The empty set has no normalized indicator; that is a distinct error.
DensityFunction normalized_indicator(const FiniteAbelianGroup& g, std::span<const Index> set);

/// x -> f(x - t)
DensityFunction translate(const DensityFunction& f, Index t);

}  // namespace tieq
