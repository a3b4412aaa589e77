#include "tieq/fourier.hpp"

#include <stdexcept>

#include "tieq/fft.hpp"

namespace tieq {

DensityFunction::DensityFunction(FiniteAbelianGroup group, Side side,
                                 std::vector<std::complex<double>> values)
    : group_(std::move(group)), side_(side), values_(std::move(values)) {
    if (static_cast<std::int64_t>(values_.size()) != group_.order())
        throw std::invalid_argument("value table size does not match group order");
}

namespace {

void require_compatible(const DensityFunction& f, const DensityFunction& g) {
    if (!(f.group() == g.group()))
        throw std::invalid_argument("operands live on different groups");
    if (f.side() != g.side())
        throw std::invalid_argument("operands live on different sides (group vs dual)");
}

/// Apply the length-N[axis] DFT along one axis of the mixed-radix table.
void transform_axis(std::vector<std::complex<double>>& vals, const FiniteAbelianGroup& g,
                    std::size_t axis, bool inverse) {
    const auto& factors = g.factors();
    std::int64_t n = factors[axis];
    std::int64_t stride = 1;
    for (std::size_t j = factors.size(); j-- > axis + 1;) stride *= factors[j];
    std::int64_t block = n * stride;
    std::int64_t blocks = g.order() / block;
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(n));
    for (std::int64_t b = 0; b < blocks; ++b) {
        for (std::int64_t inner = 0; inner < stride; ++inner) {
            std::int64_t base = b * block + inner;
            for (std::int64_t t = 0; t < n; ++t) buf[static_cast<std::size_t>(t)] = vals[static_cast<std::size_t>(base + t * stride)];
            detail::dft(buf, inverse);
            for (std::int64_t t = 0; t < n; ++t) vals[static_cast<std::size_t>(base + t * stride)] = buf[static_cast<std::size_t>(t)];
        }
    }
}

}  // namespace

DensityFunction fourier_transform(const DensityFunction& f) {
    if (f.side() != Side::group)
        throw std::invalid_argument("fourier_transform expects a group-side function");
    std::vector<std::complex<double>> vals(f.values().begin(), f.values().end());
    for (std::size_t axis = 0; axis < f.group().num_factors(); ++axis)
        transform_axis(vals, f.group(), axis, false);
    double scale = 1.0 / static_cast<double>(f.group().order());
    for (auto& v : vals) v *= scale;
    return DensityFunction(f.group(), Side::dual, std::move(vals));
}

DensityFunction inverse_fourier(const DensityFunction& fhat) {
    if (fhat.side() != Side::dual)
        throw std::invalid_argument("inverse_fourier expects a dual-side function");
    std::vector<std::complex<double>> vals(fhat.values().begin(), fhat.values().end());
    for (std::size_t axis = 0; axis < fhat.group().num_factors(); ++axis)
        transform_axis(vals, fhat.group(), axis, true);
    return DensityFunction(fhat.group(), Side::group, std::move(vals));
}

DensityFunction convolve(const DensityFunction& f, const DensityFunction& g) {
    require_compatible(f, g);
    if (f.side() == Side::group) {
        DensityFunction fh = fourier_transform(f);
        DensityFunction gh = fourier_transform(g);
        for (Index i = 0; i < fh.size(); ++i) fh.at(i) *= gh[i];
        return inverse_fourier(fh);
    }
    // dual side: plain unnormalized sum
    const FiniteAbelianGroup& grp = f.group();
    DensityFunction out(grp, Side::dual);
    for (Index x = 0; x < grp.order(); ++x) {
        std::complex<double> acc = 0.0;
        for (Index y = 0; y < grp.order(); ++y) acc += f[y] * g[grp.sub(x, y)];
        out.at(x) = acc;
    }
    return out;
}

std::complex<double> inner_product(const DensityFunction& f, const DensityFunction& g) {
    require_compatible(f, g);
    std::complex<double> acc = 0.0;
    for (Index i = 0; i < f.size(); ++i) acc += f[i] * std::conj(g[i]);
    if (f.side() == Side::group) acc /= static_cast<double>(f.group().order());
    return acc;
}

DensityFunction indicator(const FiniteAbelianGroup& g, std::span<const Index> set) {
    DensityFunction out(g, Side::group);
    for (Index x : set) {
        if (x < 0 || x >= g.order()) throw std::invalid_argument("set element out of range");
        out.at(x) = 1.0;
    }
    return out;
}

DensityFunction normalized_indicator(const FiniteAbelianGroup& g, std::span<const Index> set) {
    if (set.empty())
        throw std::invalid_argument("normalized indicator of the empty set is undefined");
    DensityFunction out(g, Side::group);
    double w = static_cast<double>(g.order()) / static_cast<double>(set.size());
    for (Index x : set) {
        if (x < 0 || x >= g.order()) throw std::invalid_argument("set element out of range");
        out.at(x) = w;
    }
    return out;
}

DensityFunction translate(const DensityFunction& f, Index t) {
    if (f.side() != Side::group) throw std::invalid_argument("translate expects a group-side function");
    const FiniteAbelianGroup& g = f.group();
    DensityFunction out(g, Side::group);
    for (Index x = 0; x < g.order(); ++x) out.at(x) = f[g.sub(x, t)];
    return out;
}

}  // namespace tieq
