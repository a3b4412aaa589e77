#include "tieq/endo.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "tieq/modmath.hpp"

namespace tieq {

Endomorphism Endomorphism::scalar(const FiniteAbelianGroup& g, std::int64_t c) {
    if (g.uniform_modulus()) {
        std::size_t d = g.num_factors();
        std::vector<std::int64_t> m(d * d, 0);
        for (std::size_t i = 0; i < d; ++i) m[i * d + i] = mod_reduce(c, g.modulus());
        return Endomorphism(g, true, std::move(m));
    }
    return Endomorphism(g, false, {mod_reduce(c, g.phase_unit())});
}

Endomorphism Endomorphism::matrix(const FiniteAbelianGroup& g, std::vector<std::int64_t> row_major) {
    if (!g.uniform_modulus())
        throw std::invalid_argument("matrix endomorphisms need a single shared modulus");
    std::size_t d = g.num_factors();
    if (row_major.size() != d * d)
        throw std::invalid_argument("matrix size does not match the number of factors");
    for (auto& e : row_major) e = mod_reduce(e, g.modulus());
    return Endomorphism(g, true, std::move(row_major));
}

Endomorphism Endomorphism::identity(const FiniteAbelianGroup& g) { return scalar(g, 1); }
Endomorphism Endomorphism::zero(const FiniteAbelianGroup& g) { return scalar(g, 0); }

std::int64_t Endomorphism::scalar_value() const {
    if (matrix_) throw std::logic_error("matrix-form endomorphism has no single scalar");
    return entries_[0];
}

Index Endomorphism::apply(Index x) const {
    const auto& g = group_;
    if (!matrix_) {
        // coordinatewise multiplication by the stored scalar
        auto coords = g.coords_of(x);
        for (std::size_t j = 0; j < coords.size(); ++j)
            coords[j] = mul_mod(coords[j], mod_reduce(entries_[0], g.factors()[j]), g.factors()[j]);
        return g.index_of(coords);
    }
    std::size_t d = g.num_factors();
    std::int64_t n = g.modulus();
    auto coords = g.coords_of(x);
    std::vector<std::int64_t> out(d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        __int128 acc = 0;
        for (std::size_t j = 0; j < d; ++j) acc += static_cast<__int128>(entries_[i * d + j]) * coords[j];
        out[i] = static_cast<std::int64_t>(acc % n);
    }
    return g.index_of(out);
}

Index Endomorphism::apply_dual(Index chi) const {
    const auto& g = group_;
    if (!matrix_) {
        auto coords = g.coords_of(chi);
        for (std::size_t j = 0; j < coords.size(); ++j)
            coords[j] = mul_mod(coords[j], mod_reduce(entries_[0], g.factors()[j]), g.factors()[j]);
        return g.index_of(coords);
    }
    std::size_t d = g.num_factors();
    std::int64_t n = g.modulus();
    auto coords = g.coords_of(chi);
    std::vector<std::int64_t> out(d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        __int128 acc = 0;
        for (std::size_t j = 0; j < d; ++j) acc += static_cast<__int128>(entries_[j * d + i]) * coords[j];
        out[i] = static_cast<std::int64_t>(acc % n);
    }
    return g.index_of(out);
}

namespace {

void require_same_group(const Endomorphism& a, const Endomorphism& b) {
    if (!(a.group() == b.group()))
        throw std::invalid_argument("endomorphisms act on different groups");
}

}  // namespace

Endomorphism Endomorphism::compose(const Endomorphism& inner) const {
    require_same_group(*this, inner);
    if (!matrix_)
        return scalar(group_, mul_mod(entries_[0], inner.entries_[0], group_.phase_unit()));
    std::size_t d = dim();
    std::int64_t n = group_.modulus();
    std::vector<std::int64_t> m(d * d, 0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            __int128 acc = 0;
            for (std::size_t k = 0; k < d; ++k)
                acc += static_cast<__int128>(entries_[i * d + k]) * inner.entries_[k * d + j];
            m[i * d + j] = static_cast<std::int64_t>(acc % n);
        }
    return Endomorphism(group_, true, std::move(m));
}

Endomorphism Endomorphism::plus(const Endomorphism& other) const {
    require_same_group(*this, other);
    if (!matrix_)
        return scalar(group_, mod_reduce(entries_[0] + other.entries_[0], group_.phase_unit()));
    std::vector<std::int64_t> m(entries_.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = mod_reduce(entries_[i] + other.entries_[i], group_.modulus());
    return Endomorphism(group_, true, std::move(m));
}

Endomorphism Endomorphism::negated() const {
    if (!matrix_) return scalar(group_, -entries_[0]);
    std::vector<std::int64_t> m(entries_.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = mod_reduce(-entries_[i], group_.modulus());
    return Endomorphism(group_, true, std::move(m));
}

bool Endomorphism::is_zero_map() const {
    return std::all_of(entries_.begin(), entries_.end(), [](std::int64_t e) { return e == 0; });
}

bool Endomorphism::is_identity_map() const { return *this == identity(group_); }

bool Endomorphism::commutes_with(const Endomorphism& other) const {
    return compose(other) == other.compose(*this);
}

std::int64_t Endomorphism::det_mod() const {
    if (!matrix_) return entries_[0];
    std::int64_t n = group_.modulus();
    __int128 det = det_exact(entries_, dim());
    return mod_reduce(static_cast<std::int64_t>(det % n), n);
}

std::int64_t Endomorphism::det_gcd() const {
    std::int64_t n = matrix_ ? group_.modulus() : group_.phase_unit();
    return std::gcd(det_mod(), n);
}

bool Endomorphism::is_automorphism() const {
    // For scalars on a mixed factor list the condition gcd(c, N_j) = 1 for
    // every j collapses to gcd(c, lcm) = 1, the same formula as matrices.
    return det_gcd() == 1;
}

Endomorphism Endomorphism::inverse() const {
    std::int64_t n = matrix_ ? group_.modulus() : group_.phase_unit();
    auto dinv = mod_inverse(det_mod(), n);
    if (!dinv) throw std::invalid_argument("not an automorphism: determinant shares a factor with the modulus");
    if (!matrix_) return scalar(group_, *dinv);
    std::size_t d = dim();
    auto adj = adjugate_exact(entries_, d);
    std::vector<std::int64_t> m(d * d);
    for (std::size_t i = 0; i < d * d; ++i) {
        std::int64_t a = mod_reduce(static_cast<std::int64_t>(adj[i] % n), n);
        m[i] = mul_mod(a, *dinv, n);
    }
    return Endomorphism(group_, true, std::move(m));
}

std::string Endomorphism::describe() const {
    if (!matrix_) return "scalar " + std::to_string(entries_[0]);
    std::size_t d = dim();
    bool is_scalar = true;
    for (std::size_t i = 0; i < d && is_scalar; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (entries_[i * d + j] != (i == j ? entries_[0] : 0)) { is_scalar = false; break; }
    if (is_scalar) return "scalar " + std::to_string(entries_[0]);
    std::string s = "[";
    for (std::size_t i = 0; i < d; ++i) {
        s += i ? ";" : "";
        for (std::size_t j = 0; j < d; ++j) s += (j ? "," : "") + std::to_string(entries_[i * d + j]);
    }
    return s + "]";
}

EquationSystem EquationSystem::make(Endomorphism t1, Endomorphism t2, Endomorphism t3) {
    require_same_group(t1, t2);
    require_same_group(t1, t3);
    if (!t1.plus(t2).plus(t3).is_zero_map())
        throw std::invalid_argument("coefficients do not sum to zero: not translation-invariant");
    for (const auto* t : {&t1, &t2, &t3}) {
        if (!t->is_automorphism())
            throw std::invalid_argument("coefficient is not an automorphism (det " +
                                        std::to_string(t->det_mod()) + " shares gcd " +
                                        std::to_string(t->det_gcd()) + " with the modulus)");
    }
    return EquationSystem(std::move(t1), std::move(t2), std::move(t3));
}

EquationSystem EquationSystem::make_unchecked(Endomorphism t1, Endomorphism t2, Endomorphism t3) {
    require_same_group(t1, t2);
    require_same_group(t1, t3);
    return EquationSystem(std::move(t1), std::move(t2), std::move(t3));
}

EquationSystem EquationSystem::canonicalize() const {
    Endomorphism inv = t1_.inverse();
    return EquationSystem(Endomorphism::identity(group()), t2_.compose(inv), t3_.compose(inv));
}

bool EquationSystem::generators_commute() const {
    return t1_.commutes_with(t2_) && t1_.commutes_with(t3_) && t2_.commutes_with(t3_);
}

std::vector<EquationSystem::DetEntry> EquationSystem::determinant_report() const {
    std::vector<DetEntry> out;
    const Endomorphism* ts[3] = {&t1_, &t2_, &t3_};
    const char* names[3] = {"T1", "T2", "T3"};
    for (int i = 0; i < 3; ++i)
        out.push_back({names[i], ts[i]->det_mod(), ts[i]->det_gcd()});
    return out;
}

WordSet word_set(const EquationSystem& sys, int length) {
    if (length < 0) throw std::invalid_argument("word length must be nonnegative");
    if (!sys.is_canonical()) throw std::invalid_argument("word sets are defined for canonical systems (T1 = Id)");
    std::vector<Endomorphism> gens = {
        Endomorphism::identity(sys.group()), sys.t2(), sys.t3(), sys.t2().inverse(), sys.t3().inverse()};
    std::set<std::vector<std::int64_t>> seen;
    std::vector<Endomorphism> frontier = {Endomorphism::identity(sys.group())};
    for (int step = 0; step < length; ++step) {
        std::set<std::vector<std::int64_t>> next_seen;
        std::vector<Endomorphism> next;
        for (const auto& w : frontier)
            for (const auto& g : gens) {
                Endomorphism c = w.compose(g);
                if (next_seen.insert(c.entries()).second) next.push_back(std::move(c));
            }
        frontier = std::move(next);
    }
    std::sort(frontier.begin(), frontier.end(),
              [](const Endomorphism& a, const Endomorphism& b) { return a.entries() < b.entries(); });
    return WordSet{length, std::move(frontier)};
}

std::vector<Index> apply_to_set(const Endomorphism& t, const std::vector<Index>& set) {
    std::vector<Index> out;
    out.reserve(set.size());
    for (Index x : set) out.push_back(t.apply(x));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace tieq
