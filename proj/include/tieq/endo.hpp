#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tieq/group.hpp"

namespace tieq {

/// An endomorphism of the group. On groups with one shared modulus N this is
/// a d x d integer matrix mod N (scalars are promoted to c*Id at
/// construction, so the representation is canonical). On mixed factor lists
/// only scalar maps x_j -> c x_j are supported; c is stored mod lcm(N_j).
class Endomorphism {
public:
    static Endomorphism scalar(const FiniteAbelianGroup& g, std::int64_t c);
    static Endomorphism matrix(const FiniteAbelianGroup& g, std::vector<std::int64_t> row_major);
    static Endomorphism identity(const FiniteAbelianGroup& g);
    static Endomorphism zero(const FiniteAbelianGroup& g);

    const FiniteAbelianGroup& group() const noexcept { return group_; }
    bool is_matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return group_.num_factors(); }
    const std::vector<std::int64_t>& entries() const noexcept { return entries_; }  // matrix form
    std::int64_t scalar_value() const;  // scalar form only

    Index apply(Index x) const;
    /// Dual action chi -> chi o T (transpose of the matrix; same scalar).
    Index apply_dual(Index chi) const;

    Endomorphism compose(const Endomorphism& inner) const;  // this o inner
    Endomorphism plus(const Endomorphism& other) const;
    Endomorphism negated() const;

    bool is_zero_map() const;
    bool is_identity_map() const;
    bool commutes_with(const Endomorphism& other) const;

    /// det mod N for matrices (N the shared modulus); the scalar itself mod
    /// lcm otherwise. Automorphism iff gcd with the relevant modulus is 1.
    std::int64_t det_mod() const;
    std::int64_t det_gcd() const;
    bool is_automorphism() const;
    Endomorphism inverse() const;  // throws when not an automorphism

    bool operator==(const Endomorphism& other) const noexcept {
        return group_ == other.group_ && matrix_ == other.matrix_ && entries_ == other.entries_;
    }
    bool operator<(const Endomorphism& other) const noexcept { return entries_ < other.entries_; }

    std::string describe() const;

private:
    Endomorphism(FiniteAbelianGroup g, bool matrix, std::vector<std::int64_t> entries)
        : group_(std::move(g)), matrix_(matrix), entries_(std::move(entries)) {}

    FiniteAbelianGroup group_;
    bool matrix_;                        // matrix form iff uniform modulus
    std::vector<std::int64_t> entries_;  // d*d residues, or a single scalar residue
};

/// The equation T1 a1 + T2 a2 + T3 a3 = 0. Valid systems have each T_i an
/// automorphism and T1 + T2 + T3 = 0 (that sum condition is exactly
/// translation invariance of the solution set).
class EquationSystem {
public:
    static EquationSystem make(Endomorphism t1, Endomorphism t2, Endomorphism t3);
    /// Skips validation; only for demonstrating what goes wrong without it.
    static EquationSystem make_unchecked(Endomorphism t1, Endomorphism t2, Endomorphism t3);

    const FiniteAbelianGroup& group() const noexcept { return t1_.group(); }
    const Endomorphism& t1() const noexcept { return t1_; }
    const Endomorphism& t2() const noexcept { return t2_; }
    const Endomorphism& t3() const noexcept { return t3_; }

    bool is_canonical() const { return t1_.is_identity_map(); }

    /// (Id, T2 T1^-1, T3 T1^-1); solutions correspond under A -> T1 A,
    /// which set_transform() exposes.
    EquationSystem canonicalize() const;
    Endomorphism set_transform() const { return t1_; }

    bool generators_commute() const;  // pairwise, all three maps

    struct DetEntry { std::string name; std::int64_t det; std::int64_t gcd; };
    std::vector<DetEntry> determinant_report() const;

private:
    EquationSystem(Endomorphism t1, Endomorphism t2, Endomorphism t3)
        : t1_(std::move(t1)), t2_(std::move(t2)), t3_(std::move(t3)) {}
    Endomorphism t1_, t2_, t3_;
};

/// All distinct compositions of exactly `length` maps drawn from
/// {Id, T2, T3, T2^-1, T3^-1}. For canonical systems T3 = -Id - T2, so all
/// generators commute and the count grows quadratically: |W_i| <= (2i+1)^2.
struct WordSet {
    int length = 0;
    std::vector<Endomorphism> members;  // deduplicated, sorted by entries
};

WordSet word_set(const EquationSystem& sys, int length);

/// Transform a sorted element set through T.
std::vector<Index> apply_to_set(const Endomorphism& t, const std::vector<Index>& set);

}  // namespace tieq
