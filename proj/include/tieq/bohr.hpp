#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tieq/endo.hpp"
#include "tieq/group.hpp"

namespace tieq {

/// x is a member when |1 - chi(x)| <= width + kBohrTol for every frequency;
/// exact boundary ties land inside. All downstream set computations use this
/// one predicate.
inline constexpr double kBohrTol = 1e-12;

struct RegularityReport {
    bool regular = false;
    double worst_kappa = 0.0;     // argument where the margin is smallest
    double worst_size = 0.0;      // |B_{1+kappa}| there
    double worst_bound = 0.0;     // the bound it is compared against
    bool worst_is_upper = false;  // which side was tightest
};

/// A Bohr set B = { x : |1 - chi(x)| <= nu(chi) for all chi in the frequency
/// set }. The identity of the object is the triple (group, frequencies,
/// widths); two Bohr sets with the same elements but different triples are
/// different objects. Frequencies are distinct nontrivial characters, stored
/// sorted by character index; duplicate frequencies passed to the constructor
/// are merged by taking the minimum width. Rank 0 means the whole group.
class BohrSet {
public:
    BohrSet(FiniteAbelianGroup group, std::vector<Index> frequencies, std::vector<double> widths);
    static BohrSet whole_group(FiniteAbelianGroup group);

    const FiniteAbelianGroup& group() const noexcept { return group_; }
    const std::vector<Index>& frequencies() const noexcept { return freq_; }
    const std::vector<double>& widths() const noexcept { return widths_; }
    std::size_t rank() const noexcept { return freq_.size(); }

    const std::vector<Index>& elements() const noexcept { return elements_; }
    std::int64_t size() const noexcept { return static_cast<std::int64_t>(elements_.size()); }
    bool contains(Index x) const noexcept { return mask_[static_cast<std::size_t>(x)] != 0; }
    double density() const noexcept { return static_cast<double>(size()) / static_cast<double>(group_.order()); }

    /// Same triple: identical frequency list and identical width values.
    bool same_triple(const BohrSet& other) const noexcept;

    /// Widths scaled by rho > 0, clipped at 2 when rho > 1 (a width of 2
    /// constrains nothing). Dilation by rho <= 1 shrinks: B_rho subset of B.
    BohrSet dilate(double rho) const;

    /// Frequency union, shared frequencies keep the smaller width. The
    /// element set provably equals the set intersection; that is re-checked
    /// on every call and a mismatch is a hard failure.
    friend BohrSet intersect_bohr(const BohrSet& a, const BohrSet& b);

    /// T B = { T x } as a Bohr set: frequencies chi o T^{-1}, same widths.
    /// The element-level identity is re-checked on every call.
    BohrSet apply_automorphism(const Endomorphism& t) const;

    /// Exact regularity decision:
    ///   (1 - 100 d |kappa|) |B| <= |B_{1+kappa}| <= (1 + 100 d |kappa|) |B|
    /// for all |kappa| <= 1/(100 d). |B_{1+kappa}| is a step function of
    /// kappa, so the check walks its finitely many breakpoints (and one-sided
    /// limits) instead of sampling. Rank 0 is regular by convention.
    RegularityReport is_regular() const;

    /// Some rho in [1/2, 1] with dilate(rho) regular. Candidate intervals are
    /// cut at the breakpoint-induced critical values, each feasible interval
    /// is solved in closed form, and the winner is re-verified with
    /// is_regular before being returned.
    double find_regular_dilate() const;

private:
    void enumerate();
    /// Per-element critical dilation: smallest u with x in B_u (under the
    /// tolerance-adjusted predicate). Elements failing a zero-width
    /// constraint are excluded entirely.
    std::vector<double> dilation_profile() const;

    FiniteAbelianGroup group_;
    std::vector<Index> freq_;
    std::vector<double> widths_;
    std::vector<Index> elements_;
    std::vector<char> mask_;
};

BohrSet intersect_bohr(const BohrSet& a, const BohrSet& b);

}  // namespace tieq
