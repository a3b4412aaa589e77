#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tieq/bohr.hpp"
#include "tieq/endo.hpp"
#include "tieq/fourier.hpp"
#include "tieq/group.hpp"
#include "tieq/report.hpp"

namespace tieq {

struct SolutionCount {
    std::int64_t total = 0;
    std::int64_t trivial = 0;  // diagonal triples a1 = a2 = a3
    std::int64_t nontrivial() const { return total - trivial; }
    double normalized = 0.0;  // total / |G|^2
    std::optional<std::array<Index, 3>> sample_nontrivial;
};

/// Exact count of (a1, a2, a3) in A1 x A2 x A3 with T1 a1 + T2 a2 + T3 a3 = 0.
/// O(|A1||A2|): a3 is determined since T3 is invertible.
SolutionCount enumerate_solutions(const std::vector<Index>& a1, const std::vector<Index>& a2,
                                  const std::vector<Index>& a3, const EquationSystem& sys);

enum class TMethod { direct, fourier };

/// The normalized solution count as the inner product
///   <1_{T1 A1} * 1_{T2 A2}, 1_{-T3 A3}>,
/// which equals (number of solutions) / |G|^2. The direct method evaluates
/// the convolution as a literal O(|G|^2) sum; the fourier method evaluates
/// sum_chi over the transforms. The two routes share no code path.
double t_functional(const std::vector<Index>& a1, const std::vector<Index>& a2,
                    const std::vector<Index>& a3, const EquationSystem& sys, TMethod method);

struct Spectrum {
    double eta = 0.0;
    std::vector<Index> chars;        // sorted character indices with |mu_X hat| >= eta
    std::vector<double> magnitudes;  // aligned with chars
    bool contains(Index chi) const { return sorted_contains(chars, chi); }
};

/// Delta_eta(X) = { chi : |mu_X hat(chi)| >= eta } (non-strict; a 1e-12
/// tolerance keeps exact-boundary coefficients inside).
Spectrum large_spectrum(const FiniteAbelianGroup& g, const std::vector<Index>& x, double eta);

/// mu_A - mu_B for A a nonempty subset of B; mean zero by construction.
DensityFunction balanced_function(const FiniteAbelianGroup& g, const std::vector<Index>& a,
                                  const std::vector<Index>& b);


/// Everything the three-phase count/spectral dichotomy produces on one
/// instance. The hard contract: whenever energy >= (3/4) mu(B)^-1 and the
/// many-solutions inequality fails, at least one restricted spectral mass
/// reaches (1/8) mu(B)^-1.
struct DichotomyReport {
    double alpha = 0.0, mu_b = 0.0, mu_bprime = 0.0;
    double t_value = 0.0;
    double many_lhs = 0.0, many_rhs = 0.0;
    bool many_solutions = false;
    double energy = 0.0, energy_threshold = 0.0;
    bool energy_large = false;
    double mass_a1 = 0.0, mass_a2 = 0.0, mass_threshold = 0.0;
    bool spectral_branch = false;
    double eta_star = 0.0;        // dyadic level with the largest shell mass
    int eta_star_source = 0;      // 1 = first set, 2 = second set
    double eta_star_mass = 0.0;   // reported, no pass/fail attached
    bool contract_applicable = false;
    bool contract_holds = true;
    std::vector<CheckLine> preconditions;  // diagnostics, not fatal
};

/// A1 inside B, A2 inside T2^-1 B, A3 inside B2 (the smaller Bohr set);
/// sys must be canonical. alpha is the reference density; rho the dilation
/// scale the caller used to nest T3 B2 inside B.
DichotomyReport progressions_dichotomy(const std::vector<Index>& a1, const std::vector<Index>& a2,
                                       const std::vector<Index>& a3, const EquationSystem& sys,
                                       const BohrSet& b, const BohrSet& b2, double alpha, double rho);

struct MaxFreeResult {
    std::int64_t best = 0;
    std::vector<Index> witness;
    bool exact = true;  // false when the node budget ran out first
    std::int64_t nodes = 0;
};

/// Largest subset of G containing no nontrivial solution (triples with all
/// entries equal are always solutions and do not count). Branch and bound:
/// elements ordered by degree in the solution hypergraph, pruned by
/// remaining capacity. Exact when the budget suffices.
MaxFreeResult max_solution_free(const EquationSystem& sys, std::int64_t node_budget);

/// Deterministic greedy pass (ascending element order); handy seed/baseline.
std::vector<Index> greedy_solution_free(const EquationSystem& sys);

}  // namespace tieq
