#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tieq/report.hpp"

namespace tieq {

/// d x d integer matrices M1, M2, M3 with M1 + M2 + M3 = 0 and nonzero
/// determinants. Entries row-major, arithmetic exact.
struct IntegerMatrixTriple {
    std::size_t dim = 0;
    std::array<std::vector<std::int64_t>, 3> m;

    static IntegerMatrixTriple make(std::size_t dim, std::vector<std::int64_t> m1,
                                    std::vector<std::int64_t> m2, std::vector<std::int64_t> m3);
};

/// Finite set of distinct integer points in Z^d.
struct LatticePointSet {
    std::size_t dim = 0;
    std::vector<std::vector<std::int64_t>> points;
    std::string source;

    static LatticePointSet make(std::size_t dim, std::vector<std::vector<std::int64_t>> pts,
                                std::string source = "");
};

/// C = max over the three matrices of the sup operator norm (largest absolute
/// row sum) and the absolute determinant. Exact integers in and out.
std::int64_t embedding_constant(const IntegerMatrixTriple& triple);

/// Smallest prime p with 4CT < p <= 8CT; one exists because the interval
/// doubles. Deterministic primality over the whole 64-bit range; a range that
/// would overflow it is rejected.
std::int64_t find_prime(std::int64_t c, std::int64_t t);

struct EmbedReport {
    std::int64_t c = 0;
    std::int64_t prime = 0;
    std::int64_t dropped = 0;  // points outside the box, removed by truncation
    LatticePointSet truncated;
    std::vector<std::vector<std::int64_t>> embedded;  // truncated points mod p, row-aligned
    IntegerMatrixTriple reduced;                      // matrix entries mod p
    std::int64_t integer_solutions = 0;               // ordered triples solving over Z
    std::int64_t modp_solutions = 0;                  // ordered triples solving mod p
    std::vector<CheckLine> checks;
    bool pass = false;
};

/// Truncate A to [-T, T]^d, reduce everything mod the prime from find_prime,
/// and confirm the lift is exact by enumeration on both sides: a triple of
/// truncated points solves the integer system iff its image solves the mod-p
/// system. The enabling estimate ||M1 a1 + M2 a2 + M3 a3||_sup <= 3CT < p is
/// recorded alongside the solution counts.
EmbedReport embed_and_lift_check(const LatticePointSet& a, std::int64_t t, const IntegerMatrixTriple& triple);

/// Rank-two planar lattice with complex multiplication. Elements are integer
/// coordinate pairs x*w1 + y*w2; the whole ring structure is the three basis
/// products w1*w1, w1*w2, w2*w2 written back in the basis. Integer tables are
/// precisely the closure w_i * Lambda inside Lambda, and associativity of the
/// induced product is verified on the basis at construction.
class ComplexLattice {
public:
    using Element = std::array<std::int64_t, 2>;

    ComplexLattice(Element w1_w1, Element w1_w2, Element w2_w2);
    static ComplexLattice gaussian();    // basis (1, i), i^2 = -1
    static ComplexLattice eisenstein();  // basis (1, w), w^2 = -1 - w

    Element multiply(const Element& a, const Element& b) const;
    Element subtract(const Element& a, const Element& b) const;
    /// Matrix of multiplication by z in the basis, row-major 2x2; column j
    /// holds the coordinates of z * w_j.
    std::array<std::int64_t, 4> mult_matrix(const Element& z) const;

private:
    Element t11_, t12_, t22_;
};

struct TriangleSpec {
    ComplexLattice::Element p1{}, p2{}, p3{};
};

/// Matrices of multiplication by p3-p2, p1-p3, p2-p1. Their sum is zero by
/// linearity; nonsingularity holds for any honest triangle and is validated.
/// Repeated vertices are rejected.
IntegerMatrixTriple triangle_to_matrices(const ComplexLattice& lat, const TriangleSpec& spec);

using PointTriple = std::array<ComplexLattice::Element, 3>;

/// Ordered triples of pairwise-distinct points of A solving the matrix
/// system of the spec triangle. Every hit is re-checked against the exact
/// ring identity (a3-a1)(p2-p1) = (a2-a1)(p3-p1); a disagreement is a hard
/// failure. dedup_unordered keeps one representative per vertex set.
std::vector<PointTriple> find_similar_triangles(const LatticePointSet& a, const ComplexLattice& lat,
                                                const TriangleSpec& spec, bool dedup_unordered = false);

struct DivergenceRow {
    std::int64_t radius = 0;       // sup-norm shell
    std::int64_t shell_count = 0;  // nonzero points on that shell
    double partial_sum = 0.0;      // sum of 1/||a||^d over all shells so far
    double comparison_sum = 0.0;   // sum of N^{-d} * shell_count(N) so far
};

/// Partial sums of sum 1/||a||^d over nested sup-norm truncations, together
/// with the partial-summation comparison series. Observational only: finite
/// data can exhibit growth, never divergence. The summand norm defaults to
/// sup and can be switched to Euclidean; shells are always sup-norm.
std::vector<DivergenceRow> divergence_diagnostic(const LatticePointSet& a, std::int64_t d_exponent,
                                                 bool euclidean = false);

}  // namespace tieq
