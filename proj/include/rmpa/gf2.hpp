#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace rmpa {

// Maximum ambient dimension accepted anywhere in this library.  Everything
// here is meant to run at desk scale (n = 2^m <= 1024).
inline constexpr int kMaxDimension = 10;

// A d-dimensional subspace of F2^m.  Coordinates are integers in [0, 2^m);
// the basis is kept in reduced row-echelon form over F2 (distinct leading
// bits, descending leading-bit order), so two subspaces are equal iff their
// bases compare equal element-wise.
struct Gf2Subspace {
    int m = 0;
    std::vector<uint32_t> basis;

    int dim() const { return static_cast<int>(basis.size()); }

    // All 2^d elements of the span, ascending.
    std::vector<uint32_t> span() const;

    bool contains(uint32_t v) const;

    bool operator==(const Gf2Subspace&) const = default;
};

// Quotient-space bookkeeping for one subspace: coset representatives (the
// minimum member of each coset, ascending, so reps[0] == 0), a coordinate ->
// coset index map, and the sorted member list of every coset.
struct CosetTable {
    Gf2Subspace subspace;
    std::vector<uint32_t> reps;
    std::vector<uint32_t> coset_of;
    std::vector<std::vector<uint32_t>> members;

    int num_cosets() const { return static_cast<int>(reps.size()); }
    int coset_size() const { return 1 << subspace.dim(); }
};

// Gaussian binomial coefficient: the number of s-dimensional subspaces of
// F2^m.  Exact integer via the q-Pascal recurrence.  Throws std::domain_error
// for s > m or negative arguments.
uint64_t two_binomial(int m, int s);

// All d-dimensional subspaces of F2^m in a fixed deterministic order.  For
// d = 1 the order is {0, i} for i = 1 .. 2^m - 1; callers depend on it.
std::vector<Gf2Subspace> enumerate_subspaces(int m, int d);

// Coset table of a valid subspace; cosets are indexed by the rank of their
// minimum member.
CosetTable coset_table(const Gf2Subspace& sub);

// Reduced row-echelon basis of the span of `gens`.  Deterministic for any
// generator order.  Throws std::domain_error if the span is trivial.
Gf2Subspace canonical_span(int m, const std::vector<uint32_t>& gens);

// The 2-D subspace realized by projecting first onto {0, i1} and then
// projecting the quotient onto {0, i2}, where i2 is a quotient-space
// coordinate.  This subspace is the identity of the resulting first-order
// codeword.
Gf2Subspace compose_projection_chain(int m, uint32_t i1, uint32_t i2);

}  // namespace rmpa
