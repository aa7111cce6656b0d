#include "rmpa/gf2.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rmpa {

namespace {

void check_dimension(int m) {
    if (m < 1 || m > kMaxDimension)
        throw std::domain_error("ambient dimension m must be in [1, " +
                                std::to_string(kMaxDimension) + "], got " + std::to_string(m));
}

int leading_bit(uint32_t v) {
    int b = -1;
    while (v) {
        ++b;
        v >>= 1;
    }
    return b;
}

}  // namespace

std::vector<uint32_t> Gf2Subspace::span() const {
    std::vector<uint32_t> out(1, 0);
    out.reserve(size_t{1} << basis.size());
    for (uint32_t b : basis) {
        size_t half = out.size();
        for (size_t i = 0; i < half; ++i) out.push_back(out[i] ^ b);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Gf2Subspace::contains(uint32_t v) const {
    for (uint32_t b : basis) {
        if (v == 0) break;
        if (leading_bit(v) == leading_bit(b)) v ^= b;
    }
    return v == 0;
}

uint64_t two_binomial(int m, int s) {
    if (m < 0 || s < 0 || s > m)
        throw std::domain_error("two_binomial requires 0 <= s <= m");
    // q-Pascal recurrence: [m s] = [m-1 s-1] + 2^s [m-1 s].
    std::vector<uint64_t> row(static_cast<size_t>(m) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= m; ++i)
        for (int j = i; j >= 1; --j) row[j] = row[j - 1] + (row[j] << j);
    return row[s];
}

std::vector<Gf2Subspace> enumerate_subspaces(int m, int d) {
    check_dimension(m);
    if (d < 1 || d > m) throw std::domain_error("subspace dimension d must be in [1, m]");

    std::vector<Gf2Subspace> out;
    out.reserve(two_binomial(m, d));

    // Pivot positions ascending as a combination; for each choice the free
    // entries (non-pivot bits below the pivot, excluding other pivots) are
    // swept in ascending numeric order.  For d = 1 this is {0, i} with i
    // ascending.
    std::vector<int> pivots(d);
    for (int i = 0; i < d; ++i) pivots[i] = i;

    auto emit = [&](const std::vector<int>& piv) {
        // Free positions for row with pivot p: bits < p that are not pivots.
        std::vector<std::vector<int>> free_bits(d);
        int total_free = 0;
        for (int i = 0; i < d; ++i) {
            for (int b = 0; b < piv[i]; ++b)
                if (std::find(piv.begin(), piv.end(), b) == piv.end()) free_bits[i].push_back(b);
            total_free += static_cast<int>(free_bits[i].size());
        }
        for (uint64_t f = 0; f < (uint64_t{1} << total_free); ++f) {
            Gf2Subspace sub;
            sub.m = m;
            sub.basis.resize(d);
            uint64_t rest = f;
            for (int i = 0; i < d; ++i) {
                uint32_t row = uint32_t{1} << piv[i];
                for (int b : free_bits[i]) {
                    if (rest & 1) row |= uint32_t{1} << b;
                    rest >>= 1;
                }
                sub.basis[i] = row;
            }
            // Descending leading bit.
            std::sort(sub.basis.begin(), sub.basis.end(), std::greater<>());
            out.push_back(std::move(sub));
        }
    };

    while (true) {
        emit(pivots);
        int i = d - 1;
        while (i >= 0 && pivots[i] == m - d + i) --i;
        if (i < 0) break;
        ++pivots[i];
        for (int j = i + 1; j < d; ++j) pivots[j] = pivots[j - 1] + 1;
    }
    // Canonical ordering: lexicographic on the basis sequence.  For d = 1
    // this is exactly {0, i} with i ascending.
    std::sort(out.begin(), out.end(),
              [](const Gf2Subspace& a, const Gf2Subspace& b) { return a.basis < b.basis; });
    return out;
}

CosetTable coset_table(const Gf2Subspace& sub) {
    check_dimension(sub.m);
    if (sub.dim() < 1 || sub.dim() > sub.m) throw std::domain_error("invalid subspace");

    const uint32_t n = uint32_t{1} << sub.m;
    const auto elems = sub.span();
    if (elems.size() != (size_t{1} << sub.dim()) || elems[0] != 0)
        throw std::domain_error("basis is not independent");

    CosetTable t;
    t.subspace = sub;
    t.coset_of.assign(n, UINT32_MAX);

    // Coset minimum per coordinate; a coordinate is a representative iff it
    // equals the minimum of its own coset.
    for (uint32_t z = 0; z < n; ++z) {
        if (t.coset_of[z] != UINT32_MAX) continue;
        uint32_t idx = static_cast<uint32_t>(t.reps.size());
        std::vector<uint32_t> mem;
        mem.reserve(elems.size());
        for (uint32_t e : elems) mem.push_back(z ^ e);
        std::sort(mem.begin(), mem.end());
        for (uint32_t v : mem) t.coset_of[v] = idx;
        t.reps.push_back(mem.front());
        t.members.push_back(std::move(mem));
    }
    return t;
}

Gf2Subspace canonical_span(int m, const std::vector<uint32_t>& gens) {
    check_dimension(m);
    if (gens.empty()) throw std::domain_error("empty generator set");

    // by_pivot[b] holds the (unique) row whose leading bit is b, or 0.
    std::array<uint32_t, kMaxDimension> by_pivot{};
    for (uint32_t g : gens) {
        if (g >= (uint32_t{1} << m)) throw std::domain_error("generator out of range");
        while (g) {
            int b = leading_bit(g);
            if (!by_pivot[b]) {
                by_pivot[b] = g;
                break;
            }
            g ^= by_pivot[b];
        }
    }
    // Clear pivot bits from the other rows for the reduced form.
    for (int b = 0; b < m; ++b) {
        if (!by_pivot[b]) continue;
        for (int c = b + 1; c < m; ++c)
            if (by_pivot[c] & (uint32_t{1} << b)) by_pivot[c] ^= by_pivot[b];
    }

    Gf2Subspace sub;
    sub.m = m;
    for (int b = m - 1; b >= 0; --b)
        if (by_pivot[b]) sub.basis.push_back(by_pivot[b]);
    if (sub.basis.empty()) throw std::domain_error("generators span only the zero vector");
    return sub;
}

Gf2Subspace compose_projection_chain(int m, uint32_t i1, uint32_t i2) {
    check_dimension(m);
    const uint32_t n = uint32_t{1} << m;
    if (i1 < 1 || i1 >= n) throw std::domain_error("level-1 index out of range");
    if (i2 < 1 || i2 >= n / 2) throw std::domain_error("level-2 quotient index out of range");

    Gf2Subspace b1;
    b1.m = m;
    b1.basis = {i1};
    const CosetTable t = coset_table(b1);
    // Pairing quotient indices z and z ^ i2; with z = 0 the second generator
    // is reps[i2] itself.
    return canonical_span(m, {i1, t.reps[i2]});
}

}  // namespace rmpa
