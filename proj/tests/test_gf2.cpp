#include <doctest.h>

#include <stdexcept>

#include <map>
#include <set>

#include "rmpa/gf2.hpp"

using namespace rmpa;

namespace {

// Brute-force count of d-dimensional subspaces: canonicalize the span of
// every d-tuple of vectors and count distinct spans.
size_t count_subspaces_brute(int m, int d) {
    std::set<std::vector<uint32_t>> spans;
    const uint32_t n = 1u << m;
    std::vector<uint32_t> gens(d);
    auto rec = [&](auto&& self, int at, uint32_t start) -> void {
        if (at == d) {
            Gf2Subspace s = canonical_span(m, gens);
            if (s.dim() == d) spans.insert(s.span());
            return;
        }
        for (uint32_t v = start; v < n; ++v) {
            gens[at] = v;
            self(self, at + 1, v + 1);
        }
    };
    rec(rec, 0, 1);
    return spans.size();
}

uint64_t rng_state = 12345;
uint32_t rnd(uint32_t bound) {
    rng_state = rng_state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<uint32_t>((rng_state >> 33) % bound);
}

}  // namespace

TEST_CASE("two_binomial base values") {
    CHECK(two_binomial(5, 0) == 1);
    CHECK(two_binomial(5, 1) == 31);  // one 1-D subspace per nonzero vector
    CHECK(two_binomial(5, 2) == 155);
    CHECK(two_binomial(6, 2) == 651);
    CHECK(two_binomial(7, 2) == 2667);
    CHECK(two_binomial(0, 0) == 1);
    CHECK_THROWS_AS(two_binomial(3, 4), std::domain_error);
}

TEST_CASE("two_binomial matches brute-force subspace counts") {
    for (int m = 2; m <= 5; ++m)
        for (int d = 1; d <= std::min(m, 3); ++d)
            CHECK(two_binomial(m, d) == count_subspaces_brute(m, d));
}

TEST_CASE("enumerate_subspaces dimension one is {0,i} in index order") {
    auto subs = enumerate_subspaces(3, 1);
    REQUIRE(subs.size() == 7);
    for (uint32_t i = 1; i <= 7; ++i) {
        CHECK(subs[i - 1].basis == std::vector<uint32_t>{i});
        CHECK(subs[i - 1].span() == std::vector<uint32_t>{0, i});
    }
}

TEST_CASE("enumerate_subspaces counts and distinctness") {
    for (int m = 3; m <= 8; ++m)
        for (int d = 1; d <= std::min(m, 3); ++d) {
            auto subs = enumerate_subspaces(m, d);
            CHECK(subs.size() == two_binomial(m, d));
            std::set<std::vector<uint32_t>> bases;
            for (const auto& s : subs) {
                CHECK(s.dim() == d);
                bases.insert(s.basis);
            }
            CHECK(bases.size() == subs.size());
        }
    auto full = enumerate_subspaces(4, 4);
    REQUIRE(full.size() == 1);
    CHECK(full[0].span().size() == 16);
    CHECK_THROWS_AS(enumerate_subspaces(4, 0), std::domain_error);
    CHECK_THROWS_AS(enumerate_subspaces(4, 5), std::domain_error);
}

TEST_CASE("coset_table pairs coordinates") {
    Gf2Subspace b;
    b.m = 3;
    b.basis = {5};
    auto t = coset_table(b);
    CHECK(t.reps == std::vector<uint32_t>{0, 1, 2, 3});
    CHECK(t.members[0] == std::vector<uint32_t>{0, 5});
    CHECK(t.members[1] == std::vector<uint32_t>{1, 4});
    CHECK(t.members[2] == std::vector<uint32_t>{2, 7});
    CHECK(t.members[3] == std::vector<uint32_t>{3, 6});

    Gf2Subspace b2;
    b2.m = 2;
    b2.basis = {1};
    auto t2 = coset_table(b2);
    CHECK(t2.members[0] == std::vector<uint32_t>{0, 1});
    CHECK(t2.members[1] == std::vector<uint32_t>{2, 3});
}

TEST_CASE("coset_table of a 2-D subspace partitions by minimum member") {
    auto s = canonical_span(4, {1, 2});
    auto t = coset_table(s);
    CHECK(t.reps == std::vector<uint32_t>{0, 4, 8, 12});
    REQUIRE(t.members.size() == 4);

    // Brute-force partition oracle: repeatedly take the smallest coordinate
    // not yet placed and form its coset.
    std::set<uint32_t> placed;
    std::vector<std::vector<uint32_t>> expect;
    auto span = s.span();
    for (uint32_t z = 0; z < 16; ++z) {
        if (placed.count(z)) continue;
        std::vector<uint32_t> coset;
        for (uint32_t e : span) {
            coset.push_back(z ^ e);
            placed.insert(z ^ e);
        }
        std::sort(coset.begin(), coset.end());
        expect.push_back(coset);
    }
    CHECK(t.members == expect);
}

TEST_CASE("coset_table invariants for random subspaces") {
    for (int m = 3; m <= 6; ++m)
        for (int d = 1; d <= 2; ++d) {
            auto subs = enumerate_subspaces(m, d);
            for (int trial = 0; trial < 10; ++trial) {
                const auto& s = subs[rnd(static_cast<uint32_t>(subs.size()))];
                auto t = coset_table(s);
                CHECK(t.num_cosets() == (1 << (m - d)));
                CHECK(t.reps[0] == 0);
                std::set<uint32_t> all;
                for (int k = 0; k < t.num_cosets(); ++k) {
                    CHECK(t.members[k].size() == (size_t{1} << d));
                    CHECK(t.members[k].front() == t.reps[k]);
                    for (uint32_t z : t.members[k]) {
                        CHECK(t.coset_of[z] == static_cast<uint32_t>(k));
                        all.insert(z);
                    }
                }
                CHECK(all.size() == (size_t{1} << m));
                for (int k = 1; k < t.num_cosets(); ++k) CHECK(t.reps[k - 1] < t.reps[k]);
            }
        }
}

TEST_CASE("canonical_span basics") {
    auto s = canonical_span(3, {1, 2});
    CHECK(s.basis == std::vector<uint32_t>{2, 1});
    CHECK(s.span() == std::vector<uint32_t>{0, 1, 2, 3});
    CHECK(canonical_span(3, {3, 1}) == canonical_span(3, {1, 2}));
    CHECK_THROWS_AS(canonical_span(3, {0, 0}), std::domain_error);
    CHECK_THROWS_AS(canonical_span(3, {}), std::domain_error);
}

TEST_CASE("canonical_span is generator-order invariant") {
    for (int trial = 0; trial < 1000; ++trial) {
        uint32_t a = 1 + rnd(31);
        uint32_t b = 1 + rnd(31);
        auto s1 = canonical_span(5, {a, b});
        auto s2 = canonical_span(5, {b, a});
        CHECK(s1 == s2);
        CHECK(s1.span() == s2.span());
        // The canonical form is also reachable from any spanning pair.
        if (s1.dim() == 2) {
            auto s3 = canonical_span(5, {a ^ b, b});
            CHECK(s1 == s3);
        }
    }
}

TEST_CASE("compose_projection_chain hand trace") {
    auto s = compose_projection_chain(3, 1, 1);
    CHECK(s.span() == std::vector<uint32_t>{0, 1, 2, 3});
    CHECK_THROWS_AS(compose_projection_chain(3, 0, 1), std::domain_error);
    CHECK_THROWS_AS(compose_projection_chain(3, 8, 1), std::domain_error);
    CHECK_THROWS_AS(compose_projection_chain(3, 1, 4), std::domain_error);
}

TEST_CASE("compose_projection_chain multiplicity over the full tree") {
    for (int m = 4; m <= 6; ++m) {
        const uint32_t n = 1u << m;
        std::map<std::vector<uint32_t>, std::set<uint32_t>> i1_of;
        std::map<std::vector<uint32_t>, int> count;
        for (uint32_t i1 = 1; i1 < n; ++i1)
            for (uint32_t i2 = 1; i2 < n / 2; ++i2) {
                auto s = compose_projection_chain(m, i1, i2);
                REQUIRE(s.dim() == 2);
                i1_of[s.basis].insert(i1);
                count[s.basis] += 1;
            }
        CHECK(count.size() == two_binomial(m, 2));
        for (const auto& [basis, c] : count) {
            // Exactly three (i1, i2) pairs, with i1 ranging over the three
            // nonzero elements of the subspace.
            CHECK(c == 3);
            Gf2Subspace s;
            s.m = m;
            s.basis = basis;
            auto span = s.span();
            std::set<uint32_t> nonzero(span.begin() + 1, span.end());
            CHECK(i1_of[basis] == nonzero);
        }
    }
}

TEST_CASE("every 2-D subspace is reachable with i1 below 2^{m-1}") {
    for (int m = 4; m <= 6; ++m) {
        const uint32_t n = 1u << m;
        std::set<std::vector<uint32_t>> seen;
        for (uint32_t i1 = 1; i1 < n / 2; ++i1)
            for (uint32_t i2 = 1; i2 < n / 2; ++i2) seen.insert(compose_projection_chain(m, i1, i2).basis);
        CHECK(seen.size() == two_binomial(m, 2));
    }
}
