#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rmpa/gf2.hpp"

namespace rmpa {

// Reed-Muller code RM(m, r): length n = 2^m, dimension k = sum_{i<=r} C(m,i).
// The generator matrix follows the Plotkin recursion literally (top block
// first), so the message <-> codeword mapping is reproducible.
class RmCode {
public:
    RmCode(int m, int r);

    int m() const { return m_; }
    int r() const { return r_; }
    int n() const { return n_; }
    int k() const { return k_; }
    double rate() const { return static_cast<double>(k_) / n_; }

    const std::vector<std::vector<uint8_t>>& generator() const { return generator_; }

    // c = u G over F2; |u| must equal k.
    std::vector<uint8_t> encode(std::span<const uint8_t> u) const;

    // Rank test: true iff c lies in the row space of the generator.
    bool is_codeword(std::span<const uint8_t> c) const;

private:
    int m_, r_, n_, k_;
    std::vector<std::vector<uint8_t>> generator_;
    // Row-reduced copy of the generator, one row per pivot column, used by
    // the membership test.
    std::vector<std::vector<uint8_t>> reduced_;
    std::vector<int> pivot_of_row_;
};

// k x 2^m generator matrix of RM(m, r) by the Plotkin recursion.
std::vector<std::vector<uint8_t>> generator_matrix(int m, int r);

// Binary projection onto the cosets of the table's subspace: output
// coordinate for coset T is the XOR of c over T's members, ordered by coset
// index.
std::vector<uint8_t> binary_project(std::span<const uint8_t> c, const CosetTable& table);

}  // namespace rmpa
