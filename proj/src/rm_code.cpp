#include "rmpa/rm_code.hpp"

#include <stdexcept>

namespace rmpa {

std::vector<std::vector<uint8_t>> generator_matrix(int m, int r) {
    if (m < 1 || m > kMaxDimension) throw std::domain_error("m out of range");
    if (r < 0 || r > m) throw std::domain_error("order r must satisfy 0 <= r <= m");

    if (r == 0) return {std::vector<uint8_t>(size_t{1} << m, 1)};
    if (m == 1) return {{1, 1}, {0, 1}};  // r == 1 here

    // G(m,r) = [ G(m-1,r)  G(m-1,r) ; 0  G(m-1,r-1) ], degree capped at the
    // number of variables in the half-length block.
    auto top = generator_matrix(m - 1, std::min(r, m - 1));
    auto bottom = generator_matrix(m - 1, r - 1);

    const size_t half = size_t{1} << (m - 1);
    std::vector<std::vector<uint8_t>> g;
    g.reserve(top.size() + bottom.size());
    for (const auto& row : top) {
        std::vector<uint8_t> full(2 * half);
        for (size_t i = 0; i < half; ++i) full[i] = full[half + i] = row[i];
        g.push_back(std::move(full));
    }
    for (const auto& row : bottom) {
        std::vector<uint8_t> full(2 * half, 0);
        for (size_t i = 0; i < half; ++i) full[half + i] = row[i];
        g.push_back(std::move(full));
    }
    return g;
}

RmCode::RmCode(int m, int r) : m_(m), r_(r), n_(1 << m), generator_(generator_matrix(m, r)) {
    k_ = static_cast<int>(generator_.size());

    // Row-reduce a copy for membership tests.
    reduced_ = generator_;
    pivot_of_row_.clear();
    size_t row = 0;
    for (int col = 0; col < n_ && row < reduced_.size(); ++col) {
        size_t sel = row;
        while (sel < reduced_.size() && !reduced_[sel][col]) ++sel;
        if (sel == reduced_.size()) continue;
        std::swap(reduced_[row], reduced_[sel]);
        for (size_t i = 0; i < reduced_.size(); ++i) {
            if (i != row && reduced_[i][col])
                for (int j = 0; j < n_; ++j) reduced_[i][j] ^= reduced_[row][j];
        }
        pivot_of_row_.push_back(col);
        ++row;
    }
    if (row != reduced_.size()) throw std::logic_error("generator matrix is rank deficient");
}

std::vector<uint8_t> RmCode::encode(std::span<const uint8_t> u) const {
    if (static_cast<int>(u.size()) != k_) throw std::invalid_argument("message length != k");
    std::vector<uint8_t> c(n_, 0);
    for (int i = 0; i < k_; ++i) {
        if (!u[i]) continue;
        const auto& row = generator_[i];
        for (int j = 0; j < n_; ++j) c[j] ^= row[j];
    }
    return c;
}

bool RmCode::is_codeword(std::span<const uint8_t> c) const {
    if (static_cast<int>(c.size()) != n_) throw std::invalid_argument("codeword length != n");
    std::vector<uint8_t> v(c.begin(), c.end());
    for (size_t i = 0; i < reduced_.size(); ++i) {
        if (v[pivot_of_row_[i]])
            for (int j = 0; j < n_; ++j) v[j] ^= reduced_[i][j];
    }
    for (uint8_t b : v)
        if (b) return false;
    return true;
}

std::vector<uint8_t> binary_project(std::span<const uint8_t> c, const CosetTable& table) {
    if (c.size() != table.coset_of.size()) throw std::invalid_argument("dimension mismatch");
    std::vector<uint8_t> out(table.num_cosets(), 0);
    for (size_t z = 0; z < c.size(); ++z) out[table.coset_of[z]] ^= c[z];
    return out;
}

}  // namespace rmpa
