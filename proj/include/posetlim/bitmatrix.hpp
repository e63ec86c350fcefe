#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace posetlim {

/// Square boolean matrix with 64-bit packed rows. Backs both the strict
/// order relation of posets and digraph adjacency; sized for everything from
/// 3-element test posets up to n = 2000 random graph orders.
class BitMatrix {
public:
    explicit BitMatrix(int n)
        : n_(n), words_((n + 63) / 64), bits_(static_cast<std::size_t>(n) * std::size_t(words_), 0) {}

    int size() const { return n_; }

    bool get(int i, int j) const {
        return (bits_[row_offset(i) + std::size_t(j >> 6)] >> (j & 63)) & 1u;
    }

    void set(int i, int j, bool v = true) {
        const std::uint64_t bit = std::uint64_t(1) << (j & 63);
        auto& word = bits_[row_offset(i) + std::size_t(j >> 6)];
        if (v)
            word |= bit;
        else
            word &= ~bit;
    }

    /// row[dst] |= row[src]
    void or_row_from(const BitMatrix& other, int dst, int src) {
        const std::uint64_t* s = other.bits_.data() + other.row_offset(src);
        std::uint64_t* d = bits_.data() + row_offset(dst);
        for (int w = 0; w < words_; ++w) d[w] |= s[w];
    }

    /// row[sub] subset of row[sup]?
    bool row_subset(int sub, int sup) const {
        const std::uint64_t* a = bits_.data() + row_offset(sub);
        const std::uint64_t* b = bits_.data() + row_offset(sup);
        for (int w = 0; w < words_; ++w)
            if (a[w] & ~b[w]) return false;
        return true;
    }

    /// row i of this subset of row i of other? Sizes must match.
    bool row_subset_of(const BitMatrix& other, int i) const {
        const std::uint64_t* a = bits_.data() + row_offset(i);
        const std::uint64_t* b = other.bits_.data() + other.row_offset(i);
        for (int w = 0; w < words_; ++w)
            if (a[w] & ~b[w]) return false;
        return true;
    }

    /// rows i of this and j of other intersect?
    bool rows_intersect(const BitMatrix& other, int i, int j) const {
        const std::uint64_t* a = bits_.data() + row_offset(i);
        const std::uint64_t* b = other.bits_.data() + other.row_offset(j);
        for (int w = 0; w < words_; ++w)
            if (a[w] & b[w]) return true;
        return false;
    }

    int row_count(int i) const {
        const std::uint64_t* r = bits_.data() + row_offset(i);
        int c = 0;
        for (int w = 0; w < words_; ++w) c += __builtin_popcountll(r[w]);
        return c;
    }

    std::uint64_t count() const {
        std::uint64_t c = 0;
        for (auto w : bits_) c += std::uint64_t(__builtin_popcountll(w));
        return c;
    }

    bool any_diagonal() const {
        for (int i = 0; i < n_; ++i)
            if (get(i, i)) return true;
        return false;
    }

    /// Visit column indices of the set bits in row i, ascending.
    template <class Fn>
    void for_each_in_row(int i, Fn&& fn) const {
        const std::uint64_t* r = bits_.data() + row_offset(i);
        for (int w = 0; w < words_; ++w) {
            std::uint64_t word = r[w];
            while (word) {
                const int bit = __builtin_ctzll(word);
                fn(w * 64 + bit);
                word &= word - 1;
            }
        }
    }

    BitMatrix transposed() const {
        BitMatrix t(n_);
        for (int i = 0; i < n_; ++i)
            for_each_in_row(i, [&](int j) { t.set(j, i); });
        return t;
    }

    /// Reachability by paths of length >= 1, via repeated squaring
    /// (B <- B | B*B until stable; O(n^3 log n / 64) worst case).
    void transitive_close() {
        bool grew = true;
        int rounds = 0;
        while (grew && rounds <= 64) {
            grew = false;
            ++rounds;
            BitMatrix next = *this;
            for (int i = 0; i < n_; ++i) {
                for_each_in_row(i, [&](int j) { next.or_row_from(*this, i, j); });
            }
            if (!(next == *this)) {
                grew = true;
                *this = std::move(next);
            }
        }
    }

    bool operator==(const BitMatrix& other) const {
        return n_ == other.n_ && bits_ == other.bits_;
    }

    /// Row-major bit packing into bytes; a canonical key for maps.
    std::string to_key() const {
        std::string key;
        key.reserve(static_cast<std::size_t>(n_) * std::size_t((n_ + 7) / 8));
        for (int i = 0; i < n_; ++i) {
            unsigned char byte = 0;
            int nbits = 0;
            for (int j = 0; j < n_; ++j) {
                byte = static_cast<unsigned char>(byte | (static_cast<unsigned char>(get(i, j)) << nbits));
                if (++nbits == 8) {
                    key.push_back(char(byte));
                    byte = 0;
                    nbits = 0;
                }
            }
            if (nbits) key.push_back(char(byte));
        }
        return key;
    }

private:
    std::size_t row_offset(int i) const { return std::size_t(i) * std::size_t(words_); }

    int n_;
    int words_;
    std::vector<std::uint64_t> bits_;
};

} // namespace posetlim
