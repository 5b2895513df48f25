#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "shp/rng.hpp"

namespace shp {

// Fixed-width bitset over block ids; the storage behind district columns.
class BlockSet {
public:
    BlockSet() = default;
    explicit BlockSet(int num_bits)
        : bits_(num_bits), words_((num_bits + 63) / 64, 0) {}

    static BlockSet from_ids(int num_bits, const std::vector<int>& ids) {
        BlockSet s(num_bits);
        for (int id : ids) s.set(id);
        return s;
    }

    void set(int i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    int size_bits() const { return bits_; }

    int count() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    int intersection_count(const BlockSet& o) const {
        int c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i) c += std::popcount(words_[i] & o.words_[i]);
        return c;
    }

    std::vector<int> ids() const {
        std::vector<int> out;
        out.reserve(count());
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t word = words_[w];
            while (word) {
                int b = std::countr_zero(word);
                out.push_back(static_cast<int>(w * 64 + b));
                word &= word - 1;
            }
        }
        return out;
    }

    std::uint64_t hash() const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(bits_);
        for (auto w : words_) h = hash_combine(h, w);
        return h;
    }

    bool operator==(const BlockSet& o) const = default;

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    int bits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace shp
