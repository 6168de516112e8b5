#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace spt {

// Fixed-length bit vector over GF(2). Binary ops require equal lengths.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    std::size_t num_words() const { return w_.size(); }
    const std::vector<uint64_t>& words() const { return w_; }
    std::vector<uint64_t>& words() { return w_; }

    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { w_[i >> 6] |= uint64_t(1) << (i & 63); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
    void flip(std::size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }
    void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }
    void clear() { std::fill(w_.begin(), w_.end(), 0); }

    std::size_t count() const {
        std::size_t s = 0;
        for (uint64_t x : w_) s += std::popcount(x);
        return s;
    }
    bool any() const {
        for (uint64_t x : w_)
            if (x) return true;
        return false;
    }
    bool none() const { return !any(); }

    // Lowest set index, or size() if empty.
    std::size_t first() const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k]) return (k << 6) + std::countr_zero(w_[k]);
        return n_;
    }

    // popcount(a AND b) mod 2
    int dot(const BitVec& o) const {
        uint64_t acc = 0;
        for (std::size_t k = 0; k < w_.size(); ++k) acc ^= w_[k] & o.w_[k];
        return std::popcount(acc) & 1;
    }
    std::size_t overlap(const BitVec& o) const {
        std::size_t s = 0;
        for (std::size_t k = 0; k < w_.size(); ++k) s += std::popcount(w_[k] & o.w_[k]);
        return s;
    }

    BitVec& operator^=(const BitVec& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
        return *this;
    }
    BitVec& operator&=(const BitVec& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
        return *this;
    }
    BitVec& operator|=(const BitVec& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
    friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
    friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }
    friend bool operator==(const BitVec& a, const BitVec& b) { return a.n_ == b.n_ && a.w_ == b.w_; }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t k = 0; k < w_.size(); ++k) {
            uint64_t x = w_[k];
            while (x) {
                f((k << 6) + std::countr_zero(x));
                x &= x - 1;
            }
        }
    }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        for_each([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    std::size_t hash() const {
        uint64_t h = 0x9e3779b97f4a7c15ull ^ n_;
        for (uint64_t x : w_) {
            h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }

private:
    std::size_t n_ = 0;
    std::vector<uint64_t> w_;
};

}  // namespace spt

template <>
struct std::hash<spt::BitVec> {
    std::size_t operator()(const spt::BitVec& v) const noexcept { return v.hash(); }
};
