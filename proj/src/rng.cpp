// SPDX-License-Identifier: Apache-2.0
#include "mlpriv/rng.hpp"

#include <stdexcept>

namespace mlpriv::rng {

namespace {

inline void philox_round(std::array<std::uint32_t, 4>& x, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(Philox4x32::kMul0) * x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(Philox4x32::kMul1) * x[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
}

}  // namespace

std::array<std::uint32_t, 4> Philox4x32::block_raw(std::array<std::uint32_t, 4> ctr,
                                                   std::array<std::uint32_t, 2> key) {
    std::uint32_t k0 = key[0];
    std::uint32_t k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        philox_round(ctr, k0, k1);
    }
    return ctr;
}

std::array<std::uint32_t, 4> Philox4x32::block(std::uint64_t key, std::uint64_t ctr_hi,
                                               std::uint64_t ctr_lo) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(ctr_lo),
        static_cast<std::uint32_t>(ctr_lo >> 32),
        static_cast<std::uint32_t>(ctr_hi),
        static_cast<std::uint32_t>(ctr_hi >> 32),
    };
    const std::array<std::uint32_t, 2> k = {
        static_cast<std::uint32_t>(key),
        static_cast<std::uint32_t>(key >> 32),
    };
    return block_raw(ctr, k);
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t pack2(std::uint64_t a, std::uint64_t b) {
    return (a << 32) | (b & 0xFFFFFFFFull);
}

std::uint64_t pack3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return (a << 42) | ((b & 0x3FFFFFull) << 20) | (c & 0xFFFFFull);
}

Substream::Substream(std::uint64_t seed, Purpose purpose, std::uint64_t stream_id)
    : key_(mix64(seed) ^ mix64(static_cast<std::uint64_t>(purpose) * 0xA24BAED4963EE407ull)),
      hi_(stream_id) {}

void Substream::refill() {
    buf_ = Philox4x32::block(key_, hi_, ctr_++);
    pos_ = 0;
}

std::uint64_t Substream::next_u64() {
    if (pos_ > 2) refill();
    const std::uint64_t lo = buf_[pos_];
    const std::uint64_t hi = buf_[pos_ + 1];
    pos_ += 2;
    return (hi << 32) | lo;
}

double Substream::u01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Substream::uniform(double lo, double hi) {
    return lo + u01() * (hi - lo);
}

bool Substream::bernoulli(double p) {
    return u01() < p;
}

std::uint64_t Substream::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Substream::below: bound must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r = next_u64();
    while (r >= limit) r = next_u64();
    return r % bound;
}

std::uint64_t derive_seed(std::uint64_t seed, Purpose purpose, std::uint64_t stream_id) {
    Substream s(seed, purpose, stream_id);
    return s.next_u64();
}

}  // namespace mlpriv::rng
