// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace mlpriv::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// Stateless: the output block is a pure function of (counter, key), which
// makes every substream reproducible under any parallel schedule.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block_raw(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key);

    // counter = (hi, lo) as two 64-bit halves, key as one 64-bit word.
    static std::array<std::uint32_t, 4> block(std::uint64_t key,
                                              std::uint64_t ctr_hi,
                                              std::uint64_t ctr_lo);
};

// splitmix64 finalizer; decorrelates seeds and purpose tags.
std::uint64_t mix64(std::uint64_t x);

// Every random decision in the library is drawn from a stream identified by
// (seed, purpose, stream id). Distinct purposes never share a stream.
enum class Purpose : std::uint64_t {
    kLabels = 1,
    kDegrees,
    kCoreTensor,
    kSample,
    kFlip,
    kKMedians,
    kProfile,
    kReplication,
    kGeneric,
};

// Packs small index tuples into a single 64-bit stream id.  Callers are
// responsible for staying within the stated ranges; the pack is injective.
std::uint64_t pack2(std::uint64_t a, std::uint64_t b);                   // a, b < 2^32
std::uint64_t pack3(std::uint64_t a, std::uint64_t b, std::uint64_t c);  // a, b < 2^22, c < 2^20

// A single independent stream: the stream id selects the high counter word,
// successive draws advance the low word.  2^64 blocks per stream.
class Substream {
public:
    Substream(std::uint64_t seed, Purpose purpose, std::uint64_t stream_id = 0);

    double u01();  // uniform on [0,1), 53-bit mantissa
    double uniform(double lo, double hi);
    bool bernoulli(double p);
    std::uint64_t next_u64();
    std::uint64_t below(std::uint64_t bound);  // unbiased integer in [0, bound)

private:
    void refill();

    std::uint64_t key_;
    std::uint64_t hi_;
    std::uint64_t ctr_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

// Derives a fresh top-level seed for a nested unit of work (one experiment
// replication, one restart, ...).
std::uint64_t derive_seed(std::uint64_t seed, Purpose purpose, std::uint64_t stream_id);

}  // namespace mlpriv::rng
