// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlpriv/rng.hpp"

#include <set>

using namespace mlpriv;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Reference vectors from the Random123 distribution (kat_vectors).
    using A4 = std::array<std::uint32_t, 4>;
    using A2 = std::array<std::uint32_t, 2>;

    const A4 zero = rng::Philox4x32::block_raw(A4{0u, 0u, 0u, 0u}, A2{0u, 0u});
    CHECK(zero == A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

    const A4 ones = rng::Philox4x32::block_raw(
        A4{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, A2{0xffffffffu, 0xffffffffu});
    CHECK(ones == A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

    const A4 pi = rng::Philox4x32::block_raw(A4{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                             A2{0xa4093822u, 0x299f31d0u});
    CHECK(pi == A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("substreams are deterministic and distinct") {
    rng::Substream a(42, rng::Purpose::kSample, 7);
    rng::Substream b(42, rng::Purpose::kSample, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    rng::Substream c(42, rng::Purpose::kSample, 8);
    rng::Substream d(42, rng::Purpose::kFlip, 7);
    rng::Substream e(43, rng::Purpose::kSample, 7);
    rng::Substream base(42, rng::Purpose::kSample, 7);
    bool all_equal_c = true, all_equal_d = true, all_equal_e = true;
    for (int i = 0; i < 16; ++i) {
        const std::uint64_t x = base.next_u64();
        all_equal_c &= (c.next_u64() == x);
        all_equal_d &= (d.next_u64() == x);
        all_equal_e &= (e.next_u64() == x);
    }
    CHECK_FALSE(all_equal_c);
    CHECK_FALSE(all_equal_d);
    CHECK_FALSE(all_equal_e);
}

TEST_CASE("u01 lies in [0,1) and below() respects its bound") {
    rng::Substream s(1, rng::Purpose::kGeneric, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = s.u01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const std::uint64_t v = s.below(13);
        CHECK(v < 13);
        seen.insert(v);
    }
    CHECK(seen.size() == 13);
}

TEST_CASE("pack2/pack3 are injective on their ranges") {
    CHECK(rng::pack2(1, 2) != rng::pack2(2, 1));
    CHECK(rng::pack3(1, 2, 3) != rng::pack3(3, 2, 1));
    CHECK(rng::pack2(0, 1) != rng::pack2(1, 0));
}

TEST_CASE("derive_seed differs across stream ids") {
    CHECK(rng::derive_seed(5, rng::Purpose::kReplication, 0) !=
          rng::derive_seed(5, rng::Purpose::kReplication, 1));
    CHECK(rng::derive_seed(5, rng::Purpose::kReplication, 0) ==
          rng::derive_seed(5, rng::Purpose::kReplication, 0));
}
