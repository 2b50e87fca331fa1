#include <doctest.h>

#include <numeric>
#include <random>

#include "ltedci/seqfec.hpp"
#include "oracles.hpp"

using namespace ltedci;

namespace {

BitVector randomBits(std::mt19937_64& rng, size_t n) {
    BitVector v(n);
    for (auto& b : v) b = static_cast<uint8_t>(rng() & 1u);
    return v;
}

SoftBits streamsToLlrs(const std::array<BitVector, 3>& streams) {
    BitVector flat;
    for (const BitVector& s : streams) flat.insert(flat.end(), s.begin(), s.end());
    return bitsToLlrs(flat);
}

}  // namespace

TEST_CASE("scrambling sequence matches the shift-register recurrence") {
    for (uint32_t cInit : {0u, 1u, 13u, 0x1C5Fu, 0x7FFFFFFFu}) {
        const BitVector mine = goldSequence(cInit, 0, 200);
        CHECK(mine == oracles::goldByShiftRegisters(cInit, 200));
    }
    // Offset consumption equals skipping the prefix.
    const BitVector whole = goldSequence(909, 0, 300);
    const BitVector tail = goldSequence(909, 120, 180);
    CHECK(BitVector(whole.begin() + 120, whole.end()) == tail);
}

TEST_CASE("checksum equals long division and is linear") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const size_t len = 1 + rng() % 80;
        const BitVector a = randomBits(rng, len);
        CHECK(crc16(a) == oracles::crcByLongDivision(a));

        // Zero-initialized CRC is linear over GF(2).
        const BitVector b = randomBits(rng, len);
        CHECK(crc16(xorBits(a, b)) == xorBits(crc16(a), crc16(b)));
    }
}

TEST_CASE("broadcast-channel masks distinguish the port counts") {
    const BitVector m1 = pbchCrcMask(1);
    const BitVector m2 = pbchCrcMask(2);
    const BitVector m4 = pbchCrcMask(4);
    REQUIRE(m1.size() == 16);
    CHECK(std::accumulate(m1.begin(), m1.end(), 0) == 0);
    CHECK(std::accumulate(m2.begin(), m2.end(), 0) == 16);
    for (size_t i = 0; i < 16; ++i) CHECK(m4[i] == (i % 2 == 0 ? 0 : 1));
}

TEST_CASE("convolutional encoder matches the tap oracle and is cyclic") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const size_t n = 8 + rng() % 60;
        const BitVector msg = randomBits(rng, n);
        const auto streams = convEncode(msg);
        CHECK(streams == oracles::convByTaps(msg));

        // Tail-biting makes encoding equivariant under cyclic rotation.
        BitVector rotated(msg.size());
        for (size_t k = 0; k < msg.size(); ++k) rotated[k] = msg[(k + 1) % msg.size()];
        const auto rotStreams = convEncode(rotated);
        for (int s = 0; s < 3; ++s)
            for (size_t k = 0; k < n; ++k)
                CHECK(rotStreams[static_cast<size_t>(s)][k] ==
                      streams[static_cast<size_t>(s)][(k + 1) % n]);
    }
}

TEST_CASE("wrap-around decoder inverts the encoder") {
    std::mt19937_64 rng(11);
    for (size_t n : {8u, 13u, 21u, 40u, 64u}) {
        const BitVector msg = randomBits(rng, n);
        const SoftBits llrs = streamsToLlrs(convEncode(msg));
        CHECK(viterbiDecode(llrs, n) == msg);
    }
}

TEST_CASE("decoder tolerates erasures") {
    std::mt19937_64 rng(13);
    const BitVector msg = randomBits(rng, 40);
    SoftBits llrs = streamsToLlrs(convEncode(msg));
    // Erase 30% of the observations outright.
    for (size_t i = 0; i < llrs.size(); ++i)
        if (rng() % 10 < 3) llrs[i] = 0.0f;
    CHECK(viterbiDecode(llrs, 40) == msg);
}

TEST_CASE("sub-block interleaver order is a padded permutation") {
    for (size_t d : {10u, 32u, 47u, 96u}) {
        const std::vector<int> order = subBlockInterleaveOrder(d);
        CHECK(order.size() >= d);
        CHECK(order.size() % 32 == 0);
        std::vector<int> seen;
        for (int v : order)
            if (v >= 0) seen.push_back(v);
        std::sort(seen.begin(), seen.end());
        std::vector<int> expect(d);
        std::iota(expect.begin(), expect.end(), 0);
        CHECK(seen == expect);
    }
}

TEST_CASE("rate matching repeats or punctures through the circular buffer") {
    std::mt19937_64 rng(17);
    const size_t n = 30;
    const BitVector msg = randomBits(rng, n);
    const auto streams = convEncode(msg);

    // Repetition: with e = 2 * 3n every coded bit is sent exactly twice, so
    // the recovered magnitudes double.
    const size_t eRep = 6 * n;
    const BitVector sentTwice = rateMatchConv(streams, eRep);
    const SoftBits recovered = rateRecoverConv(bitsToLlrs(sentTwice), n);
    int doubled = 0;
    for (float v : recovered) {
        CHECK(std::abs(std::abs(v) - 2.0f) < 1e-6f);
        ++doubled;
    }
    CHECK(doubled == static_cast<int>(3 * n));

    // Puncturing: fewer transmitted bits leave the missing positions at zero
    // and the sent ones at exactly +-1.
    const size_t ePunct = 2 * n;
    const BitVector sentPart = rateMatchConv(streams, ePunct);
    const SoftBits part = rateRecoverConv(bitsToLlrs(sentPart), n);
    size_t nonzero = 0;
    for (float v : part)
        if (v != 0.0f) {
            CHECK(std::abs(std::abs(v) - 1.0f) < 1e-6f);
            ++nonzero;
        }
    CHECK(nonzero == ePunct);

    // Sign consistency: every transmitted position agrees with its stream bit.
    const std::vector<int> order = subBlockInterleaveOrder(n);
    for (size_t i = 0; i < 3 * n; ++i) {
        const float v = part[i];
        if (v == 0.0f) continue;
        const size_t stream = i / n;
        const size_t idx = i % n;
        CHECK((v > 0.0f ? 0 : 1) == streams[stream][idx]);
    }
}

TEST_CASE("round trip through rate matching at control-channel sizes") {
    std::mt19937_64 rng(19);
    for (size_t e : {72u, 144u, 288u, 576u}) {
        const size_t n = 42;
        if (2 * e < 3 * n) continue;
        const BitVector msg = randomBits(rng, n);
        const BitVector sent = rateMatchConv(convEncode(msg), e);
        REQUIRE(sent.size() == e);
        const SoftBits rec = rateRecoverConv(bitsToLlrs(sent), n);
        CHECK(viterbiDecode(rec, n) == msg);
    }
}
