#include "ltedci/seqfec.hpp"

#include <algorithm>
#include <limits>

#include "ltedci/errors.hpp"

namespace ltedci {

std::atomic<uint32_t> testhookGoldCinitXor{0};

BitVector goldSequence(uint32_t cInit, size_t offset, size_t length) {
    cInit ^= testhookGoldCinitXor.load(std::memory_order_relaxed);
    constexpr size_t kNc = 1600;
    uint32_t x1 = 1;  // x1 seed per 36.211 7.2
    uint32_t x2 = cInit & 0x7fffffffu;
    auto stepX1 = [&]() {
        const uint32_t fb = ((x1 >> 3) ^ x1) & 1u;
        x1 = (x1 >> 1) | (fb << 30);
    };
    auto stepX2 = [&]() {
        const uint32_t fb = ((x2 >> 3) ^ (x2 >> 2) ^ (x2 >> 1) ^ x2) & 1u;
        x2 = (x2 >> 1) | (fb << 30);
    };
    for (size_t i = 0; i < kNc + offset; ++i) {
        stepX1();
        stepX2();
    }
    BitVector out(length);
    for (size_t i = 0; i < length; ++i) {
        out[i] = static_cast<uint8_t>((x1 ^ x2) & 1u);
        stepX1();
        stepX2();
    }
    return out;
}

BitVector crc16(const BitVector& payload) {
    // x^16 + x^12 + x^5 + 1
    constexpr uint32_t kPoly = 0x1021;
    uint32_t reg = 0;
    // Feeding each bit at the register top makes this the remainder of
    // payload * x^16, so no zero flush is needed afterwards.
    for (uint8_t bit : payload) {
        reg ^= static_cast<uint32_t>(bit & 1u) << 15;
        reg <<= 1;
        if (reg & 0x10000u) reg ^= kPoly;
        reg &= 0xffffu;
    }
    BitVector out(16);
    for (int i = 0; i < 16; ++i) out[i] = static_cast<uint8_t>((reg >> (15 - i)) & 1u);
    return out;
}

BitVector pbchCrcMask(int cellRefPorts) {
    BitVector mask(16, 0);
    switch (cellRefPorts) {
        case 1: break;
        case 2: mask.assign(16, 1); break;
        case 4:
            for (int i = 0; i < 16; ++i) mask[i] = static_cast<uint8_t>(i % 2);
            break;
        default: fail(Err::InvalidPort, "CellRefP must be 1, 2 or 4");
    }
    return mask;
}

namespace {

constexpr int kConstraint = 7;
constexpr int kStates = 64;
// Generators 133, 171, 165 octal. The octal notation puts the coefficient of
// D^0 in the most significant bit; these masks are bit-reversed so that bit k
// carries the coefficient of D^k, matching a window with the newest bit in
// bit 0 and the oldest in bit 6.
constexpr std::array<uint8_t, 3> kGenerators = {0155, 0117, 0127};

inline uint8_t parity7(uint8_t x) {
    x ^= x >> 4;
    x ^= x >> 2;
    x ^= x >> 1;
    return x & 1u;
}

// Output triple for a transition from `state` (previous 6 input bits, most
// recent in the LSB) on input bit `b`.
inline std::array<uint8_t, 3> convOutput(int state, int b) {
    const uint8_t window = static_cast<uint8_t>((state << 1) | b);
    return {parity7(window & kGenerators[0]), parity7(window & kGenerators[1]),
            parity7(window & kGenerators[2])};
}

}  // namespace

std::array<BitVector, 3> convEncode(const BitVector& input) {
    const size_t n = input.size();
    if (n < 6) fail(Err::InputTooShort, "tail-biting code needs at least 6 bits");
    // Tail biting: the shift register starts loaded with the last 6 input bits.
    int state = 0;
    for (size_t i = n - 6; i < n; ++i) state = (state << 1) | input[i];
    state &= kStates - 1;
    std::array<BitVector, 3> out;
    for (auto& s : out) s.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const auto o = convOutput(state, input[i]);
        out[0][i] = o[0];
        out[1][i] = o[1];
        out[2][i] = o[2];
        state = ((state << 1) | input[i]) & (kStates - 1);
    }
    return out;
}

BitVector viterbiDecode(const SoftBits& soft, size_t outLen) {
    if (soft.size() != 3 * outLen) fail(Err::LengthMismatch, "soft length must be 3*outLen");
    if (outLen < 6) fail(Err::InputTooShort, "tail-biting code needs at least 6 bits");
    const int n = static_cast<int>(outLen);

    // Wrap-around decoding: run the trellis over several copies of the
    // received block and keep the decisions of the middle copy. Short blocks
    // get more copies so the traceback has room to converge on both sides.
    int copies = 3;
    while ((copies / 2) * n < 32) copies += 2;
    const int steps = copies * n;
    const int midStart = (copies / 2) * n;

    // Branch metric for transition producing bits (o0,o1,o2) at step t:
    // sum of +llr for output 0, -llr for output 1; maximize.
    std::vector<float> metric(kStates, 0.0f), next(kStates);
    std::vector<uint8_t> decisions(static_cast<size_t>(steps) * kStates);

    for (int t = 0; t < steps; ++t) {
        const int pos = t % n;
        const float l0 = soft[static_cast<size_t>(pos)];
        const float l1 = soft[static_cast<size_t>(n + pos)];
        const float l2 = soft[static_cast<size_t>(2 * n + pos)];
        std::fill(next.begin(), next.end(), -std::numeric_limits<float>::infinity());
        uint8_t* dec = decisions.data() + static_cast<size_t>(t) * kStates;
        for (int s = 0; s < kStates; ++s) {
            const float base = metric[s];
            for (int b = 0; b < 2; ++b) {
                const auto o = convOutput(s, b);
                const float m = base + (o[0] ? -l0 : l0) + (o[1] ? -l1 : l1) +
                                (o[2] ? -l2 : l2);
                const int ns = ((s << 1) | b) & (kStates - 1);
                // Strict comparison keeps the lower predecessor on ties.
                if (m > next[ns]) {
                    next[ns] = m;
                    dec[ns] = static_cast<uint8_t>(s >> 5);  // top bit leaving the register
                }
            }
        }
        metric.swap(next);
    }

    int best = 0;
    for (int s = 1; s < kStates; ++s)
        if (metric[s] > metric[best]) best = s;

    // Trace back from the end, recording input bits; the input bit of the
    // transition into state ns is the LSB of ns.
    BitVector out(outLen);
    int state = best;
    for (int t = steps - 1; t >= 0; --t) {
        const int bit = state & 1;
        const int prevTop = decisions[static_cast<size_t>(t) * kStates + state];
        if (t >= midStart && t < midStart + n) out[static_cast<size_t>(t - midStart)] = bit;
        state = (state >> 1) | (prevTop << 5);
    }
    return out;
}

std::vector<int> subBlockInterleaveOrder(size_t d) {
    constexpr int kCols = 32;
    constexpr std::array<int, 32> kColPerm = {1,  17, 9,  25, 5,  21, 13, 29, 3,  19, 11,
                                              27, 7,  23, 15, 31, 0,  16, 8,  24, 4,  20,
                                              12, 28, 2,  18, 10, 26, 6,  22, 14, 30};
    const int rows = static_cast<int>((d + kCols - 1) / kCols);
    const int pad = rows * kCols - static_cast<int>(d);
    std::vector<int> out;
    out.reserve(static_cast<size_t>(rows) * kCols);
    for (int c : kColPerm)
        for (int r = 0; r < rows; ++r) {
            const int idx = r * kCols + c - pad;
            out.push_back(idx >= 0 ? idx : -1);
        }
    return out;
}

BitVector rateMatchConv(const std::array<BitVector, 3>& streams, size_t e) {
    const size_t n = streams[0].size();
    if (streams[1].size() != n || streams[2].size() != n)
        fail(Err::LengthMismatch, "streams must have equal length");
    const std::vector<int> order = subBlockInterleaveOrder(n);
    // Circular buffer w = [pi(d0) pi(d1) pi(d2)] with <NULL> skipped on readout.
    BitVector out(e);
    size_t written = 0;
    size_t slot = 0;
    const size_t kw = order.size() * 3;
    while (written < e) {
        const size_t s = slot % kw;
        const size_t stream = s / order.size();
        const int idx = order[s % order.size()];
        ++slot;
        if (idx < 0) continue;
        out[written++] = streams[stream][static_cast<size_t>(idx)];
    }
    return out;
}

SoftBits rateRecoverConv(const SoftBits& soft, size_t n) {
    const std::vector<int> order = subBlockInterleaveOrder(n);
    SoftBits out(3 * n, 0.0f);
    size_t consumed = 0;
    size_t slot = 0;
    while (consumed < soft.size()) {
        const size_t s = slot % (order.size() * 3);
        const size_t stream = s / order.size();
        const int idx = order[s % order.size()];
        ++slot;
        if (idx < 0) continue;
        out[stream * n + static_cast<size_t>(idx)] += soft[consumed++];
    }
    return out;
}

}  // namespace ltedci
