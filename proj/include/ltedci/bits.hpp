#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ltedci {

using cf64 = std::complex<double>;

// Bits are stored one per byte, value 0 or 1, MSB of a field first.
using BitVector = std::vector<uint8_t>;

// Log-likelihood ratios. Positive means bit 0 is more likely.
using SoftBits = std::vector<float>;

inline void appendUint(BitVector& bits, uint64_t value, int width) {
    for (int i = width - 1; i >= 0; --i)
        bits.push_back(static_cast<uint8_t>((value >> i) & 1u));
}

inline uint64_t readUint(std::span<const uint8_t> bits, size_t offset, int width) {
    uint64_t v = 0;
    for (int i = 0; i < width; ++i)
        v = (v << 1) | bits[offset + static_cast<size_t>(i)];
    return v;
}

inline BitVector xorBits(const BitVector& a, const BitVector& b) {
    BitVector out(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] ^ b[i];
    return out;
}

inline BitVector hardDecisions(const SoftBits& llrs) {
    BitVector out(llrs.size());
    for (size_t i = 0; i < llrs.size(); ++i)
        out[i] = llrs[i] < 0.0f ? 1 : 0;
    return out;
}

inline SoftBits bitsToLlrs(const BitVector& bits, float magnitude = 1.0f) {
    SoftBits out(bits.size());
    for (size_t i = 0; i < bits.size(); ++i)
        out[i] = bits[i] ? -magnitude : magnitude;
    return out;
}

std::string bitsToHex(const BitVector& bits);

}  // namespace ltedci
