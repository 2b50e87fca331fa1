#pragma once

#include <array>
#include <atomic>
#include <cstdint>

#include "ltedci/bits.hpp"

namespace ltedci {

// Test hook: XORed into every Gold sequence cInit. Used by the self test to
// prove the checks actually fail when the scrambler is broken. Leave at 0.
extern std::atomic<uint32_t> testhookGoldCinitXor;

// Length-31 Gold sequence c(n) per 36.211 7.2, skipping `offset` outputs.
BitVector goldSequence(uint32_t cInit, size_t offset, size_t length);

// CRC16 over the bit sequence, generator x^16+x^12+x^5+1, zero initial state,
// most significant bit first. Returns the 16 parity bits.
BitVector crc16(const BitVector& payload);

// Per-port CRC mask for the broadcast channel (36.212 5.3.1.1).
BitVector pbchCrcMask(int cellRefPorts);

// Tail-biting convolutional code, K=7, generators 133/171/165 octal
// (36.212 5.1.3.1). Returns the three parity streams d0,d1,d2.
std::array<BitVector, 3> convEncode(const BitVector& input);

// Wrap-around Viterbi decoder for the tail-biting code. soft holds the three
// streams back to back (d0 | d1 | d2), each of length outLen. Missing
// observations are represented by zero LLRs.
BitVector viterbiDecode(const SoftBits& soft, size_t outLen);

// Rate matching for convolutionally coded control channels (36.212 5.1.4.2):
// per-stream sub-block interleaving followed by circular buffer readout.
BitVector rateMatchConv(const std::array<BitVector, 3>& streams, size_t e);

// Inverse of rateMatchConv for soft values. Repeated positions accumulate,
// unsent positions stay at zero. Output is d0 | d1 | d2, each of length n.
SoftBits rateRecoverConv(const SoftBits& soft, size_t n);

// Sub-block interleaver readout order for a stream of length d: the returned
// vector lists input indices in output order, -1 marking <NULL> padding.
std::vector<int> subBlockInterleaveOrder(size_t d);

}  // namespace ltedci
