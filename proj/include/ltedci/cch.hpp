#pragma once

#include <array>

#include "ltedci/numerology.hpp"
#include "ltedci/ofdm.hpp"

namespace ltedci {

// One resource element group: four data-bearing REs of one OFDM symbol.
struct Reg {
    std::array<RePosition, 4> res;
    int symbol = 0;
    int k0 = 0;  // lowest subcarrier of the group span
};

// 32-bit CFI codewords, rows for CFI 1..3 plus the reserved word.
const std::array<std::array<uint8_t, 32>, 4>& cfiCodewords();

// Number of OFDM symbols the control region spans for a given CFI value.
int controlSymbols(int cfi, int nDlRb);

struct ControlRegion {
    int cfi = 0;
    int numRegs = 0;  // REGs available to the PDCCH
    int numCces = 0;
    std::vector<Reg> pdcchRegs;   // k-first l-second order, PCFICH/PHICH removed
    std::vector<Reg> pcfichRegs;  // in quadruplet order
    std::vector<Reg> phichRegs;
    // regQuad[j]: index of the PDCCH symbol quadruplet carried by pdcchRegs[j]
    // after sub-block interleaving and the cell-identity cyclic shift.
    std::vector<int> regQuad;
};

ControlRegion computeControlRegion(const CellConfig& cfg, int cfi);

// PCFICH: encode returns the 16 QPSK symbols before port mapping; positions
// come from the control region. Decode reports the best codeword with a
// normalized confidence margin and throws LowConfidence below 0.5.
std::vector<cf64> pcfichSymbols(int cfi, const CellConfig& cfg, int subframe);

struct CfiDecode {
    int cfi = 0;
    double confidence = 0.0;
};

CfiDecode pcfichDecode(const ResourceGrid& grid, const PortEstimates& est,
                       const CellConfig& cfg, int subframe);

// Embeds a PCFICH word into the port grids (port1 may be null for 1-port).
void embedPcfich(int cfi, const CellConfig& cfg, int subframe, ResourceGrid& port0,
                 ResourceGrid* port1);

// Embeds the full PDCCH bit stream (8 bits per REG, CCE-multiplexed order,
// unscrambled) into the port grids. bits.size() must be 8 * numRegs.
void embedCces(const BitVector& bits, const CellConfig& cfg, int cfi, int subframe,
               ResourceGrid& port0, ResourceGrid* port1);

// Soft CCE stream recovered from a subframe grid: descrambled LLRs for
// numCces * 72 bit positions in CCE order.
struct CceSpace {
    int numCces = 0;
    int subframe = 0;
    SoftBits llrs;
};

CceSpace extractCces(const ResourceGrid& grid, const PortEstimates& est,
                     const CellConfig& cfg, int cfi, int subframe);

}  // namespace ltedci
