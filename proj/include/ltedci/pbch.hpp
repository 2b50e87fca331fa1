#pragma once

#include <array>
#include <optional>

#include "ltedci/numerology.hpp"
#include "ltedci/ofdm.hpp"

namespace ltedci {

struct Mib {
    int nDlRb = 50;
    PhichDuration phichDuration = PhichDuration::normal;
    PhichNg phichNg = PhichNg::one;
    int sfnMsb8 = 0;  // floor(SFN / 4), 8 bits
};

// 24-bit master information block payload (36.331 MasterInformationBlock).
BitVector packMib(const Mib& mib);
Mib parseMib(const BitVector& bits);  // throws InvalidFieldValue

// Full broadcast channel coding chain: CRC with the per-port mask, tail-biting
// convolutional code, rate matching to 1920 bits, cell-specific scrambling.
// Returned as the four 480-bit quarters transmitted over consecutive frames.
std::array<BitVector, 4> pbchEncode(const Mib& mib, int cellRefPorts, int pci);

struct PbchDecodeResult {
    Mib mib;
    int cellRefPorts = 0;
    int quarter = 0;  // SFN mod 4 of the frame the quarter came from
};

// Blind decode of one descrambled-at-quarter-offset soft block: tries the four
// quarter positions and the three port masks.
std::optional<PbchDecodeResult> pbchDecodeSoft(const SoftBits& quarterLlrs, int pci);

// Resource elements carrying the broadcast channel in a subframe-0 grid
// (slot 1, first four symbols, central six resource blocks), in mapping order.
std::vector<RePosition> pbchPositions(const CellConfig& cfg);

struct PbchResult {
    Mib mib;
    int cellRefPorts = 0;
    int fullSfn = 0;  // sfnMsb8 * 4 + quarter of the first supplied grid
};

// Decodes the broadcast channel from candidate subframe-0 grids of up to four
// consecutive frames. pci and the cyclic prefix are already known from sync;
// the bandwidth of `cfg` only has to match the capture, not the MIB.
// Throws CrcFail when no grid yields a valid block.
PbchResult pbchDecode(const std::vector<const ResourceGrid*>& subframe0Grids,
                      const CellConfig& cfg);

}  // namespace ltedci
