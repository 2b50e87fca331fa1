#pragma once

#include <cstdint>
#include <optional>

#include "ltedci/cch.hpp"
#include "ltedci/dci.hpp"

namespace ltedci {

enum class RntiClass { cRnti, siRnti, pRnti, raRnti, reserved };

RntiClass classifyRnti(uint16_t rnti);
const char* rntiClassName(RntiClass c);

struct DciCandidate {
    int sfn = 0;
    int subframe = 0;
    uint16_t rnti = 0;
    int numErrors = 0;
    DciFormat format = DciFormat::f1a;
    LinkDirection direction = LinkDirection::downlink;
    PrbSet prbSet;
    std::optional<double> powerDb;
    int aggregationLevel = 1;
    int cceOffset = 0;
    BitVector payload;
    int multiplicity = 1;
};

// CRC unmasking: the 16 CRC bits of a decoded block are XORed with the
// computed CRC to reveal the RNTI, then the block is re-encoded and compared
// with the received hard decisions to count disagreements.
struct RecoverResult {
    uint16_t rnti = 0;
    int numErrors = 0;
};

RecoverResult recoverRnti(const BitVector& decodedBits, const SoftBits& receivedSoft);

struct SearchConfig {
    std::vector<DciFormat> formats = {DciFormat::f0, DciFormat::f1, DciFormat::f1a,
                                      DciFormat::f2, DciFormat::f2a};
    int maxErrors = 2;
    int threads = 1;
};

// Exhaustive blind search over aggregation levels 1/2/4/8 and all aligned CCE
// offsets. Candidates come back ordered by (cceOffset, level, size).
std::vector<DciCandidate> searchCandidates(const CceSpace& cces, const CellConfig& cfg,
                                           const SearchConfig& sc, int sfn);

// Post-search cleanup: error cap, duplicate collapse, overlap pruning against
// clean candidates, stable (subframe, cceOffset) order. Idempotent.
std::vector<DciCandidate> filterCandidates(std::vector<DciCandidate> in, int maxErrors = 2,
                                           bool dedup = true);

// Mean power over the data-region REs of the allocation, in dB relative to
// unit RE power, measured on an equalized grid.
double measurePower(const ResourceGrid& equalized, const PrbSet& prbs,
                    const CellConfig& cfg, int cfi, int subframe);

// Data-region RE positions of one PRB (control region, reference signals and
// the central sync/broadcast blocks excluded). Shared by the generator's
// filler and the power measurement.
std::vector<RePosition> pdschPositions(const CellConfig& cfg, int cfi, int subframe,
                                       int prb);

}  // namespace ltedci
