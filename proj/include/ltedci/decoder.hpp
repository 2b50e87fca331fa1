#pragma once

#include "ltedci/load.hpp"
#include "ltedci/pbch.hpp"
#include "ltedci/sync.hpp"

namespace ltedci {

struct DecodeOptions {
    int maxErrors = 2;
    bool dedup = true;
    LoadPolicy loadPolicy;
    std::vector<DciFormat> formats = {DciFormat::f0, DciFormat::f1, DciFormat::f1a,
                                      DciFormat::f2, DciFormat::f2a};
    int threads = 1;
    int maxFrames = 0;  // 0: decode every complete frame in the capture
};

struct DecodeResult {
    CellConfig cell;            // bandwidth/identity/ports as decoded over the air
    int nFrame = 0;             // system frame number of the first decoded frame
    SyncResult sync;
    Mib mib;
    int framesDecoded = 0;
    int subframesSkipped = 0;   // control-format indicator below confidence
    std::vector<DciCandidate> candidates;  // filtered, report order
    std::vector<FrameLoad> frameLoads;
    LoadSummary summary;
    int uniqueUeCount = 0;
};

// Full receive pipeline: cell search, broadcast-channel decode, per-subframe
// control-region recovery and blind DCI search, then load aggregation.
// Throws NoPssFound / NoSssFound when no cell is detectable and CrcFail when
// the broadcast channel never checks out.
DecodeResult decodeRecording(const IqRecording& rec, const DecodeOptions& opts = {});

}  // namespace ltedci
