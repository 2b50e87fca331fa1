#pragma once

#include <optional>
#include <random>

#include "ltedci/blindrnti.hpp"
#include "ltedci/load.hpp"
#include "ltedci/pbch.hpp"

namespace ltedci {

// CRC attachment with the RNTI mask, convolutional coding and rate matching
// to e bits: the transmit-side counterpart of recoverRnti.
BitVector dciEncode(const BitVector& payload, uint16_t rnti, size_t e);

// Allocation request used to build a payload.
struct AllocationSpec {
    int raType = 0;                // 0, 1 or 2
    std::vector<uint8_t> bitmap;   // type 0: one bit per RBG; type 1: full field
    int subset = 0;                // type 1
    int shift = 0;                 // type 1
    int start = 0;                 // type 2
    int length = 0;                // type 2
    bool distributed = false;      // type 2 flag (format 1A)
};

// Builds a payload with the requested allocation, remaining fields zero
// unless overridden by name. The result is round-tripped through the parser.
DciMessage buildDci(DciFormat f, const CellConfig& cfg, const AllocationSpec& alloc,
                    const std::vector<DciField>& overrides = {});

struct DciPlant {
    uint16_t rnti = 0;
    DciFormat format = DciFormat::f1a;
    int aggregationLevel = 1;
    std::optional<int> cceOffset;  // auto-assigned when absent
    std::vector<int> subframes;    // within every generated frame
    DciMessage message;
};

struct ScheduleSpec {
    CellConfig cell;
    int startSfn = 0;
    int frames = 1;
    int cfi = 2;
    bool ocng = false;  // fill all unallocated data REs with unit QPSK
    uint64_t seed = 1;
    std::vector<DciPlant> plants;
};

struct ImpairmentSpec {
    std::optional<double> snrDb;  // AWGN level; absent means noiseless
    double cfoHz = 0.0;
    int timingPadSamples = 0;
    uint64_t noiseSeed = 99;
};

struct Scenario {
    ScheduleSpec schedule;
    ImpairmentSpec impairments;
};

Scenario parseScenario(const nlohmann::json& j);
nlohmann::json scenarioToJson(const Scenario& s);

// Resolved CCE offsets per subframe: (plant index, offset), deterministic.
// Throws ScheduleOverflow / CapacityExceeded on infeasible schedules.
std::vector<std::vector<std::pair<size_t, int>>> resolveSchedule(const ScheduleSpec& spec);

// The ten subframe grids of one frame. Port signals are summed, which equals
// per-port transmission through unit gains for a single-antenna capture.
std::vector<ResourceGrid> generateFrame(
    const ScheduleSpec& spec,
    const std::vector<std::vector<std::pair<size_t, int>>>& resolved, int frameIndex);

IqRecording applyImpairments(const IqRecording& rec, const ImpairmentSpec& imp);

struct GeneratedRecording {
    IqRecording recording;
    std::vector<DciCandidate> manifest;  // ground truth, ordered
};

GeneratedRecording generateRecording(const Scenario& s);

}  // namespace ltedci
