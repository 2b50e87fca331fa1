#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "ltedci/bits.hpp"

namespace ltedci {

// Baseband capture. Samples are held as doubles in memory but stored on disk
// as interleaved little-endian float32 (I then Q), with a JSON sidecar
// carrying the metadata.
struct IqRecording {
    std::vector<cf64> samples;
    int64_t sampleRateHz = 0;
    std::optional<int64_t> centerFreqHz;
};

// Sidecar path for a given .iq path: same stem with a .json extension.
std::filesystem::path sidecarPath(const std::filesystem::path& iqPath);

void writeIq(const IqRecording& rec, const std::filesystem::path& iqPath);

// Reads samples plus sidecar metadata. A sample-rate override skips the
// sidecar lookup entirely.
IqRecording readIq(const std::filesystem::path& iqPath,
                   std::optional<int64_t> sampleRateOverride = std::nullopt);

}  // namespace ltedci
