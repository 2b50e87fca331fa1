#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "ltedci/iqio.hpp"
#include "ltedci/numerology.hpp"

namespace ltedci {

struct CellIdentity {
    int nId1 = 0;  // 0..167
    int nId2 = 0;  // 0..2
    int pci = 0;   // 3*nId1 + nId2
};

CellIdentity makeCellIdentity(int nId1, int nId2);

// Frequency-domain primary synchronization sequence (Zadoff-Chu, roots
// 25/29/34 for nId2 0/1/2), 62 values.
std::array<cf64, 62> pssSequence(int nId2);

// Secondary synchronization sequence for subframe 0 or 5; values are +1/-1.
std::array<double, 62> sssSequence(int nId1, int nId2, int subframe);

// Normalized cross-correlation power |<sig,rep>|^2 / (Erep * Ewin) for every
// offset. winEnergy[t] must hold the window energy at offset t. Serial
// reference and OpenMP variant produce identical output.
void pssCorrelateSerial(std::span<const cf64> sig, std::span<const cf64> rep,
                        std::span<const double> winEnergy, std::span<double> out);
void pssCorrelateOmp(std::span<const cf64> sig, std::span<const cf64> rep,
                     std::span<const double> winEnergy, std::span<double> out,
                     int threads);

struct PssDetection {
    int nId2 = 0;
    int64_t pssUsefulStart = 0;  // sample index of the useful (post-CP) part
    double cfoHz = 0.0;
    double metric = 0.0;       // normalized correlation at the peak, 0..1
    double peakToMean = 0.0;
};

PssDetection detectPss(const IqRecording& rec, int threads = 1);

struct SssDetection {
    int nId1 = 0;
    int subframe = 0;  // 0 or 5
    double metric = 0.0;
};

SssDetection detectSss(const IqRecording& rec, int nId2, int64_t pssUsefulStart,
                       double cfoHz);

struct SyncResult {
    CellIdentity identity;
    int64_t timingOffset = 0;  // first sample of the earliest complete frame
    double cfoHz = 0.0;
    double pssMetric = 0.0;
    double sssMetric = 0.0;
};

SyncResult synchronize(const IqRecording& rec, int threads = 1);

}  // namespace ltedci
