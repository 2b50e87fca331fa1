#pragma once

#include <memory>
#include <optional>
#include <span>

#include "ltedci/iqio.hpp"
#include "ltedci/numerology.hpp"

namespace ltedci {

// Unitary FFT of a fixed size (scaled by 1/sqrt(N) in both directions).
// Executing on distinct buffers is thread safe; plan creation is serialized.
class Fft {
  public:
    explicit Fft(int size);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return size_; }
    void forward(const cf64* in, cf64* out) const;
    void inverse(const cf64* in, cf64* out) const;

  private:
    int size_;
    void* planFwd_;
    void* planInv_;
};

// Grid row k -> FFT bin, DC left empty: the lower half of the band maps below
// DC and the upper half starts at bin 1.
int subcarrierToBin(int k, int nDlRb, int fftSize);

// OFDM modulation of consecutive subframes. Output sample count is exactly
// subframeSamples per grid at the standard rate for the bandwidth.
IqRecording ofdmModulate(const std::vector<ResourceGrid>& grids, const CellConfig& cfg);

// Demodulates up to maxSubframes complete subframes starting at sample
// `start`. Throws InsufficientSamples when not even one subframe fits.
std::vector<ResourceGrid> ofdmDemodulate(const IqRecording& rec, const CellConfig& cfg,
                                         int64_t start, int maxSubframes = -1);

// Gray-mapped QPSK, (1+j)/sqrt(2) for bits (0,0). Two bits per symbol.
std::vector<cf64> qpskModulate(const BitVector& bits);

// LLRs scaled by 2*sqrt(2)/noiseVar; positive favors bit 0.
SoftBits qpskSoftDemod(std::span<const cf64> symbols, double noiseVar);

// Least-squares channel estimate for one port over one subframe grid:
// frequency interpolation across pilots, nearest pilot symbol in time.
struct ChannelEstimate {
    int subcarriers = 0;
    int symbols = 0;
    std::vector<cf64> gains;  // symbol-major, like ResourceGrid
    double noiseVar = 0.0;
    const cf64& at(int k, int l) const {
        return gains[static_cast<size_t>(l) * subcarriers + k];
    }
    cf64& at(int k, int l) { return gains[static_cast<size_t>(l) * subcarriers + k]; }
};

ChannelEstimate estimateChannel(const ResourceGrid& grid, const CellConfig& cfg,
                                int subframe, int port);

struct PortEstimates {
    ChannelEstimate p0;
    std::optional<ChannelEstimate> p1;
    double noiseVar = 0.0;
};

// Estimates for ports 0 and (when cellRefPorts >= 2) 1.
PortEstimates estimatePorts(const ResourceGrid& grid, const CellConfig& cfg, int subframe);

// Zero-forcing equalization against the port-0 estimate. Gains below 1e-9 in
// magnitude zero the element instead of dividing.
ResourceGrid equalizeGrid(const ResourceGrid& grid, const ChannelEstimate& est);

// Space-frequency block code over symbol pairs (two ports, 36.211 6.3.4.3).
// Port streams are the same length as the input, which must be even.
void sfbcEncode(std::span<const cf64> x, std::vector<cf64>& port0, std::vector<cf64>& port1);

// Combines received pairs y with per-element port gains h0, h1 back into the
// original symbol estimates.
std::vector<cf64> sfbcCombine(std::span<const cf64> y, std::span<const cf64> h0,
                              std::span<const cf64> h1);

}  // namespace ltedci
