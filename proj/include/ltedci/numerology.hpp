#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <vector>

#include "ltedci/bits.hpp"
#include "ltedci/errors.hpp"

namespace ltedci {

enum class DuplexMode { fdd };
enum class CyclicPrefix { normal, extended };
enum class PhichDuration { normal, extended };
// Ng parameter controlling the PHICH group count.
enum class PhichNg { oneSixth, half, one, two };

double phichNgValue(PhichNg ng);

struct CellConfig {
    int nDlRb = 50;
    int pci = 0;
    DuplexMode duplexMode = DuplexMode::fdd;
    CyclicPrefix cyclicPrefix = CyclicPrefix::normal;
    int cellRefPorts = 1;  // 1, 2 or 4
    PhichDuration phichDuration = PhichDuration::normal;
    PhichNg phichNg = PhichNg::one;

    void validate() const;  // throws InvalidConfig / UnsupportedBandwidth
    int nId1() const { return pci / 3; }
    int nId2() const { return pci % 3; }
};

// Position of one resource element inside a subframe grid.
struct RePosition {
    int subcarrier = 0;  // k, 0-based from band edge
    int symbol = 0;      // l, 0-based within the subframe
    friend bool operator==(const RePosition&, const RePosition&) = default;
    friend auto operator<=>(const RePosition&, const RePosition&) = default;
};

struct GridShape {
    int subcarriers = 0;
    int symbols = 0;
};

int symbolsPerSlot(CyclicPrefix cp);
int symbolsPerSubframe(CyclicPrefix cp);
GridShape gridShape(const CellConfig& cfg);

// One subframe worth of resource elements, symbol-major storage.
class ResourceGrid {
  public:
    ResourceGrid() = default;
    ResourceGrid(int nDlRb, CyclicPrefix cp);

    int nDlRb() const { return nDlRb_; }
    int subcarriers() const { return subcarriers_; }
    int symbols() const { return symbols_; }
    cf64& at(int k, int l) { return cells_[static_cast<size_t>(l) * subcarriers_ + k]; }
    const cf64& at(int k, int l) const {
        return cells_[static_cast<size_t>(l) * subcarriers_ + k];
    }
    cf64* symbolData(int l) { return cells_.data() + static_cast<size_t>(l) * subcarriers_; }
    const cf64* symbolData(int l) const {
        return cells_.data() + static_cast<size_t>(l) * subcarriers_;
    }
    double energy() const;
    void addInto(const ResourceGrid& other);  // element-wise sum, shapes must match

  private:
    int nDlRb_ = 0;
    int subcarriers_ = 0;
    int symbols_ = 0;
    std::vector<cf64> cells_;
};

// Cell-specific reference signal lattice for one antenna port over one subframe.
// Positions are ordered by symbol then subcarrier.
std::vector<RePosition> crsPositions(const CellConfig& cfg, int port, int subframe);

// Subframe symbol indices that carry pilots for the given port.
std::vector<int> crsSymbols(const CellConfig& cfg, int port);

// QPSK pilot values for one pilot-bearing symbol, ordered by increasing
// subcarrier; length 2*nDlRb. slot is the absolute slot in the frame (0..19),
// symbolInSlot the OFDM symbol within that slot.
std::vector<cf64> crsSequence(const CellConfig& cfg, int slot, int symbolInSlot);

struct FftParams {
    int fftSize = 0;
    int sampleRateHz = 0;
    std::vector<int> cpLengths;  // per OFDM symbol of one slot
    int slotSamples = 0;
    int subframeSamples = 0;
};

FftParams fftParams(int nDlRb, CyclicPrefix cp = CyclicPrefix::normal);

// JSON names follow the usual cell-settings convention (NDLRB, NCellID, ...).
nlohmann::json cellConfigToJson(const CellConfig& cfg,
                                std::optional<int> nFrame = std::nullopt,
                                std::optional<int> nSubframe = std::nullopt);
CellConfig cellConfigFromJson(const nlohmann::json& j);

}  // namespace ltedci
