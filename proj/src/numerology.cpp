#include "ltedci/numerology.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ltedci/seqfec.hpp"

namespace ltedci {

namespace {

constexpr std::array<int, 6> kValidBandwidths = {6, 15, 25, 50, 75, 100};

}  // namespace

double phichNgValue(PhichNg ng) {
    switch (ng) {
        case PhichNg::oneSixth: return 1.0 / 6.0;
        case PhichNg::half: return 0.5;
        case PhichNg::one: return 1.0;
        case PhichNg::two: return 2.0;
    }
    fail(Err::InvalidConfig, "bad PhichNg");
}

void CellConfig::validate() const {
    if (std::find(kValidBandwidths.begin(), kValidBandwidths.end(), nDlRb) ==
        kValidBandwidths.end())
        fail(Err::UnsupportedBandwidth, "NDLRB must be one of 6,15,25,50,75,100");
    if (pci < 0 || pci > 503)
        fail(Err::InvalidConfig, "NCellID out of range 0..503");
    if (cellRefPorts != 1 && cellRefPorts != 2 && cellRefPorts != 4)
        fail(Err::InvalidPort, "CellRefP must be 1, 2 or 4");
}

int symbolsPerSlot(CyclicPrefix cp) {
    return cp == CyclicPrefix::normal ? 7 : 6;
}

int symbolsPerSubframe(CyclicPrefix cp) {
    return 2 * symbolsPerSlot(cp);
}

GridShape gridShape(const CellConfig& cfg) {
    cfg.validate();
    return {12 * cfg.nDlRb, symbolsPerSubframe(cfg.cyclicPrefix)};
}

ResourceGrid::ResourceGrid(int nDlRb, CyclicPrefix cp)
    : nDlRb_(nDlRb),
      subcarriers_(12 * nDlRb),
      symbols_(symbolsPerSubframe(cp)),
      cells_(static_cast<size_t>(subcarriers_) * symbols_, cf64{0.0, 0.0}) {}

double ResourceGrid::energy() const {
    double e = 0.0;
    for (const cf64& c : cells_) e += std::norm(c);
    return e;
}

void ResourceGrid::addInto(const ResourceGrid& other) {
    if (other.subcarriers_ != subcarriers_ || other.symbols_ != symbols_)
        fail(Err::DimensionMismatch, "grid shapes differ");
    for (size_t i = 0; i < cells_.size(); ++i) cells_[i] += other.cells_[i];
}

std::vector<int> crsSymbols(const CellConfig& cfg, int port) {
    const int perSlot = symbolsPerSlot(cfg.cyclicPrefix);
    if (port == 0 || port == 1) {
        const int last = perSlot - 3;  // 4 for normal CP, 3 for extended
        return {0, last, perSlot, perSlot + last};
    }
    if (port == 2 || port == 3) return {1, perSlot + 1};
    fail(Err::InvalidPort, "CRS port must be 0..3");
}

namespace {

// Frequency shift index v per 36.211 6.10.1.2.
int crsV(int port, int l, int slotParity) {
    const bool firstPilotSym = (l == 0);
    switch (port) {
        case 0: return firstPilotSym ? 0 : 3;
        case 1: return firstPilotSym ? 3 : 0;
        case 2: return 3 * slotParity;
        case 3: return 3 + 3 * slotParity;
    }
    fail(Err::InvalidPort, "CRS port must be 0..3");
}

}  // namespace

std::vector<RePosition> crsPositions(const CellConfig& cfg, int port, int subframe) {
    cfg.validate();
    if (port < 0 || port >= cfg.cellRefPorts)
        fail(Err::InvalidPort, "CRS port exceeds the configured antenna ports");
    if (subframe < 0 || subframe > 9) fail(Err::OutOfRange, "subframe must be 0..9");
    const int perSlot = symbolsPerSlot(cfg.cyclicPrefix);
    const int vshift = cfg.pci % 6;
    std::vector<RePosition> out;
    for (int l : crsSymbols(cfg, port)) {
        const int slotParity = (l >= perSlot) ? 1 : 0;
        const int lInSlot = l - slotParity * perSlot;
        const int v = crsV(port, lInSlot, slotParity);
        const int k0 = (v + vshift) % 6;
        for (int m = 0; m < 2 * cfg.nDlRb; ++m)
            out.push_back({k0 + 6 * m, l});
    }
    return out;
}

std::vector<cf64> crsSequence(const CellConfig& cfg, int slot, int symbolInSlot) {
    cfg.validate();
    if (slot < 0 || slot > 19) fail(Err::OutOfRange, "slot must be 0..19");
    const int nCp = cfg.cyclicPrefix == CyclicPrefix::normal ? 1 : 0;
    const uint32_t cInit = static_cast<uint32_t>(
        (1u << 10) * (7 * (slot + 1) + symbolInSlot + 1) * (2 * cfg.pci + 1) +
        2 * cfg.pci + nCp);
    // The sequence is defined for the maximum bandwidth; a narrower cell reads
    // the centered window m' = m + 110 - NDLRB.
    const int mFirst = 110 - cfg.nDlRb;
    BitVector c = goldSequence(cInit, static_cast<size_t>(2 * mFirst),
                               static_cast<size_t>(4 * cfg.nDlRb));
    std::vector<cf64> out(static_cast<size_t>(2 * cfg.nDlRb));
    const double s = 1.0 / std::sqrt(2.0);
    for (int m = 0; m < 2 * cfg.nDlRb; ++m)
        out[static_cast<size_t>(m)] =
            cf64(s * (1.0 - 2.0 * c[2 * m]), s * (1.0 - 2.0 * c[2 * m + 1]));
    return out;
}

FftParams fftParams(int nDlRb, CyclicPrefix cp) {
    int fftSize = 0;
    switch (nDlRb) {
        case 6: fftSize = 128; break;
        case 15: fftSize = 256; break;
        case 25: fftSize = 512; break;
        case 50: fftSize = 1024; break;
        case 75: fftSize = 1536; break;
        case 100: fftSize = 2048; break;
        default: fail(Err::UnsupportedBandwidth, "NDLRB must be one of 6,15,25,50,75,100");
    }
    FftParams p;
    p.fftSize = fftSize;
    p.sampleRateHz = fftSize * 15000;
    if (cp == CyclicPrefix::normal) {
        p.cpLengths.assign(7, 144 * fftSize / 2048);
        p.cpLengths[0] = 160 * fftSize / 2048;
    } else {
        p.cpLengths.assign(6, 512 * fftSize / 2048);
    }
    p.slotSamples = 0;
    for (int c : p.cpLengths) p.slotSamples += c + fftSize;
    p.subframeSamples = 2 * p.slotSamples;
    return p;
}

nlohmann::json cellConfigToJson(const CellConfig& cfg, std::optional<int> nFrame,
                                std::optional<int> nSubframe) {
    nlohmann::json j;
    j["NDLRB"] = cfg.nDlRb;
    j["DuplexMode"] = "FDD";
    j["CyclicPrefix"] = cfg.cyclicPrefix == CyclicPrefix::normal ? "Normal" : "Extended";
    j["NCellID"] = cfg.pci;
    j["CellRefP"] = cfg.cellRefPorts;
    j["PHICHDuration"] =
        cfg.phichDuration == PhichDuration::normal ? "Normal" : "Extended";
    switch (cfg.phichNg) {
        case PhichNg::oneSixth: j["Ng"] = "Sixth"; break;
        case PhichNg::half: j["Ng"] = "Half"; break;
        case PhichNg::one: j["Ng"] = "One"; break;
        case PhichNg::two: j["Ng"] = "Two"; break;
    }
    if (nFrame) j["NFrame"] = *nFrame;
    if (nSubframe) j["NSubframe"] = *nSubframe;
    return j;
}

CellConfig cellConfigFromJson(const nlohmann::json& j) {
    CellConfig cfg;
    try {
        cfg.nDlRb = j.at("NDLRB").get<int>();
        cfg.pci = j.at("NCellID").get<int>();
        if (j.contains("DuplexMode")) {
            const std::string dm = j["DuplexMode"].get<std::string>();
            if (dm != "FDD") fail(Err::InvalidConfig, "only FDD is supported");
        }
        if (j.contains("CyclicPrefix")) {
            const std::string cp = j["CyclicPrefix"].get<std::string>();
            if (cp == "Normal")
                cfg.cyclicPrefix = CyclicPrefix::normal;
            else if (cp == "Extended")
                cfg.cyclicPrefix = CyclicPrefix::extended;
            else
                fail(Err::InvalidConfig, "CyclicPrefix must be Normal or Extended");
        }
        if (j.contains("CellRefP")) cfg.cellRefPorts = j["CellRefP"].get<int>();
        if (j.contains("PHICHDuration")) {
            const std::string pd = j["PHICHDuration"].get<std::string>();
            if (pd == "Normal")
                cfg.phichDuration = PhichDuration::normal;
            else if (pd == "Extended")
                cfg.phichDuration = PhichDuration::extended;
            else
                fail(Err::InvalidConfig, "PHICHDuration must be Normal or Extended");
        }
        if (j.contains("Ng")) {
            const std::string ng = j["Ng"].get<std::string>();
            if (ng == "Sixth")
                cfg.phichNg = PhichNg::oneSixth;
            else if (ng == "Half")
                cfg.phichNg = PhichNg::half;
            else if (ng == "One")
                cfg.phichNg = PhichNg::one;
            else if (ng == "Two")
                cfg.phichNg = PhichNg::two;
            else
                fail(Err::InvalidConfig, "Ng must be Sixth, Half, One or Two");
        }
    } catch (const nlohmann::json::exception& e) {
        fail(Err::InvalidConfig, std::string("bad cell settings: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

}  // namespace ltedci
