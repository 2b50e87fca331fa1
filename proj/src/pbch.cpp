#include "ltedci/pbch.hpp"

#include <algorithm>

#include "ltedci/seqfec.hpp"

namespace ltedci {

namespace {

constexpr int kMibBits = 24;
constexpr int kCodedBits = 40;
constexpr int kRateMatched = 1920;
constexpr int kQuarterBits = 480;

int bandwidthCode(int nDlRb) {
    switch (nDlRb) {
        case 6: return 0;
        case 15: return 1;
        case 25: return 2;
        case 50: return 3;
        case 75: return 4;
        case 100: return 5;
    }
    fail(Err::UnsupportedBandwidth, "NDLRB must be one of 6,15,25,50,75,100");
}

int bandwidthFromCode(int code) {
    static constexpr std::array<int, 6> kTable = {6, 15, 25, 50, 75, 100};
    if (code < 0 || code > 5) fail(Err::InvalidFieldValue, "bad bandwidth code");
    return kTable[static_cast<size_t>(code)];
}

}  // namespace

BitVector packMib(const Mib& mib) {
    if (mib.sfnMsb8 < 0 || mib.sfnMsb8 > 255)
        fail(Err::OutOfRange, "SFN MSBs must fit 8 bits");
    BitVector bits;
    bits.reserve(kMibBits);
    appendUint(bits, static_cast<uint64_t>(bandwidthCode(mib.nDlRb)), 3);
    bits.push_back(mib.phichDuration == PhichDuration::extended ? 1 : 0);
    switch (mib.phichNg) {
        case PhichNg::oneSixth: appendUint(bits, 0, 2); break;
        case PhichNg::half: appendUint(bits, 1, 2); break;
        case PhichNg::one: appendUint(bits, 2, 2); break;
        case PhichNg::two: appendUint(bits, 3, 2); break;
    }
    appendUint(bits, static_cast<uint64_t>(mib.sfnMsb8), 8);
    appendUint(bits, 0, 10);  // spare
    return bits;
}

Mib parseMib(const BitVector& bits) {
    if (bits.size() != kMibBits) fail(Err::LengthMismatch, "MIB payload must be 24 bits");
    Mib mib;
    mib.nDlRb = bandwidthFromCode(static_cast<int>(readUint(bits, 0, 3)));
    mib.phichDuration = bits[3] ? PhichDuration::extended : PhichDuration::normal;
    switch (readUint(bits, 4, 2)) {
        case 0: mib.phichNg = PhichNg::oneSixth; break;
        case 1: mib.phichNg = PhichNg::half; break;
        case 2: mib.phichNg = PhichNg::one; break;
        case 3: mib.phichNg = PhichNg::two; break;
    }
    mib.sfnMsb8 = static_cast<int>(readUint(bits, 6, 8));
    if (readUint(bits, 14, 10) != 0) fail(Err::InvalidFieldValue, "spare bits must be zero");
    return mib;
}

std::array<BitVector, 4> pbchEncode(const Mib& mib, int cellRefPorts, int pci) {
    const BitVector payload = packMib(mib);
    const BitVector crc = xorBits(crc16(payload), pbchCrcMask(cellRefPorts));
    BitVector coded = payload;
    coded.insert(coded.end(), crc.begin(), crc.end());

    const std::array<BitVector, 3> streams = convEncode(coded);
    BitVector rm = rateMatchConv(streams, kRateMatched);

    const BitVector scr = goldSequence(static_cast<uint32_t>(pci), 0, kRateMatched);
    for (int i = 0; i < kRateMatched; ++i) rm[static_cast<size_t>(i)] ^= scr[static_cast<size_t>(i)];

    std::array<BitVector, 4> quarters;
    for (int q = 0; q < 4; ++q)
        quarters[static_cast<size_t>(q)] =
            BitVector(rm.begin() + q * kQuarterBits, rm.begin() + (q + 1) * kQuarterBits);
    return quarters;
}

std::optional<PbchDecodeResult> pbchDecodeSoft(const SoftBits& quarterLlrs, int pci) {
    if (quarterLlrs.size() != kQuarterBits)
        fail(Err::LengthMismatch, "quarter must be 480 soft bits");
    const BitVector scr =
        goldSequence(static_cast<uint32_t>(pci), 0, kRateMatched);

    for (int q = 0; q < 4; ++q) {
        // Place the received quarter at its hypothetical position in the 1920
        // bit buffer; everything else stays erased.
        SoftBits full(kRateMatched, 0.0f);
        for (int i = 0; i < kQuarterBits; ++i) {
            const int pos = q * kQuarterBits + i;
            const float v = quarterLlrs[static_cast<size_t>(i)];
            full[static_cast<size_t>(pos)] = scr[static_cast<size_t>(pos)] ? -v : v;
        }
        const SoftBits recovered = rateRecoverConv(full, kCodedBits);
        const BitVector decoded = viterbiDecode(recovered, kCodedBits);
        const BitVector payload(decoded.begin(), decoded.begin() + kMibBits);
        const BitVector rxCrc(decoded.begin() + kMibBits, decoded.end());
        const BitVector calc = crc16(payload);
        for (int ports : {1, 2, 4}) {
            if (xorBits(calc, pbchCrcMask(ports)) != rxCrc) continue;
            PbchDecodeResult r;
            try {
                r.mib = parseMib(payload);
            } catch (const Error&) {
                continue;
            }
            r.cellRefPorts = ports;
            r.quarter = q;
            return r;
        }
    }
    return std::nullopt;
}

std::vector<RePosition> pbchPositions(const CellConfig& cfg) {
    cfg.validate();
    if (cfg.cyclicPrefix != CyclicPrefix::normal)
        fail(Err::InvalidConfig, "broadcast mapping implemented for normal CP only");
    const int perSlot = symbolsPerSlot(cfg.cyclicPrefix);
    const int half = 6 * cfg.nDlRb;
    const int kLow = half - 36;
    // Reservation uses the four-port pilot pattern regardless of the actual
    // port count, so the mapping is independent of CellRefP.
    const int shift = cfg.pci % 3;
    std::vector<RePosition> out;
    out.reserve(240);
    for (int lRel = 0; lRel < 4; ++lRel) {
        const int l = perSlot + lRel;
        for (int kRel = 0; kRel < 72; ++kRel) {
            const int k = kLow + kRel;
            if (lRel < 2 && kRel % 3 == shift) continue;
            out.push_back({k, l});
        }
    }
    return out;
}

namespace {

// Soft quarter extraction from one subframe-0 grid under a port hypothesis.
SoftBits extractQuarter(const ResourceGrid& grid, const CellConfig& cfg,
                        const PortEstimates& est, int portHyp) {
    const std::vector<RePosition> pos = pbchPositions(cfg);
    std::vector<cf64> y(pos.size());
    for (size_t i = 0; i < pos.size(); ++i) y[i] = grid.at(pos[i].subcarrier, pos[i].symbol);

    const double noiseVar = std::max(est.noiseVar, 1e-9);
    std::vector<cf64> sym;
    if (portHyp == 1 || !est.p1) {
        sym.resize(y.size());
        for (size_t i = 0; i < y.size(); ++i) {
            const cf64 h = est.p0.at(pos[i].subcarrier, pos[i].symbol);
            sym[i] = std::abs(h) < 1e-9 ? cf64{0.0, 0.0} : y[i] / h;
        }
    } else {
        std::vector<cf64> h0(y.size()), h1(y.size());
        for (size_t i = 0; i < y.size(); ++i) {
            h0[i] = est.p0.at(pos[i].subcarrier, pos[i].symbol);
            h1[i] = est.p1->at(pos[i].subcarrier, pos[i].symbol);
        }
        sym = sfbcCombine(y, h0, h1);
    }
    return qpskSoftDemod(sym, noiseVar);
}

}  // namespace

PbchResult pbchDecode(const std::vector<const ResourceGrid*>& subframe0Grids,
                      const CellConfig& cfg) {
    if (subframe0Grids.empty()) fail(Err::EmptyInput, "no subframe-0 grids supplied");
    for (size_t gi = 0; gi < subframe0Grids.size() && gi < 4; ++gi) {
        const ResourceGrid& grid = *subframe0Grids[gi];
        CellConfig estCfg = cfg;
        estCfg.cellRefPorts = 2;  // estimate both ports, hypothesis picks later
        const PortEstimates est = estimatePorts(grid, estCfg, 0);
        for (int portHyp : {2, 1}) {
            SoftBits llrs;
            try {
                llrs = extractQuarter(grid, cfg, est, portHyp);
            } catch (const Error&) {
                continue;
            }
            const auto r = pbchDecodeSoft(llrs, cfg.pci);
            if (!r) continue;
            // The mask must agree with the combining hypothesis; a one-port
            // cell decoded through the port-0 path is also fine.
            if (portHyp == 2 && r->cellRefPorts != 2) continue;
            if (portHyp == 1 && r->cellRefPorts == 2) continue;
            PbchResult out;
            out.mib = r->mib;
            out.cellRefPorts = r->cellRefPorts;
            out.fullSfn =
                (r->mib.sfnMsb8 * 4 + r->quarter - static_cast<int>(gi) + 1024) % 1024;
            return out;
        }
    }
    fail(Err::CrcFail, "no broadcast block passed its checksum");
}

}  // namespace ltedci
