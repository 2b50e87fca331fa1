#include "ltedci/cch.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ltedci/seqfec.hpp"

namespace ltedci {

const std::array<std::array<uint8_t, 32>, 4>& cfiCodewords() {
    static const std::array<std::array<uint8_t, 32>, 4> table = [] {
        std::array<std::array<uint8_t, 32>, 4> t{};
        const std::array<uint8_t, 3> base = {0, 1, 1};
        for (int c = 0; c < 3; ++c)
            for (int i = 0; i < 32; ++i)
                t[static_cast<size_t>(c)][static_cast<size_t>(i)] =
                    base[static_cast<size_t>((i + 2 * c) % 3)];
        t[3].fill(0);  // reserved
        return t;
    }();
    return table;
}

int controlSymbols(int cfi, int nDlRb) {
    if (cfi < 1 || cfi > 3) fail(Err::OutOfRange, "CFI must be 1..3");
    return nDlRb > 10 ? cfi : cfi + 1;
}

namespace {

// Subcarriers of a pilot-bearing symbol that the REG structure must skip.
// Symbol 0 always assumes the two-port pattern.
bool isReservedSubcarrier(int k, int symbol, const CellConfig& cfg) {
    const int vshift = cfg.pci % 6;
    if (symbol == 0) {
        const int r = k % 6;
        return r == vshift % 6 || r == (3 + vshift) % 6;
    }
    if (symbol == 1 && cfg.cellRefPorts == 4) {
        const int r = k % 6;
        return r == (3 * 0 + vshift) % 6 || r == (3 + vshift) % 6;
    }
    return false;
}

std::vector<Reg> regsForSymbol(int symbol, const CellConfig& cfg) {
    const int nSc = 12 * cfg.nDlRb;
    std::vector<Reg> out;
    const bool pilots = symbol == 0 || (symbol == 1 && cfg.cellRefPorts == 4);
    if (pilots) {
        for (int k0 = 0; k0 < nSc; k0 += 6) {
            Reg r;
            r.symbol = symbol;
            r.k0 = k0;
            int idx = 0;
            for (int k = k0; k < k0 + 6; ++k)
                if (!isReservedSubcarrier(k, symbol, cfg))
                    r.res[static_cast<size_t>(idx++)] = {k, symbol};
            out.push_back(r);
        }
    } else {
        for (int k0 = 0; k0 < nSc; k0 += 4) {
            Reg r;
            r.symbol = symbol;
            r.k0 = k0;
            for (int i = 0; i < 4; ++i) r.res[static_cast<size_t>(i)] = {k0 + i, symbol};
            out.push_back(r);
        }
    }
    return out;
}

int phichGroups(const CellConfig& cfg) {
    const double ng = phichNgValue(cfg.phichNg);
    return static_cast<int>(std::ceil(ng * cfg.nDlRb / 8.0));
}

}  // namespace

ControlRegion computeControlRegion(const CellConfig& cfg, int cfi) {
    cfg.validate();
    if (cfg.cyclicPrefix != CyclicPrefix::normal)
        fail(Err::InvalidConfig, "control region implemented for normal CP only");
    if (cfg.phichDuration != PhichDuration::normal)
        fail(Err::InvalidConfig, "only normal PHICH duration is supported");
    const int nSym = controlSymbols(cfi, cfg.nDlRb);

    ControlRegion cr;
    cr.cfi = cfi;

    // Symbol-0 REGs, then the PCFICH quadruplet positions within them.
    std::vector<Reg> sym0 = regsForSymbol(0, cfg);
    const int nSc = 12 * cfg.nDlRb;
    std::set<int> pcfichK0;
    const int kBar = 6 * (cfg.pci % (2 * cfg.nDlRb));
    for (int i = 0; i < 4; ++i) {
        const int k = (kBar + (i * cfg.nDlRb / 2) * 6) % nSc;
        pcfichK0.insert(k);
        for (const Reg& r : sym0)
            if (r.k0 == k) cr.pcfichRegs.push_back(r);
    }
    if (cr.pcfichRegs.size() != 4)
        fail(Err::ControlRegionTooSmall, "PCFICH does not fit");

    std::vector<Reg> sym0Free;
    for (const Reg& r : sym0)
        if (!pcfichK0.count(r.k0)) sym0Free.push_back(r);

    // PHICH groups, normal duration: all mapping units in symbol 0.
    const int nGroups = phichGroups(cfg);
    const int n0 = static_cast<int>(sym0Free.size());
    if (3 * nGroups > n0)
        fail(Err::ControlRegionTooSmall, "PHICH does not fit in symbol 0");
    std::set<int> phichIdx;
    for (int m = 0; m < nGroups; ++m)
        for (int i = 0; i < 3; ++i) {
            const int idx = (cfg.pci + m + i * n0 / 3) % n0;
            if (!phichIdx.insert(idx).second)
                fail(Err::ControlRegionTooSmall, "PHICH mapping collision");
            cr.phichRegs.push_back(sym0Free[static_cast<size_t>(idx)]);
        }

    // Remaining REGs host the PDCCH, enumerated subcarrier-first.
    std::vector<Reg> all;
    for (size_t i = 0; i < sym0Free.size(); ++i)
        if (!phichIdx.count(static_cast<int>(i))) all.push_back(sym0Free[i]);
    for (int l = 1; l < nSym; ++l) {
        const std::vector<Reg> regs = regsForSymbol(l, cfg);
        all.insert(all.end(), regs.begin(), regs.end());
    }
    std::sort(all.begin(), all.end(), [](const Reg& a, const Reg& b) {
        if (a.k0 != b.k0) return a.k0 < b.k0;
        return a.symbol < b.symbol;
    });
    cr.pdcchRegs = std::move(all);
    cr.numRegs = static_cast<int>(cr.pdcchRegs.size());
    cr.numCces = cr.numRegs / 9;
    if (cr.numCces < 1) fail(Err::ControlRegionTooSmall, "no room for a single CCE");

    // Quadruplet interleaving with the cell-identity cyclic shift.
    const std::vector<int> order = subBlockInterleaveOrder(static_cast<size_t>(cr.numRegs));
    std::vector<int> interleaved;
    interleaved.reserve(static_cast<size_t>(cr.numRegs));
    for (int idx : order)
        if (idx >= 0) interleaved.push_back(idx);
    cr.regQuad.resize(static_cast<size_t>(cr.numRegs));
    for (int j = 0; j < cr.numRegs; ++j)
        cr.regQuad[static_cast<size_t>(j)] =
            interleaved[static_cast<size_t>((j + cfg.pci) % cr.numRegs)];
    return cr;
}

std::vector<cf64> pcfichSymbols(int cfi, const CellConfig& cfg, int subframe) {
    if (cfi < 1 || cfi > 3) fail(Err::OutOfRange, "CFI must be 1..3");
    BitVector bits(cfiCodewords()[static_cast<size_t>(cfi - 1)].begin(),
                   cfiCodewords()[static_cast<size_t>(cfi - 1)].end());
    const uint32_t cInit = static_cast<uint32_t>(
        ((subframe + 1) * (2 * cfg.pci + 1) << 9) + cfg.pci);
    const BitVector scr = goldSequence(cInit, 0, bits.size());
    for (size_t i = 0; i < bits.size(); ++i) bits[i] ^= scr[i];
    return qpskModulate(bits);
}

namespace {

void embedQuadruplets(const std::vector<cf64>& symbols, const std::vector<Reg>& regs,
                      ResourceGrid& port0, ResourceGrid* port1) {
    if (symbols.size() != regs.size() * 4)
        fail(Err::DimensionMismatch, "quadruplet count does not match REG count");
    std::vector<cf64> p0, p1;
    if (port1) {
        sfbcEncode(symbols, p0, p1);
    } else {
        p0.assign(symbols.begin(), symbols.end());
    }
    for (size_t r = 0; r < regs.size(); ++r)
        for (int i = 0; i < 4; ++i) {
            const RePosition& pos = regs[r].res[static_cast<size_t>(i)];
            port0.at(pos.subcarrier, pos.symbol) = p0[4 * r + static_cast<size_t>(i)];
            if (port1) port1->at(pos.subcarrier, pos.symbol) = p1[4 * r + static_cast<size_t>(i)];
        }
}

// Equalized symbol estimates for a REG list, SFBC-combined when a second port
// estimate is present.
std::vector<cf64> recoverQuadruplets(const ResourceGrid& grid, const PortEstimates& est,
                                     const std::vector<Reg>& regs) {
    std::vector<cf64> y(regs.size() * 4), h0(regs.size() * 4), h1(regs.size() * 4);
    for (size_t r = 0; r < regs.size(); ++r)
        for (int i = 0; i < 4; ++i) {
            const RePosition& pos = regs[r].res[static_cast<size_t>(i)];
            y[4 * r + static_cast<size_t>(i)] = grid.at(pos.subcarrier, pos.symbol);
            h0[4 * r + static_cast<size_t>(i)] = est.p0.at(pos.subcarrier, pos.symbol);
            if (est.p1) h1[4 * r + static_cast<size_t>(i)] = est.p1->at(pos.subcarrier, pos.symbol);
        }
    if (est.p1) return sfbcCombine(y, h0, h1);
    std::vector<cf64> out(y.size());
    for (size_t i = 0; i < y.size(); ++i)
        out[i] = std::abs(h0[i]) < 1e-9 ? cf64{0.0, 0.0} : y[i] / h0[i];
    return out;
}

}  // namespace

void embedPcfich(int cfi, const CellConfig& cfg, int subframe, ResourceGrid& port0,
                 ResourceGrid* port1) {
    const ControlRegion cr = computeControlRegion(cfg, cfi);
    embedQuadruplets(pcfichSymbols(cfi, cfg, subframe), cr.pcfichRegs, port0, port1);
}

CfiDecode pcfichDecode(const ResourceGrid& grid, const PortEstimates& est,
                       const CellConfig& cfg, int subframe) {
    // The PCFICH position does not depend on the CFI, so any value works here.
    const ControlRegion cr = computeControlRegion(cfg, 1);
    const std::vector<cf64> sym = recoverQuadruplets(grid, est, cr.pcfichRegs);
    SoftBits llrs = qpskSoftDemod(sym, std::max(est.noiseVar, 1e-9));
    const uint32_t cInit = static_cast<uint32_t>(
        ((subframe + 1) * (2 * cfg.pci + 1) << 9) + cfg.pci);
    const BitVector scr = goldSequence(cInit, 0, llrs.size());
    for (size_t i = 0; i < llrs.size(); ++i)
        if (scr[i]) llrs[i] = -llrs[i];

    double total = 0.0;
    for (float v : llrs) total += std::abs(v);
    std::array<double, 3> score{};
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 32; ++i)
            score[static_cast<size_t>(c)] +=
                cfiCodewords()[static_cast<size_t>(c)][static_cast<size_t>(i)]
                    ? -llrs[static_cast<size_t>(i)]
                    : llrs[static_cast<size_t>(i)];
    int best = 0;
    for (int c = 1; c < 3; ++c)
        if (score[static_cast<size_t>(c)] > score[static_cast<size_t>(best)]) best = c;
    double second = -1e300;
    for (int c = 0; c < 3; ++c)
        if (c != best) second = std::max(second, score[static_cast<size_t>(c)]);

    CfiDecode out;
    out.cfi = best + 1;
    out.confidence =
        total > 1e-12 ? std::clamp((score[static_cast<size_t>(best)] - second) / total, 0.0, 1.0)
                      : 0.0;
    if (out.confidence < 0.5)
        fail(Err::LowConfidence,
             "CFI confidence " + std::to_string(out.confidence) + " below 0.5");
    return out;
}

void embedCces(const BitVector& bits, const CellConfig& cfg, int cfi, int subframe,
               ResourceGrid& port0, ResourceGrid* port1) {
    const ControlRegion cr = computeControlRegion(cfg, cfi);
    if (bits.size() != static_cast<size_t>(cr.numRegs) * 8)
        fail(Err::CapacityExceeded,
             "PDCCH stream must cover exactly " + std::to_string(cr.numRegs) + " REGs");
    const uint32_t cInit =
        static_cast<uint32_t>((subframe << 9) + cfg.pci);
    const BitVector scr = goldSequence(cInit, 0, bits.size());
    BitVector scrambled(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) scrambled[i] = bits[i] ^ scr[i];
    const std::vector<cf64> sym = qpskModulate(scrambled);

    // Reorder quadruplets: REG j carries quadruplet regQuad[j].
    std::vector<cf64> mapped(sym.size());
    for (int j = 0; j < cr.numRegs; ++j) {
        const int q = cr.regQuad[static_cast<size_t>(j)];
        for (int i = 0; i < 4; ++i)
            mapped[static_cast<size_t>(4 * j + i)] = sym[static_cast<size_t>(4 * q + i)];
    }
    embedQuadruplets(mapped, cr.pdcchRegs, port0, port1);
}

CceSpace extractCces(const ResourceGrid& grid, const PortEstimates& est,
                     const CellConfig& cfg, int cfi, int subframe) {
    const ControlRegion cr = computeControlRegion(cfg, cfi);
    const std::vector<cf64> regSym = recoverQuadruplets(grid, est, cr.pdcchRegs);
    // Un-map the interleaver: REG j holds quadruplet regQuad[j].
    std::vector<cf64> stream(regSym.size());
    for (int j = 0; j < cr.numRegs; ++j) {
        const int q = cr.regQuad[static_cast<size_t>(j)];
        for (int i = 0; i < 4; ++i)
            stream[static_cast<size_t>(4 * q + i)] = regSym[static_cast<size_t>(4 * j + i)];
    }
    SoftBits llrs = qpskSoftDemod(stream, std::max(est.noiseVar, 1e-9));
    const uint32_t cInit =
        static_cast<uint32_t>((subframe << 9) + cfg.pci);
    const BitVector scr = goldSequence(cInit, 0, llrs.size());
    for (size_t i = 0; i < llrs.size(); ++i)
        if (scr[i]) llrs[i] = -llrs[i];

    CceSpace cs;
    cs.numCces = cr.numCces;
    cs.subframe = subframe;
    cs.llrs.assign(llrs.begin(), llrs.begin() + static_cast<size_t>(cr.numCces) * 72);
    return cs;
}

}  // namespace ltedci
