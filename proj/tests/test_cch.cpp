#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "ltedci/cch.hpp"
#include "ltedci/ofdm.hpp"

using namespace ltedci;

namespace {

CellConfig referenceCell() {
    CellConfig cfg;
    cfg.nDlRb = 50;
    cfg.pci = 13;
    cfg.cellRefPorts = 2;
    cfg.phichNg = PhichNg::one;
    return cfg;
}

// Ideal flat channel: gain one everywhere, tiny noise floor.
PortEstimates flatEstimates(const CellConfig& cfg) {
    ChannelEstimate ce;
    ce.subcarriers = 12 * cfg.nDlRb;
    ce.symbols = 14;
    ce.gains.assign(static_cast<size_t>(ce.subcarriers) * ce.symbols, cf64(1.0, 0.0));
    ce.noiseVar = 1e-4;
    PortEstimates est;
    est.p0 = ce;
    if (cfg.cellRefPorts >= 2) est.p1 = ce;
    est.noiseVar = 1e-4;
    return est;
}

}  // namespace

TEST_CASE("indicator codewords are well separated") {
    const auto& words = cfiCodewords();
    for (int a = 0; a < 3; ++a) {
        for (int b = a + 1; b < 3; ++b) {
            int distance = 0;
            for (int i = 0; i < 32; ++i)
                distance += words[static_cast<size_t>(a)][static_cast<size_t>(i)] !=
                            words[static_cast<size_t>(b)][static_cast<size_t>(i)];
            CHECK(distance >= 20);
        }
    }
    // The reserved fourth word is all zeros.
    const auto& reserved = words[3];
    CHECK(std::all_of(reserved.begin(), reserved.end(), [](uint8_t b) { return b == 0; }));
}

TEST_CASE("control span grows by one symbol on narrow cells") {
    CHECK(controlSymbols(1, 50) == 1);
    CHECK(controlSymbols(2, 50) == 2);
    CHECK(controlSymbols(3, 50) == 3);
    CHECK(controlSymbols(2, 6) == 3);
    CHECK(controlSymbols(3, 10) == 4);
}

TEST_CASE("region accounting matches an independent census") {
    const CellConfig cfg = referenceCell();
    const ControlRegion region = computeControlRegion(cfg, 2);

    // Symbol 0 carries two quadruplets per block (a third of the carriers are
    // pilot columns); symbol 1 carries three on a one- or two-port cell.
    const int symbol0Regs = 2 * cfg.nDlRb;
    const int symbol1Regs = 3 * cfg.nDlRb;
    const int totalRegs = symbol0Regs + symbol1Regs;

    const int phichGroups = (cfg.nDlRb + 7) / 8;  // Ng = 1
    const int pdcchRegs = totalRegs - 4 - 3 * phichGroups;
    CHECK(region.numRegs == pdcchRegs);
    CHECK(static_cast<int>(region.pdcchRegs.size()) == pdcchRegs);
    CHECK(region.numCces == pdcchRegs / 9);
    CHECK(region.numCces == 25);
    CHECK(region.pcfichRegs.size() == 4);
    CHECK(static_cast<int>(region.phichRegs.size()) == 3 * phichGroups);

    // The three channels never share a resource element.
    std::set<RePosition> seen;
    auto absorb = [&](const Reg& reg) {
        for (const RePosition& rp : reg.res) {
            CHECK(seen.insert(rp).second);
            CHECK(rp.symbol < 2);
            CHECK(rp.subcarrier < 12 * cfg.nDlRb);
        }
    };
    for (const Reg& r : region.pcfichRegs) absorb(r);
    for (const Reg& r : region.phichRegs) absorb(r);
    for (const Reg& r : region.pdcchRegs) absorb(r);
    CHECK(static_cast<int>(seen.size()) == 4 * totalRegs);

    // The interleaver assignment is a permutation of the quadruplets.
    std::vector<int> quads = region.regQuad;
    std::sort(quads.begin(), quads.end());
    std::vector<int> expect(quads.size());
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(quads == expect);
}

TEST_CASE("indicator quadruplets are spread across the band") {
    const CellConfig cfg = referenceCell();
    const ControlRegion region = computeControlRegion(cfg, 1);
    REQUIRE(region.pcfichRegs.size() == 4);
    std::set<int> anchors;
    for (const Reg& r : region.pcfichRegs) {
        CHECK(r.symbol == 0);
        anchors.insert(r.k0);
    }
    REQUIRE(anchors.size() == 4);
    // Consecutive anchors sit a quarter of the band apart.
    std::vector<int> sorted(anchors.begin(), anchors.end());
    for (size_t i = 1; i < sorted.size(); ++i) CHECK(sorted[i] - sorted[i - 1] == 150);
}

TEST_CASE("indicator loopback on both port modes") {
    for (int ports : {1, 2}) {
        CellConfig cfg = referenceCell();
        cfg.cellRefPorts = ports;
        const PortEstimates est = flatEstimates(cfg);
        for (int cfi : {1, 2, 3}) {
            ResourceGrid port0(cfg.nDlRb, cfg.cyclicPrefix);
            ResourceGrid port1(cfg.nDlRb, cfg.cyclicPrefix);
            embedPcfich(cfi, cfg, 4, port0, ports >= 2 ? &port1 : nullptr);
            ResourceGrid rx = port0;
            if (ports >= 2) rx.addInto(port1);
            const CfiDecode dec = pcfichDecode(rx, est, cfg, 4);
            CHECK(dec.cfi == cfi);
            CHECK(dec.confidence > 0.9);
        }
    }
}

TEST_CASE("an empty grid gives no confident indicator") {
    const CellConfig cfg = referenceCell();
    const ResourceGrid grid(cfg.nDlRb, cfg.cyclicPrefix);
    bool lowConfidence = false;
    try {
        (void)pcfichDecode(grid, flatEstimates(cfg), cfg, 0);
    } catch (const Error& e) {
        lowConfidence = e.code() == Err::LowConfidence;
    }
    CHECK(lowConfidence);
}

TEST_CASE("element-group payload round trips through the grid") {
    for (int ports : {1, 2}) {
        CellConfig cfg = referenceCell();
        cfg.cellRefPorts = ports;
        const ControlRegion region = computeControlRegion(cfg, 2);
        std::mt19937_64 rng(404u + static_cast<unsigned>(ports));
        BitVector bits(static_cast<size_t>(8 * region.numRegs));
        for (auto& b : bits) b = static_cast<uint8_t>(rng() & 1);

        ResourceGrid port0(cfg.nDlRb, cfg.cyclicPrefix);
        ResourceGrid port1(cfg.nDlRb, cfg.cyclicPrefix);
        embedCces(bits, cfg, 2, 7, port0, ports >= 2 ? &port1 : nullptr);
        ResourceGrid rx = port0;
        if (ports >= 2) rx.addInto(port1);

        const CceSpace space = extractCces(rx, flatEstimates(cfg), cfg, 2, 7);
        CHECK(space.numCces == region.numCces);
        CHECK(space.subframe == 7);
        REQUIRE(space.llrs.size() == static_cast<size_t>(space.numCces) * 72);

        // Every carried bit must come back with the right sign.
        for (size_t i = 0; i < space.llrs.size(); ++i) {
            REQUIRE(space.llrs[i] != 0.0f);
            CHECK((space.llrs[i] > 0.0f) == (bits[i] == 0));
        }
    }
}
