#include <doctest.h>

#include <set>

#include "ltedci/numerology.hpp"

using namespace ltedci;

TEST_CASE("grid shape follows bandwidth and prefix") {
    CellConfig cfg;
    cfg.nDlRb = 50;
    GridShape s = gridShape(cfg);
    CHECK(s.subcarriers == 600);
    CHECK(s.symbols == 14);

    cfg.nDlRb = 6;
    s = gridShape(cfg);
    CHECK(s.subcarriers == 72);

    cfg.nDlRb = 100;
    cfg.cyclicPrefix = CyclicPrefix::extended;
    s = gridShape(cfg);
    CHECK(s.subcarriers == 1200);
    CHECK(s.symbols == 12);
}

TEST_CASE("config validation rejects bad values") {
    CellConfig cfg;
    cfg.nDlRb = 40;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.nDlRb = 50;
    cfg.pci = 504;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.pci = 0;
    cfg.cellRefPorts = 3;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.cellRefPorts = 2;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("pilot lattice: counts, shift periodicity, port disjointness") {
    CellConfig cfg;
    cfg.nDlRb = 50;
    cfg.pci = 13;
    cfg.cellRefPorts = 2;

    const auto p0 = crsPositions(cfg, 0, 3);
    CHECK(p0.size() == 400);  // 4 pilot symbols x 2 per RB x 50 RB

    // Frequency shift repeats every 6 identities.
    CellConfig shifted = cfg;
    shifted.pci = 13 + 6;
    CHECK(crsPositions(shifted, 0, 3) == p0);

    // Ports 0 and 1 never share a resource element.
    const auto p1 = crsPositions(cfg, 1, 3);
    std::set<RePosition> set0(p0.begin(), p0.end());
    for (const RePosition& rp : p1) CHECK(set0.count(rp) == 0);

    CHECK_THROWS_AS(crsPositions(cfg, 2, 0), Error);  // beyond configured ports
}

TEST_CASE("pilot values are unit-magnitude QPSK") {
    CellConfig cfg;
    cfg.nDlRb = 50;
    cfg.pci = 101;
    const auto seq = crsSequence(cfg, 7, 0);
    REQUIRE(seq.size() == 100);
    for (const cf64& v : seq) CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);

    // Different cells scramble differently.
    CellConfig other = cfg;
    other.pci = 102;
    CHECK(crsSequence(other, 7, 0) != seq);
}

TEST_CASE("transform parameters") {
    const FftParams p50 = fftParams(50);
    CHECK(p50.fftSize == 1024);
    CHECK(p50.sampleRateHz == 15360000);
    REQUIRE(p50.cpLengths.size() == 7);
    CHECK(p50.cpLengths[0] == 80);
    CHECK(p50.cpLengths[1] == 72);
    CHECK(p50.slotSamples == 7680);
    CHECK(p50.subframeSamples == 15360);

    const FftParams p6 = fftParams(6);
    CHECK(p6.fftSize == 128);
    CHECK(p6.sampleRateHz == 1920000);

    CHECK_THROWS_AS(fftParams(40), Error);
}

TEST_CASE("cell settings serialize with the standard key names") {
    CellConfig cfg;
    cfg.nDlRb = 50;
    cfg.pci = 13;
    cfg.cellRefPorts = 2;
    const nlohmann::json j = cellConfigToJson(cfg, 867, 0);
    CHECK(j.at("NDLRB") == 50);
    CHECK(j.at("DuplexMode") == "FDD");
    CHECK(j.at("CyclicPrefix") == "Normal");
    CHECK(j.at("NCellID") == 13);
    CHECK(j.at("CellRefP") == 2);
    CHECK(j.at("PHICHDuration") == "Normal");
    CHECK(j.at("Ng") == "One");
    CHECK(j.at("NFrame") == 867);
    CHECK(j.at("NSubframe") == 0);

    const CellConfig back = cellConfigFromJson(j);
    CHECK(back.nDlRb == cfg.nDlRb);
    CHECK(back.pci == cfg.pci);
    CHECK(back.cellRefPorts == cfg.cellRefPorts);

    nlohmann::json tdd = j;
    tdd["DuplexMode"] = "TDD";
    CHECK_THROWS_AS(cellConfigFromJson(tdd), Error);
}
