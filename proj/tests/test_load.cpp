#include <doctest.h>

#include <algorithm>

#include "ltedci/load.hpp"

using namespace ltedci;

namespace {

DciCandidate alloc(int subframe, uint16_t rnti, std::vector<int> prbs,
                   LinkDirection dir = LinkDirection::downlink) {
    DciCandidate c;
    c.sfn = 500;
    c.subframe = subframe;
    c.rnti = rnti;
    c.format = dir == LinkDirection::uplink ? DciFormat::f0 : DciFormat::f1;
    c.direction = dir;
    c.prbSet.indices = std::move(prbs);
    return c;
}

std::vector<int> range(int first, int count) {
    std::vector<int> v(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) v[static_cast<size_t>(i)] = first + i;
    return v;
}

CellConfig referenceCell() {
    CellConfig cfg;
    cfg.nDlRb = 50;
    cfg.pci = 13;
    return cfg;
}

}  // namespace

TEST_CASE("a hand-checked frame load") {
    // Three fully loaded subframes plus four blocks in a fourth: 154 of 500.
    std::vector<DciCandidate> cands;
    cands.push_back(alloc(0, 0x003D, range(0, 50)));
    cands.push_back(alloc(1, 0x1001, range(0, 50)));
    cands.push_back(alloc(2, 0x1002, range(0, 50)));
    cands.push_back(alloc(3, 0x1003, range(0, 4)));

    const FrameLoad fl = frameLoad(cands, referenceCell(), 500);
    CHECK(fl.sfn == 500);
    CHECK(fl.nAssigned == 154);
    CHECK(fl.nTotal == 500);
    CHECK(fl.fraction * 100.0 == doctest::Approx(30.8).epsilon(1e-9));
    CHECK(fl.uniqueUes == 4);
    CHECK(!fl.overlapClamped);
}

TEST_CASE("overlapping grants count once under the default policy") {
    std::vector<DciCandidate> cands;
    cands.push_back(alloc(1, 0x2AC6, range(0, 10)));
    cands.push_back(alloc(1, 0x5A0F, range(5, 10)));
    const CellConfig cfg = referenceCell();

    const FrameLoad unioned = frameLoad(cands, cfg, 10);
    CHECK(unioned.nAssigned == 15);
    CHECK(!unioned.overlapClamped);

    LoadPolicy summing;
    summing.unionPrbs = false;
    const FrameLoad summed = frameLoad(cands, cfg, 10, summing);
    CHECK(summed.nAssigned == 20);
    CHECK(!summed.overlapClamped);

    // The summing policy can exceed a subframe; the cap reports the clamp.
    std::vector<DciCandidate> heavy;
    heavy.push_back(alloc(2, 0x1001, range(0, 50)));
    heavy.push_back(alloc(2, 0x1002, range(0, 50)));
    const FrameLoad clamped = frameLoad(heavy, cfg, 10, summing);
    CHECK(clamped.nAssigned == 50);
    CHECK(clamped.overlapClamped);
    CHECK(frameLoad(heavy, cfg, 10).nAssigned == 50);  // union agrees
}

TEST_CASE("candidate order never changes the load") {
    std::vector<DciCandidate> cands;
    cands.push_back(alloc(0, 0x1001, range(3, 7)));
    cands.push_back(alloc(4, 0x1002, range(0, 2)));
    cands.push_back(alloc(4, 0x1003, range(1, 5)));
    const CellConfig cfg = referenceCell();
    const FrameLoad a = frameLoad(cands, cfg, 1);
    std::reverse(cands.begin(), cands.end());
    const FrameLoad b = frameLoad(cands, cfg, 1);
    CHECK(a.nAssigned == b.nAssigned);
    CHECK(a.uniqueUes == b.uniqueUes);
}

TEST_CASE("policy switches for system and uplink traffic") {
    std::vector<DciCandidate> cands;
    cands.push_back(alloc(0, 0xFFFF, range(0, 8)));                            // system
    cands.push_back(alloc(1, 0x0005, range(10, 4)));                           // random access
    cands.push_back(alloc(2, 0x1001, range(20, 5)));                           // user
    cands.push_back(alloc(3, 0x1002, range(30, 6), LinkDirection::uplink));    // grant

    const CellConfig cfg = referenceCell();
    const FrameLoad def = frameLoad(cands, cfg, 0);
    CHECK(def.nAssigned == 8 + 4 + 5);  // uplink excluded by default

    LoadPolicy withUplink;
    withUplink.includeUplink = true;
    CHECK(frameLoad(cands, cfg, 0, withUplink).nAssigned == 8 + 4 + 5 + 6);

    LoadPolicy noSystem;
    noSystem.includeSystem = false;
    CHECK(frameLoad(cands, cfg, 0, noSystem).nAssigned == 5);
}

TEST_CASE("distinct user census ignores special identifiers") {
    std::vector<DciCandidate> cands;
    cands.push_back(alloc(0, 0xFFFF, {0}));
    cands.push_back(alloc(0, 0xB142, {1}));
    cands.push_back(alloc(1, 0x2667, {2}));
    cands.push_back(alloc(2, 0x2667, {3}));
    cands.push_back(alloc(3, 0xD2CB, {4}));
    cands.push_back(alloc(4, 0x3A48, {5}));
    cands.push_back(alloc(5, 0x2AC6, {6}));
    cands.push_back(alloc(6, 0x5A0F, {7}, LinkDirection::uplink));
    cands.push_back(alloc(7, 0x27F0, {8}));
    CHECK(uniqueUes(cands) == 7);

    const std::vector<DciCandidate> none;
    CHECK(uniqueUes(none) == 0);
}

TEST_CASE("summaries aggregate frames and survive JSON") {
    std::vector<FrameLoad> frames;
    for (int i = 0; i < 4; ++i) {
        FrameLoad fl;
        fl.sfn = 100 + i;
        fl.nTotal = 500;
        fl.nAssigned = 100 + 50 * i;
        fl.fraction = fl.nAssigned / 500.0;
        fl.uniqueUes = i == 0 ? 2 : 3;
        frames.push_back(fl);
    }
    const LoadSummary s = summarize(frames);
    CHECK(s.framesAnalyzed == 4);
    CHECK(s.meanLoad == doctest::Approx(0.35));
    CHECK(s.minLoad == doctest::Approx(0.2));
    CHECK(s.maxLoad == doctest::Approx(0.5));
    CHECK(s.ueHistogram.at(2) == 1);
    CHECK(s.ueHistogram.at(3) == 3);

    const nlohmann::json j = summaryToJson(s);
    CHECK(j.contains("meanLoad"));
    CHECK(j.contains("framesAnalyzed"));
    const LoadSummary back = summaryFromJson(j);
    CHECK(back.meanLoad == doctest::Approx(s.meanLoad));
    CHECK(back.framesAnalyzed == 4);
    CHECK(back.ueHistogram == s.ueHistogram);

    bool emptyRejected = false;
    try {
        (void)summarize(std::vector<FrameLoad>{});
    } catch (const Error& e) {
        emptyRejected = e.code() == Err::EmptyInput;
    }
    CHECK(emptyRejected);
}

TEST_CASE("report rows format identifiers and frame labels") {
    DciCandidate c = alloc(3, 0x003D, range(8, 8));
    c.sfn = 406;
    c.subframe = 5;
    c.format = DciFormat::f1a;
    c.numErrors = 0;
    c.powerDb = -3.25;
    const ReportRow row = rowFromCandidate(c);
    CHECK(row.sfnLabel == "406.5");
    CHECK(row.rnti == "003D");
    CHECK(row.dciFormat == "Format1A");
    CHECK(row.linkDirection == "Downlink");
    CHECK(row.prbSet == "[8...15]");

    c.subframe = 0;
    CHECK(rowFromCandidate(c).sfnLabel == "406");  // bare frame number

    c.rnti = 0xB142;
    CHECK(rowFromCandidate(c).rnti == "B142");
}

TEST_CASE("the CSV report round trips") {
    DciCandidate c1 = alloc(1, 0x0021, range(0, 50));
    c1.sfn = 0;
    c1.subframe = 1;
    c1.powerDb = 0.04;
    DciCandidate c2 = alloc(5, 0xFFFF, range(8, 8));
    c2.sfn = 406;
    c2.format = DciFormat::f1a;
    c2.numErrors = 1;

    const std::vector<ReportRow> rows{rowFromCandidate(c1), rowFromCandidate(c2)};
    const std::string csv = renderReport(rows, ReportFormat::csv);

    const std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header == "SFN,RNTI,NumErrors,DCIFormat,LinkDirection,PRBSet,Power");
    CHECK(csv.find("0.1,0021,0,Format1,Downlink,\"[0...49]\",0.04") != std::string::npos);
    CHECK(csv.find("406.5,FFFF,1,Format1A,Downlink,\"[8...15]\",") != std::string::npos);

    const auto parsed = parseReportCsv(csv);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].sfnLabel == "0.1");
    CHECK(parsed[0].rnti == "0021");
    CHECK(parsed[0].prbSet == "[0...49]");
    REQUIRE(parsed[0].powerDb.has_value());
    CHECK(*parsed[0].powerDb == doctest::Approx(0.04));
    CHECK(parsed[1].numErrors == 1);
    CHECK(!parsed[1].powerDb.has_value());

    const std::string jsonText = renderReport(rows, ReportFormat::json);
    const nlohmann::json j = nlohmann::json::parse(jsonText);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 2);
    CHECK(j[0]["RNTI"] == "0021");
    CHECK(j[1]["SFN"] == "406.5");
}
