#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

#include "ltedci/decoder.hpp"
#include "ltedci/txgen.hpp"

using namespace ltedci;

namespace {

Scenario mixedScenario() {
    Scenario s;
    s.schedule.cell.nDlRb = 50;
    s.schedule.cell.pci = 301;
    s.schedule.cell.cellRefPorts = 2;
    s.schedule.startSfn = 120;
    s.schedule.frames = 2;
    s.schedule.seed = 31;

    AllocationSpec wide;
    wide.raType = 2;
    wide.start = 0;
    wide.length = 30;
    DciPlant user;
    user.rnti = 0x2667;
    user.format = DciFormat::f1a;
    user.aggregationLevel = 8;
    user.subframes = {1, 6};
    user.message = buildDci(DciFormat::f1a, s.schedule.cell, wide);
    s.schedule.plants.push_back(user);

    AllocationSpec narrow;
    narrow.raType = 2;
    narrow.start = 40;
    narrow.length = 5;
    DciPlant grant;
    grant.rnti = 0xB142;
    grant.format = DciFormat::f0;
    grant.aggregationLevel = 4;
    grant.subframes = {1};
    grant.message = buildDci(DciFormat::f0, s.schedule.cell, narrow);
    s.schedule.plants.push_back(grant);

    AllocationSpec sys;
    sys.raType = 2;
    sys.start = 20;
    sys.length = 12;
    DciPlant si;
    si.rnti = 0xFFFF;
    si.format = DciFormat::f1a;
    si.aggregationLevel = 8;
    si.subframes = {5};
    si.message = buildDci(DciFormat::f1a, s.schedule.cell, sys);
    s.schedule.plants.push_back(si);
    return s;
}

using Key = std::tuple<int, int, uint16_t, std::string, std::vector<int>>;

std::set<Key> keysOf(const std::vector<DciCandidate>& cands) {
    std::set<Key> keys;
    for (const DciCandidate& c : cands)
        keys.insert({c.sfn, c.subframe, c.rnti, dciFormatName(c.format), c.prbSet.indices});
    return keys;
}

}  // namespace

TEST_CASE("a clean capture decodes back to its manifest") {
    const Scenario s = mixedScenario();
    const GeneratedRecording gen = generateRecording(s);
    DecodeOptions opts;
    opts.threads = 2;
    const DecodeResult res = decodeRecording(gen.recording, opts);

    CHECK(res.cell.pci == 301);
    CHECK(res.cell.nDlRb == 50);
    CHECK(res.cell.cellRefPorts == 2);
    CHECK(res.nFrame == 120);
    CHECK(res.mib.sfnMsb8 == 120 / 4);
    CHECK(res.framesDecoded == 2);
    CHECK(res.subframesSkipped == 0);

    CHECK(keysOf(res.candidates) == keysOf(gen.manifest));
    for (const DciCandidate& c : res.candidates) {
        CHECK(c.numErrors == 0);
        if (c.direction == LinkDirection::downlink) {
            REQUIRE(c.powerDb.has_value());
            CHECK(std::abs(*c.powerDb) < 1.0);  // unit-power filler
        } else {
            CHECK(!c.powerDb.has_value());
        }
    }

    // Loads follow from the manifest: 30 blocks in subframes 1 and 6 (the
    // uplink grant does not count), 12 in subframe 5.
    REQUIRE(res.frameLoads.size() == 2);
    for (const FrameLoad& fl : res.frameLoads) {
        CHECK(fl.nTotal == 500);
        CHECK(fl.nAssigned == 30 + 30 + 12);
        CHECK(fl.uniqueUes == 2);
    }
    CHECK(res.frameLoads[0].sfn == 120);
    CHECK(res.frameLoads[1].sfn == 121);
    CHECK(res.uniqueUeCount == 2);
    CHECK(res.summary.framesAnalyzed == 2);
    CHECK(res.summary.meanLoad == doctest::Approx(72.0 / 500.0));
}

TEST_CASE("an empty schedule produces an empty report") {
    Scenario s;
    s.schedule.cell.nDlRb = 50;
    s.schedule.cell.pci = 17;
    s.schedule.frames = 1;
    const GeneratedRecording gen = generateRecording(s);
    const DecodeResult res = decodeRecording(gen.recording);
    CHECK(res.candidates.empty());
    CHECK(res.framesDecoded == 1);
    REQUIRE(res.frameLoads.size() == 1);
    CHECK(res.frameLoads[0].nAssigned == 0);
    CHECK(res.uniqueUeCount == 0);
}

TEST_CASE("the frame budget caps the work") {
    const Scenario s = mixedScenario();
    const GeneratedRecording gen = generateRecording(s);
    DecodeOptions opts;
    opts.maxFrames = 1;
    const DecodeResult res = decodeRecording(gen.recording, opts);
    CHECK(res.framesDecoded == 1);
    for (const DciCandidate& c : res.candidates) CHECK(c.sfn == 120);
    REQUIRE(res.frameLoads.size() == 1);
}

TEST_CASE("format restriction narrows the search") {
    const Scenario s = mixedScenario();
    const GeneratedRecording gen = generateRecording(s);
    DecodeOptions opts;
    opts.formats = {DciFormat::f1a};
    const DecodeResult res = decodeRecording(gen.recording, opts);
    for (const DciCandidate& c : res.candidates) CHECK(c.format == DciFormat::f1a);
    // The uplink grant disappears; the two downlink users remain.
    std::set<uint16_t> ids;
    for (const DciCandidate& c : res.candidates) ids.insert(c.rnti);
    CHECK(ids == std::set<uint16_t>{0x2667, 0xFFFF});
}

TEST_CASE("noise-only input reports no cell") {
    IqRecording rec;
    rec.sampleRateHz = 15360000;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 0.1);
    rec.samples.resize(15360 * 12);
    for (auto& v : rec.samples) v = cf64(gauss(rng), gauss(rng));
    bool noCell = false;
    try {
        (void)decodeRecording(rec);
    } catch (const Error& e) {
        noCell = e.code() == Err::NoPssFound || e.code() == Err::NoSssFound;
    }
    CHECK(noCell);
}

TEST_CASE("captures shorter than a frame are rejected") {
    Scenario s;
    s.schedule.cell.nDlRb = 50;
    s.schedule.cell.pci = 17;
    s.schedule.frames = 1;
    GeneratedRecording gen = generateRecording(s);
    gen.recording.samples.resize(15360 * 8);  // cell found, but no whole frame
    CHECK_THROWS_AS((void)decodeRecording(gen.recording), Error);
}
