#include <doctest.h>

#include <cmath>
#include <map>

#include "ltedci/ofdm.hpp"
#include "ltedci/sync.hpp"
#include "ltedci/txgen.hpp"

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

DciPlant fullBandPlant(const CellConfig& cfg, uint16_t rnti, int level) {
    AllocationSpec alloc;
    alloc.raType = 0;
    alloc.bitmap.assign(static_cast<size_t>(type0BitmapLength(cfg.nDlRb)), 1);
    DciPlant p;
    p.rnti = rnti;
    p.format = DciFormat::f1;
    p.aggregationLevel = level;
    p.subframes = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    p.message = buildDci(DciFormat::f1, cfg, alloc);
    return p;
}

}  // namespace

TEST_CASE("payload building honors allocations and overrides") {
    const CellConfig cfg = referenceCell();

    AllocationSpec type2;
    type2.raType = 2;
    type2.start = 8;
    type2.length = 8;
    const DciMessage m1a = buildDci(DciFormat::f1a, cfg, type2);
    CHECK(m1a.format == DciFormat::f1a);
    CHECK(m1a.prbSet.indices == std::vector<int>{8, 9, 10, 11, 12, 13, 14, 15});
    CHECK(static_cast<int>(m1a.payload.size()) == dciSize(DciFormat::f1a, 50, 2));

    const DciMessage withMcs =
        buildDci(DciFormat::f1a, cfg, type2, {DciField{"Mcs", 0, 17}});
    bool sawMcs = false;
    for (const DciField& f : withMcs.fields)
        if (f.name == "Mcs") {
            CHECK(f.value == 17);
            sawMcs = true;
        }
    CHECK(sawMcs);
    CHECK(withMcs.prbSet == m1a.prbSet);  // override leaves the allocation alone

    CHECK_THROWS_AS((void)buildDci(DciFormat::f1a, cfg, type2,
                                   {DciField{"NoSuchField", 0, 1}}),
                    Error);
    AllocationSpec wrongType;
    wrongType.raType = 0;
    CHECK_THROWS_AS((void)buildDci(DciFormat::f0, cfg, wrongType), Error);

    AllocationSpec type1;
    type1.raType = 1;
    type1.subset = 1;
    type1.shift = 1;
    type1.bitmap.assign(14, 0);
    type1.bitmap[0] = 1;
    const DciMessage m1 = buildDci(DciFormat::f1, cfg, type1);
    REQUIRE(m1.prbSet.indices.size() == 1);
    CHECK((m1.prbSet.indices[0] / 3) % 3 == 1);
}

TEST_CASE("the scheduler packs wide candidates first") {
    const CellConfig cfg = referenceCell();
    ScheduleSpec spec;
    spec.cell = cfg;
    DciPlant narrow = fullBandPlant(cfg, 0x0101, 2);
    DciPlant wide = fullBandPlant(cfg, 0x0202, 8);
    spec.plants = {narrow, wide};

    const auto resolved = resolveSchedule(spec);
    REQUIRE(resolved.size() == 10);
    for (int sf = 0; sf < 10; ++sf) {
        std::map<size_t, int> offsets;
        for (const auto& [idx, off] : resolved[static_cast<size_t>(sf)]) offsets[idx] = off;
        REQUIRE(offsets.size() == 2);
        CHECK(offsets[1] == 0);  // level 8 placed first
        CHECK(offsets[0] == 8);
    }
}

TEST_CASE("infeasible schedules are rejected") {
    const CellConfig cfg = referenceCell();
    ScheduleSpec spec;
    spec.cell = cfg;

    // Four level-8 candidates need 32 elements; only 25 exist.
    spec.plants.assign(4, fullBandPlant(cfg, 0x0300, 8));
    CHECK_THROWS_AS((void)resolveSchedule(spec), Error);

    // Explicit offsets that collide.
    spec.plants.assign(2, fullBandPlant(cfg, 0x0400, 4));
    spec.plants[0].cceOffset = 0;
    spec.plants[1].cceOffset = 0;
    CHECK_THROWS_AS((void)resolveSchedule(spec), Error);

    // Misaligned explicit offset.
    spec.plants.assign(1, fullBandPlant(cfg, 0x0500, 4));
    spec.plants[0].cceOffset = 2;
    CHECK_THROWS_AS((void)resolveSchedule(spec), Error);

    // A payload too long for the narrowest candidate.
    AllocationSpec alloc;
    alloc.raType = 0;
    alloc.bitmap.assign(17, 1);
    DciPlant fat;
    fat.rnti = 0x0600;
    fat.format = DciFormat::f2;
    fat.aggregationLevel = 1;
    fat.subframes = {0};
    fat.message = buildDci(DciFormat::f2, cfg, alloc);
    spec.plants = {fat};
    bool capacity = false;
    try {
        (void)resolveSchedule(spec);
    } catch (const Error& e) {
        capacity = e.code() == Err::CapacityExceeded;
    }
    CHECK(capacity);
}

TEST_CASE("scenario files parse into working schedules") {
    const nlohmann::json j = {
        {"cell",
         {{"NDLRB", 50},
          {"DuplexMode", "FDD"},
          {"CyclicPrefix", "Normal"},
          {"NCellID", 13},
          {"CellRefP", 2},
          {"PHICHDuration", "Normal"},
          {"Ng", "One"}}},
        {"startSfn", 12},
        {"frames", 2},
        {"cfi", 2},
        {"ocng", true},
        {"seed", 9},
        {"impairments",
         {{"snrDb", 18.0}, {"cfoHz", 250.0}, {"timingPadSamples", 64}, {"noiseSeed", 7}}},
        {"dcis",
         {{{"rnti", 33},
           {"format", "Format1"},
           {"aggregationLevel", 8},
           {"subframes", {0, 1}},
           {"allocation", {{"type", 0}, {"bitmap", "11111111111111111"}}}},
          {{"rnti", 61},
           {"format", "Format1A"},
           {"aggregationLevel", 4},
           {"cceOffset", 8},
           {"subframes", {5}},
           {"allocation", {{"type", 2}, {"start", 8}, {"length", 8}}},
           {"fields", {{"Mcs", 5}}}}}}};

    const Scenario s = parseScenario(j);
    CHECK(s.schedule.cell.pci == 13);
    CHECK(s.schedule.startSfn == 12);
    CHECK(s.schedule.frames == 2);
    CHECK(s.schedule.ocng);
    REQUIRE(s.impairments.snrDb.has_value());
    CHECK(*s.impairments.snrDb == doctest::Approx(18.0));
    CHECK(s.impairments.timingPadSamples == 64);

    REQUIRE(s.schedule.plants.size() == 2);
    const DciPlant& a = s.schedule.plants[0];
    CHECK(a.rnti == 0x0021);
    CHECK(a.format == DciFormat::f1);
    CHECK(a.subframes == std::vector<int>{0, 1});
    CHECK(static_cast<int>(a.message.prbSet.indices.size()) == 50);
    const DciPlant& b = s.schedule.plants[1];
    CHECK(b.rnti == 0x003D);
    REQUIRE(b.cceOffset.has_value());
    CHECK(*b.cceOffset == 8);
    CHECK(b.message.prbSet == PrbSet{{8, 9, 10, 11, 12, 13, 14, 15}});
    bool sawMcs = false;
    for (const DciField& f : b.message.fields)
        if (f.name == "Mcs") {
            CHECK(f.value == 5);
            sawMcs = true;
        }
    CHECK(sawMcs);

    // Serialization carries payloads verbatim and parses back to the same
    // schedule.
    const Scenario back = parseScenario(scenarioToJson(s));
    CHECK(back.schedule.cell.pci == s.schedule.cell.pci);
    REQUIRE(back.schedule.plants.size() == 2);
    for (size_t i = 0; i < 2; ++i) {
        CHECK(back.schedule.plants[i].rnti == s.schedule.plants[i].rnti);
        CHECK(back.schedule.plants[i].format == s.schedule.plants[i].format);
        CHECK(back.schedule.plants[i].subframes == s.schedule.plants[i].subframes);
        CHECK(back.schedule.plants[i].message.payload == s.schedule.plants[i].message.payload);
        CHECK(back.schedule.plants[i].message.prbSet == s.schedule.plants[i].message.prbSet);
    }
    CHECK(back.impairments.cfoHz == doctest::Approx(250.0));
}

TEST_CASE("generated frames carry the physical landmarks") {
    const CellConfig cfg = referenceCell();
    ScheduleSpec spec;
    spec.cell = cfg;
    spec.cfi = 2;
    spec.plants = {fullBandPlant(cfg, 0x0021, 8)};
    const auto resolved = resolveSchedule(spec);
    const auto frame = generateFrame(spec, resolved, 0);
    REQUIRE(frame.size() == 10);

    const int half = 6 * cfg.nDlRb;
    const auto pss = pssSequence(cfg.nId2());
    const auto sss = sssSequence(cfg.nId1(), cfg.nId2(), 0);
    for (int n = 0; n < 62; ++n) {
        CHECK(std::abs(frame[0].at(half - 31 + n, 6) - pss[static_cast<size_t>(n)]) < 1e-12);
        CHECK(std::abs(frame[0].at(half - 31 + n, 5) -
                       cf64(sss[static_cast<size_t>(n)], 0.0)) < 1e-12);
    }

    // Pilots from both ports are present with unit magnitude.
    for (int port = 0; port < 2; ++port) {
        const auto pos = crsPositions(cfg, port, 3);
        for (const RePosition& rp : pos)
            CHECK(std::abs(frame[3].at(rp.subcarrier, rp.symbol)) == doctest::Approx(1.0));
    }

    // The control indicator survives the real estimate-and-decode path in
    // every subframe.
    for (int sf : {0, 3, 5, 9}) {
        const PortEstimates est = estimatePorts(frame[static_cast<size_t>(sf)], cfg, sf);
        const CfiDecode dec = pcfichDecode(frame[static_cast<size_t>(sf)], est, cfg, sf);
        CHECK(dec.cfi == 2);
        CHECK(dec.confidence > 0.8);
    }
}

TEST_CASE("recordings are deterministic and sized to the schedule") {
    Scenario s;
    s.schedule.cell = referenceCell();
    s.schedule.frames = 1;
    s.schedule.seed = 77;
    s.schedule.plants = {fullBandPlant(s.schedule.cell, 0x0021, 8)};
    s.impairments.snrDb = 25.0;
    s.impairments.timingPadSamples = 500;

    const GeneratedRecording a = generateRecording(s);
    const GeneratedRecording b = generateRecording(s);
    CHECK(a.recording.sampleRateHz == 15360000);
    CHECK(a.recording.samples.size() == 10u * 15360u + 500u);
    REQUIRE(a.recording.samples.size() == b.recording.samples.size());
    CHECK(std::equal(a.recording.samples.begin(), a.recording.samples.end(),
                     b.recording.samples.begin()));

    REQUIRE(a.manifest.size() == 10);
    for (int sf = 0; sf < 10; ++sf) {
        CHECK(a.manifest[static_cast<size_t>(sf)].subframe == sf);
        CHECK(a.manifest[static_cast<size_t>(sf)].rnti == 0x0021);
        CHECK(a.manifest[static_cast<size_t>(sf)].sfn == 0);
        CHECK(a.manifest[static_cast<size_t>(sf)].prbSet.indices.size() == 50);
    }
}

TEST_CASE("impairments add what they claim and nothing else") {
    Scenario s;
    s.schedule.cell = referenceCell();
    s.schedule.frames = 1;
    s.schedule.plants = {fullBandPlant(s.schedule.cell, 0x0021, 8)};
    const auto resolved = resolveSchedule(s.schedule);
    auto frame = generateFrame(s.schedule, resolved, 0);
    const IqRecording clean = ofdmModulate(frame, s.schedule.cell);

    // The identity impairment is bit-exact.
    const IqRecording same = applyImpairments(clean, ImpairmentSpec{});
    REQUIRE(same.samples.size() == clean.samples.size());
    CHECK(std::equal(same.samples.begin(), same.samples.end(), clean.samples.begin()));

    // Additive noise lands at the requested level.
    ImpairmentSpec noisy;
    noisy.snrDb = 20.0;
    noisy.noiseSeed = 12345;
    const IqRecording out = applyImpairments(clean, noisy);
    double sig = 0.0;
    double noise = 0.0;
    for (size_t i = 0; i < clean.samples.size(); ++i) {
        sig += std::norm(clean.samples[i]);
        noise += std::norm(out.samples[i] - clean.samples[i]);
    }
    const double snr = 10.0 * std::log10(sig / noise);
    CHECK(snr == doctest::Approx(20.0).epsilon(0.02));

    // Same seed, same noise; different seed, different noise.
    const IqRecording out2 = applyImpairments(clean, noisy);
    CHECK(std::equal(out.samples.begin(), out.samples.end(), out2.samples.begin()));
    noisy.noiseSeed = 54321;
    const IqRecording out3 = applyImpairments(clean, noisy);
    CHECK(!std::equal(out.samples.begin(), out.samples.end(), out3.samples.begin()));

    // Padding prepends exactly the requested number of samples.
    ImpairmentSpec padded;
    padded.timingPadSamples = 777;
    const IqRecording shifted = applyImpairments(clean, padded);
    CHECK(shifted.samples.size() == clean.samples.size() + 777);
    // The pad is quiet relative to the signal.
    double padPower = 0.0;
    for (int i = 0; i < 777; ++i) padPower += std::norm(shifted.samples[static_cast<size_t>(i)]);
    padPower /= 777.0;
    CHECK(padPower < 1e-6);
}
