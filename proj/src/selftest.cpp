#include "ltedci/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "ltedci/cch.hpp"
#include "ltedci/decoder.hpp"
#include "ltedci/seqfec.hpp"
#include "ltedci/sync.hpp"
#include "ltedci/txgen.hpp"

namespace ltedci {
namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Criterion bodies signal failure by throwing; the message becomes the detail.
struct CheckFail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(bool cond, const std::string& msg) {
    if (!cond) throw CheckFail(msg);
}

std::string hex4(uint16_t v) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%04X", v);
    return buf;
}

PrbSet contiguous(int first, int last) {
    PrbSet s;
    for (int i = first; i <= last; ++i) s.indices.push_back(i);
    return s;
}

// ---------------------------------------------------------------------------
// Reference scenarios used by several criteria.

CellConfig referenceCellA() {
    CellConfig cfg;
    cfg.nDlRb = 50;
    cfg.pci = 27;
    cfg.cellRefPorts = 1;
    return cfg;
}

AllocationSpec fullBandType0(int nDlRb) {
    AllocationSpec a;
    a.raType = 0;
    a.bitmap.assign(static_cast<size_t>(type0BitmapLength(nDlRb)), 1);
    return a;
}

// Single user, Format 1, full 50-RB allocation in every subframe of one frame.
Scenario scenarioA() {
    Scenario s;
    s.schedule.cell = referenceCellA();
    s.schedule.startSfn = 0;
    s.schedule.frames = 1;
    s.schedule.cfi = 2;
    s.schedule.ocng = false;
    s.schedule.seed = 11;

    DciPlant p;
    p.rnti = 0x0021;
    p.format = DciFormat::f1;
    p.aggregationLevel = 8;
    p.subframes = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    p.message = buildDci(DciFormat::f1, s.schedule.cell, fullBandType0(50));
    s.schedule.plants.push_back(p);
    return s;
}

// Noisy two-user frame at SFN 406: a full-band Format 2 assignment for C-RNTI
// 0x003D in subframe 0 plus a system (SI-RNTI) Format 1A grant on RBs 8..15 in
// subframe 5, over filler-loaded data symbols at 20 dB SNR.
Scenario scenarioB() {
    Scenario s;
    s.schedule.cell = referenceCellA();
    s.schedule.cell.cellRefPorts = 2;
    s.schedule.startSfn = 406;
    s.schedule.frames = 1;
    s.schedule.cfi = 2;
    s.schedule.ocng = true;
    s.schedule.seed = 23;

    DciPlant user;
    user.rnti = 0x003D;
    user.format = DciFormat::f2;
    user.aggregationLevel = 8;
    user.subframes = {0};
    user.message = buildDci(DciFormat::f2, s.schedule.cell, fullBandType0(50));
    s.schedule.plants.push_back(user);

    DciPlant sys;
    sys.rnti = 0xFFFF;
    sys.format = DciFormat::f1a;
    sys.aggregationLevel = 8;
    sys.subframes = {5};
    AllocationSpec a;
    a.raType = 2;
    a.start = 8;
    a.length = 8;
    sys.message = buildDci(DciFormat::f1a, s.schedule.cell, a);
    s.schedule.plants.push_back(sys);

    s.impairments.snrDb = 20.0;
    s.impairments.noiseSeed = 5;
    return s;
}

struct Ctx {
    int threads = 1;
    GeneratedRecording genA;
    DecodeResult decA;
    bool haveA = false;
    GeneratedRecording genB;
    DecodeResult decB;
    bool haveB = false;
};

// ---------------------------------------------------------------------------
// 1. Cell-identity arithmetic.

std::string c1Body(Ctx&) {
    check(makeCellIdentity(9, 0).pci == 27, "identity (9,0) must map to 27");
    check(makeCellIdentity(4, 1).pci == 13, "identity (4,1) must map to 13");
    std::set<int> seen;
    for (int nId1 = 0; nId1 < 168; ++nId1)
        for (int nId2 = 0; nId2 < 3; ++nId2) {
            const CellIdentity id = makeCellIdentity(nId1, nId2);
            check(id.pci >= 0 && id.pci < 504, "identity out of range");
            seen.insert(id.pci);
            CellConfig cfg;
            cfg.pci = id.pci;
            check(cfg.nId1() == nId1 && cfg.nId2() == nId2,
                  "identity decomposition must invert the composition");
        }
    check(seen.size() == 504, "504 identities must be distinct");
    return "2 fixed points, 504-way bijection";
}

// ---------------------------------------------------------------------------
// 2. Full-band schedule loopback.

std::string c2Body(Ctx& ctx) {
    ctx.genA = generateRecording(scenarioA());
    DecodeOptions opts;
    opts.threads = ctx.threads;
    ctx.decA = decodeRecording(ctx.genA.recording, opts);
    ctx.haveA = true;

    check(ctx.decA.nFrame == 0, "first frame number must decode as 0");
    const PrbSet fullBand = contiguous(0, 49);
    int checkedSubframes = 0;
    for (int sf : {0, 1, 2, 3, 4, 6, 7, 8, 9}) {
        std::vector<const DciCandidate*> here;
        for (const DciCandidate& c : ctx.decA.candidates)
            if (c.sfn == 0 && c.subframe == sf) here.push_back(&c);
        check(here.size() == 1, "subframe " + std::to_string(sf) + " must carry exactly one "
                                "accepted candidate, found " + std::to_string(here.size()));
        const DciCandidate& c = *here.front();
        check(c.rnti == 0x0021, "subframe " + std::to_string(sf) + ": wrong identifier " +
                                    hex4(c.rnti));
        check(c.numErrors == 0, "subframe " + std::to_string(sf) + ": nonzero error count");
        check(c.format == DciFormat::f1, "subframe " + std::to_string(sf) + ": wrong format");
        check(c.direction == LinkDirection::downlink, "wrong link direction");
        check(c.prbSet == fullBand, "subframe " + std::to_string(sf) + ": wrong allocation " +
                                        prbSetToString(c.prbSet));
        ++checkedSubframes;
    }
    // Subframe 0.5 is scheduled too but not part of the exact-match list;
    // report its presence informationally.
    int sf5 = 0;
    for (const DciCandidate& c : ctx.decA.candidates)
        if (c.sfn == 0 && c.subframe == 5) ++sf5;
    return std::to_string(checkedSubframes) + " subframes exact (0021/Format1/[0...49]); 0.5 carries " +
           std::to_string(sf5) + " more";
}

// ---------------------------------------------------------------------------
// 3. Overlap filtering.

std::string c3Body(Ctx& ctx) {
    ctx.genB = generateRecording(scenarioB());
    DecodeOptions opts;
    opts.threads = ctx.threads;
    ctx.decB = decodeRecording(ctx.genB.recording, opts);
    ctx.haveB = true;

    // The decoded capture supplies the genuine candidates.
    std::vector<DciCandidate> fixture;
    for (const DciCandidate& c : ctx.decB.candidates)
        if (c.subframe == 0 || c.subframe == 5) fixture.push_back(c);

    const auto hasClean = [&](uint16_t rnti) {
        return std::any_of(fixture.begin(), fixture.end(), [&](const DciCandidate& c) {
            return c.rnti == rnti && c.numErrors == 0;
        });
    };
    check(hasClean(0x003D), "decoded capture must contain the clean 003D assignment");
    check(hasClean(0xFFFF), "decoded capture must contain the clean FFFF grant");

    // Inject errored near-duplicates whose allocations collide with the clean
    // full-band assignment of subframe 0.
    DciCandidate junk1;
    junk1.sfn = 406;
    junk1.subframe = 0;
    junk1.rnti = 0x962C;
    junk1.numErrors = 2;
    junk1.format = DciFormat::f2a;
    junk1.direction = LinkDirection::downlink;
    junk1.prbSet.indices = {12, 14, 17, 22, 30, 41};
    junk1.aggregationLevel = 1;
    junk1.cceOffset = 3;
    junk1.payload = BitVector(40, 1);
    fixture.push_back(junk1);

    DciCandidate junk2;
    junk2.sfn = 406;
    junk2.subframe = 0;
    junk2.rnti = 0x00DA;
    junk2.numErrors = 2;
    junk2.format = DciFormat::f1;
    junk2.direction = LinkDirection::downlink;
    junk2.prbSet.indices = {0, 10, 11, 18, 19, 27, 29};
    junk2.aggregationLevel = 1;
    junk2.cceOffset = 5;
    junk2.payload = BitVector(31, 1);
    fixture.push_back(junk2);

    const std::vector<DciCandidate> kept = filterCandidates(fixture, 2, true);

    std::set<uint16_t> userIds;
    bool sawSystem = false;
    for (const DciCandidate& c : kept) {
        check(c.rnti != 0x962C && c.rnti != 0x00DA, "injected overlap candidates must be dropped");
        if (classifyRnti(c.rnti) == RntiClass::cRnti) userIds.insert(c.rnti);
        if (c.rnti == 0xFFFF) sawSystem = true;
    }
    check(userIds == std::set<uint16_t>{0x003D},
          "surviving subscriber identifiers must be exactly {003D}");
    check(sawSystem, "the system grant must survive filtering");
    check(classifyRnti(0xFFFF) == RntiClass::siRnti &&
              std::string(rntiClassName(classifyRnti(0xFFFF))) == "SI-RNTI",
          "FFFF must classify as the system identifier");
    return "injected 2-error overlaps pruned; survivors {003D} + system FFFF";
}

// ---------------------------------------------------------------------------
// 4. Frame-load arithmetic.

std::string c4Body(Ctx& ctx) {
    // Fixed-point: 154 assigned blocks out of 500.
    CellConfig cfg = referenceCellA();
    std::vector<DciCandidate> cands;
    auto add = [&](int subframe, const PrbSet& prbs) {
        DciCandidate c;
        c.sfn = 0;
        c.subframe = subframe;
        c.rnti = static_cast<uint16_t>(0x1000 + subframe);
        c.format = DciFormat::f1;
        c.direction = LinkDirection::downlink;
        c.prbSet = prbs;
        cands.push_back(c);
    };
    add(0, contiguous(0, 49));
    add(1, contiguous(0, 49));
    add(2, contiguous(0, 49));
    add(3, contiguous(0, 3));
    const FrameLoad fl = frameLoad(cands, cfg, 0);
    check(fl.nAssigned == 154 && fl.nTotal == 500, "census must be 154 of 500");
    check(std::abs(fl.fraction * 100.0 - 30.8) <= 0.05,
          "load must report 30.8%, got " + std::to_string(fl.fraction * 100.0));

    // Loopback: decoded per-frame loads equal the union of the scheduled
    // allocations. Scenario A fills the band in every subframe.
    check(ctx.haveA, "loopback decode unavailable");
    auto expectedAssigned = [](const std::vector<DciCandidate>& manifest, int sfn) {
        std::map<int, std::set<int>> perSubframe;
        for (const DciCandidate& c : manifest)
            if (c.sfn == sfn && c.direction == LinkDirection::downlink)
                perSubframe[c.subframe].insert(c.prbSet.indices.begin(),
                                               c.prbSet.indices.end());
        int total = 0;
        for (const auto& [sf, prbs] : perSubframe) total += static_cast<int>(prbs.size());
        return total;
    };
    check(ctx.decA.frameLoads.size() == 1, "one frame expected");
    check(ctx.decA.frameLoads[0].nAssigned == expectedAssigned(ctx.genA.manifest, 0),
          "decoded load must equal the scheduled union");
    check(ctx.decA.frameLoads[0].fraction == 1.0, "full-band frame must report load 1.0");

    // A partial, overlapping schedule: two grants sharing 5 blocks.
    Scenario sc;
    sc.schedule.cell = referenceCellA();
    sc.schedule.cell.pci = 101;
    sc.schedule.startSfn = 10;
    sc.schedule.frames = 1;
    sc.schedule.cfi = 2;
    sc.schedule.seed = 31;
    for (const auto& [rnti, start] :
         std::vector<std::pair<uint16_t, int>>{{0x2AC6, 0}, {0x5A0F, 5}}) {
        DciPlant p;
        p.rnti = rnti;
        p.format = DciFormat::f1a;
        p.aggregationLevel = 4;
        p.subframes = {1};
        AllocationSpec a;
        a.raType = 2;
        a.start = start;
        a.length = 10;
        p.message = buildDci(DciFormat::f1a, sc.schedule.cell, a);
        sc.schedule.plants.push_back(p);
    }
    const GeneratedRecording gen = generateRecording(sc);
    DecodeOptions opts;
    opts.threads = ctx.threads;
    const DecodeResult dec = decodeRecording(gen.recording, opts);
    check(dec.frameLoads.size() == 1, "one frame expected");
    check(dec.frameLoads[0].nAssigned == 15,
          "overlapping grants [0..9] and [5..14] must union to 15 blocks, got " +
              std::to_string(dec.frameLoads[0].nAssigned));
    check(dec.frameLoads[0].nAssigned == expectedAssigned(gen.manifest, 10),
          "decoded load must equal the scheduled union");
    return "30.8% fixed point; loopback unions exact (500/500 and 15/500)";
}

// ---------------------------------------------------------------------------
// 5. Unique-identifier census.

std::string c5Body(Ctx&) {
    std::vector<DciCandidate> cands;
    int sf = 0;
    for (uint16_t rnti : {0xFFFF, 0xB142, 0x2667, 0x2667, 0xD2CB, 0x3A48, 0x2AC6, 0x5A0F,
                          0x27F0}) {
        DciCandidate c;
        c.sfn = 867;
        c.subframe = sf++ % 10;
        c.rnti = rnti;
        c.direction = LinkDirection::downlink;
        cands.push_back(c);
    }
    const int n = uniqueUes(cands);
    check(n == 7, "fixture must count 7 subscribers, got " + std::to_string(n));
    const std::vector<DciCandidate> none;
    check(uniqueUes(none) == 0, "empty census must be 0");
    return "9 rows -> 7 subscribers (system row and duplicate excluded)";
}

// ---------------------------------------------------------------------------
// 6. Broadcast-channel round trip.

std::string c6Body(Ctx&) {
    CellConfig cfg;
    cfg.nDlRb = 50;
    cfg.pci = 13;
    cfg.cellRefPorts = 2;
    cfg.phichDuration = PhichDuration::normal;
    cfg.phichNg = PhichNg::one;

    Mib mib;
    mib.nDlRb = cfg.nDlRb;
    mib.phichDuration = cfg.phichDuration;
    mib.phichNg = cfg.phichNg;
    mib.sfnMsb8 = 867 / 4;
    check(packMib(mib).size() == 24, "block must pack to 24 bits");
    const std::array<BitVector, 4> quarters = pbchEncode(mib, cfg.cellRefPorts, cfg.pci);
    for (const BitVector& q : quarters)
        check(q.size() == 480, "each broadcast quarter must hold 480 bits");

    ScheduleSpec sp;
    sp.cell = cfg;
    sp.startSfn = 867;
    sp.frames = 2;
    sp.cfi = 2;
    sp.seed = 3;
    const auto resolved = resolveSchedule(sp);
    const std::vector<ResourceGrid> f0 = generateFrame(sp, resolved, 0);
    const std::vector<ResourceGrid> f1 = generateFrame(sp, resolved, 1);

    CellConfig probe = cfg;
    probe.cellRefPorts = 1;  // decoded blind, not assumed
    const PbchResult two = pbchDecode({&f0[0], &f1[0]}, probe);
    check(two.cellRefPorts == 2, "blind port detection must report 2 ports");
    check(two.mib.nDlRb == 50, "bandwidth field mismatch");
    check(two.mib.phichDuration == PhichDuration::normal, "duration field mismatch");
    check(two.mib.phichNg == PhichNg::one, "Ng field mismatch");
    check(two.fullSfn == 867,
          "frame number must recover as 867, got " + std::to_string(two.fullSfn));

    // Quarter recovery: the second frame alone sits at 868 = 4*217 + 0.
    const PbchResult one = pbchDecode({&f1[0]}, probe);
    check(one.fullSfn == 868, "second-frame decode must report 868");
    check(one.cellRefPorts == 2 && one.mib.nDlRb == 50, "second-frame fields mismatch");
    return "blind 2-port decode; frame number 867 and quarter arithmetic exact";
}

// ---------------------------------------------------------------------------
// 7. Channel-coding oracles.

// Plain polynomial long division over GF(2), divisor x^16 + x^12 + x^5 + 1.
BitVector crcLongDivision(const BitVector& msg) {
    static constexpr std::array<uint8_t, 17> divisor = {1, 0, 0, 0, 1, 0, 0, 0, 0,
                                                        0, 0, 1, 0, 0, 0, 0, 1};
    BitVector work = msg;
    work.resize(msg.size() + 16, 0);
    for (size_t i = 0; i < msg.size(); ++i)
        if (work[i])
            for (size_t j = 0; j < divisor.size(); ++j) work[i + j] ^= divisor[j];
    return BitVector(work.end() - 16, work.end());
}

// Literal shift-register encoder: three parity taps over the current bit and
// the six previous ones, register preloaded with the block tail.
std::array<BitVector, 3> convShiftRegister(const BitVector& in) {
    const size_t n = in.size();
    std::array<BitVector, 3> out;
    for (auto& s : out) s.resize(n);
    auto h = [&](size_t i, int k) {  // input bit k steps back, cyclically
        return in[(i + n - static_cast<size_t>(k)) % n];
    };
    for (size_t i = 0; i < n; ++i) {
        out[0][i] = h(i, 0) ^ h(i, 2) ^ h(i, 3) ^ h(i, 5) ^ h(i, 6);
        out[1][i] = h(i, 0) ^ h(i, 1) ^ h(i, 2) ^ h(i, 3) ^ h(i, 6);
        out[2][i] = h(i, 0) ^ h(i, 1) ^ h(i, 2) ^ h(i, 4) ^ h(i, 6);
    }
    return out;
}

std::string c7Body(Ctx&) {
    std::mt19937_64 rng(1234);
    auto randomBits = [&](size_t n) {
        BitVector v(n);
        for (auto& b : v) b = static_cast<uint8_t>(rng() & 1u);
        return v;
    };

    for (int i = 0; i < 1000; ++i) {
        const size_t len = 1 + static_cast<size_t>(rng() % 120);
        const BitVector msg = randomBits(len);
        check(crc16(msg) == crcLongDivision(msg), "checksum mismatch against long division");
    }

    for (int i = 0; i < 200; ++i) {
        const size_t len = 8 + static_cast<size_t>(rng() % 73);
        const BitVector msg = randomBits(len);
        const auto mine = convEncode(msg);
        const auto oracle = convShiftRegister(msg);
        check(mine == oracle, "encoder mismatch against shift-register oracle");
    }

    auto streamLlrs = [](const std::array<BitVector, 3>& streams) {
        BitVector flat;
        for (const BitVector& s : streams) flat.insert(flat.end(), s.begin(), s.end());
        return bitsToLlrs(flat);
    };
    for (size_t n = 8; n <= 64; ++n) {
        const BitVector msg = randomBits(n);
        const SoftBits llrs = streamLlrs(convEncode(msg));
        check(viterbiDecode(llrs, n) == msg,
              "noiseless decode failed at length " + std::to_string(n));
    }
    int flips = 0;
    for (size_t n = 16; n <= 64; n += 1) {
        const BitVector msg = randomBits(n);
        const SoftBits clean = streamLlrs(convEncode(msg));
        for (size_t pos = 0; pos < clean.size(); ++pos) {
            SoftBits noisy = clean;
            noisy[pos] = -noisy[pos];
            check(viterbiDecode(noisy, n) == msg,
                  "single flip at " + std::to_string(pos) + " uncorrected, length " +
                      std::to_string(n));
            ++flips;
        }
    }
    return "1000 checksum + 200 encoder oracles; all " + std::to_string(flips) +
           " single-flip decodes corrected";
}

// ---------------------------------------------------------------------------
// 8. Synchronization robustness.

std::string c8Body(Ctx& ctx) {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 20; ++trial) {
        const int pci = static_cast<int>(rng() % 504);
        const int pad = static_cast<int>(rng() % 30720);
        Scenario s;
        s.schedule.cell = referenceCellA();
        s.schedule.cell.pci = pci;
        s.schedule.startSfn = 4;
        s.schedule.frames = 1;
        s.schedule.cfi = 2;
        s.schedule.seed = 1000 + static_cast<uint64_t>(trial);
        s.impairments.cfoHz = 500.0;
        s.impairments.timingPadSamples = pad;
        s.impairments.noiseSeed = 2000 + static_cast<uint64_t>(trial);
        const GeneratedRecording gen = generateRecording(s);
        const SyncResult sync = synchronize(gen.recording, ctx.threads);
        check(sync.identity.pci == pci,
              "trial " + std::to_string(trial) + ": wrong identity " +
                  std::to_string(sync.identity.pci) + " for " + std::to_string(pci));
        const int64_t timingError = sync.timingOffset - pad;
        check(timingError >= -2 && timingError <= 2,
              "trial " + std::to_string(trial) + ": timing off by " +
                  std::to_string(timingError));
        check(std::abs(sync.cfoHz - 500.0) < 50.0,
              "trial " + std::to_string(trial) + ": frequency estimate " +
                  std::to_string(sync.cfoHz));
    }
    return "20 random identities: timing within 2 samples, frequency within 50 Hz";
}

// ---------------------------------------------------------------------------
// 9. Blind-recovery property suite.

struct PlantTruth {
    uint16_t rnti = 0;
    int level = 1;
    int offset = 0;
    int subframe = 0;
};

std::string c9Body(Ctx& ctx) {
    std::mt19937_64 rng(4242);
    const std::array<DciFormat, 5> formats = {DciFormat::f0, DciFormat::f1, DciFormat::f1a,
                                              DciFormat::f2, DciFormat::f2a};
    SearchConfig sc;
    sc.threads = ctx.threads;

    int planted = 0;
    int cleanHits = 0;
    int noisyHits = 0;
    int round = 0;
    while (planted < 500 && round < 25) {
        ScheduleSpec sp;
        sp.cell.nDlRb = 50;
        sp.cell.pci = static_cast<int>(rng() % 504);
        sp.cell.cellRefPorts = 2;
        sp.startSfn = static_cast<int>(rng() % 1024);
        sp.frames = 1;
        sp.cfi = 2;
        sp.ocng = true;
        sp.seed = 5000 + static_cast<uint64_t>(round);
        const ControlRegion cr = computeControlRegion(sp.cell, sp.cfi);

        std::vector<PlantTruth> truths;
        for (int sf = 0; sf < 10 && planted + static_cast<int>(truths.size()) < 500; ++sf) {
            std::vector<bool> used(static_cast<size_t>(cr.numCces), false);
            std::set<uint16_t> takenRntis;
            for (int attempt = 0; attempt < 5; ++attempt) {
                const DciFormat f = formats[rng() % formats.size()];
                const int n = dciSize(f, sp.cell.nDlRb, sp.cell.cellRefPorts) + 16;
                std::vector<int> levels;
                for (int level : {1, 2, 4, 8})
                    if (2 * 72 * level >= 3 * n) levels.push_back(level);
                const int level = levels[rng() % levels.size()];
                std::vector<int> free;
                for (int off = 0; off + level <= cr.numCces; off += level) {
                    bool ok = true;
                    for (int c = off; c < off + level; ++c)
                        if (used[static_cast<size_t>(c)]) ok = false;
                    if (ok) free.push_back(off);
                }
                if (free.empty()) break;
                const int offset = free[rng() % free.size()];
                for (int c = offset; c < offset + level; ++c) used[static_cast<size_t>(c)] = true;

                uint16_t rnti = 0;
                do {
                    rnti = static_cast<uint16_t>(1 + rng() % 0xFFFF);
                } while (takenRntis.count(rnti));
                takenRntis.insert(rnti);

                AllocationSpec a;
                if (f == DciFormat::f0 || f == DciFormat::f1a) {
                    a.raType = 2;
                    a.start = static_cast<int>(rng() % 50);
                    a.length = 1 + static_cast<int>(rng() % (50 - a.start));
                } else if (rng() % 2 == 0) {
                    a.raType = 0;
                    a.bitmap.assign(static_cast<size_t>(type0BitmapLength(50)), 0);
                    for (auto& b : a.bitmap) b = static_cast<uint8_t>(rng() & 1u);
                    a.bitmap[rng() % a.bitmap.size()] = 1;
                } else {
                    a.raType = 1;
                    a.subset = static_cast<int>(rng() % 3);
                    a.shift = static_cast<int>(rng() % 2);
                    a.bitmap.assign(static_cast<size_t>(type0BitmapLength(50)) - 3, 0);
                    for (auto& b : a.bitmap) b = static_cast<uint8_t>(rng() & 1u);
                    a.bitmap[rng() % a.bitmap.size()] = 1;
                }

                DciPlant p;
                p.rnti = rnti;
                p.format = f;
                p.aggregationLevel = level;
                p.cceOffset = offset;
                p.subframes = {sf};
                p.message = buildDci(f, sp.cell, a);
                sp.plants.push_back(p);
                truths.push_back({rnti, level, offset, sf});
            }
        }

        const auto resolved = resolveSchedule(sp);
        const std::vector<ResourceGrid> grids = generateFrame(sp, resolved, 0);

        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int pass = 0; pass < 2; ++pass) {
            std::vector<ResourceGrid> work = grids;
            if (pass == 1) {
                for (ResourceGrid& g : work) {
                    const double meanPower =
                        g.energy() / (static_cast<double>(g.subcarriers()) * g.symbols());
                    const double sigma = std::sqrt(meanPower * 1e-2 / 2.0);
                    for (int l = 0; l < g.symbols(); ++l)
                        for (int k = 0; k < g.subcarriers(); ++k)
                            g.at(k, l) += cf64(sigma * gauss(rng), sigma * gauss(rng));
                }
            }
            std::map<int, std::vector<DciCandidate>> bySubframe;
            for (int sf = 0; sf < 10; ++sf) {
                const PortEstimates est = estimatePorts(work[static_cast<size_t>(sf)],
                                                        sp.cell, sf);
                const CceSpace cces = extractCces(work[static_cast<size_t>(sf)], est, sp.cell,
                                                  sp.cfi, sf);
                bySubframe[sf] = searchCandidates(cces, sp.cell, sc, sp.startSfn);
            }
            for (const PlantTruth& t : truths) {
                const auto& found = bySubframe[t.subframe];
                const auto hit = std::find_if(found.begin(), found.end(), [&](const auto& c) {
                    return c.cceOffset == t.offset && c.aggregationLevel == t.level &&
                           c.rnti == t.rnti && (pass == 0 ? c.numErrors == 0 : c.numErrors <= 2);
                });
                if (hit != found.end()) ++(pass == 0 ? cleanHits : noisyHits);
            }
        }
        planted += static_cast<int>(truths.size());
        ++round;
    }

    check(planted >= 500, "fewer than 500 plants were generated");
    check(cleanHits == planted, "clean recovery must be exact: " + std::to_string(cleanHits) +
                                    "/" + std::to_string(planted));
    const double ratio = static_cast<double>(noisyHits) / planted;
    check(ratio >= 0.95, "noisy recovery ratio " + std::to_string(ratio) + " below 0.95");
    return std::to_string(planted) + " plants: clean " + std::to_string(cleanHits) +
           ", at 20 dB " + std::to_string(noisyHits) + " recovered";
}

// ---------------------------------------------------------------------------
// 10. End-to-end determinism.

struct PipelineArtifacts {
    std::string csv;
    std::string summary;
    std::vector<cf64> samples;
};

PipelineArtifacts runPipelineOnce(int threads) {
    const GeneratedRecording gen = generateRecording(scenarioA());
    DecodeOptions opts;
    opts.threads = threads;
    const DecodeResult dec = decodeRecording(gen.recording, opts);
    std::vector<ReportRow> rows;
    rows.reserve(dec.candidates.size());
    for (const DciCandidate& c : dec.candidates) rows.push_back(rowFromCandidate(c));
    PipelineArtifacts a;
    a.csv = renderReport(rows, ReportFormat::csv);
    a.summary = summaryToJson(dec.summary).dump(2) + "\n";
    a.samples = gen.recording.samples;
    return a;
}

std::string c10Body(Ctx& ctx, SelftestOutput& out) {
    const PipelineArtifacts first = runPipelineOnce(ctx.threads);
    const PipelineArtifacts second = runPipelineOnce(ctx.threads);
    check(first.samples == second.samples, "generated samples differ between runs");
    check(first.csv == second.csv, "reports differ between runs");
    check(first.summary == second.summary, "summaries differ between runs");
    out.reportCsv = first.csv;
    out.summaryJson = first.summary;
    return "two full runs byte-identical (" + std::to_string(first.csv.size()) +
           "-byte report)";
}

}  // namespace

SelftestOutput runAcceptance(int threads) {
    if (threads <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = static_cast<int>(std::clamp(hw, 1u, 8u));
    }
    Ctx ctx;
    ctx.threads = threads;
    SelftestOutput out;
    const auto suiteStart = Clock::now();

    const auto run = [&](int id, const char* name, auto&& body) {
        CriterionResult r;
        r.id = id;
        r.name = name;
        const auto t0 = Clock::now();
        try {
            r.detail = body();
            r.pass = true;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = e.what();
        }
        r.seconds = secondsSince(t0);
        out.criteria.push_back(std::move(r));
    };

    run(1, "cell-identity arithmetic", [&] { return c1Body(ctx); });
    run(2, "full-band schedule loopback", [&] { return c2Body(ctx); });
    run(3, "overlap filtering", [&] { return c3Body(ctx); });
    run(4, "frame-load arithmetic", [&] { return c4Body(ctx); });
    run(5, "unique-identifier census", [&] { return c5Body(ctx); });
    run(6, "broadcast-channel round trip", [&] { return c6Body(ctx); });
    run(7, "channel-coding oracles", [&] { return c7Body(ctx); });
    run(8, "synchronization robustness", [&] { return c8Body(ctx); });
    run(9, "blind-recovery properties", [&] { return c9Body(ctx); });
    run(10, "end-to-end determinism", [&] { return c10Body(ctx, out); });

    out.totalSeconds = secondsSince(suiteStart);
    return out;
}

bool allPassed(const SelftestOutput& out) {
    return std::all_of(out.criteria.begin(), out.criteria.end(),
                       [](const CriterionResult& c) { return c.pass; });
}

}  // namespace ltedci
