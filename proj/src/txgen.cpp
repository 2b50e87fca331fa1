#include "ltedci/txgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ltedci/seqfec.hpp"
#include "ltedci/sync.hpp"

namespace ltedci {

BitVector dciEncode(const BitVector& payload, uint16_t rnti, size_t e) {
    BitVector mask(16);
    for (int i = 0; i < 16; ++i) mask[static_cast<size_t>(i)] = (rnti >> (15 - i)) & 1u;
    const BitVector crc = xorBits(crc16(payload), mask);
    BitVector block = payload;
    block.insert(block.end(), crc.begin(), crc.end());
    return rateMatchConv(convEncode(block), e);
}

DciMessage buildDci(DciFormat f, const CellConfig& cfg, const AllocationSpec& alloc,
                    const std::vector<DciField>& overrides) {
    const int n = cfg.nDlRb;
    const int size = dciSize(f, n, cfg.cellRefPorts);
    BitVector bits;

    auto rivBits = [&] {
        int b = 0;
        while ((1 << b) < n * (n + 1) / 2) ++b;
        return b;
    }();

    switch (f) {
        case DciFormat::f0: {
            if (alloc.raType != 2) fail(Err::InvalidConfig, "format 0 uses type-2 allocation");
            bits.push_back(0);  // flag
            bits.push_back(0);  // hopping
            appendUint(bits, rivEncode(alloc.start, alloc.length, n), rivBits);
            appendUint(bits, 0, 5 + 1 + 2 + 3 + 1);
            break;
        }
        case DciFormat::f1a: {
            if (alloc.raType != 2) fail(Err::InvalidConfig, "format 1A uses type-2 allocation");
            bits.push_back(1);  // flag
            bits.push_back(alloc.distributed ? 1 : 0);
            appendUint(bits, rivEncode(alloc.start, alloc.length, n), rivBits);
            appendUint(bits, 0, 5 + 3 + 1 + 2 + 2);
            break;
        }
        case DciFormat::f1:
        case DciFormat::f2:
        case DciFormat::f2a: {
            const int bitmapLen = type0BitmapLength(n);
            if (alloc.raType == 0) {
                if (n > 10) bits.push_back(0);
                if (alloc.bitmap.size() != static_cast<size_t>(bitmapLen))
                    fail(Err::WrongBitmapLength, "type-0 bitmap length mismatch");
                bits.insert(bits.end(), alloc.bitmap.begin(), alloc.bitmap.end());
            } else if (alloc.raType == 1) {
                if (n <= 10) fail(Err::InvalidConfig, "type 1 needs more than 10 RBs");
                bits.push_back(1);
                int subsetBits = 0;
                while ((1 << subsetBits) < rbgSize(n)) ++subsetBits;
                appendUint(bits, static_cast<uint64_t>(alloc.subset), subsetBits);
                bits.push_back(static_cast<uint8_t>(alloc.shift));
                const int innerLen = bitmapLen - subsetBits - 1;
                if (alloc.bitmap.size() != static_cast<size_t>(innerLen))
                    fail(Err::WrongBitmapLength, "type-1 bitmap length mismatch");
                bits.insert(bits.end(), alloc.bitmap.begin(), alloc.bitmap.end());
            } else {
                fail(Err::InvalidConfig, "downlink bitmap formats use type 0 or 1");
            }
            if (f == DciFormat::f1) {
                appendUint(bits, 0, 5 + 3 + 1 + 2 + 2);
            } else {
                appendUint(bits, 0, 2 + 3 + 1 + 8 + 8);
                if (f == DciFormat::f2) appendUint(bits, 0, cfg.cellRefPorts == 4 ? 6 : 3);
                if (f == DciFormat::f2a && cfg.cellRefPorts == 4) appendUint(bits, 0, 2);
            }
            break;
        }
    }
    while (bits.size() < static_cast<size_t>(size)) bits.push_back(0);
    if (bits.size() != static_cast<size_t>(size))
        fail(Err::SizeMismatch, "built payload exceeds the format size");

    // Round-trip through the parser so the prb set and the field list always
    // agree with decode-side rules, then apply any field overrides.
    DciMessage msg = parseDci(bits, f, n, cfg.cellRefPorts);
    if (!overrides.empty()) {
        for (const DciField& ov : overrides) {
            bool found = false;
            for (DciField& fl : msg.fields)
                if (fl.name == ov.name) {
                    if (ov.value >> fl.width)
                        fail(Err::InvalidFieldValue, ov.name + " does not fit its width");
                    fl.value = ov.value;
                    found = true;
                    break;
                }
            if (!found) fail(Err::InvalidFieldValue, "no field named " + ov.name);
        }
        msg = parseDci(packDci(msg, n, cfg.cellRefPorts), f, n, cfg.cellRefPorts);
    }
    return msg;
}

namespace {

double gaussian(std::mt19937_64& rng) {
    // Box-Muller on the open interval; mt19937_64 keeps this reproducible
    // across platforms, unlike std::normal_distribution.
    const double u1 =
        (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    const double u2 = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::mt19937_64 frameRng(uint64_t seed, int frameIndex) {
    uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<uint64_t>(frameIndex + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return std::mt19937_64(z ^ (z >> 31));
}

// Inverse of bitsToHex for a known payload width: the string is zero-padded
// to a nibble boundary at the front.
BitVector payloadFromHex(const std::string& hex, int size) {
    BitVector all;
    all.reserve(hex.size() * 4);
    for (char ch : hex) {
        int v = 0;
        if (ch >= '0' && ch <= '9') v = ch - '0';
        else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
        else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
        else fail(Err::InvalidFieldValue, "bad hex digit in payloadHex");
        for (int b = 3; b >= 0; --b) all.push_back(static_cast<uint8_t>((v >> b) & 1));
    }
    const size_t want = static_cast<size_t>(size);
    if (all.size() < want || all.size() - want >= 4)
        fail(Err::InvalidFieldValue, "payloadHex length does not match the format size");
    for (size_t i = 0; i + want < all.size(); ++i)
        if (all[i]) fail(Err::InvalidFieldValue, "payloadHex pad bits must be zero");
    return BitVector(all.end() - static_cast<ptrdiff_t>(want), all.end());
}

}  // namespace

Scenario parseScenario(const nlohmann::json& j) {
    Scenario s;
    try {
        s.schedule.cell = cellConfigFromJson(j.at("cell"));
        s.schedule.startSfn = j.value("startSfn", 0);
        s.schedule.frames = j.value("frames", 1);
        s.schedule.cfi = j.value("cfi", 2);
        s.schedule.ocng = j.value("ocng", false);
        s.schedule.seed = j.value("seed", uint64_t{1});
        if (j.contains("impairments")) {
            const nlohmann::json& ji = j["impairments"];
            if (ji.contains("snrDb")) s.impairments.snrDb = ji["snrDb"].get<double>();
            s.impairments.cfoHz = ji.value("cfoHz", 0.0);
            s.impairments.timingPadSamples = ji.value("timingPadSamples", 0);
            s.impairments.noiseSeed = ji.value("noiseSeed", uint64_t{99});
        }
        for (const nlohmann::json& jd : j.value("dcis", nlohmann::json::array())) {
            DciPlant p;
            p.rnti = static_cast<uint16_t>(jd.at("rnti").get<int>());
            const std::string fm = jd.at("format").get<std::string>();
            if (fm == "Format0") p.format = DciFormat::f0;
            else if (fm == "Format1") p.format = DciFormat::f1;
            else if (fm == "Format1A") p.format = DciFormat::f1a;
            else if (fm == "Format2") p.format = DciFormat::f2;
            else if (fm == "Format2A") p.format = DciFormat::f2a;
            else fail(Err::UnsupportedFormat, "unknown format " + fm);
            p.aggregationLevel = jd.value("aggregationLevel", 4);
            if (jd.contains("cceOffset")) p.cceOffset = jd["cceOffset"].get<int>();
            if (jd.contains("subframes")) {
                for (const auto& v : jd["subframes"]) p.subframes.push_back(v.get<int>());
            } else {
                for (int sf = 0; sf < 10; ++sf) p.subframes.push_back(sf);
            }
            if (jd.contains("payloadHex")) {
                const int size = dciSize(p.format, s.schedule.cell.nDlRb,
                                         s.schedule.cell.cellRefPorts);
                const BitVector bits = payloadFromHex(jd["payloadHex"].get<std::string>(), size);
                p.message = parseDci(bits, p.format, s.schedule.cell.nDlRb,
                                     s.schedule.cell.cellRefPorts);
                if (p.message.format != p.format)
                    fail(Err::InvalidFieldValue,
                         "payloadHex flag bit contradicts the declared format");
            } else {
                AllocationSpec alloc;
                const nlohmann::json& ja = jd.at("allocation");
                alloc.raType = ja.at("type").get<int>();
                if (ja.contains("bitmap")) {
                    for (char ch : ja["bitmap"].get<std::string>()) {
                        if (ch != '0' && ch != '1')
                            fail(Err::InvalidFieldValue, "bitmap must be a 0/1 string");
                        alloc.bitmap.push_back(ch == '1');
                    }
                }
                alloc.subset = ja.value("subset", 0);
                alloc.shift = ja.value("shift", 0);
                alloc.start = ja.value("start", 0);
                alloc.length = ja.value("length", 0);
                alloc.distributed = ja.value("distributed", false);
                std::vector<DciField> overrides;
                if (jd.contains("fields"))
                    for (const auto& [name, value] : jd["fields"].items())
                        overrides.push_back({name, 0, value.get<uint64_t>()});
                p.message = buildDci(p.format, s.schedule.cell, alloc, overrides);
            }
            s.schedule.plants.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(Err::InvalidConfig, std::string("bad scenario: ") + e.what());
    }
    return s;
}

nlohmann::json scenarioToJson(const Scenario& s) {
    nlohmann::json j;
    j["cell"] = cellConfigToJson(s.schedule.cell);
    j["startSfn"] = s.schedule.startSfn;
    j["frames"] = s.schedule.frames;
    j["cfi"] = s.schedule.cfi;
    j["ocng"] = s.schedule.ocng;
    j["seed"] = s.schedule.seed;
    nlohmann::json ji;
    if (s.impairments.snrDb) ji["snrDb"] = *s.impairments.snrDb;
    ji["cfoHz"] = s.impairments.cfoHz;
    ji["timingPadSamples"] = s.impairments.timingPadSamples;
    ji["noiseSeed"] = s.impairments.noiseSeed;
    j["impairments"] = ji;
    nlohmann::json arr = nlohmann::json::array();
    for (const DciPlant& p : s.schedule.plants) {
        nlohmann::json jd;
        jd["rnti"] = p.rnti;
        jd["format"] = dciFormatName(p.format);
        jd["aggregationLevel"] = p.aggregationLevel;
        if (p.cceOffset) jd["cceOffset"] = *p.cceOffset;
        jd["subframes"] = p.subframes;
        // Payload is carried verbatim; allocation details live in the fields.
        jd["payloadHex"] = bitsToHex(p.message.payload);
        arr.push_back(jd);
    }
    j["dcis"] = arr;
    return j;
}

std::vector<std::vector<std::pair<size_t, int>>> resolveSchedule(const ScheduleSpec& spec) {
    spec.cell.validate();
    if (spec.cell.cellRefPorts == 4)
        fail(Err::InvalidConfig, "the generator transmits one or two ports");
    if (spec.frames < 1) fail(Err::InvalidConfig, "need at least one frame");
    if (spec.startSfn < 0 || spec.startSfn > 1023)
        fail(Err::OutOfRange, "startSfn must be 0..1023");
    const ControlRegion cr = computeControlRegion(spec.cell, spec.cfi);

    for (const DciPlant& p : spec.plants) {
        const int l = p.aggregationLevel;
        if (l != 1 && l != 2 && l != 4 && l != 8)
            fail(Err::InvalidConfig, "aggregation level must be 1, 2, 4 or 8");
        const int n = dciSize(p.format, spec.cell.nDlRb, spec.cell.cellRefPorts) + 16;
        if (2 * 72 * l < 3 * n)
            fail(Err::CapacityExceeded,
                 std::string(dciFormatName(p.format)) + " at level " + std::to_string(l) +
                     " punctures more than a third of the mother code");
        for (int sf : p.subframes)
            if (sf < 0 || sf > 9) fail(Err::OutOfRange, "subframe must be 0..9");
    }

    std::vector<std::vector<std::pair<size_t, int>>> resolved(10);
    for (int sf = 0; sf < 10; ++sf) {
        std::vector<bool> used(static_cast<size_t>(cr.numCces), false);
        auto reserve = [&](int offset, int level, size_t plantIdx) {
            if (offset % level != 0)
                fail(Err::InvalidConfig, "CCE offset must be aligned to the level");
            if (offset + level > cr.numCces)
                fail(Err::ScheduleOverflow, "candidate exceeds the CCE space");
            for (int c = offset; c < offset + level; ++c) {
                if (used[static_cast<size_t>(c)])
                    fail(Err::ScheduleOverflow,
                         "CCE collision in subframe " + std::to_string(sf));
                used[static_cast<size_t>(c)] = true;
            }
            resolved[static_cast<size_t>(sf)].push_back({plantIdx, offset});
        };
        // Explicit offsets first, then auto-placement from the widest level.
        for (size_t pi = 0; pi < spec.plants.size(); ++pi) {
            const DciPlant& p = spec.plants[pi];
            if (!p.cceOffset) continue;
            if (std::find(p.subframes.begin(), p.subframes.end(), sf) == p.subframes.end())
                continue;
            reserve(*p.cceOffset, p.aggregationLevel, pi);
        }
        std::vector<size_t> autoPlants;
        for (size_t pi = 0; pi < spec.plants.size(); ++pi) {
            const DciPlant& p = spec.plants[pi];
            if (p.cceOffset) continue;
            if (std::find(p.subframes.begin(), p.subframes.end(), sf) != p.subframes.end())
                autoPlants.push_back(pi);
        }
        std::stable_sort(autoPlants.begin(), autoPlants.end(), [&](size_t a, size_t b) {
            return spec.plants[a].aggregationLevel > spec.plants[b].aggregationLevel;
        });
        for (size_t pi : autoPlants) {
            const int level = spec.plants[pi].aggregationLevel;
            int offset = -1;
            for (int o = 0; o + level <= cr.numCces; o += level) {
                bool free = true;
                for (int c = o; c < o + level; ++c)
                    if (used[static_cast<size_t>(c)]) free = false;
                if (free) {
                    offset = o;
                    break;
                }
            }
            if (offset < 0)
                fail(Err::ScheduleOverflow,
                     "no free CCEs in subframe " + std::to_string(sf));
            reserve(offset, level, pi);
        }
    }
    return resolved;
}

std::vector<ResourceGrid> generateFrame(
    const ScheduleSpec& spec,
    const std::vector<std::vector<std::pair<size_t, int>>>& resolved, int frameIndex) {
    const CellConfig& cfg = spec.cell;
    const int sfn = (spec.startSfn + frameIndex) % 1024;
    const int ports = cfg.cellRefPorts;
    const ControlRegion cr = computeControlRegion(cfg, spec.cfi);
    std::mt19937_64 rng = frameRng(spec.seed, frameIndex);

    Mib mib;
    mib.nDlRb = cfg.nDlRb;
    mib.phichDuration = cfg.phichDuration;
    mib.phichNg = cfg.phichNg;
    mib.sfnMsb8 = sfn / 4;
    const std::array<BitVector, 4> quarters = pbchEncode(mib, ports, cfg.pci);

    const int half = 6 * cfg.nDlRb;
    std::vector<ResourceGrid> out;
    out.reserve(10);

    for (int sf = 0; sf < 10; ++sf) {
        ResourceGrid p0(cfg.nDlRb, cfg.cyclicPrefix);
        ResourceGrid p1(cfg.nDlRb, cfg.cyclicPrefix);
        const bool twoPorts = ports >= 2;

        // Cell reference signals.
        for (int port = 0; port < ports; ++port) {
            ResourceGrid& g = port == 0 ? p0 : p1;
            const std::vector<RePosition> pos = crsPositions(cfg, port, sf);
            const int perSlot = symbolsPerSlot(cfg.cyclicPrefix);
            size_t i = 0;
            for (int l : crsSymbols(cfg, port)) {
                const int slotParity = l >= perSlot ? 1 : 0;
                const std::vector<cf64> seq =
                    crsSequence(cfg, 2 * sf + slotParity, l - slotParity * perSlot);
                for (int m = 0; m < 2 * cfg.nDlRb; ++m, ++i)
                    g.at(pos[i].subcarrier, pos[i].symbol) = seq[static_cast<size_t>(m)];
            }
        }

        // Synchronization signals on port 0 in subframes 0 and 5.
        if (sf == 0 || sf == 5) {
            const std::array<cf64, 62> pss = pssSequence(cfg.pci % 3);
            const std::array<double, 62> sss = sssSequence(cfg.pci / 3, cfg.pci % 3, sf);
            for (int n = 0; n < 62; ++n) {
                p0.at(half - 31 + n, 6) = pss[static_cast<size_t>(n)];
                p0.at(half - 31 + n, 5) = sss[static_cast<size_t>(n)];
            }
        }

        // Broadcast channel in subframe 0.
        if (sf == 0) {
            const BitVector& qbits = quarters[static_cast<size_t>(sfn % 4)];
            const std::vector<cf64> sym = qpskModulate(qbits);
            const std::vector<RePosition> pos = pbchPositions(cfg);
            if (twoPorts) {
                std::vector<cf64> s0, s1;
                sfbcEncode(sym, s0, s1);
                for (size_t i = 0; i < pos.size(); ++i) {
                    p0.at(pos[i].subcarrier, pos[i].symbol) = s0[i];
                    p1.at(pos[i].subcarrier, pos[i].symbol) = s1[i];
                }
            } else {
                for (size_t i = 0; i < pos.size(); ++i)
                    p0.at(pos[i].subcarrier, pos[i].symbol) = sym[i];
            }
        }

        embedPcfich(spec.cfi, cfg, sf, p0, twoPorts ? &p1 : nullptr);

        // PDCCH stream: planted payloads at their CCE offsets, rest silent.
        BitVector stream(static_cast<size_t>(cr.numRegs) * 8, 0);
        std::vector<bool> claimed(static_cast<size_t>(cr.numRegs) * 8, false);
        for (const auto& [plantIdx, offset] : resolved[static_cast<size_t>(sf)]) {
            const DciPlant& p = spec.plants[plantIdx];
            const size_t e = static_cast<size_t>(72 * p.aggregationLevel);
            const BitVector coded = dciEncode(p.message.payload, p.rnti, e);
            for (size_t i = 0; i < e; ++i) {
                stream[static_cast<size_t>(72 * offset) + i] = coded[i];
                claimed[static_cast<size_t>(72 * offset) + i] = true;
            }
        }
        embedCces(stream, cfg, spec.cfi, sf, p0, twoPorts ? &p1 : nullptr);
        // Unclaimed REGs transmit nothing; zero out what embedCces scrambled.
        {
            const std::vector<cf64> zeros;
            for (int j = 0; j < cr.numRegs; ++j) {
                const int q = cr.regQuad[static_cast<size_t>(j)];
                bool any = false;
                for (int b = 0; b < 8; ++b)
                    if (claimed[static_cast<size_t>(8 * q + b)]) any = true;
                if (any) continue;
                for (const RePosition& rp : cr.pdcchRegs[static_cast<size_t>(j)].res) {
                    p0.at(rp.subcarrier, rp.symbol) = cf64{0.0, 0.0};
                    if (twoPorts) p1.at(rp.subcarrier, rp.symbol) = cf64{0.0, 0.0};
                }
            }
        }

        // Downlink data: unit QPSK filler over each allocation, port 0 only.
        std::vector<std::vector<bool>> dataClaimed(
            static_cast<size_t>(p0.subcarriers()),
            std::vector<bool>(static_cast<size_t>(p0.symbols()), false));
        for (const auto& [plantIdx, offset] : resolved[static_cast<size_t>(sf)]) {
            const DciPlant& p = spec.plants[plantIdx];
            if (dciDirection(p.format) != LinkDirection::downlink) continue;
            for (int rb : p.message.prbSet.indices)
                for (const RePosition& rp : pdschPositions(cfg, spec.cfi, sf, rb)) {
                    if (dataClaimed[static_cast<size_t>(rp.subcarrier)]
                                   [static_cast<size_t>(rp.symbol)])
                        continue;
                    dataClaimed[static_cast<size_t>(rp.subcarrier)]
                               [static_cast<size_t>(rp.symbol)] = true;
                    BitVector b{static_cast<uint8_t>(rng() & 1u),
                                static_cast<uint8_t>(rng() & 1u)};
                    p0.at(rp.subcarrier, rp.symbol) = qpskModulate(b)[0];
                }
        }
        if (spec.ocng) {
            for (int rb = 0; rb < cfg.nDlRb; ++rb)
                for (const RePosition& rp : pdschPositions(cfg, spec.cfi, sf, rb)) {
                    if (dataClaimed[static_cast<size_t>(rp.subcarrier)]
                                   [static_cast<size_t>(rp.symbol)])
                        continue;
                    BitVector b{static_cast<uint8_t>(rng() & 1u),
                                static_cast<uint8_t>(rng() & 1u)};
                    p0.at(rp.subcarrier, rp.symbol) = qpskModulate(b)[0];
                }
        }

        if (twoPorts) p0.addInto(p1);
        out.push_back(std::move(p0));
    }
    return out;
}

IqRecording applyImpairments(const IqRecording& rec, const ImpairmentSpec& imp) {
    IqRecording out;
    out.sampleRateHz = rec.sampleRateHz;
    out.centerFreqHz = rec.centerFreqHz;
    std::mt19937_64 rng(imp.noiseSeed);

    double sigPower = 0.0;
    for (const cf64& s : rec.samples) sigPower += std::norm(s);
    sigPower /= static_cast<double>(std::max<size_t>(rec.samples.size(), 1));

    // Pad noise sits at the AWGN level, or far below the signal if noiseless.
    const double noiseVar = imp.snrDb
                                ? sigPower * std::pow(10.0, -*imp.snrDb / 10.0)
                                : sigPower * 1e-8;
    const double sigma = std::sqrt(noiseVar / 2.0);

    out.samples.reserve(rec.samples.size() + static_cast<size_t>(imp.timingPadSamples));
    for (int i = 0; i < imp.timingPadSamples; ++i)
        out.samples.push_back(cf64(sigma * gaussian(rng), sigma * gaussian(rng)));

    const double w = 2.0 * std::numbers::pi * imp.cfoHz / static_cast<double>(rec.sampleRateHz);
    for (size_t i = 0; i < rec.samples.size(); ++i) {
        cf64 s = rec.samples[i];
        if (imp.cfoHz != 0.0) {
            const double ph = w * static_cast<double>(i);
            s *= cf64(std::cos(ph), std::sin(ph));
        }
        if (imp.snrDb) s += cf64(sigma * gaussian(rng), sigma * gaussian(rng));
        out.samples.push_back(s);
    }
    return out;
}

GeneratedRecording generateRecording(const Scenario& s) {
    const auto resolved = resolveSchedule(s.schedule);
    std::vector<ResourceGrid> grids;
    grids.reserve(static_cast<size_t>(s.schedule.frames) * 10);
    GeneratedRecording gr;
    for (int f = 0; f < s.schedule.frames; ++f) {
        std::vector<ResourceGrid> frame = generateFrame(s.schedule, resolved, f);
        for (ResourceGrid& g : frame) grids.push_back(std::move(g));
        const int sfn = (s.schedule.startSfn + f) % 1024;
        for (int sf = 0; sf < 10; ++sf)
            for (const auto& [plantIdx, offset] : resolved[static_cast<size_t>(sf)]) {
                const DciPlant& p = s.schedule.plants[plantIdx];
                DciCandidate c;
                c.sfn = sfn;
                c.subframe = sf;
                c.rnti = p.rnti;
                c.numErrors = 0;
                c.format = p.format;
                c.direction = dciDirection(p.format);
                c.prbSet = p.message.prbSet;
                c.aggregationLevel = p.aggregationLevel;
                c.cceOffset = offset;
                c.payload = p.message.payload;
                gr.manifest.push_back(std::move(c));
            }
    }
    const IqRecording clean = ofdmModulate(grids, s.schedule.cell);
    gr.recording = applyImpairments(clean, s.impairments);
    return gr;
}

}  // namespace ltedci
