#include "ltedci/blindrnti.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ltedci/seqfec.hpp"

namespace ltedci {

RntiClass classifyRnti(uint16_t rnti) {
    if (rnti == 0x0000) return RntiClass::reserved;
    if (rnti <= 0x003C) return RntiClass::raRnti;
    if (rnti <= 0xFFF3) return RntiClass::cRnti;
    if (rnti <= 0xFFFD) return RntiClass::reserved;
    if (rnti == 0xFFFE) return RntiClass::pRnti;
    return RntiClass::siRnti;
}

const char* rntiClassName(RntiClass c) {
    switch (c) {
        case RntiClass::cRnti: return "C-RNTI";
        case RntiClass::siRnti: return "SI-RNTI";
        case RntiClass::pRnti: return "P-RNTI";
        case RntiClass::raRnti: return "RA-RNTI";
        case RntiClass::reserved: return "Reserved";
    }
    return "Reserved";
}

RecoverResult recoverRnti(const BitVector& decodedBits, const SoftBits& receivedSoft) {
    if (decodedBits.size() < 17) fail(Err::InputTooShort, "need payload plus 16 CRC bits");
    const size_t n = decodedBits.size() - 16;
    const BitVector payload(decodedBits.begin(), decodedBits.begin() + static_cast<long>(n));
    const BitVector rxCrc(decodedBits.begin() + static_cast<long>(n), decodedBits.end());
    const BitVector calc = crc16(payload);

    RecoverResult r;
    r.rnti = static_cast<uint16_t>(readUint(xorBits(calc, rxCrc), 0, 16));

    // Re-encode the decoded block and count hard-decision disagreements.
    const std::array<BitVector, 3> streams = convEncode(decodedBits);
    const BitVector reEncoded = rateMatchConv(streams, receivedSoft.size());
    const BitVector rxHard = hardDecisions(receivedSoft);
    int errors = 0;
    for (size_t i = 0; i < rxHard.size(); ++i)
        if (rxHard[i] != reEncoded[i]) ++errors;
    r.numErrors = errors;
    return r;
}

namespace {

struct SizeClass {
    int size = 0;            // payload bits before CRC
    DciFormat parseAs = DciFormat::f1a;
};

struct SearchTask {
    int offset = 0;
    int level = 0;
    SizeClass cls;
};

}  // namespace

std::vector<DciCandidate> searchCandidates(const CceSpace& cces, const CellConfig& cfg,
                                           const SearchConfig& sc, int sfn) {
    // One decode per distinct payload size; formats 0 and 1A share a size and
    // are told apart by the flag bit after decoding.
    std::map<int, DciFormat> classes;
    std::set<DciFormat> wanted;
    for (DciFormat f : sc.formats) {
        wanted.insert(f);
        const int size = dciSize(f, cfg.nDlRb, cfg.cellRefPorts);
        auto it = classes.find(size);
        if (it == classes.end())
            classes[size] = f;
        else if (f == DciFormat::f0 || f == DciFormat::f1a)
            it->second = DciFormat::f1a;
    }

    std::vector<SearchTask> tasks;
    for (int offset = 0; offset < cces.numCces; ++offset)
        for (int level : {1, 2, 4, 8}) {
            if (offset % level != 0 || offset + level > cces.numCces) continue;
            for (const auto& [size, parseAs] : classes) {
                const int e = 72 * level;
                const int n = size + 16;
                // Skip hopeless combinations where puncturing exceeds a third
                // of the mother code; they only produce false alarms.
                if (2 * e < 3 * n) continue;
                tasks.push_back({offset, level, {size, parseAs}});
            }
        }

    std::vector<std::optional<DciCandidate>> slots(tasks.size());
    const int64_t nTasks = static_cast<int64_t>(tasks.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads(std::max(1, sc.threads))
#endif
    for (int64_t ti = 0; ti < nTasks; ++ti) {
        const SearchTask& t = tasks[static_cast<size_t>(ti)];
        const size_t e = static_cast<size_t>(72 * t.level);
        const size_t n = static_cast<size_t>(t.cls.size + 16);
        SoftBits soft(cces.llrs.begin() + 72 * t.offset,
                      cces.llrs.begin() + 72 * t.offset + static_cast<long>(e));
        // Silent aggregations (all-zero LLRs, e.g. unused NIL space) decode
        // trivially to the all-zero block; they carry no information.
        if (std::all_of(soft.begin(), soft.end(), [](float v) { return v == 0.0f; }))
            continue;
        const SoftBits recovered = rateRecoverConv(soft, n);
        const BitVector decoded = viterbiDecode(recovered, n);
        const RecoverResult rr = recoverRnti(decoded, soft);
        if (rr.numErrors > sc.maxErrors) continue;
        DciMessage msg;
        try {
            msg = parseDci(BitVector(decoded.begin(), decoded.begin() + t.cls.size),
                           t.cls.parseAs, cfg.nDlRb, cfg.cellRefPorts);
        } catch (const Error&) {
            continue;  // unparseable payloads are junk, not candidates
        }
        // The flag bit can resolve the shared size to a format the caller
        // did not ask for; honor the requested set.
        if (!wanted.count(msg.format)) continue;
        DciCandidate c;
        c.sfn = sfn;
        c.subframe = cces.subframe;
        c.rnti = rr.rnti;
        c.numErrors = rr.numErrors;
        c.format = msg.format;
        c.direction = msg.direction;
        c.prbSet = msg.prbSet;
        c.aggregationLevel = t.level;
        c.cceOffset = t.offset;
        c.payload = msg.payload;
        slots[static_cast<size_t>(ti)] = std::move(c);
    }

    std::vector<DciCandidate> out;
    for (auto& s : slots)
        if (s) out.push_back(std::move(*s));
    return out;
}

std::vector<DciCandidate> filterCandidates(std::vector<DciCandidate> in, int maxErrors,
                                           bool dedup) {
    // Error cap first.
    std::erase_if(in, [&](const DciCandidate& c) { return c.numErrors > maxErrors; });

    // Collapse duplicates of the same (rnti, payload) within a subframe,
    // keeping the cleanest copy; ties prefer the higher aggregation level,
    // then the lower CCE offset.
    if (dedup) {
        std::map<std::tuple<int, int, uint16_t, BitVector>, DciCandidate> best;
        for (DciCandidate& c : in) {
            const auto key = std::make_tuple(c.sfn, c.subframe, c.rnti, c.payload);
            auto it = best.find(key);
            if (it == best.end()) {
                best.emplace(key, std::move(c));
                continue;
            }
            DciCandidate& b = it->second;
            const int mult = b.multiplicity + c.multiplicity;
            const auto rank = [](const DciCandidate& x) {
                return std::make_tuple(x.numErrors, -x.aggregationLevel, x.cceOffset);
            };
            if (rank(c) < rank(b)) b = std::move(c);
            b.multiplicity = mult;
        }
        in.clear();
        for (auto& [key, c] : best) in.push_back(std::move(c));
    }

    // Errored candidates whose allocation overlaps a clean same-direction
    // candidate in the same subframe are junk echoes of it.
    std::map<std::tuple<int, int, LinkDirection>, std::set<int>> cleanPrbs;
    for (const DciCandidate& c : in)
        if (c.numErrors == 0)
            cleanPrbs[{c.sfn, c.subframe, c.direction}].insert(c.prbSet.indices.begin(),
                                                               c.prbSet.indices.end());
    std::erase_if(in, [&](const DciCandidate& c) {
        if (c.numErrors == 0) return false;
        const auto it = cleanPrbs.find({c.sfn, c.subframe, c.direction});
        if (it == cleanPrbs.end()) return false;
        for (int rb : c.prbSet.indices)
            if (it->second.count(rb)) return true;
        return false;
    });

    std::stable_sort(in.begin(), in.end(), [](const DciCandidate& a, const DciCandidate& b) {
        return std::make_tuple(a.sfn, a.subframe, a.cceOffset) <
               std::make_tuple(b.sfn, b.subframe, b.cceOffset);
    });
    return in;
}

std::vector<RePosition> pdschPositions(const CellConfig& cfg, int cfi, int subframe,
                                       int prb) {
    cfg.validate();
    if (cfg.cyclicPrefix != CyclicPrefix::normal)
        fail(Err::InvalidConfig, "data region implemented for normal CP only");
    if (prb < 0 || prb >= cfg.nDlRb) fail(Err::OutOfRange, "PRB outside the band");
    const int firstSym = controlSymbols(cfi, cfg.nDlRb);
    const int nSym = symbolsPerSubframe(cfg.cyclicPrefix);
    const int half = 6 * cfg.nDlRb;

    // Pilot lattice of every active port.
    std::vector<std::vector<bool>> pilot(static_cast<size_t>(nSym),
                                         std::vector<bool>(12, false));
    for (int port = 0; port < cfg.cellRefPorts; ++port)
        for (const RePosition& rp : crsPositions(cfg, port, subframe))
            if (rp.subcarrier >= 12 * prb && rp.subcarrier < 12 * (prb + 1))
                pilot[static_cast<size_t>(rp.symbol)][static_cast<size_t>(rp.subcarrier - 12 * prb)] =
                    true;

    std::vector<RePosition> out;
    for (int l = firstSym; l < nSym; ++l) {
        for (int i = 0; i < 12; ++i) {
            const int k = 12 * prb + i;
            if (pilot[static_cast<size_t>(l)][static_cast<size_t>(i)]) continue;
            // Central blocks carrying sync and broadcast are off limits.
            const bool central = k >= half - 36 && k < half + 36;
            if (central) {
                if ((subframe == 0 || subframe == 5) && (l == 5 || l == 6)) continue;
                if (subframe == 0 && l >= 7 && l <= 10) continue;
            }
            out.push_back({k, l});
        }
    }
    return out;
}

double measurePower(const ResourceGrid& equalized, const PrbSet& prbs,
                    const CellConfig& cfg, int cfi, int subframe) {
    if (prbs.indices.empty()) fail(Err::EmptyAllocation, "no PRBs to measure");
    double acc = 0.0;
    size_t count = 0;
    for (int rb : prbs.indices) {
        for (const RePosition& rp : pdschPositions(cfg, cfi, subframe, rb)) {
            acc += std::norm(equalized.at(rp.subcarrier, rp.symbol));
            ++count;
        }
    }
    if (count == 0) fail(Err::EmptyAllocation, "allocation has no data-bearing REs");
    return 10.0 * std::log10(std::max(acc / static_cast<double>(count), 1e-30));
}

}  // namespace ltedci
