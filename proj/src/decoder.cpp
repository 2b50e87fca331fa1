#include "ltedci/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ltedci/cch.hpp"
#include "ltedci/ofdm.hpp"

namespace ltedci {

namespace {

int bandwidthForRate(int64_t rateHz) {
    for (int n : {6, 15, 25, 50, 75, 100})
        if (fftParams(n).sampleRateHz == rateHz) return n;
    fail(Err::UnsupportedBandwidth,
         "sample rate " + std::to_string(rateHz) + " Hz is not a standard downlink rate");
}

// Mixes the capture down by the estimated frequency offset, starting the
// phase ramp at the frame boundary so later symbols stay aligned.
std::vector<cf64> derotate(const IqRecording& rec, int64_t start, double cfoHz) {
    std::vector<cf64> out(rec.samples.begin() + start, rec.samples.end());
    if (cfoHz != 0.0) {
        const double step = -2.0 * std::numbers::pi * cfoHz / static_cast<double>(rec.sampleRateHz);
        for (size_t i = 0; i < out.size(); ++i)
            out[i] *= std::polar(1.0, step * static_cast<double>(i));
    }
    return out;
}

}  // namespace

DecodeResult decodeRecording(const IqRecording& rec, const DecodeOptions& opts) {
    DecodeResult res;
    res.sync = synchronize(rec, opts.threads);

    CellConfig cfg;
    cfg.nDlRb = bandwidthForRate(rec.sampleRateHz);
    cfg.pci = res.sync.identity.pci;
    cfg.cellRefPorts = 1;  // refined after the broadcast channel is read

    IqRecording aligned;
    aligned.sampleRateHz = rec.sampleRateHz;
    aligned.samples = derotate(rec, res.sync.timingOffset, res.sync.cfoHz);

    int maxSubframes = -1;
    if (opts.maxFrames > 0) maxSubframes = opts.maxFrames * 10;
    std::vector<ResourceGrid> grids = ofdmDemodulate(aligned, cfg, 0, maxSubframes);
    const int frames = static_cast<int>(grids.size()) / 10;
    if (frames == 0) fail(Err::InsufficientSamples, "capture shorter than one frame");
    grids.resize(static_cast<size_t>(frames) * 10);

    std::vector<const ResourceGrid*> subframe0s;
    for (int f = 0; f < std::min(frames, 4); ++f)
        subframe0s.push_back(&grids[static_cast<size_t>(f) * 10]);
    const PbchResult pbch = pbchDecode(subframe0s, cfg);
    if (pbch.mib.nDlRb != cfg.nDlRb)
        fail(Err::DimensionMismatch,
             "broadcast channel announces " + std::to_string(pbch.mib.nDlRb) +
                 " resource blocks but the capture is sampled for " +
                 std::to_string(cfg.nDlRb));
    res.mib = pbch.mib;
    res.nFrame = pbch.fullSfn;
    cfg.cellRefPorts = pbch.cellRefPorts;
    cfg.phichDuration = pbch.mib.phichDuration;
    cfg.phichNg = pbch.mib.phichNg;
    res.cell = cfg;
    res.framesDecoded = frames;

    SearchConfig sc;
    sc.formats = opts.formats;
    sc.maxErrors = opts.maxErrors;
    sc.threads = 1;  // parallelism lives at the subframe level here

    const int nSubframes = frames * 10;
    std::vector<std::vector<DciCandidate>> perSubframe(static_cast<size_t>(nSubframes));
    std::vector<uint8_t> skipped(static_cast<size_t>(nSubframes), 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, opts.threads))
#endif
    for (int i = 0; i < nSubframes; ++i) {
        const int subframe = i % 10;
        const int sfn = (res.nFrame + i / 10) % 1024;
        const ResourceGrid& grid = grids[static_cast<size_t>(i)];
        const PortEstimates est = estimatePorts(grid, res.cell, subframe);
        CfiDecode cfi;
        try {
            cfi = pcfichDecode(grid, est, res.cell, subframe);
        } catch (const Error&) {
            skipped[static_cast<size_t>(i)] = 1;
            continue;
        }
        const CceSpace cces = extractCces(grid, est, res.cell, cfi.cfi, subframe);
        std::vector<DciCandidate> found = searchCandidates(cces, res.cell, sc, sfn);

        if (!found.empty()) {
            const ResourceGrid eq = equalizeGrid(grid, est.p0);
            for (DciCandidate& c : found)
                if (c.direction == LinkDirection::downlink && !c.prbSet.indices.empty())
                    c.powerDb = measurePower(eq, c.prbSet, res.cell, cfi.cfi, subframe);
        }
        perSubframe[static_cast<size_t>(i)] = std::move(found);
    }

    std::vector<DciCandidate> all;
    for (int i = 0; i < nSubframes; ++i) {
        res.subframesSkipped += skipped[static_cast<size_t>(i)];
        for (DciCandidate& c : perSubframe[static_cast<size_t>(i)])
            all.push_back(std::move(c));
    }
    res.candidates = filterCandidates(std::move(all), opts.maxErrors, opts.dedup);

    for (int f = 0; f < frames; ++f) {
        const int sfn = (res.nFrame + f) % 1024;
        std::vector<DciCandidate> inFrame;
        for (const DciCandidate& c : res.candidates)
            if (c.sfn == sfn) inFrame.push_back(c);
        res.frameLoads.push_back(frameLoad(inFrame, res.cell, sfn, opts.loadPolicy));
    }
    res.summary = summarize(res.frameLoads);
    res.uniqueUeCount = uniqueUes(res.candidates);
    return res;
}

}  // namespace ltedci
