#include "ltedci/sync.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ltedci/errors.hpp"
#include "ltedci/ofdm.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ltedci {

namespace {

constexpr int64_t kBaseRateHz = 1920000;  // 6-RB rate used for the coarse search
constexpr int kBaseFft = 128;
constexpr double kPeakToMeanThreshold = 4.0;
constexpr double kNormMetricFloor = 0.2;
constexpr double kSssThreshold = 0.3;

int nDlRbForRate(int64_t sampleRateHz) {
    switch (sampleRateHz) {
        case 1920000: return 6;
        case 3840000: return 15;
        case 7680000: return 25;
        case 15360000: return 50;
        case 23040000: return 75;
        case 30720000: return 100;
    }
    fail(Err::InvalidConfig, "sample rate does not match a standard bandwidth");
}

}  // namespace

CellIdentity makeCellIdentity(int nId1, int nId2) {
    if (nId1 < 0 || nId1 > 167) fail(Err::OutOfRange, "nId1 must be 0..167");
    if (nId2 < 0 || nId2 > 2) fail(Err::OutOfRange, "nId2 must be 0..2");
    return {nId1, nId2, 3 * nId1 + nId2};
}

std::array<cf64, 62> pssSequence(int nId2) {
    if (nId2 < 0 || nId2 > 2) fail(Err::OutOfRange, "nId2 must be 0..2");
    static constexpr std::array<int, 3> kRoots = {25, 29, 34};
    const int u = kRoots[static_cast<size_t>(nId2)];
    std::array<cf64, 62> d;
    for (int n = 0; n < 31; ++n) {
        const double ph = -std::numbers::pi * u * n * (n + 1) / 63.0;
        d[static_cast<size_t>(n)] = cf64(std::cos(ph), std::sin(ph));
    }
    for (int n = 31; n < 62; ++n) {
        const double ph = -std::numbers::pi * u * (n + 1) * (n + 2) / 63.0;
        d[static_cast<size_t>(n)] = cf64(std::cos(ph), std::sin(ph));
    }
    return d;
}

std::array<double, 62> sssSequence(int nId1, int nId2, int subframe) {
    if (nId1 < 0 || nId1 > 167) fail(Err::OutOfRange, "nId1 must be 0..167");
    if (nId2 < 0 || nId2 > 2) fail(Err::OutOfRange, "nId2 must be 0..2");
    if (subframe != 0 && subframe != 5)
        fail(Err::OutOfRange, "SSS lives in subframes 0 and 5");

    // Three length-31 m-sequences per 36.211 6.11.2.1.
    auto mseq = [](std::array<int, 3> taps) {
        std::array<int, 31> x{};
        x[4] = 1;
        for (int i = 0; i + 5 < 31; ++i) {
            int v = x[static_cast<size_t>(i)];
            for (int t : taps)
                if (t > 0) v ^= x[static_cast<size_t>(i + t)];
            x[static_cast<size_t>(i + 5)] = v;
        }
        std::array<double, 31> s;
        for (int i = 0; i < 31; ++i) s[static_cast<size_t>(i)] = 1.0 - 2.0 * x[static_cast<size_t>(i)];
        return s;
    };
    const std::array<double, 31> sTilde = mseq({2, 0, 0});
    const std::array<double, 31> cTilde = mseq({3, 0, 0});
    const std::array<double, 31> zTilde = mseq({4, 2, 1});

    const int qPrime = nId1 / 30;
    const int q = (nId1 + qPrime * (qPrime + 1) / 2) / 30;
    const int mPrime = nId1 + q * (q + 1) / 2;
    const int m0 = mPrime % 31;
    const int m1 = (m0 + mPrime / 31 + 1) % 31;

    auto s = [&](int m, int n) { return sTilde[static_cast<size_t>((n + m) % 31)]; };
    auto c = [&](int shift, int n) { return cTilde[static_cast<size_t>((n + shift) % 31)]; };
    auto z = [&](int m, int n) { return zTilde[static_cast<size_t>((n + (m % 8)) % 31)]; };

    std::array<double, 62> d;
    for (int n = 0; n < 31; ++n) {
        if (subframe == 0) {
            d[static_cast<size_t>(2 * n)] = s(m0, n) * c(nId2, n);
            d[static_cast<size_t>(2 * n + 1)] = s(m1, n) * c(nId2 + 3, n) * z(m0, n);
        } else {
            d[static_cast<size_t>(2 * n)] = s(m1, n) * c(nId2, n);
            d[static_cast<size_t>(2 * n + 1)] = s(m0, n) * c(nId2 + 3, n) * z(m1, n);
        }
    }
    return d;
}

void pssCorrelateSerial(std::span<const cf64> sig, std::span<const cf64> rep,
                        std::span<const double> winEnergy, std::span<double> out) {
    const size_t m = rep.size();
    double eRep = 0.0;
    for (const cf64& r : rep) eRep += std::norm(r);
    for (size_t t = 0; t < out.size(); ++t) {
        cf64 acc{0.0, 0.0};
        for (size_t n = 0; n < m; ++n) acc += sig[t + n] * std::conj(rep[n]);
        const double denom = eRep * winEnergy[t];
        out[t] = denom > 1e-30 ? std::norm(acc) / denom : 0.0;
    }
}

void pssCorrelateOmp(std::span<const cf64> sig, std::span<const cf64> rep,
                     std::span<const double> winEnergy, std::span<double> out,
                     int threads) {
    const size_t m = rep.size();
    double eRep = 0.0;
    for (const cf64& r : rep) eRep += std::norm(r);
    const int64_t nOut = static_cast<int64_t>(out.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
    for (int64_t t = 0; t < nOut; ++t) {
        cf64 acc{0.0, 0.0};
        for (size_t n = 0; n < m; ++n) acc += sig[static_cast<size_t>(t) + n] * std::conj(rep[n]);
        const double denom = eRep * winEnergy[static_cast<size_t>(t)];
        out[static_cast<size_t>(t)] = denom > 1e-30 ? std::norm(acc) / denom : 0.0;
    }
#ifndef _OPENMP
    (void)threads;
#endif
}

namespace {

// Time-domain replica of the PSS useful part at a given FFT size.
std::vector<cf64> pssReplica(int nId2, int fftSize) {
    const std::array<cf64, 62> d = pssSequence(nId2);
    std::vector<cf64> freq(static_cast<size_t>(fftSize), cf64{0.0, 0.0});
    for (int n = 0; n < 62; ++n) {
        const int bin = n < 31 ? fftSize - 31 + n : n - 30;
        freq[static_cast<size_t>(bin)] = d[static_cast<size_t>(n)];
    }
    Fft fft(fftSize);
    std::vector<cf64> time(static_cast<size_t>(fftSize));
    fft.inverse(freq.data(), time.data());
    return time;
}

// Lowpass-filter and decimate by d, output aligned so out[i] sits at input
// sample i*d. Identity when d == 1.
std::vector<cf64> decimate(std::span<const cf64> in, int d) {
    if (d == 1) return std::vector<cf64>(in.begin(), in.end());
    constexpr int kTaps = 129;
    const int g = kTaps / 2;
    // Windowed-sinc lowpass, cutoff a bit above the 62-subcarrier band.
    const double fc = 0.55 / d;
    std::array<double, kTaps> h;
    double sum = 0.0;
    for (int i = 0; i < kTaps; ++i) {
        const int m = i - g;
        const double sinc = m == 0 ? 2.0 * fc
                                   : std::sin(2.0 * std::numbers::pi * fc * m) /
                                         (std::numbers::pi * m);
        const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (kTaps - 1));
        h[static_cast<size_t>(i)] = sinc * w;
        sum += h[static_cast<size_t>(i)];
    }
    for (double& v : h) v /= sum;

    const size_t nOut = in.size() / static_cast<size_t>(d);
    std::vector<cf64> out(nOut, cf64{0.0, 0.0});
    for (size_t i = 0; i < nOut; ++i) {
        const int64_t center = static_cast<int64_t>(i) * d;
        cf64 acc{0.0, 0.0};
        for (int j = 0; j < kTaps; ++j) {
            const int64_t idx = center + j - g;
            if (idx < 0 || idx >= static_cast<int64_t>(in.size())) continue;
            acc += h[static_cast<size_t>(j)] * in[static_cast<size_t>(idx)];
        }
        out[i] = acc;
    }
    return out;
}

std::vector<double> windowEnergies(std::span<const cf64> sig, size_t window) {
    std::vector<double> prefix(sig.size() + 1, 0.0);
    for (size_t i = 0; i < sig.size(); ++i) prefix[i + 1] = prefix[i] + std::norm(sig[i]);
    const size_t nOut = sig.size() >= window ? sig.size() - window + 1 : 0;
    std::vector<double> out(nOut);
    for (size_t t = 0; t < nOut; ++t) out[t] = prefix[t + window] - prefix[t];
    return out;
}

// CFO from the phase rotation between the two halves of a matched symbol.
double halfSymbolCfo(std::span<const cf64> sig, std::span<const cf64> rep,
                     double sampleRateHz) {
    const size_t half = rep.size() / 2;
    cf64 c1{0.0, 0.0}, c2{0.0, 0.0};
    for (size_t n = 0; n < half; ++n) c1 += sig[n] * std::conj(rep[n]);
    for (size_t n = half; n < rep.size(); ++n) c2 += sig[n] * std::conj(rep[n]);
    if (std::abs(c1) < 1e-12 || std::abs(c2) < 1e-12) return 0.0;
    const double phase = std::arg(c2 * std::conj(c1));
    return phase * sampleRateHz / (2.0 * std::numbers::pi * static_cast<double>(half));
}

std::vector<cf64> derotated(std::span<const cf64> sig, int64_t firstIndex, double cfoHz,
                            double sampleRateHz) {
    std::vector<cf64> out(sig.size());
    const double w = -2.0 * std::numbers::pi * cfoHz / sampleRateHz;
    for (size_t i = 0; i < sig.size(); ++i) {
        const double ph = w * static_cast<double>(firstIndex + static_cast<int64_t>(i));
        out[i] = sig[i] * cf64(std::cos(ph), std::sin(ph));
    }
    return out;
}

}  // namespace

PssDetection detectPss(const IqRecording& rec, int threads) {
    nDlRbForRate(rec.sampleRateHz);
    const int d = static_cast<int>(rec.sampleRateHz / kBaseRateHz);
    const int fullFft = kBaseFft * d;
    if (rec.samples.size() < static_cast<size_t>(fullFft) * 2)
        fail(Err::InsufficientSamples, "recording shorter than one symbol");

    // Coarse stage at the 1.92 MHz base rate over at most 40 ms.
    const size_t window =
        std::min(rec.samples.size(), static_cast<size_t>(rec.sampleRateHz / 25));
    const std::vector<cf64> dec = decimate(std::span(rec.samples).first(window), d);
    if (dec.size() < static_cast<size_t>(kBaseFft) + 1)
        fail(Err::InsufficientSamples, "recording shorter than one symbol");
    const std::vector<double> winEnergy = windowEnergies(dec, kBaseFft);

    std::array<std::vector<double>, 3> metrics;
    double mean = 0.0;
    size_t meanCount = 0;
    for (int root = 0; root < 3; ++root) {
        const std::vector<cf64> rep = pssReplica(root, kBaseFft);
        metrics[static_cast<size_t>(root)].resize(winEnergy.size());
        if (threads > 1)
            pssCorrelateOmp(dec, rep, winEnergy, metrics[static_cast<size_t>(root)], threads);
        else
            pssCorrelateSerial(dec, rep, winEnergy, metrics[static_cast<size_t>(root)]);
        for (double v : metrics[static_cast<size_t>(root)]) mean += v;
        meanCount += metrics[static_cast<size_t>(root)].size();
    }
    mean /= static_cast<double>(meanCount);

    double best = 0.0;
    for (int root = 0; root < 3; ++root)
        for (double v : metrics[static_cast<size_t>(root)]) best = std::max(best, v);

    // Earliest peak within 95% of the maximum, so padded recordings stay
    // shift-equivariant and the first complete frame wins.
    int bestRoot = -1;
    size_t bestT = 0;
    for (size_t t = 0; t < winEnergy.size() && bestRoot < 0; ++t)
        for (int root = 0; root < 3; ++root)
            if (metrics[static_cast<size_t>(root)][t] >= 0.95 * best) {
                bestRoot = root;
                bestT = t;
                break;
            }

    const double ratio = mean > 1e-30 ? best / mean : 0.0;
    if (bestRoot < 0 || ratio < kPeakToMeanThreshold || best < kNormMetricFloor)
        fail(Err::NoPssFound,
             "no primary sync peak (ratio " + std::to_string(ratio) + ", metric " +
                 std::to_string(best) + ")");

    const std::vector<cf64> decRep = pssReplica(bestRoot, kBaseFft);
    const double coarseCfo = halfSymbolCfo(
        std::span(dec).subspan(bestT, kBaseFft), decRep, static_cast<double>(kBaseRateHz));

    // Full-rate refinement around the coarse hit.
    const std::vector<cf64> fullRep = pssReplica(bestRoot, fullFft);
    const int64_t center = static_cast<int64_t>(bestT) * d;
    const int64_t margin = 2 * d + 4;
    int64_t lo = std::max<int64_t>(0, center - margin);
    int64_t hi = std::min<int64_t>(static_cast<int64_t>(rec.samples.size()) - fullFft,
                                   center + margin);
    if (hi < lo) fail(Err::InsufficientSamples, "peak too close to the end of the capture");
    const std::vector<cf64> seg = derotated(
        std::span(rec.samples).subspan(static_cast<size_t>(lo),
                                       static_cast<size_t>(hi - lo) + fullFft),
        lo, coarseCfo, static_cast<double>(rec.sampleRateHz));

    double bestCorr = -1.0;
    int64_t bestOff = lo;
    double eRep = 0.0;
    for (const cf64& r : fullRep) eRep += std::norm(r);
    for (int64_t t = lo; t <= hi; ++t) {
        cf64 acc{0.0, 0.0};
        double eWin = 0.0;
        const size_t base = static_cast<size_t>(t - lo);
        for (int n = 0; n < fullFft; ++n) {
            acc += seg[base + static_cast<size_t>(n)] * std::conj(fullRep[static_cast<size_t>(n)]);
            eWin += std::norm(seg[base + static_cast<size_t>(n)]);
        }
        const double v = eWin > 1e-30 ? std::norm(acc) / (eRep * eWin) : 0.0;
        if (v > bestCorr) {
            bestCorr = v;
            bestOff = t;
        }
    }

    const double fineCfo =
        halfSymbolCfo(std::span(seg).subspan(static_cast<size_t>(bestOff - lo),
                                             static_cast<size_t>(fullFft)),
                      fullRep, static_cast<double>(rec.sampleRateHz));

    PssDetection det;
    det.nId2 = bestRoot;
    det.pssUsefulStart = bestOff;
    det.cfoHz = coarseCfo + fineCfo;
    det.metric = bestCorr;
    det.peakToMean = ratio;
    return det;
}

SssDetection detectSss(const IqRecording& rec, int nId2, int64_t pssUsefulStart,
                       double cfoHz) {
    const FftParams p = fftParams(nDlRbForRate(rec.sampleRateHz));
    const int fftSize = p.fftSize;
    // SSS sits one symbol before the PSS, separated by the PSS cyclic prefix.
    const int cpPss = p.cpLengths.back();
    const int64_t sssStart = pssUsefulStart - cpPss - fftSize;
    if (sssStart < 0) fail(Err::InsufficientSamples, "no room for the SSS symbol");

    const std::vector<cf64> seg = derotated(
        std::span(rec.samples).subspan(static_cast<size_t>(sssStart),
                                       static_cast<size_t>(cpPss + 2 * fftSize)),
        sssStart, cfoHz, static_cast<double>(rec.sampleRateHz));

    Fft fft(fftSize);
    std::vector<cf64> freqSss(static_cast<size_t>(fftSize));
    std::vector<cf64> freqPss(static_cast<size_t>(fftSize));
    fft.forward(seg.data(), freqSss.data());
    fft.forward(seg.data() + cpPss + fftSize, freqPss.data());

    // Channel reference from the PSS, then coherent correlation over the 336
    // SSS hypotheses.
    const std::array<cf64, 62> pss = pssSequence(nId2);
    std::array<cf64, 62> a;
    for (int n = 0; n < 62; ++n) {
        const int bin = n < 31 ? fftSize - 31 + n : n - 30;
        const cf64 h = freqPss[static_cast<size_t>(bin)] * std::conj(pss[static_cast<size_t>(n)]);
        a[static_cast<size_t>(n)] = freqSss[static_cast<size_t>(bin)] * std::conj(h);
    }
    double denom = 0.0;
    for (const cf64& v : a) denom += std::abs(v);
    if (denom < 1e-30) fail(Err::NoSssFound, "empty secondary sync symbol");

    SssDetection det;
    double best = -1.0;
    for (int nId1 = 0; nId1 < 168; ++nId1)
        for (int sf : {0, 5}) {
            const std::array<double, 62> s = sssSequence(nId1, nId2, sf);
            cf64 acc{0.0, 0.0};
            for (int n = 0; n < 62; ++n) acc += a[static_cast<size_t>(n)] * s[static_cast<size_t>(n)];
            const double m = std::abs(acc) / denom;
            if (m > best) {
                best = m;
                det.nId1 = nId1;
                det.subframe = sf;
            }
        }
    det.metric = best;
    if (best < kSssThreshold)
        fail(Err::NoSssFound, "secondary sync metric " + std::to_string(best) + " too low");
    return det;
}

SyncResult synchronize(const IqRecording& rec, int threads) {
    const PssDetection pss = detectPss(rec, threads);
    const SssDetection sss = detectSss(rec, pss.nId2, pss.pssUsefulStart, pss.cfoHz);

    const FftParams p = fftParams(nDlRbForRate(rec.sampleRateHz));
    // Offset of the useful part of the PSS symbol (last of slot 0) within the
    // subframe.
    int64_t pssOffset = 0;
    for (int l = 0; l < 6; ++l) pssOffset += p.cpLengths[static_cast<size_t>(l)] + p.fftSize;
    pssOffset += p.cpLengths[6];

    int64_t frameStart = pss.pssUsefulStart - pssOffset;
    if (sss.subframe == 5) frameStart -= 5 * p.subframeSamples;
    const int64_t frameLen = 10 * p.subframeSamples;
    while (frameStart < 0) frameStart += frameLen;

    SyncResult r;
    r.identity = makeCellIdentity(sss.nId1, pss.nId2);
    r.timingOffset = frameStart;
    r.cfoHz = pss.cfoHz;
    r.pssMetric = pss.metric;
    r.sssMetric = sss.metric;
    return r;
}

}  // namespace ltedci
