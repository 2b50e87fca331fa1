#include "ltedci/ofdm.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace ltedci {

namespace {
std::mutex& planMutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(int size) : size_(size) {
    std::lock_guard<std::mutex> lock(planMutex());
    fftw_complex* tmp = fftw_alloc_complex(static_cast<size_t>(size));
    planFwd_ = fftw_plan_dft_1d(size, tmp, tmp, FFTW_FORWARD, FFTW_ESTIMATE);
    planInv_ = fftw_plan_dft_1d(size, tmp, tmp, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(tmp);
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planMutex());
    fftw_destroy_plan(static_cast<fftw_plan>(planFwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(planInv_));
}

void Fft::forward(const cf64* in, cf64* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(planFwd_),
                     reinterpret_cast<fftw_complex*>(const_cast<cf64*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    const double s = 1.0 / std::sqrt(static_cast<double>(size_));
    for (int i = 0; i < size_; ++i) out[i] *= s;
}

void Fft::inverse(const cf64* in, cf64* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(planInv_),
                     reinterpret_cast<fftw_complex*>(const_cast<cf64*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    const double s = 1.0 / std::sqrt(static_cast<double>(size_));
    for (int i = 0; i < size_; ++i) out[i] *= s;
}

int subcarrierToBin(int k, int nDlRb, int fftSize) {
    const int half = 6 * nDlRb;
    return k < half ? fftSize - half + k : k - half + 1;
}

IqRecording ofdmModulate(const std::vector<ResourceGrid>& grids, const CellConfig& cfg) {
    cfg.validate();
    const FftParams p = fftParams(cfg.nDlRb, cfg.cyclicPrefix);
    const GridShape shape = gridShape(cfg);
    Fft fft(p.fftSize);

    IqRecording rec;
    rec.sampleRateHz = p.sampleRateHz;
    rec.samples.resize(grids.size() * static_cast<size_t>(p.subframeSamples), cf64{0.0, 0.0});

    std::vector<cf64> freq(static_cast<size_t>(p.fftSize));
    std::vector<cf64> time(static_cast<size_t>(p.fftSize));
    const int perSlot = symbolsPerSlot(cfg.cyclicPrefix);
    size_t cursor = 0;
    for (const ResourceGrid& g : grids) {
        if (g.subcarriers() != shape.subcarriers || g.symbols() != shape.symbols)
            fail(Err::DimensionMismatch, "grid shape does not match cell settings");
        for (int l = 0; l < shape.symbols; ++l) {
            std::fill(freq.begin(), freq.end(), cf64{0.0, 0.0});
            const cf64* row = g.symbolData(l);
            for (int k = 0; k < shape.subcarriers; ++k)
                freq[static_cast<size_t>(subcarrierToBin(k, cfg.nDlRb, p.fftSize))] = row[k];
            fft.inverse(freq.data(), time.data());
            const int cp = p.cpLengths[static_cast<size_t>(l % perSlot)];
            for (int i = 0; i < cp; ++i)
                rec.samples[cursor + static_cast<size_t>(i)] =
                    time[static_cast<size_t>(p.fftSize - cp + i)];
            for (int i = 0; i < p.fftSize; ++i)
                rec.samples[cursor + static_cast<size_t>(cp + i)] = time[static_cast<size_t>(i)];
            cursor += static_cast<size_t>(cp + p.fftSize);
        }
    }
    return rec;
}

std::vector<ResourceGrid> ofdmDemodulate(const IqRecording& rec, const CellConfig& cfg,
                                         int64_t start, int maxSubframes) {
    cfg.validate();
    const FftParams p = fftParams(cfg.nDlRb, cfg.cyclicPrefix);
    if (rec.sampleRateHz != p.sampleRateHz)
        fail(Err::InvalidConfig, "recording sample rate does not match the bandwidth");
    if (start < 0) fail(Err::OutOfRange, "start sample must be non-negative");
    const int64_t avail = static_cast<int64_t>(rec.samples.size()) - start;
    int64_t n = avail / p.subframeSamples;
    if (n < 1) fail(Err::InsufficientSamples, "not even one complete subframe after start");
    if (maxSubframes >= 0 && n > maxSubframes) n = maxSubframes;

    const GridShape shape = gridShape(cfg);
    Fft fft(p.fftSize);
    std::vector<cf64> time(static_cast<size_t>(p.fftSize));
    std::vector<cf64> freq(static_cast<size_t>(p.fftSize));
    const int perSlot = symbolsPerSlot(cfg.cyclicPrefix);

    std::vector<ResourceGrid> grids;
    grids.reserve(static_cast<size_t>(n));
    int64_t cursor = start;
    for (int64_t sf = 0; sf < n; ++sf) {
        ResourceGrid g(cfg.nDlRb, cfg.cyclicPrefix);
        for (int l = 0; l < shape.symbols; ++l) {
            const int cp = p.cpLengths[static_cast<size_t>(l % perSlot)];
            for (int i = 0; i < p.fftSize; ++i)
                time[static_cast<size_t>(i)] = rec.samples[static_cast<size_t>(cursor + cp + i)];
            fft.forward(time.data(), freq.data());
            cf64* row = g.symbolData(l);
            for (int k = 0; k < shape.subcarriers; ++k)
                row[k] = freq[static_cast<size_t>(subcarrierToBin(k, cfg.nDlRb, p.fftSize))];
            cursor += cp + p.fftSize;
        }
        grids.push_back(std::move(g));
    }
    return grids;
}

std::vector<cf64> qpskModulate(const BitVector& bits) {
    if (bits.size() % 2 != 0) fail(Err::OddBitCount, "QPSK needs an even bit count");
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<cf64> out(bits.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = cf64(bits[2 * i] ? -s : s, bits[2 * i + 1] ? -s : s);
    return out;
}

SoftBits qpskSoftDemod(std::span<const cf64> symbols, double noiseVar) {
    const double scale = 2.0 * std::sqrt(2.0) / noiseVar;
    SoftBits out(symbols.size() * 2);
    for (size_t i = 0; i < symbols.size(); ++i) {
        out[2 * i] = static_cast<float>(scale * symbols[i].real());
        out[2 * i + 1] = static_cast<float>(scale * symbols[i].imag());
    }
    return out;
}

ChannelEstimate estimateChannel(const ResourceGrid& grid, const CellConfig& cfg,
                                int subframe, int port) {
    cfg.validate();
    const int nSc = grid.subcarriers();
    const int nSym = grid.symbols();
    const int perSlot = symbolsPerSlot(cfg.cyclicPrefix);

    ChannelEstimate est;
    est.subcarriers = nSc;
    est.symbols = nSym;
    est.gains.assign(static_cast<size_t>(nSc) * nSym, cf64{0.0, 0.0});

    const std::vector<int> pilotSyms = crsSymbols(cfg, port);

    // Raw least-squares estimates at the pilot positions of each pilot symbol,
    // then linear interpolation across frequency (held at the edges).
    std::vector<std::vector<cf64>> perSymbol(pilotSyms.size());
    std::vector<std::vector<int>> pilotKs(pilotSyms.size());
    double noiseAcc = 0.0;
    int noiseCount = 0;
    for (size_t si = 0; si < pilotSyms.size(); ++si) {
        const int l = pilotSyms[si];
        const int slotParity = l >= perSlot ? 1 : 0;
        const int lInSlot = l - slotParity * perSlot;
        const std::vector<cf64> ref =
            crsSequence(cfg, 2 * subframe + slotParity, lInSlot);
        std::vector<RePosition> pos = crsPositions(cfg, port, subframe);
        std::vector<cf64> ls;
        std::vector<int> ks;
        int m = 0;
        for (const RePosition& rp : pos) {
            if (rp.symbol != l) continue;
            ls.push_back(grid.at(rp.subcarrier, rp.symbol) * std::conj(ref[static_cast<size_t>(m)]));
            ks.push_back(rp.subcarrier);
            ++m;
        }
        // Noise from the deviation of each raw pilot against a local average.
        for (size_t i = 0; i + 2 < ls.size(); ++i) {
            const cf64 avg = (ls[i] + ls[i + 1] + ls[i + 2]) / 3.0;
            noiseAcc += std::norm(ls[i + 1] - avg);
            ++noiseCount;
        }
        perSymbol[si] = std::move(ls);
        pilotKs[si] = std::move(ks);
    }
    est.noiseVar = noiseCount > 0 ? 1.5 * noiseAcc / noiseCount : 0.0;

    for (int l = 0; l < nSym; ++l) {
        // Nearest pilot symbol in time.
        size_t bi = 0;
        for (size_t si = 1; si < pilotSyms.size(); ++si)
            if (std::abs(pilotSyms[si] - l) < std::abs(pilotSyms[bi] - l)) bi = si;
        const std::vector<cf64>& ls = perSymbol[bi];
        const std::vector<int>& ks = pilotKs[bi];
        cf64* row = est.gains.data() + static_cast<size_t>(l) * nSc;
        size_t j = 0;
        for (int k = 0; k < nSc; ++k) {
            while (j + 1 < ks.size() && ks[j + 1] <= k) ++j;
            if (k <= ks.front()) {
                row[k] = ls.front();
            } else if (k >= ks.back()) {
                row[k] = ls.back();
            } else {
                const int k0 = ks[j];
                const int k1 = ks[j + 1];
                const double t = static_cast<double>(k - k0) / (k1 - k0);
                row[k] = ls[j] * (1.0 - t) + ls[j + 1] * t;
            }
        }
    }
    return est;
}

PortEstimates estimatePorts(const ResourceGrid& grid, const CellConfig& cfg, int subframe) {
    PortEstimates pe;
    pe.p0 = estimateChannel(grid, cfg, subframe, 0);
    pe.noiseVar = pe.p0.noiseVar;
    if (cfg.cellRefPorts >= 2) {
        pe.p1 = estimateChannel(grid, cfg, subframe, 1);
        pe.noiseVar = 0.5 * (pe.p0.noiseVar + pe.p1->noiseVar);
    }
    return pe;
}

ResourceGrid equalizeGrid(const ResourceGrid& grid, const ChannelEstimate& est) {
    if (est.subcarriers != grid.subcarriers() || est.symbols != grid.symbols())
        fail(Err::DimensionMismatch, "estimate shape does not match grid");
    ResourceGrid out = grid;
    for (int l = 0; l < grid.symbols(); ++l)
        for (int k = 0; k < grid.subcarriers(); ++k) {
            const cf64 h = est.at(k, l);
            out.at(k, l) = std::abs(h) < 1e-9 ? cf64{0.0, 0.0} : grid.at(k, l) / h;
        }
    return out;
}

void sfbcEncode(std::span<const cf64> x, std::vector<cf64>& port0, std::vector<cf64>& port1) {
    if (x.size() % 2 != 0) fail(Err::OddBitCount, "SFBC input must pair up");
    const double s = 1.0 / std::sqrt(2.0);
    port0.resize(x.size());
    port1.resize(x.size());
    for (size_t i = 0; i < x.size(); i += 2) {
        port0[i] = s * x[i];
        port0[i + 1] = s * x[i + 1];
        port1[i] = -s * std::conj(x[i + 1]);
        port1[i + 1] = s * std::conj(x[i]);
    }
}

std::vector<cf64> sfbcCombine(std::span<const cf64> y, std::span<const cf64> h0,
                              std::span<const cf64> h1) {
    if (y.size() % 2 != 0) fail(Err::OddBitCount, "SFBC input must pair up");
    if (h0.size() != y.size() || h1.size() != y.size())
        fail(Err::DimensionMismatch, "gain spans must match the symbol span");
    std::vector<cf64> out(y.size());
    const double root2 = std::sqrt(2.0);
    for (size_t i = 0; i < y.size(); i += 2) {
        const cf64 g0 = 0.5 * (h0[i] + h0[i + 1]);
        const cf64 g1 = 0.5 * (h1[i] + h1[i + 1]);
        const double denom = std::norm(g0) + std::norm(g1);
        if (denom < 1e-18) {
            out[i] = out[i + 1] = cf64{0.0, 0.0};
            continue;
        }
        out[i] = root2 * (std::conj(g0) * y[i] + g1 * std::conj(y[i + 1])) / denom;
        out[i + 1] = root2 * (std::conj(g0) * y[i + 1] - g1 * std::conj(y[i])) / denom;
    }
    return out;
}

}  // namespace ltedci
