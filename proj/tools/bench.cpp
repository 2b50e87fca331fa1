// Compares the serial reference kernels against their OpenMP variants on
// realistic workloads and checks that both produce identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <thread>
#include <vector>

#include "ltedci/blindrnti.hpp"
#include "ltedci/cch.hpp"
#include "ltedci/sync.hpp"

using namespace ltedci;

namespace {

using Clock = std::chrono::steady_clock;

double timeIt(int reps, const auto& fn) {
    double best = 1e9;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        fn();
        const double s = std::chrono::duration<double>(Clock::now() - t0).count();
        if (s < best) best = s;
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    int threads = 4;
    if (argc > 1) threads = std::max(1, std::atoi(argv[1]));
    std::printf("hardware threads: %u (speedup is bounded by this)\n",
                std::thread::hardware_concurrency());
    std::mt19937_64 rng(9001);
    std::normal_distribution<double> g(0.0, 1.0);

    // --- correlation sweep: 40 ms of decimated capture against one replica.
    const size_t sigLen = 76800;
    const size_t repLen = 137;
    std::vector<cf64> sig(sigLen), rep(repLen);
    for (auto& s : sig) s = cf64(g(rng), g(rng));
    for (auto& s : rep) s = cf64(g(rng), g(rng));
    std::vector<double> prefix(sigLen + 1, 0.0);
    for (size_t i = 0; i < sigLen; ++i) prefix[i + 1] = prefix[i] + std::norm(sig[i]);
    std::vector<double> winEnergy(sigLen - repLen + 1);
    for (size_t t = 0; t < winEnergy.size(); ++t)
        winEnergy[t] = prefix[t + repLen] - prefix[t];

    std::vector<double> outSerial(winEnergy.size()), outOmp(winEnergy.size());
    const double tSerial =
        timeIt(5, [&] { pssCorrelateSerial(sig, rep, winEnergy, outSerial); });
    const double tOmp =
        timeIt(5, [&] { pssCorrelateOmp(sig, rep, winEnergy, outOmp, threads); });
    bool same = outSerial == outOmp;
    std::printf("correlation   serial %8.3f ms   omp(%d) %8.3f ms   speedup %5.2fx   %s\n",
                tSerial * 1e3, threads, tOmp * 1e3, tSerial / tOmp,
                same ? "identical" : "MISMATCH");

    // --- blind search over a fully loaded control region.
    CellConfig cfg;
    cfg.nDlRb = 50;
    cfg.pci = 7;
    cfg.cellRefPorts = 2;
    const ControlRegion cr = computeControlRegion(cfg, 2);
    CceSpace cces;
    cces.numCces = cr.numCces;
    cces.subframe = 3;
    cces.llrs.resize(static_cast<size_t>(cr.numCces) * 72);
    for (auto& v : cces.llrs) v = static_cast<float>(g(rng));

    SearchConfig scSerial;
    scSerial.threads = 1;
    SearchConfig scOmp;
    scOmp.threads = threads;
    std::vector<DciCandidate> a, b;
    const double tS2 = timeIt(5, [&] { a = searchCandidates(cces, cfg, scSerial, 0); });
    const double tP2 = timeIt(5, [&] { b = searchCandidates(cces, cfg, scOmp, 0); });
    same = a.size() == b.size();
    for (size_t i = 0; same && i < a.size(); ++i)
        same = a[i].rnti == b[i].rnti && a[i].cceOffset == b[i].cceOffset &&
               a[i].numErrors == b[i].numErrors;
    std::printf("blind search  serial %8.3f ms   omp(%d) %8.3f ms   speedup %5.2fx   %s\n",
                tS2 * 1e3, threads, tP2 * 1e3, tS2 / tP2, same ? "identical" : "MISMATCH");
    return 0;
}
