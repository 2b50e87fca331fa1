#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "ltedci/errors.hpp"
#include "ltedci/iqio.hpp"

using namespace ltedci;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ltedci_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

IqRecording sampleRecording(size_t n) {
    IqRecording rec;
    rec.sampleRateHz = 15360000;
    rec.centerFreqHz = 796000000;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    rec.samples.reserve(n);
    for (size_t i = 0; i < n; ++i) rec.samples.emplace_back(g(rng), g(rng));
    return rec;
}

}  // namespace

TEST_CASE("write/read round trip preserves samples to float precision") {
    TempDir tmp;
    const fs::path p = tmp.path / "capture.iq";
    const IqRecording rec = sampleRecording(1000);
    writeIq(rec, p);

    CHECK(fs::exists(p));
    CHECK(fs::exists(sidecarPath(p)));
    CHECK(fs::file_size(p) == 1000 * 2 * sizeof(float));

    const IqRecording back = readIq(p);
    CHECK(back.sampleRateHz == rec.sampleRateHz);
    REQUIRE(back.centerFreqHz.has_value());
    CHECK(*back.centerFreqHz == *rec.centerFreqHz);
    REQUIRE(back.samples.size() == rec.samples.size());
    for (size_t i = 0; i < back.samples.size(); ++i) {
        CHECK(std::abs(back.samples[i].real() - rec.samples[i].real()) < 1e-5);
        CHECK(std::abs(back.samples[i].imag() - rec.samples[i].imag()) < 1e-5);
    }
}

TEST_CASE("missing sidecar needs an explicit rate") {
    TempDir tmp;
    const fs::path p = tmp.path / "bare.iq";
    const IqRecording rec = sampleRecording(64);
    writeIq(rec, p);
    fs::remove(sidecarPath(p));

    CHECK_THROWS_AS(readIq(p), Error);
    const IqRecording back = readIq(p, 1920000);
    CHECK(back.sampleRateHz == 1920000);
    CHECK(back.samples.size() == 64);
}

TEST_CASE("truncated payload is rejected") {
    TempDir tmp;
    const fs::path p = tmp.path / "short.iq";
    writeIq(sampleRecording(64), p);
    fs::resize_file(p, 64 * 2 * sizeof(float) - 3);  // not a whole sample
    CHECK_THROWS_AS(readIq(p), Error);
}

TEST_CASE("unreadable path reports an i/o failure") {
    CHECK_THROWS_AS(readIq("/nonexistent/nowhere.iq", 1920000), Error);
}
