#include "ltedci/iqio.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "ltedci/errors.hpp"

namespace ltedci {

std::filesystem::path sidecarPath(const std::filesystem::path& iqPath) {
    std::filesystem::path p = iqPath;
    p.replace_extension(".json");
    return p;
}

void writeIq(const IqRecording& rec, const std::filesystem::path& iqPath) {
    std::ofstream f(iqPath, std::ios::binary);
    if (!f) fail(Err::IoFailure, "cannot open " + iqPath.string() + " for writing");
    std::vector<float> buf(rec.samples.size() * 2);
    for (size_t i = 0; i < rec.samples.size(); ++i) {
        buf[2 * i] = static_cast<float>(rec.samples[i].real());
        buf[2 * i + 1] = static_cast<float>(rec.samples[i].imag());
    }
    f.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!f) fail(Err::IoFailure, "short write to " + iqPath.string());
    f.close();

    nlohmann::json meta;
    meta["sampleRateHz"] = rec.sampleRateHz;
    meta["format"] = "cf32le";
    meta["numSamples"] = rec.samples.size();
    if (rec.centerFreqHz) meta["centerFreqHz"] = *rec.centerFreqHz;
    std::ofstream m(sidecarPath(iqPath));
    if (!m) fail(Err::IoFailure, "cannot write sidecar for " + iqPath.string());
    m << meta.dump(2) << "\n";
}

IqRecording readIq(const std::filesystem::path& iqPath,
                   std::optional<int64_t> sampleRateOverride) {
    IqRecording rec;
    if (sampleRateOverride) {
        rec.sampleRateHz = *sampleRateOverride;
    } else {
        const std::filesystem::path sp = sidecarPath(iqPath);
        std::ifstream m(sp);
        if (!m)
            fail(Err::MissingMetadata,
                 "no sidecar " + sp.string() + " and no sample rate given");
        nlohmann::json meta;
        try {
            m >> meta;
            rec.sampleRateHz = meta.at("sampleRateHz").get<int64_t>();
            if (meta.contains("centerFreqHz"))
                rec.centerFreqHz = meta["centerFreqHz"].get<int64_t>();
        } catch (const nlohmann::json::exception& e) {
            fail(Err::MissingMetadata, "bad sidecar " + sp.string() + ": " + e.what());
        }
    }
    if (rec.sampleRateHz <= 0) fail(Err::MissingMetadata, "sample rate must be positive");

    std::ifstream f(iqPath, std::ios::binary | std::ios::ate);
    if (!f) fail(Err::IoFailure, "cannot open " + iqPath.string());
    const std::streamsize bytes = f.tellg();
    if (bytes % (2 * sizeof(float)) != 0)
        fail(Err::TruncatedFile, iqPath.string() + " is not a whole number of cf32 samples");
    f.seekg(0);
    std::vector<float> buf(static_cast<size_t>(bytes) / sizeof(float));
    f.read(reinterpret_cast<char*>(buf.data()), bytes);
    if (!f) fail(Err::IoFailure, "short read from " + iqPath.string());
    rec.samples.resize(buf.size() / 2);
    for (size_t i = 0; i < rec.samples.size(); ++i)
        rec.samples[i] = cf64(buf[2 * i], buf[2 * i + 1]);
    return rec;
}

}  // namespace ltedci
