#include "ltedci/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "ltedci/decoder.hpp"
#include "ltedci/selftest.hpp"
#include "ltedci/txgen.hpp"

namespace ltedci {

namespace {

// Exit statuses promised to callers: 2 = no cell found, 3 = broadcast-channel
// checksum never passed, 1 = any other error.
int exitStatusFor(const Error& e) {
    switch (e.code()) {
        case Err::NoPssFound:
        case Err::NoSssFound:
            return 2;
        case Err::CrcFail:
            return 3;
        default:
            return 1;
    }
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) fail(Err::IoFailure, "cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) fail(Err::IoFailure, "cannot write " + p.string());
    out << text;
    if (!out) fail(Err::IoFailure, "short write to " + p.string());
}

std::string reportText(const std::vector<DciCandidate>& candidates, ReportFormat fmt) {
    std::vector<ReportRow> rows;
    rows.reserve(candidates.size());
    for (const DciCandidate& c : candidates) rows.push_back(rowFromCandidate(c));
    return renderReport(rows, fmt);
}

nlohmann::json frameLoadToJson(const FrameLoad& fl) {
    nlohmann::json j;
    j["sfn"] = fl.sfn;
    j["nAssigned"] = fl.nAssigned;
    j["nTotal"] = fl.nTotal;
    j["fraction"] = fl.fraction;
    j["uniqueUes"] = fl.uniqueUes;
    if (fl.overlapClamped) j["overlapClamped"] = true;
    return j;
}

FrameLoad frameLoadFromJson(const nlohmann::json& j) {
    FrameLoad fl;
    fl.sfn = j.at("sfn").get<int>();
    fl.nAssigned = j.at("nAssigned").get<int>();
    fl.nTotal = j.at("nTotal").get<int>();
    fl.fraction = j.at("fraction").get<double>();
    fl.uniqueUes = j.at("uniqueUes").get<int>();
    fl.overlapClamped = j.value("overlapClamped", false);
    return fl;
}

int cmdGenerate(const std::filesystem::path& scenarioPath, const std::filesystem::path& outBase) {
    const nlohmann::json j = nlohmann::json::parse(slurp(scenarioPath));
    const Scenario scenario = parseScenario(j);
    const GeneratedRecording gen = generateRecording(scenario);

    std::filesystem::path iqPath = outBase;
    if (iqPath.extension() != ".iq") iqPath += ".iq";
    writeIq(gen.recording, iqPath);

    std::filesystem::path truthPath = iqPath;
    truthPath.replace_extension(".truth.json");
    spill(truthPath, reportText(gen.manifest, ReportFormat::json));

    std::cout << "wrote " << iqPath.string() << " (" << gen.recording.samples.size()
              << " samples at " << gen.recording.sampleRateHz << " Hz), sidecar "
              << sidecarPath(iqPath).string() << ", ground truth " << truthPath.string()
              << " (" << gen.manifest.size() << " messages)\n";
    return 0;
}

struct DecodeFlags {
    std::filesystem::path in;
    std::filesystem::path report;
    std::string format = "csv";
    int maxErrors = 2;
    bool noDedup = false;
    bool includeUplinkLoad = false;
    bool excludeSystemLoad = false;
    bool sumLoad = false;
    int threads = 1;
    int maxFrames = 0;
    std::string device;  // reserved, not implemented
};

int cmdDecode(const DecodeFlags& fl) {
    if (!fl.device.empty())
        fail(Err::InvalidConfig, "live capture is not supported in this build; "
                                 "decode a recorded .iq file instead");
    const IqRecording rec = readIq(fl.in);

    DecodeOptions opts;
    opts.maxErrors = fl.maxErrors;
    opts.dedup = !fl.noDedup;
    opts.loadPolicy.includeUplink = fl.includeUplinkLoad;
    opts.loadPolicy.includeSystem = !fl.excludeSystemLoad;
    opts.loadPolicy.unionPrbs = !fl.sumLoad;
    opts.threads = fl.threads;
    opts.maxFrames = fl.maxFrames;
    const DecodeResult res = decodeRecording(rec, opts);

    const ReportFormat fmt = fl.format == "json" ? ReportFormat::json : ReportFormat::csv;
    spill(fl.report, reportText(res.candidates, fmt));

    nlohmann::json summary;
    summary["cell"] = cellConfigToJson(res.cell, res.nFrame, 0);
    summary["sync"] = {{"timingOffset", res.sync.timingOffset},
                       {"cfoHz", res.sync.cfoHz},
                       {"pssMetric", res.sync.pssMetric},
                       {"sssMetric", res.sync.sssMetric}};
    summary["framesDecoded"] = res.framesDecoded;
    summary["subframesSkipped"] = res.subframesSkipped;
    summary["frames"] = nlohmann::json::array();
    for (const FrameLoad& f : res.frameLoads) summary["frames"].push_back(frameLoadToJson(f));
    summary["summary"] = summaryToJson(res.summary);
    summary["uniqueUes"] = res.uniqueUeCount;
    nlohmann::json ids = nlohmann::json::array();
    {
        std::set<uint16_t> userIds;
        for (const DciCandidate& c : res.candidates)
            if (classifyRnti(c.rnti) == RntiClass::cRnti) userIds.insert(c.rnti);
        for (uint16_t id : userIds) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "%04X", id);
            ids.push_back(buf);
        }
    }
    summary["cRntis"] = ids;

    std::filesystem::path summaryPath = fl.report;
    summaryPath += ".summary.json";
    spill(summaryPath, summary.dump(2) + "\n");

    std::cout << "cell settings:\n" << summary["cell"].dump(2) << "\n";
    std::cout << "frames decoded: " << res.framesDecoded << ", accepted messages: "
              << res.candidates.size() << ", active subscribers: " << res.uniqueUeCount
              << "\n";
    std::cout << "mean load: " << res.summary.meanLoad * 100.0 << "%\n";
    std::cout << "wrote " << fl.report.string() << " and " << summaryPath.string() << "\n";
    return 0;
}

int cmdReport(const std::vector<std::filesystem::path>& inputs,
              const std::filesystem::path& outPath) {
    if (inputs.empty()) fail(Err::EmptyInput, "no report files given");

    std::optional<nlohmann::json> cell;
    std::vector<FrameLoad> frames;
    std::set<std::string> ids;
    for (const std::filesystem::path& reportPath : inputs) {
        // Accept either the report path written by decode or its sidecar.
        std::filesystem::path summaryPath = reportPath;
        if (!summaryPath.string().ends_with(".summary.json")) summaryPath += ".summary.json";
        const nlohmann::json j = nlohmann::json::parse(slurp(summaryPath));
        const nlohmann::json& thisCell = j.at("cell");
        if (!cell) {
            cell = thisCell;
        } else if ((*cell).at("NCellID") != thisCell.at("NCellID")) {
            fail(Err::InvalidConfig,
                 "reports come from different cells (NCellID " +
                     (*cell).at("NCellID").dump() + " vs " + thisCell.at("NCellID").dump() +
                     "); refusing to merge");
        }
        for (const nlohmann::json& fj : j.at("frames")) frames.push_back(frameLoadFromJson(fj));
        for (const nlohmann::json& id : j.value("cRntis", nlohmann::json::array()))
            ids.insert(id.get<std::string>());
    }

    const LoadSummary merged = summarize(frames);
    nlohmann::json out;
    out["cell"] = *cell;
    out["framesAnalyzed"] = merged.framesAnalyzed;
    out["summary"] = summaryToJson(merged);
    out["cRntis"] = ids;
    out["uniqueUes"] = ids.size();
    spill(outPath, out.dump(2) + "\n");
    std::cout << "merged " << inputs.size() << " report(s), " << merged.framesAnalyzed
              << " frame(s) -> " << outPath.string() << "\n";
    return 0;
}

int cmdSelftest(int threads) {
    const SelftestOutput out = runAcceptance(threads);
    for (const CriterionResult& c : out.criteria) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << " ("
                  << c.seconds << " s)";
        if (!c.detail.empty()) std::cout << " - " << c.detail;
        std::cout << "\n";
    }
    const bool ok = allPassed(out);
    std::cout << (ok ? "all criteria passed" : "FAILURES present") << " in "
              << out.totalSeconds << " s\n";
    return ok ? 0 : 1;
}

}  // namespace

int runCli(int argc, char** argv) {
    CLI::App app{"LTE downlink control-channel sniffer: generates reference captures, "
                 "recovers scheduling messages blindly, and reports cell load"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "synthesize a capture from a scenario file");
    std::filesystem::path scenarioPath, outBase;
    gen->add_option("--scenario", scenarioPath, "scenario JSON")
        ->required()
        ->check(CLI::ExistingFile);
    gen->add_option("--out", outBase, "output basename or .iq path")->required();

    auto* dec = app.add_subcommand("decode", "decode a capture and write a message report");
    DecodeFlags fl;
    dec->add_option("--in", fl.in, "input .iq file")->required()->check(CLI::ExistingFile);
    dec->add_option("--report", fl.report, "report output path")->required();
    dec->add_option("--format", fl.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    dec->add_option("--max-errors", fl.maxErrors, "re-encode mismatch tolerance")
        ->check(CLI::Range(0, 72 * 8))
        ->capture_default_str();
    dec->add_flag("--no-dedup", fl.noDedup, "keep repeated copies of the same message");
    dec->add_flag("--include-uplink-load", fl.includeUplinkLoad,
                  "count uplink grants toward the load");
    dec->add_flag("--exclude-system-load", fl.excludeSystemLoad,
                  "ignore system identifiers in the load");
    dec->add_flag("--sum-load", fl.sumLoad,
                  "sum per-message block counts instead of the per-subframe union");
    dec->add_option("--threads", fl.threads, "worker threads")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();
    dec->add_option("--max-frames", fl.maxFrames, "stop after this many frames (0 = all)")
        ->capture_default_str();
    dec->add_option("--device", fl.device, "reserved for live capture (unsupported)")
        ->group("");

    auto* rep = app.add_subcommand("report", "merge decode summaries into one");
    std::vector<std::filesystem::path> reportInputs;
    std::filesystem::path reportOut;
    rep->add_option("--in", reportInputs, "report files written by decode")
        ->required()
        ->expected(-1);
    rep->add_option("--out", reportOut, "merged summary JSON")->required();

    auto* st = app.add_subcommand("selftest", "run the acceptance suite");
    int stThreads = 0;
    st->add_option("--threads", stThreads, "worker threads (0 = auto)");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return cmdGenerate(scenarioPath, outBase);
        if (dec->parsed()) return cmdDecode(fl);
        if (rep->parsed()) return cmdReport(reportInputs, reportOut);
        if (st->parsed()) return cmdSelftest(stThreads);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exitStatusFor(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace ltedci
