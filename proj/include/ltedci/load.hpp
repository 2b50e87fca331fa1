#pragma once

#include <map>
#include <nlohmann/json.hpp>
#include <span>

#include "ltedci/blindrnti.hpp"

namespace ltedci {

struct LoadPolicy {
    bool includeSystem = true;   // count SI/P/RA allocations toward the load
    bool includeUplink = false;  // count uplink grants toward the load
    bool unionPrbs = true;       // union per subframe; false sums with a cap
};

struct FrameLoad {
    int sfn = 0;
    int nAssigned = 0;  // allocated PRB count accumulated over the frame
    int nTotal = 0;     // NDLRB * 10
    double fraction = 0.0;
    int uniqueUes = 0;
    bool overlapClamped = false;  // only possible under the summing policy
};

// Load of one frame from its filtered candidate list.
FrameLoad frameLoad(std::span<const DciCandidate> candidates, const CellConfig& cfg,
                    int sfn, const LoadPolicy& policy = {});

// Distinct C-RNTI-class identities seen in either direction.
int uniqueUes(std::span<const DciCandidate> candidates);

struct LoadSummary {
    double meanLoad = 0.0;
    double minLoad = 0.0;
    double maxLoad = 0.0;
    int framesAnalyzed = 0;
    std::map<int, int> ueHistogram;  // uniqueUes value -> frame count
};

LoadSummary summarize(std::span<const FrameLoad> frames);  // throws EmptyInput
nlohmann::json summaryToJson(const LoadSummary& s);
LoadSummary summaryFromJson(const nlohmann::json& j);

// Report rows: one per accepted candidate.
struct ReportRow {
    std::string sfnLabel;  // "867.3", bare "867" for subframe 0
    std::string rnti;      // uppercase 4-digit hex
    int numErrors = 0;
    std::string dciFormat;
    std::string linkDirection;
    std::string prbSet;
    std::optional<double> powerDb;
};

ReportRow rowFromCandidate(const DciCandidate& c);

enum class ReportFormat { csv, json };

std::string renderReport(std::span<const ReportRow> rows, ReportFormat fmt);
std::vector<ReportRow> parseReportCsv(const std::string& text);

}  // namespace ltedci
