#include "ltedci/load.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace ltedci {

namespace {

bool countsTowardLoad(const DciCandidate& c, const LoadPolicy& policy) {
    if (c.direction == LinkDirection::uplink && !policy.includeUplink) return false;
    const RntiClass cls = classifyRnti(c.rnti);
    if (cls == RntiClass::reserved) return false;
    if (cls != RntiClass::cRnti && !policy.includeSystem) return false;
    return true;
}

}  // namespace

FrameLoad frameLoad(std::span<const DciCandidate> candidates, const CellConfig& cfg,
                    int sfn, const LoadPolicy& policy) {
    FrameLoad fl;
    fl.sfn = sfn;
    fl.nTotal = cfg.nDlRb * 10;

    int assigned = 0;
    bool clamped = false;
    for (int sf = 0; sf < 10; ++sf) {
        std::set<int> prbUnion;
        int prbSum = 0;
        for (const DciCandidate& c : candidates) {
            if (c.subframe != sf || !countsTowardLoad(c, policy)) continue;
            if (policy.unionPrbs)
                prbUnion.insert(c.prbSet.indices.begin(), c.prbSet.indices.end());
            else
                prbSum += static_cast<int>(c.prbSet.indices.size());
        }
        if (policy.unionPrbs) {
            assigned += static_cast<int>(prbUnion.size());
        } else {
            if (prbSum > cfg.nDlRb) {
                prbSum = cfg.nDlRb;
                clamped = true;
            }
            assigned += prbSum;
        }
    }
    fl.nAssigned = assigned;
    fl.fraction = fl.nTotal > 0 ? static_cast<double>(assigned) / fl.nTotal : 0.0;
    fl.uniqueUes = uniqueUes(candidates);
    fl.overlapClamped = clamped;
    return fl;
}

int uniqueUes(std::span<const DciCandidate> candidates) {
    std::set<uint16_t> ids;
    for (const DciCandidate& c : candidates)
        if (classifyRnti(c.rnti) == RntiClass::cRnti) ids.insert(c.rnti);
    return static_cast<int>(ids.size());
}

LoadSummary summarize(std::span<const FrameLoad> frames) {
    if (frames.empty()) fail(Err::EmptyInput, "no frames to summarize");
    LoadSummary s;
    s.framesAnalyzed = static_cast<int>(frames.size());
    s.minLoad = frames[0].fraction;
    s.maxLoad = frames[0].fraction;
    double acc = 0.0;
    for (const FrameLoad& f : frames) {
        acc += f.fraction;
        s.minLoad = std::min(s.minLoad, f.fraction);
        s.maxLoad = std::max(s.maxLoad, f.fraction);
        ++s.ueHistogram[f.uniqueUes];
    }
    s.meanLoad = acc / static_cast<double>(frames.size());
    return s;
}

nlohmann::json summaryToJson(const LoadSummary& s) {
    nlohmann::json j;
    j["meanLoad"] = s.meanLoad;
    j["minLoad"] = s.minLoad;
    j["maxLoad"] = s.maxLoad;
    j["framesAnalyzed"] = s.framesAnalyzed;
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [ues, count] : s.ueHistogram) hist[std::to_string(ues)] = count;
    j["ueHistogram"] = hist;
    return j;
}

LoadSummary summaryFromJson(const nlohmann::json& j) {
    LoadSummary s;
    try {
        s.meanLoad = j.at("meanLoad").get<double>();
        s.minLoad = j.at("minLoad").get<double>();
        s.maxLoad = j.at("maxLoad").get<double>();
        s.framesAnalyzed = j.at("framesAnalyzed").get<int>();
        for (const auto& [key, value] : j.at("ueHistogram").items())
            s.ueHistogram[std::stoi(key)] = value.get<int>();
    } catch (const nlohmann::json::exception& e) {
        fail(Err::InvalidFieldValue, std::string("bad summary: ") + e.what());
    }
    return s;
}

namespace {

std::string formatPower(double db) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", db);
    return buf;
}

}  // namespace

ReportRow rowFromCandidate(const DciCandidate& c) {
    ReportRow r;
    r.sfnLabel = c.subframe == 0 ? std::to_string(c.sfn)
                                 : std::to_string(c.sfn) + "." + std::to_string(c.subframe);
    char hex[8];
    std::snprintf(hex, sizeof hex, "%04X", c.rnti);
    r.rnti = hex;
    r.numErrors = c.numErrors;
    r.dciFormat = dciFormatName(c.format);
    r.linkDirection = linkDirectionName(c.direction);
    r.prbSet = prbSetToString(c.prbSet);
    r.powerDb = c.powerDb;
    return r;
}

std::string renderReport(std::span<const ReportRow> rows, ReportFormat fmt) {
    if (fmt == ReportFormat::json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const ReportRow& r : rows) {
            nlohmann::json j;
            j["SFN"] = r.sfnLabel;
            j["RNTI"] = r.rnti;
            j["NumErrors"] = r.numErrors;
            j["DCIFormat"] = r.dciFormat;
            j["LinkDirection"] = r.linkDirection;
            j["PRBSet"] = r.prbSet;
            if (r.powerDb) j["Power"] = *r.powerDb;
            arr.push_back(j);
        }
        return arr.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "SFN,RNTI,NumErrors,DCIFormat,LinkDirection,PRBSet,Power\n";
    for (const ReportRow& r : rows) {
        out << r.sfnLabel << ',' << r.rnti << ',' << r.numErrors << ',' << r.dciFormat
            << ',' << r.linkDirection << ',' << '"' << r.prbSet << '"' << ',';
        if (r.powerDb) out << formatPower(*r.powerDb);
        out << '\n';
    }
    return out.str();
}

std::vector<ReportRow> parseReportCsv(const std::string& text) {
    std::vector<ReportRow> rows;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("SFN,", 0) == 0) continue;  // header
        }
        // Split on commas outside quotes.
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (char ch : line) {
            if (ch == '"') {
                quoted = !quoted;
            } else if (ch == ',' && !quoted) {
                cells.push_back(cell);
                cell.clear();
            } else {
                cell.push_back(ch);
            }
        }
        cells.push_back(cell);
        if (cells.size() != 7)
            fail(Err::InvalidFieldValue, "report row must have 7 columns: " + line);
        ReportRow r;
        r.sfnLabel = cells[0];
        r.rnti = cells[1];
        try {
            r.numErrors = std::stoi(cells[2]);
        } catch (const std::exception&) {
            fail(Err::InvalidFieldValue, "bad NumErrors in row: " + line);
        }
        r.dciFormat = cells[3];
        r.linkDirection = cells[4];
        r.prbSet = cells[5];
        if (!cells[6].empty()) {
            try {
                r.powerDb = std::stod(cells[6]);
            } catch (const std::exception&) {
                fail(Err::InvalidFieldValue, "bad Power in row: " + line);
            }
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace ltedci
