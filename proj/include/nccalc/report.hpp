#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace nccalc {

enum class Verdict { Pass, Fail, Gray, Skipped };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Gray: return "gray";
        case Verdict::Skipped: return "skipped";
    }
    return "?";
}

/// pass at or below `tol`, fail above `fail_threshold`, gray in between.
inline Verdict classify(double residual, double tol, double fail_threshold = 1e-4) {
    if (residual <= tol) return Verdict::Pass;
    if (residual > fail_threshold) return Verdict::Fail;
    return Verdict::Gray;
}

/// Outcome of one law/identity check. Witness inputs are serialized inline so
/// a failure can be replayed exactly; `seed` is the sub-seed that generated
/// the witness.
struct CheckReport {
    std::string check;
    Verdict verdict = Verdict::Skipped;
    double residual = 0.0;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    nlohmann::ordered_json witness = nlohmann::ordered_json::object();
    std::string notes;

    bool passed() const { return verdict == Verdict::Pass; }
    bool failed() const { return verdict == Verdict::Fail; }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["check"] = check;
        j["verdict"] = verdict_name(verdict);
        j["residual"] = residual;
        j["tolerance"] = tolerance;
        j["seed"] = seed;
        j["witness"] = witness;
        if (!notes.empty()) j["notes"] = notes;
        return j;
    }
};

inline CheckReport make_report(std::string check, double residual, double tol,
                               double fail_threshold = 1e-4) {
    CheckReport r;
    r.check = std::move(check);
    r.residual = residual;
    r.tolerance = tol;
    r.verdict = classify(residual, tol, fail_threshold);
    return r;
}

inline nlohmann::ordered_json reports_to_json(const std::vector<CheckReport>& reports) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    return arr;
}

struct SuiteSummary {
    int pass = 0, fail = 0, gray = 0, skipped = 0;
};

inline SuiteSummary summarize(const std::vector<CheckReport>& reports) {
    SuiteSummary s;
    for (const auto& r : reports) {
        switch (r.verdict) {
            case Verdict::Pass: ++s.pass; break;
            case Verdict::Fail: ++s.fail; break;
            case Verdict::Gray: ++s.gray; break;
            case Verdict::Skipped: ++s.skipped; break;
        }
    }
    return s;
}

}  // namespace nccalc
