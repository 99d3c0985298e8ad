#pragma once

#include <optional>
#include <string>

#include "crnlyap/construct.hpp"
#include "crnlyap/necessary.hpp"

#include "json.hpp"

namespace crnlyap {

using Json = nlohmann::ordered_json;

enum class Classification { CertifiedStable, RefutedPWLR, Inconclusive };

struct AnalyzeOptions {
    std::optional<Mat> hhat;
    int max_iter = 20;
    bool assume_isolated = false;  // isolated-equilibrium premise, user-declared
};

struct AnalysisReport {
    int n = 0, nu = 0;
    bool ag2 = false;
    bool conservative = false;
    int num_conservation_laws = 0;
    NecessaryReport necessary;
    std::vector<ConstructionOutcome> outcomes;
    std::optional<PwlrCertificate> certificate;
    std::optional<std::string> certified_by;
    CheckReport check;
    Classification classification = Classification::Inconclusive;
    std::string scope;               // "interior" or "global" when certified
    bool unique_equilibrium = false;
    std::string error;
};

// necessary checks first, then maxmin -> lp -> iterative; the first
// certificate that clears the full battery decides the classification.
AnalysisReport analyze(const ReactionNetwork& net, const AnalyzeOptions& opts = {});

Json mat_to_json(const Mat& A);
Mat mat_from_json(const Json& j);

Json certificate_to_json(const PwlrCertificate& cert);
// Accepts the emitted schema and the weighted-l1 shorthand {"form":"l1",
// "xi": [...]}, which needs the network for its stoichiometry.
PwlrCertificate certificate_from_json(const Json& j, const ReactionNetwork& net);

Json check_report_to_json(const CheckReport& rep);
Json necessary_to_json(const NecessaryReport& rep);
Json outcome_to_json(const ConstructionOutcome& out);
Json analysis_to_json(const AnalysisReport& rep);

std::string classification_name(Classification c);
std::string method_name(Method m);

}  // namespace crnlyap
