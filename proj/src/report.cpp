#include "crnlyap/report.hpp"

namespace crnlyap {

namespace {

Json vec_to_json(const Vec& v) {
    Json j = Json::array();
    for (const auto& q : v) j.push_back(to_string(q));
    return j;
}

Vec vec_from_json(const Json& j) {
    Vec v;
    for (const auto& e : j) v.push_back(parse_rational(e.get<std::string>()));
    return v;
}

}  // namespace

Json mat_to_json(const Mat& A) {
    Json j = Json::array();
    for (int i = 0; i < A.rows(); ++i) j.push_back(vec_to_json(A.row(i)));
    return j;
}

Mat mat_from_json(const Json& j) {
    std::vector<Vec> rows;
    int cols = -1;
    for (const auto& r : j) {
        Vec v = vec_from_json(r);
        if (cols >= 0 && int(v.size()) != cols)
            throw std::invalid_argument("matrix JSON: ragged rows");
        cols = int(v.size());
        rows.push_back(std::move(v));
    }
    return Mat::from_rows(rows, std::max(cols, 0));
}

Json certificate_to_json(const PwlrCertificate& cert) {
    Json j;
    j["schema_version"] = 1;
    j["form"] = cert.form == CertForm::Convex ? "convex" : "general";
    j["C"] = mat_to_json(cert.C);
    if (cert.form == CertForm::General) j["H"] = mat_to_json(cert.H);
    return j;
}

PwlrCertificate certificate_from_json(const Json& j, const ReactionNetwork& net) {
    if (!j.contains("form")) throw std::invalid_argument("certificate JSON: missing form");
    std::string form = j.at("form").get<std::string>();
    if (form == "l1") {
        Vec xi = vec_from_json(j.at("xi"));
        if (int(xi.size()) != net.num_species())
            throw std::invalid_argument("certificate JSON: xi length != species count");
        return l1_candidate(xi, stoichiometry(net));
    }
    PwlrCertificate cert;
    cert.C = mat_from_json(j.at("C"));
    if (cert.C.cols() != net.num_reactions())
        throw std::invalid_argument("certificate JSON: column count != reaction count");
    if (form == "convex") {
        cert.form = CertForm::Convex;
    } else if (form == "general") {
        cert.form = CertForm::General;
        cert.H = mat_from_json(j.at("H"));
        if (cert.H.cols() != net.num_reactions())
            throw std::invalid_argument("certificate JSON: H column count != reaction count");
    } else {
        throw std::invalid_argument("certificate JSON: unknown form '" + form + "'");
    }
    return cert;
}

Json check_report_to_json(const CheckReport& rep) {
    Json j;
    j["form"] = rep.form == CertForm::Convex ? "convex" : "general";
    if (rep.form == CertForm::General) {
        j["c1"] = rep.c1;
        j["c2"] = rep.c2;
        j["c3"] = rep.c3;
        j["c4"] = rep.c4;
        j["convex_flag"] = rep.convex_flag;
    } else {
        j["c2prime"] = rep.c2prime;
        j["c4prime"] = rep.c4prime;
    }
    j["conditions_pass"] = rep.conditions_pass;
    j["lasalle_interior_pass"] = rep.lasalle_interior_pass;
    j["lasalle_pass"] = rep.lasalle_pass;
    j["pass"] = rep.pass;
    j["notes"] = rep.notes;
    j["subnetworks"] = rep.subnetwork_log;
    return j;
}

Json necessary_to_json(const NecessaryReport& rep) {
    Json j;
    Json t8;
    t8["pass"] = rep.theorem8.pass;
    t8["strict_pass"] = rep.theorem8.strict_pass;
    Json regions = Json::array();
    for (const auto& rr : rep.theorem8.regions) {
        Json r;
        r["region"] = rr.region;
        r["feasible"] = rr.feasible;
        r["strict_feasible"] = rr.strict_feasible;
        if (rr.feasible) r["zeta"] = vec_to_json(rr.zeta);
        regions.push_back(std::move(r));
    }
    t8["regions"] = std::move(regions);
    j["theorem8"] = std::move(t8);
    if (rep.deadlock) {
        j["critical_deadlock"] = rep.deadlock->members;
    } else {
        j["critical_deadlock"] = nullptr;
    }
    Json p0;
    switch (rep.p0.verdict) {
        case P0Verdict::RobustlyP0: p0["verdict"] = "robustly-p0"; break;
        case P0Verdict::Counterexample: p0["verdict"] = "counterexample"; break;
        case P0Verdict::Inconclusive: p0["verdict"] = "inconclusive"; break;
    }
    p0["detail"] = rep.p0.detail;
    if (rep.p0.verdict == P0Verdict::Counterexample) {
        p0["minor"] = rep.p0.minor;
        p0["minor_value"] = rep.p0.minor_value;
    }
    j["p0"] = std::move(p0);
    j["refuted"] = rep.refuted();
    return j;
}

std::string method_name(Method m) {
    switch (m) {
        case Method::LP: return "lp";
        case Method::Iterative: return "iterative";
        case Method::MaxMin: return "maxmin";
        case Method::MaxMinReversible: return "maxmin-reversible";
    }
    return "?";
}

Json outcome_to_json(const ConstructionOutcome& out) {
    Json j;
    j["method"] = method_name(out.method);
    j["success"] = out.success();
    if (!out.diagnostics.empty()) j["diagnostics"] = out.diagnostics;
    if (!out.c2_status.empty()) j["c2_status"] = out.c2_status;
    if (!out.farkas.empty()) j["farkas"] = vec_to_json(out.farkas);
    if (out.method == Method::MaxMin || out.method == Method::MaxMinReversible) {
        j["common_ancestor_claim"] = out.common_ancestor_claim;
        j["conservative_claim"] = out.conservative_claim;
    }
    if (!out.iteration_rows.empty()) j["iteration_rows"] = out.iteration_rows;
    if (out.certificate) {
        j["certificate"] = certificate_to_json(*out.certificate);
        j["check"] = check_report_to_json(out.report);
    }
    return j;
}

std::string classification_name(Classification c) {
    switch (c) {
        case Classification::CertifiedStable: return "CertifiedStable";
        case Classification::RefutedPWLR: return "RefutedPWLR";
        case Classification::Inconclusive: return "Inconclusive";
    }
    return "?";
}

Json analysis_to_json(const AnalysisReport& rep) {
    Json j;
    j["schema_version"] = 1;
    j["species"] = rep.n;
    j["reactions"] = rep.nu;
    j["positive_kernel_vector"] = rep.ag2;
    j["conservative"] = rep.conservative;
    j["conservation_laws"] = rep.num_conservation_laws;
    j["necessary"] = necessary_to_json(rep.necessary);
    Json outs = Json::array();
    for (const auto& o : rep.outcomes) outs.push_back(outcome_to_json(o));
    j["constructions"] = std::move(outs);
    if (rep.certificate) {
        j["certificate"] = certificate_to_json(*rep.certificate);
        j["certified_by"] = rep.certified_by ? Json(*rep.certified_by) : Json(nullptr);
        j["check"] = check_report_to_json(rep.check);
    }
    j["classification"] = classification_name(rep.classification);
    if (rep.classification == Classification::CertifiedStable) {
        j["scope"] = rep.scope;
        j["unique_equilibrium"] = rep.unique_equilibrium;
    }
    if (!rep.error.empty()) j["error"] = rep.error;
    return j;
}

AnalysisReport analyze(const ReactionNetwork& net, const AnalyzeOptions& opts) {
    AnalysisReport rep;
    rep.n = net.num_species();
    rep.nu = net.num_reactions();
    Mat gamma = stoichiometry(net);
    rep.ag2 = positive_vector_in_kernel(gamma).has_value();
    ConservationLaws laws = conservation_laws(gamma);
    rep.conservative = laws.conservative;
    rep.num_conservation_laws = int(laws.basis.size());

    rep.necessary = check_necessary(net);
    if (rep.necessary.refuted()) {
        rep.classification = Classification::RefutedPWLR;
        return rep;
    }

    // Subnetworks that defeat a projected certificate get an independent
    // construction attempt of their own.
    ReanalyzeFn hook = [&](const ReactionNetwork& sub) {
        ConstructionOutcome o = construct_maxmin(sub);
        if (o.success() && o.report.pass) return true;
        try {
            o = construct_lp(sub);
        } catch (const std::exception&) {
            return false;
        }
        return o.success() && o.report.pass;
    };

    auto attempt = [&](ConstructionOutcome outcome) {
        if (outcome.success() &&
            rep.classification != Classification::CertifiedStable) {
            CheckReport chk = check_certificate(*outcome.certificate, net, hook);
            if (chk.pass) {
                rep.certificate = outcome.certificate;
                rep.certified_by = method_name(outcome.method);
                rep.check = chk;
                rep.classification = Classification::CertifiedStable;
                bool global = rep.conservative && opts.assume_isolated;
                rep.scope = global ? "global" : "interior";
                rep.unique_equilibrium = global;
            }
        }
        rep.outcomes.push_back(std::move(outcome));
    };

    attempt(construct_maxmin(net));
    if (rep.classification != Classification::CertifiedStable) {
        try {
            attempt(construct_lp(net, opts.hhat ? &*opts.hhat : nullptr));
        } catch (const std::exception& e) {
            rep.error = std::string("lp construction: ") + e.what();
        }
    }
    if (rep.classification != Classification::CertifiedStable) {
        try {
            attempt(construct_iterative(net, nullptr, opts.max_iter));
        } catch (const std::exception& e) {
            rep.error = std::string("iterative construction: ") + e.what();
        }
    }
    return rep;
}

}  // namespace crnlyap
