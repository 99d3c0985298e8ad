#include "crnlyap/report.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace crnlyap;
using namespace crnlyap::testing;

TEST_CASE("matrix json round trip keeps exact fractions") {
    Mat A{{1, 2}, {3, 4}};
    A(0, 0) = Rational(-7, 3);
    Json j = mat_to_json(A);
    CHECK(j[0][0].get<std::string>() == "-7/3");
    CHECK(mat_from_json(j) == A);
    Json ragged = Json::parse(R"([["1","2"],["3"]])");
    CHECK_THROWS_AS(mat_from_json(ragged), std::invalid_argument);
}

TEST_CASE("certificate json round trip") {
    ReactionNetwork net = load_fixture("network1.crn");

    PwlrCertificate cert;
    cert.form = CertForm::Convex;
    cert.C = Mat{{1, -1, 0}, {0, 1, -1}, {-1, 0, 1}};
    Json j = certificate_to_json(cert);
    CHECK(j["schema_version"] == 1);
    CHECK(j["form"] == "convex");
    PwlrCertificate back = certificate_from_json(j, net);
    CHECK(back.C == cert.C);
    CHECK(check_certificate(back, net).pass);

    PwlrCertificate gen;
    gen.form = CertForm::General;
    gen.C = Mat{{1, 3, -4}, {3, -3, 0}, {3, -1, -2}};
    gen.H = stoichiometry(net);
    PwlrCertificate gback = certificate_from_json(certificate_to_json(gen), net);
    CHECK(gback.form == CertForm::General);
    CHECK(gback.H == gen.H);
    CHECK(check_certificate(gback, net).pass);
}

TEST_CASE("l1 shorthand certificates") {
    ReactionNetwork net = load_fixture("futile_cycle.crn");
    Json j;
    j["form"] = "l1";
    j["xi"] = Json::array();
    for (int w : {2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1})
        j["xi"].push_back(std::to_string(w));
    PwlrCertificate cert = certificate_from_json(j, net);
    CHECK(cert.form == CertForm::Convex);
    CHECK(cert.C.cols() == net.num_reactions());
}

TEST_CASE("certificate json rejects malformed input") {
    ReactionNetwork net = load_fixture("network1.crn");
    CHECK_THROWS_AS(certificate_from_json(Json::parse("{}"), net),
                    std::invalid_argument);
    Json wrong;
    wrong["form"] = "convex";
    wrong["C"] = Json::parse(R"([["1","2"]])");  // wrong column count
    CHECK_THROWS_AS(certificate_from_json(wrong, net), std::invalid_argument);
}

TEST_CASE("construction outcome serialization carries the evidence") {
    ReactionNetwork ex5 = load_fixture("example5.crn");
    ConstructionOutcome fail = construct_lp(ex5);
    Json jf = outcome_to_json(fail);
    CHECK(jf["success"] == false);
    CHECK(jf.contains("farkas"));

    ReactionNetwork net = load_fixture("network1.crn");
    ConstructionOutcome ok = construct_lp(net);
    Json jo = outcome_to_json(ok);
    CHECK(jo["success"] == true);
    CHECK(jo["check"]["pass"] == true);
    PwlrCertificate back = certificate_from_json(jo["certificate"], net);
    CHECK(check_certificate(back, net).pass);
}

TEST_CASE("analysis pipeline certifies the stable example") {
    ReactionNetwork net = load_fixture("network1.crn");
    AnalyzeOptions opts;
    AnalysisReport rep = analyze(net, opts);
    CHECK(rep.classification == Classification::CertifiedStable);
    CHECK(rep.certified_by.has_value());
    CHECK(rep.scope == "interior");
    CHECK_FALSE(rep.unique_equilibrium);

    opts.assume_isolated = true;
    AnalysisReport global = analyze(net, opts);
    CHECK(global.scope == "global");
    CHECK(global.unique_equilibrium);
    CHECK(global.conservative);
    CHECK(global.num_conservation_laws == 2);

    Json j = analysis_to_json(global);
    CHECK(j["classification"] == "CertifiedStable");
    CHECK(j["conservative"] == true);
    CHECK(analysis_to_json(global).dump() == j.dump());  // deterministic
}

TEST_CASE("analysis pipeline refutes the counterexample") {
    ReactionNetwork net = load_fixture("example2_corrected.crn");
    AnalysisReport rep = analyze(net, {});
    CHECK(rep.classification == Classification::RefutedPWLR);
    Json j = analysis_to_json(rep);
    CHECK(j["necessary"]["refuted"] == true);
}

TEST_CASE("analysis honours a user-supplied partition refinement") {
    ReactionNetwork ex5 = load_fixture("example5.crn");
    AnalyzeOptions opts;
    opts.hhat = Mat{{1, 0, 0, -1}};
    AnalysisReport rep = analyze(ex5, opts);
    CHECK(rep.classification == Classification::CertifiedStable);
}
