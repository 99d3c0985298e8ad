#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crnlyap/certificate.hpp"
#include "crnlyap/graph.hpp"
#include "crnlyap/partition.hpp"

namespace crnlyap {

struct C4Witness {
    int k = 0;        // half-region (General) / row index (Convex)
    int species = 0;  // reactant species i
    int nu = 0;       // shared sign of {c_kj : j in J_ki}
    // General: (reduced row index, multiplier); Convex: (extended region
    // index, multiplier). Only nonzero multipliers are stored.
    std::vector<std::pair<int, Rational>> lambda;
};

struct CheckReport {
    CertForm form = CertForm::Convex;

    // General battery (Theorem-style conditions over the H partition)
    bool c1 = false, c2 = false, c3 = false, c4 = false;
    bool convex_flag = false;  // eta signs admit a convex reading

    // Convex battery
    bool c2prime = false, c4prime = false;

    bool conditions_pass = false;      // C1-C4, or C2' and C4'
    bool lasalle_interior_pass = false;
    bool lasalle_pass = false;         // including critical subnetworks
    bool pass = false;                 // conditions_pass && lasalle_pass

    std::vector<std::string> notes;

    // General form: region k of the partition carries region_sign[k] *
    // row region_row[k] of C; xi[k] is its nonnegativity multiplier.
    std::vector<int> region_row, region_sign;
    std::vector<Vec> xi;
    std::vector<std::tuple<int, int, Rational>> eta;  // (k, j, eta_kj)

    std::vector<C4Witness> c4_witnesses;
    std::vector<std::vector<int>> ibar;  // LaSalle closure per k
    std::vector<std::string> subnetwork_log;
};

// Optional hook used by lasalle_full when a projected certificate fails on a
// critical subnetwork: should return true iff the subnetwork was certified
// stable by an independent analysis.
using ReanalyzeFn = std::function<bool(const ReactionNetwork&)>;

// Full battery: C1-C4 (General) or C2'/C4' (Convex), then the LaSalle
// condition including critical subnetworks.
CheckReport check_certificate(const PwlrCertificate& cert, const ReactionNetwork& net,
                              const ReanalyzeFn& reanalyze = nullptr);

// Individual conditions (each runs just what it needs and fills the
// relevant CheckReport slice).
CheckReport check_C1(const PwlrCertificate& cert, const Partition& partition);
bool check_C2(const Mat& C, const Mat& gamma);
CheckReport check_C3(const PwlrCertificate& cert, const Partition& partition);
CheckReport check_C4(const PwlrCertificate& cert, const Partition& partition,
                     const ReactionNetwork& net);
CheckReport check_convex(const PwlrCertificate& cert, const ReactionNetwork& net);
CheckReport lasalle_interior(const PwlrCertificate& cert, const ReactionNetwork& net);
CheckReport lasalle_full(const PwlrCertificate& cert, const ReactionNetwork& net,
                         const ReanalyzeFn& reanalyze = nullptr);

// Exact value of Vt at a rate vector. General form asserts that all regions
// containing r agree (continuity witness).
Rational evaluate(const PwlrCertificate& cert, const Vec& r);

// Projection of a certificate onto a subnetwork keeping the given original
// reaction columns; parallel rows merged, zero rows dropped.
PwlrCertificate project_certificate(const PwlrCertificate& cert,
                                    const std::vector<int>& reaction_of);

}  // namespace crnlyap
