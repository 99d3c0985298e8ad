#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "crnlyap/report.hpp"
#include "crnlyap/sim.hpp"

using namespace crnlyap;

namespace {

constexpr int kExitCertified = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInputError = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ReactionNetwork load_network(const std::string& path) {
    std::string text = read_file(path);
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        throw std::runtime_error(path + ": no reactions");
    ReactionNetwork net = parse_network(text);
    if (net.num_reactions() == 0) throw std::runtime_error(path + ": no reactions");
    return net;
}

Mat load_matrix(const std::string& path) {
    return mat_from_json(Json::parse(read_file(path)));
}

void write_or_print(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << content;
    }
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

Kinetics make_kinetics(const std::string& kind, const std::vector<double>& k,
                       const std::vector<std::string>& exprs, double hill_n) {
    if (kind == "mass-action") return MassAction{k};
    if (kind == "mm") return MichaelisMenten{k, {}};
    if (kind == "hill") {
        Hill h;
        h.k = k;
        if (hill_n != 1.0) {
            // uniform exponent for every reactant occurrence
            h.n.resize(k.size());
        }
        return h;
    }
    if (kind == "tabulated") return Tabulated{exprs};
    throw std::runtime_error("unknown kinetics '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PWLR Lyapunov analysis of chemical reaction networks"};
    app.require_subcommand(1);

    std::string file, cert_path, hhat_path, out_path, method = "lp";
    std::string kinetics_kind = "mass-action", x0_csv, k_csv;
    std::vector<std::string> rate_exprs;
    int max_iter = 20;
    bool assume_isolated = false, want_general = false;
    double t_end = 100.0, hill_n = 1.0;
    int samples = 400;

    auto* parse_cmd = app.add_subcommand("parse", "parse a .crn file and echo it");
    parse_cmd->add_option("file", file)->required();

    auto* analyze_cmd = app.add_subcommand("analyze", "full pipeline: refute or certify");
    analyze_cmd->add_option("file", file)->required();
    analyze_cmd->add_option("--hhat", hhat_path, "extra partition rows (JSON matrix)");
    analyze_cmd->add_option("--max-iter", max_iter);
    analyze_cmd->add_flag("--assume-isolated", assume_isolated,
                          "declare the isolated-equilibrium premise");
    analyze_cmd->add_option("-o,--out", out_path, "write the JSON report here");

    auto* construct_cmd = app.add_subcommand("construct", "synthesize a certificate");
    construct_cmd->add_option("file", file)->required();
    construct_cmd
        ->add_option("--method", method, "lp | iter | maxmin | maxmin-rev")
        ->check(CLI::IsMember({"lp", "iter", "maxmin", "maxmin-rev"}));
    construct_cmd->add_option("--hhat", hhat_path);
    construct_cmd->add_option("--max-iter", max_iter);
    construct_cmd->add_flag("--general", want_general, "lp: emit the general form");
    construct_cmd->add_option("-o,--out", out_path);

    auto* check_cmd = app.add_subcommand("check", "verify a certificate file");
    check_cmd->add_option("file", file)->required();
    check_cmd->add_option("--certificate", cert_path)->required();

    auto* necessary_cmd = app.add_subcommand("necessary", "refutation battery only");
    necessary_cmd->add_option("file", file)->required();

    auto* sim_cmd = app.add_subcommand("simulate", "integrate kinetics, write CSV");
    sim_cmd->add_option("file", file)->required();
    sim_cmd->add_option("--kinetics", kinetics_kind, "mass-action | mm | hill | tabulated");
    sim_cmd->add_option("--k", k_csv, "rate constants, comma separated");
    sim_cmd->add_option("--rate", rate_exprs, "tabulated: one expression per reaction");
    sim_cmd->add_option("--hill-n", hill_n, "hill: uniform exponent");
    sim_cmd->add_option("--x0", x0_csv)->required();
    sim_cmd->add_option("--t-end", t_end);
    sim_cmd->add_option("--samples", samples);
    sim_cmd->add_option("--certificate", cert_path, "monitor this certificate's value");
    sim_cmd->add_option("-o,--out", out_path, "CSV path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (parse_cmd->parsed()) {
            ReactionNetwork net = load_network(file);
            std::cout << to_crn(net);
            return kExitCertified;
        }
        if (analyze_cmd->parsed()) {
            ReactionNetwork net = load_network(file);
            AnalyzeOptions opts;
            if (!hhat_path.empty()) opts.hhat = load_matrix(hhat_path);
            opts.max_iter = max_iter;
            opts.assume_isolated = assume_isolated;
            AnalysisReport rep = analyze(net, opts);
            write_or_print(out_path, analysis_to_json(rep).dump(2));
            if (out_path.empty()) std::cout << "\n";
            std::cerr << classification_name(rep.classification) << "\n";
            switch (rep.classification) {
                case Classification::CertifiedStable: return kExitCertified;
                case Classification::RefutedPWLR: return kExitRefuted;
                case Classification::Inconclusive: return kExitInconclusive;
            }
        }
        if (construct_cmd->parsed()) {
            ReactionNetwork net = load_network(file);
            ConstructionOutcome out;
            if (method == "lp") {
                std::optional<Mat> hhat;
                if (!hhat_path.empty()) hhat = load_matrix(hhat_path);
                out = construct_lp(net, hhat ? &*hhat : nullptr, !want_general);
            } else if (method == "iter") {
                out = construct_iterative(net, nullptr, max_iter);
            } else if (method == "maxmin") {
                out = construct_maxmin(net);
            } else {
                out = construct_maxmin_reversible(net);
            }
            Json j = outcome_to_json(out);
            if (out.success() && !out_path.empty()) {
                write_or_print(out_path, certificate_to_json(*out.certificate).dump(2));
                std::cerr << j.dump(2) << "\n";
            } else {
                std::cout << j.dump(2) << "\n";
            }
            return out.success() ? kExitCertified : kExitInconclusive;
        }
        if (check_cmd->parsed()) {
            ReactionNetwork net = load_network(file);
            PwlrCertificate cert =
                certificate_from_json(Json::parse(read_file(cert_path)), net);
            CheckReport rep = check_certificate(cert, net);
            std::cout << check_report_to_json(rep).dump(2) << "\n";
            return rep.pass ? kExitCertified : kExitRefuted;
        }
        if (necessary_cmd->parsed()) {
            ReactionNetwork net = load_network(file);
            NecessaryReport rep = check_necessary(net);
            std::cout << necessary_to_json(rep).dump(2) << "\n";
            return rep.refuted() ? kExitRefuted : kExitInconclusive;
        }
        if (sim_cmd->parsed()) {
            ReactionNetwork net = load_network(file);
            std::vector<double> x0 = parse_doubles(x0_csv);
            std::vector<double> k = k_csv.empty()
                                        ? std::vector<double>(net.num_reactions(), 1.0)
                                        : parse_doubles(k_csv);
            Kinetics kin = make_kinetics(kinetics_kind, k, rate_exprs, hill_n);
            if (auto* h = std::get_if<Hill>(&kin); h && hill_n != 1.0) {
                h->n.assign(net.num_reactions(), {});
                for (int j = 0; j < net.num_reactions(); ++j)
                    for (const auto& [i, a] : net.reactions[j].reactants)
                        h->n[j][i] = hill_n;
            }
            SimControls controls;
            controls.t_end = t_end;
            controls.samples = samples;
            Trajectory traj = integrate(net, kin, x0, controls);
            if (!traj.ok && traj.times.empty())
                throw std::runtime_error("simulation failed: " + traj.diagnostics);
            std::vector<double> V;
            const std::vector<double>* vptr = nullptr;
            if (!cert_path.empty()) {
                PwlrCertificate cert =
                    certificate_from_json(Json::parse(read_file(cert_path)), net);
                V = certificate_values(cert, traj);
                vptr = &V;
            }
            write_or_print(out_path, trajectory_csv(net, traj, vptr));
            if (!traj.ok) {
                std::cerr << traj.diagnostics << "\n";
                return kExitInconclusive;
            }
            return kExitCertified;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
