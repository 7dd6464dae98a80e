#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "toricstab/catalog.hpp"
#include "toricstab/conical.hpp"
#include "toricstab/errors.hpp"
#include "toricstab/functional.hpp"
#include "toricstab/io.hpp"
#include "toricstab/lattice.hpp"
#include "toricstab/parallel.hpp"
#include "toricstab/soliton.hpp"

using namespace toricstab;

namespace {

struct Options {
    std::string polytope_file;
    std::string catalog_name;
    std::string pl_file;
    std::string theta = "auto";
    double tol = 1e-12;
    std::optional<double> r;
    std::int64_t kmin = 10, kmax = 60, kstep = 5;
    double beta = 1.0;
    std::size_t samples = 500;
    std::uint64_t seed = 1;
    std::string potential = "guillemin";
    std::string out;
    std::string csv;
    std::string plot;
    bool samples_in_output = false;
    int threads = 0;
};

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NoConvergence:
        case ErrorKind::ToleranceNotMet: return 2;
        case ErrorKind::CapacityExceeded: return 3;
        default: return 1;
    }
}

Polytope resolve_polytope(const Options& o, Json& config) {
    if (!o.polytope_file.empty() && !o.catalog_name.empty())
        throw Error(ErrorKind::InvalidArgument, "give either --polytope or --catalog, not both");
    if (!o.catalog_name.empty()) {
        config["catalog"] = o.catalog_name;
        return find_entry(o.catalog_name).polytope;
    }
    if (o.polytope_file.empty()) throw Error(ErrorKind::InvalidArgument, "--polytope <file> or --catalog <name> is required");
    config["polytope"] = o.polytope_file;
    return load_polytope(o.polytope_file);
}

PLConvexFunction resolve_pl(const Options& o, Json& config) {
    if (o.pl_file.empty()) throw Error(ErrorKind::InvalidArgument, "--pl <file> is required");
    config["pl"] = o.pl_file;
    return load_pl(o.pl_file);
}

// "auto" solves for the soliton; otherwise a JSON array inline or in a file.
Eigen::VectorXd resolve_theta(const Options& o, const Polytope& p, Json& config, Json& result) {
    Eigen::VectorXd theta;
    if (o.theta == "auto") {
        const auto s = solve_soliton(p, o.tol);
        theta = s.theta;
        config["theta"] = "auto";
        result["soliton"] = to_json(s);
    } else {
        const bool is_file = !o.theta.empty() && o.theta.front() != '[' && std::filesystem::exists(o.theta);
        theta = is_file ? parse_vector(read_file(o.theta), o.theta) : parse_vector(o.theta, "--theta");
        config["theta"] = to_json(theta);
    }
    if (theta.size() != p.dim())
        throw Error(ErrorKind::DimensionMismatch, "theta has " + std::to_string(theta.size()) +
                                                      " entries, polytope has dimension " + std::to_string(p.dim()));
    return theta;
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty())
        std::cout << text;
    else
        write_file(o.out, text);
}

void emit_run(const Options& o, const Json& config, const Json& result) {
    Json doc;
    doc["config"] = config;
    doc["result"] = result;
    emit(o, dump(doc));
}

std::string svg_plot(const RRReport& r) {
    const double w = 640, h = 400, pad = 60;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& rec : r.records) {
        const double x = 1.0 / static_cast<double>(rec.k);
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, rec.ratio);
        ymax = std::max(ymax, rec.ratio);
    }
    xmin = std::min(xmin, 0.0);
    ymin = std::min(ymin, r.f0_est);
    ymax = std::max(ymax, r.f0_est);
    if (ymax - ymin < 1e-12) {
        ymax += 0.5;
        ymin -= 0.5;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;
    auto px = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (w - 2 * pad); };
    auto py = [&](double y) { return h - pad - (y - ymin) / (ymax - ymin) * (h - 2 * pad); };

    std::ostringstream s;
    s.precision(6);
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\"" << h - pad
      << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << h - pad
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << w / 2 << "\" y=\"" << h - 20 << "\" text-anchor=\"middle\">1/k</text>\n";
    s << "<text x=\"15\" y=\"" << h / 2 << "\" transform=\"rotate(-90 15 " << h / 2
      << ")\" text-anchor=\"middle\">ratio_k</text>\n";
    s << "<text x=\"" << pad << "\" y=\"" << pad - 20 << "\">F0_est = " << r.f0_est << ", F1_est = " << r.f1_est
      << "</text>\n";
    s << "<text x=\"" << pad - 5 << "\" y=\"" << py(ymin) << "\" text-anchor=\"end\">" << ymin << "</text>\n";
    s << "<text x=\"" << pad - 5 << "\" y=\"" << py(ymax) << "\" text-anchor=\"end\">" << ymax << "</text>\n";
    s << "<text x=\"" << px(xmax) << "\" y=\"" << h - pad + 18 << "\" text-anchor=\"middle\">" << xmax << "</text>\n";
    s << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
    for (int i = 0; i <= 100; ++i) {
        const double x = xmin + (xmax - xmin) * i / 100.0;
        s << px(x) << "," << py(r.fit.a + r.fit.b * x + r.fit.c * x * x) << " ";
    }
    s << "\"/>\n";
    for (const auto& rec : r.records)
        s << "<circle cx=\"" << px(1.0 / static_cast<double>(rec.k)) << "\" cy=\"" << py(rec.ratio)
          << "\" r=\"3\" fill=\"crimson\"/>\n";
    s << "</svg>\n";
    return s.str();
}

int run_polytope_check(const Options& o, const std::string& file) {
    Json config{{"subcommand", "polytope check"}, {"file", file}};
    const Polytope p = load_polytope(file);
    Json vertices = Json::array();
    for (const auto& v : p.vertices()) {
        Json row = Json::array();
        for (const auto& x : v) row.push_back(format_rational(x));
        vertices.push_back(row);
    }
    Json result = to_json(p);
    result["valid"] = true;
    result["vertices"] = vertices;
    result["facet_count"] = p.facets().size();
    result["volume"] = format_rational(p.volume_exact());
    result["boundary_measure"] = p.boundary_measure();
    if (auto b = p.boundary_measure_exact()) result["boundary_measure_exact"] = format_rational(*b);
    emit_run(o, config, result);
    return 0;
}

int run_catalog_list(const Options& o) {
    std::ostringstream s;
    for (const auto& e : catalog())
        s << e.name << "\tdim=" << e.polytope.dim() << "\tfacets=" << e.polytope.facets().size() << "\t"
          << e.description << "\n";
    emit(o, s.str());
    return 0;
}

int run_soliton(const Options& o) {
    Json config{{"subcommand", "soliton"}};
    const auto p = resolve_polytope(o, config);
    config["tol"] = o.tol;
    emit_run(o, config, to_json(solve_soliton(p, o.tol)));
    return 0;
}

int run_futaki(const Options& o) {
    Json config{{"subcommand", "futaki"}};
    const auto p = resolve_polytope(o, config);
    const auto u = resolve_pl(o, config);
    Json result;
    const auto theta = resolve_theta(o, p, config, result);
    const auto l = l_functional(p, theta, u);
    result["L"] = l.value;
    result["boundary"] = l.boundary;
    result["interior"] = l.interior;
    result["F1"] = l.value / (2.0 * p.volume());
    if (o.r) {
        config["R"] = *o.r;
        result["F0_at_R"] = futaki_f0(p, theta, u, *o.r);
    }
    emit_run(o, config, result);
    return 0;
}

int run_rr(const Options& o) {
    Json config{{"subcommand", "rr"}};
    const auto p = resolve_polytope(o, config);
    const auto u = resolve_pl(o, config);
    if (!o.r) throw Error(ErrorKind::InvalidArgument, "--R is required");
    config["R"] = *o.r;
    config["kmin"] = o.kmin;
    config["kmax"] = o.kmax;
    config["kstep"] = o.kstep;
    Json result;
    const auto theta = resolve_theta(o, p, config, result);
    const auto report = riemann_roch_check(p, theta, u, *o.r, k_range(o.kmin, o.kmax, o.kstep));
    result["report"] = to_json(report);
    if (!o.csv.empty()) write_report(report, o.csv, ReportFormat::Csv);
    if (!o.plot.empty()) write_file(o.plot, svg_plot(report));
    emit_run(o, config, result);
    return 0;
}

int run_conical(const Options& o) {
    Json config{{"subcommand", "conical"}};
    const auto p = resolve_polytope(o, config);
    config["beta"] = o.beta;
    Json result;
    const auto theta = resolve_theta(o, p, config, result);
    const auto data = angles_and_beta_bar(p, theta, o.beta);
    result["conical"] = to_json(data);
    if (!o.pl_file.empty()) {
        const auto u = resolve_pl(o, config);
        result["L_beta_tau"] = to_json(l_beta_tau(p, theta, o.beta, data.tau, u));
    }
    emit_run(o, config, result);
    return 0;
}

int run_scan(const Options& o) {
    Json config{{"subcommand", "scan"}};
    const auto p = resolve_polytope(o, config);
    config["samples"] = o.samples;
    config["seed"] = o.seed;
    Json result;
    const auto theta = resolve_theta(o, p, config, result);
    const auto scan = stability_margin(p, theta, o.samples, o.seed);
    result["scan"] = to_json(scan, o.samples_in_output);
    if (!o.csv.empty()) write_report(scan, o.csv, ReportFormat::Csv);
    emit_run(o, config, result);
    return 0;
}

int run_energy(const Options& o) {
    Json config{{"subcommand", "energy"}};
    const auto p = resolve_polytope(o, config);
    config["potential"] = o.potential;
    Json result;
    const auto theta = resolve_theta(o, p, config, result);
    if (o.potential == "guillemin") {
        result["k_energy"] = to_json(k_energy(p, theta, SymplecticPotential::guillemin(p)));
    } else if (o.potential == "conical") {
        config["beta"] = o.beta;
        const auto data = angles_and_beta_bar(p, theta, o.beta);
        result["conical"] = to_json(data);
        const auto pot = SymplecticPotential::conical(p, o.beta, data.tau);
        result["k_energy"] = to_json(conical_k_energy(p, theta, o.beta, pot));
    } else {
        throw Error(ErrorKind::InvalidArgument, "--potential must be guillemin or conical");
    }
    emit_run(o, config, result);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"toricstab: soliton vector fields, Futaki invariants and lattice sums on reflexive polytopes"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--threads", o.threads, "worker threads (default: TORICSTAB_THREADS or 1)")->check(CLI::PositiveNumber);
    app.add_option("--out", o.out, "write the result here instead of standard output");

    auto add_polytope = [&](CLI::App* sub) {
        sub->add_option("--polytope", o.polytope_file, "polytope JSON file");
        sub->add_option("--catalog", o.catalog_name, "built-in catalog entry instead of a file");
    };
    auto add_theta = [&](CLI::App* sub) {
        sub->add_option("--theta", o.theta, "auto, or a JSON vector (inline or file)")->capture_default_str();
        sub->add_option("--tol", o.tol, "soliton tolerance")->capture_default_str();
    };

    auto* polytope = app.add_subcommand("polytope", "polytope utilities");
    polytope->require_subcommand(1);
    std::string check_file;
    auto* check = polytope->add_subcommand("check", "validate a polytope file");
    check->add_option("file", check_file, "polytope JSON file")->required();

    auto* cat = app.add_subcommand("catalog", "built-in polytopes");
    cat->require_subcommand(1);
    auto* list = cat->add_subcommand("list", "print names, dimensions and facet counts");

    auto* soliton = app.add_subcommand("soliton", "solve for the soliton vector field");
    add_polytope(soliton);
    soliton->add_option("--tol", o.tol, "residual tolerance")->capture_default_str();

    auto* futaki = app.add_subcommand("futaki", "L(u), F1 and F0 for a PL function");
    add_polytope(futaki);
    add_theta(futaki);
    futaki->add_option("--pl", o.pl_file, "PL function JSON file")->required();
    futaki->add_option("--R", o.r, "constant R for F0");

    auto* rr = app.add_subcommand("rr", "lattice-sum expansion check");
    add_polytope(rr);
    add_theta(rr);
    rr->add_option("--pl", o.pl_file, "PL function JSON file")->required();
    rr->add_option("--R", o.r, "constant R")->required();
    rr->add_option("--kmin", o.kmin)->capture_default_str();
    rr->add_option("--kmax", o.kmax)->capture_default_str();
    rr->add_option("--kstep", o.kstep)->capture_default_str();
    rr->add_option("--csv", o.csv, "also write k,N_k,S1,S2,ratio rows here");
    rr->add_option("--plot", o.plot, "write an SVG of ratio_k against 1/k here");

    auto* conical = app.add_subcommand("conical", "tau, cone angles and beta_bar");
    add_polytope(conical);
    add_theta(conical);
    conical->add_option("--beta", o.beta, "global angle parameter")->required();
    conical->add_option("--pl", o.pl_file, "PL function for L_beta_tau");

    auto* scan = app.add_subcommand("scan", "empirical stability margin");
    add_polytope(scan);
    add_theta(scan);
    scan->add_option("--samples", o.samples)->capture_default_str();
    scan->add_option("--seed", o.seed)->capture_default_str();
    scan->add_option("--csv", o.csv, "also write per-sample rows here");
    scan->add_flag("--all-samples", o.samples_in_output, "include per-sample records in the JSON");

    auto* energy = app.add_subcommand("energy", "reduced K-energy of a Guillemin potential");
    add_polytope(energy);
    add_theta(energy);
    energy->add_option("--potential", o.potential, "guillemin or conical")->capture_default_str();
    energy->add_option("--beta", o.beta, "angle parameter for the conical potential")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (o.threads > 0) set_thread_count(o.threads);
    try {
        if (check->parsed()) return run_polytope_check(o, check_file);
        if (list->parsed()) return run_catalog_list(o);
        if (soliton->parsed()) return run_soliton(o);
        if (futaki->parsed()) return run_futaki(o);
        if (rr->parsed()) return run_rr(o);
        if (conical->parsed()) return run_conical(o);
        if (scan->parsed()) return run_scan(o);
        if (energy->parsed()) return run_energy(o);
    } catch (const Error& e) {
        std::cerr << "toricstab: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "toricstab: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
