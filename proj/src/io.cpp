#include "toricstab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "toricstab/errors.hpp"

namespace toricstab {

namespace {

[[noreturn]] void parse_fail(const std::string& context, const std::string& what) {
    throw Error(ErrorKind::ParseError, context + ": " + what);
}

Json parse_json(const std::string& text, const std::string& context) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        parse_fail(context, e.what());
    }
}

Rational parse_scalar(const Json& j, const std::string& context, const std::string& field) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const Error& e) {
            parse_fail(context, "field " + field + ": " + e.what());
        }
    }
    parse_fail(context, "field " + field + " must be an integer or a \"p/q\" string");
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    out << content;
    if (!out) throw Error(ErrorKind::InvalidArgument, "write failed for '" + path + "'");
}

Polytope parse_polytope(const std::string& text, const std::string& context, bool require_reflexive) {
    const Json j = parse_json(text, context);
    if (!j.is_object()) parse_fail(context, "top level must be an object");
    if (!j.contains("normals") || !j["normals"].is_array()) parse_fail(context, "missing array field normals");
    const auto& rows = j["normals"];
    if (rows.empty()) parse_fail(context, "normals is empty");
    long dim = -1;
    if (j.contains("dim")) {
        if (!j["dim"].is_number_integer() || j["dim"].get<long>() < 1)
            parse_fail(context, "field dim must be a positive integer");
        dim = j["dim"].get<long>();
    }
    std::vector<IntVector> normals;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string field = "normals[" + std::to_string(i) + "]";
        if (!rows[i].is_array()) parse_fail(context, field + " must be an array");
        if (dim < 0) dim = static_cast<long>(rows[i].size());
        if (static_cast<long>(rows[i].size()) != dim)
            parse_fail(context, field + " has " + std::to_string(rows[i].size()) + " entries, expected " +
                                    std::to_string(dim));
        IntVector v;
        for (std::size_t c = 0; c < rows[i].size(); ++c) {
            if (!rows[i][c].is_number_integer())
                parse_fail(context, field + "[" + std::to_string(c) + "] must be an integer");
            v.push_back(rows[i][c].get<std::int64_t>());
        }
        normals.push_back(std::move(v));
    }
    std::string label;
    if (j.contains("label")) {
        if (!j["label"].is_string()) parse_fail(context, "field label must be a string");
        label = j["label"].get<std::string>();
    }
    return build_polytope(std::move(normals), require_reflexive, std::move(label));
}

Polytope load_polytope(const std::string& path, bool require_reflexive) {
    return parse_polytope(read_file(path), path, require_reflexive);
}

PLConvexFunction parse_pl(const std::string& text, const std::string& context) {
    const Json j = parse_json(text, context);
    if (!j.is_object() || !j.contains("pieces") || !j["pieces"].is_array())
        parse_fail(context, "missing array field pieces");
    const auto& rows = j["pieces"];
    if (rows.empty()) parse_fail(context, "pieces is empty");
    std::vector<AffinePiece> pieces;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string field = "pieces[" + std::to_string(i) + "]";
        const auto& row = rows[i];
        if (!row.is_object() || !row.contains("a") || !row["a"].is_array())
            parse_fail(context, field + " needs an array field a");
        AffinePiece piece;
        for (std::size_t c = 0; c < row["a"].size(); ++c)
            piece.a.push_back(parse_scalar(row["a"][c], context, field + ".a[" + std::to_string(c) + "]"));
        piece.c = row.contains("c") ? parse_scalar(row["c"], context, field + ".c") : Rational(0);
        if (piece.a.empty()) parse_fail(context, field + ".a is empty");
        if (!pieces.empty() && piece.a.size() != pieces.front().a.size())
            parse_fail(context, field + ".a has " + std::to_string(piece.a.size()) + " entries, expected " +
                                    std::to_string(pieces.front().a.size()));
        pieces.push_back(std::move(piece));
    }
    return PLConvexFunction(std::move(pieces));
}

PLConvexFunction load_pl(const std::string& path) { return parse_pl(read_file(path), path); }

Eigen::VectorXd parse_vector(const std::string& text, const std::string& context) {
    const Json j = parse_json(text, context);
    if (!j.is_array() || j.empty()) parse_fail(context, "expected a nonempty JSON array of numbers");
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) parse_fail(context, "entry " + std::to_string(i) + " is not a number");
        v[i] = j[i].get<double>();
    }
    return v;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Json to_json(const Polytope& p) {
    Json j;
    j["dim"] = p.dim();
    j["normals"] = p.normals();
    if (!p.label().empty()) j["label"] = p.label();
    return j;
}

Json to_json(const PLConvexFunction& u) {
    Json pieces = Json::array();
    for (const auto& piece : u.pieces()) {
        Json a = Json::array();
        for (const auto& x : piece.a) a.push_back(format_rational(x));
        pieces.push_back({{"a", a}, {"c", format_rational(piece.c)}});
    }
    return Json{{"pieces", pieces}};
}

Json to_json(const SolitonVector& s) {
    return {{"theta", to_json(s.theta)},
            {"residual", s.residual},
            {"iterations", s.iterations},
            {"volume_weighted", s.volume_weighted}};
}

Json to_json(const LReport& l) {
    return {{"L", l.value}, {"boundary", l.boundary}, {"interior", l.interior}};
}

Json to_json(const RRReport& r) {
    Json records = Json::array();
    for (const auto& w : r.records)
        records.push_back({{"k", w.k}, {"N_k", w.n_k}, {"S1", w.s1}, {"S2", w.s2}, {"ratio", w.ratio}});
    return {{"k_values", r.k_values},
            {"records", records},
            {"fit", {{"F0_est", r.f0_est}, {"F1_est", r.f1_est}, {"c", r.fit.c}, {"residual_norm", r.fit.residual_norm}}},
            {"reference", {{"F0_integral", r.f0_integral}, {"F1_integral", r.f1_integral}}}};
}

Json to_json(const PhiReport& r) {
    Json records = Json::array();
    for (const auto& rec : r.records) {
        Json e{{"k", rec.k}, {"lattice_sum", rec.lattice_sum}, {"E", rec.error}, {"scaled", rec.scaled}};
        if (rec.exact_error) e["E_exact"] = format_rational(*rec.exact_error);
        records.push_back(std::move(e));
    }
    return {{"interior", r.interior}, {"boundary", r.boundary}, {"records", records}, {"sup_scaled", r.sup_scaled}};
}

Json to_json(const TauReport& t) {
    Json slacks = t.slacks;
    return {{"tau", to_json(t.tau)}, {"slacks", slacks}, {"min_slack", t.min_slack}, {"inside", t.inside}};
}

Json to_json(const ConicalData& d) {
    Json slacks = d.slacks;
    Json angles = d.angles;
    return {{"theta", to_json(d.theta)}, {"tau", to_json(d.tau)}, {"tau_inside", d.tau_inside},
            {"beta", d.beta},           {"slacks", slacks},       {"angles", angles},
            {"beta_bar", d.beta_bar}};
}

Json to_json(const LBetaTauReport& l) {
    return {{"L_beta_tau", l.value}, {"L", l.l.value}, {"tau_term", l.tau_term}};
}

Json to_json(const StabilityScan& s, bool include_samples) {
    Json j{{"min_ratio", s.min_ratio},
           {"argmin_index", s.argmin_index},
           {"argmin_pl", to_json(s.argmin)},
           {"used", s.used},
           {"discarded", s.discarded}};
    double worst_gap = 0.0;
    bool first = true;
    for (const auto& rec : s.samples) {
        if (rec.degenerate) continue;
        const double gap = (rec.l - rec.h) / rec.scale;
        if (first || gap < worst_gap) worst_gap = gap;
        first = false;
    }
    j["min_L_minus_H_scaled"] = worst_gap;
    if (include_samples) {
        Json samples = Json::array();
        for (const auto& rec : s.samples)
            samples.push_back({{"index", rec.index},
                               {"degenerate", rec.degenerate},
                               {"L", rec.l},
                               {"boundary", rec.boundary},
                               {"H", rec.h},
                               {"ratio", rec.ratio}});
        j["samples"] = samples;
    }
    return j;
}

Json to_json(const KEnergyReport& k) {
    return {{"value", k.value}, {"log_det_term", k.log_det_term}, {"L_term", k.l_term}, {"levels", k.levels}};
}

std::string to_csv(const RRReport& r) {
    std::string out = "k,N_k,S1,S2,ratio\n";
    for (const auto& w : r.records)
        out += std::to_string(w.k) + "," + std::to_string(w.n_k) + "," + fmt(w.s1) + "," + fmt(w.s2) + "," +
               fmt(w.ratio) + "\n";
    return out;
}

std::string to_csv(const PhiReport& r) {
    std::string out = "k,lattice_sum,E,scaled\n";
    for (const auto& rec : r.records)
        out += std::to_string(rec.k) + "," + fmt(rec.lattice_sum) + "," + fmt(rec.error) + "," + fmt(rec.scaled) + "\n";
    return out;
}

std::string to_csv(const StabilityScan& s) {
    std::string out = "index,degenerate,pieces,L,boundary,H,ratio\n";
    for (const auto& rec : s.samples)
        out += std::to_string(rec.index) + "," + (rec.degenerate ? "1" : "0") + "," +
               std::to_string(rec.u.pieces().size()) + "," + fmt(rec.l) + "," + fmt(rec.boundary) + "," +
               fmt(rec.h) + "," + fmt(rec.ratio) + "\n";
    return out;
}

}  // namespace toricstab
