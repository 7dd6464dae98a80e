#pragma once

#include <string>

#include <json.hpp>

#include "toricstab/conical.hpp"
#include "toricstab/functional.hpp"
#include "toricstab/lattice.hpp"
#include "toricstab/pl_function.hpp"
#include "toricstab/polytope.hpp"
#include "toricstab/soliton.hpp"

namespace toricstab {

using Json = nlohmann::ordered_json;

/// {"dim": n, "normals": [[...], ...], "label": "..."}, integer normals only.
/// `context` prefixes ParseError messages (usually the file name).
Polytope parse_polytope(const std::string& text, const std::string& context = "polytope",
                        bool require_reflexive = true);
Polytope load_polytope(const std::string& path, bool require_reflexive = true);

/// {"pieces": [{"a": ["p/q", ...], "c": "p/q"}, ...]}; integers are accepted too.
PLConvexFunction parse_pl(const std::string& text, const std::string& context = "pl");
PLConvexFunction load_pl(const std::string& path);

/// JSON array of numbers.
Eigen::VectorXd parse_vector(const std::string& text, const std::string& context = "vector");

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

Json to_json(const Polytope& p);
Json to_json(const PLConvexFunction& u);
Json to_json(const Eigen::VectorXd& v);
Json to_json(const SolitonVector& s);
Json to_json(const LReport& l);
Json to_json(const RRReport& r);
Json to_json(const PhiReport& r);
Json to_json(const TauReport& t);
Json to_json(const ConicalData& d);
Json to_json(const LBetaTauReport& l);
Json to_json(const StabilityScan& s, bool include_samples = false);
Json to_json(const KEnergyReport& k);

/// Fixed-column CSV renderings:
///   RRReport       k,N_k,S1,S2,ratio
///   PhiReport      k,lattice_sum,E,scaled
///   StabilityScan  index,degenerate,pieces,L,boundary,H,ratio
std::string to_csv(const RRReport& r);
std::string to_csv(const PhiReport& r);
std::string to_csv(const StabilityScan& s);

enum class ReportFormat { Json, Csv };

/// JSON text with two-space indentation and a trailing newline.
std::string dump(const Json& j);

template <class Report>
void write_report(const Report& report, const std::string& path, ReportFormat format) {
    write_file(path, format == ReportFormat::Json ? dump(to_json(report)) : to_csv(report));
}

}  // namespace toricstab
