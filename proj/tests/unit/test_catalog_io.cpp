#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "support.hpp"
#include "toricstab/catalog.hpp"
#include "toricstab/errors.hpp"
#include "toricstab/io.hpp"
#include "toricstab/soliton.hpp"

using namespace toricstab;
using namespace toricstab::testing;

namespace {

std::string data(const std::string& name) { return std::string(TORICSTAB_TEST_DATA) + "/" + name; }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidArgument;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("catalog lookups") {
    const auto& cp2 = find_entry("CP2");
    CHECK(cp2.polytope.vertices().size() == 3);
    CHECK(cp2.soliton_zero_by_symmetry);
    const auto& bl1 = find_entry("Bl1CP2");
    CHECK(bl1.polytope.vertices().size() == 4);
    CHECK(!bl1.soliton_zero_by_symmetry);
    const IntMatrix swap = {{0, 1}, {1, 0}};
    CHECK(std::find(bl1.symmetry_generators.begin(), bl1.symmetry_generators.end(), swap) !=
          bl1.symmetry_generators.end());
    CHECK(kind_of([] { find_entry("CP9"); }) == ErrorKind::NotFound);
    CHECK(catalog().size() >= 7);
}

TEST_CASE("catalog entries are reflexive and their facts hold") {
    for (const auto& e : catalog()) {
        const auto& p = e.polytope;
        CHECK(p.reflexive());
        CHECK(!e.name.empty());
        CHECK(p.label() == e.name);
        // Reflexive: every facet has lattice distance 1, so |dP| = n |P|.
        CHECK(p.boundary_measure() == doctest::Approx(p.dim() * p.volume()).epsilon(1e-13));
        for (const auto& a : e.symmetry_generators) CHECK(preserves_normals(p, a));
        CHECK((fixed_subspace_dim(p.dim(), e.symmetry_generators) == 0) == e.soliton_zero_by_symmetry);
        if (e.soliton_zero_by_symmetry) CHECK(solve_soliton(p).theta.norm() <= 1e-12);
    }
    CHECK(!preserves_normals(find_entry("Bl1CP2").polytope, IntMatrix{{-1, 0}, {0, 1}}));
    CHECK(fixed_subspace_dim(2, {}) == 2);
    CHECK(fixed_subspace_dim(2, {IntMatrix{{0, 1}, {1, 0}}}) == 1);
}

TEST_CASE("polytope files") {
    const auto seg = load_polytope(data("segment.json"));
    CHECK(seg.dim() == 1);
    CHECK(seg.vertices() == std::vector<RationalVector>{rv({-1}), rv({1})});
    CHECK(load_polytope(data("cp2.json")).volume_exact() == Rational(9, 2));
    CHECK(load_polytope(data("bl1cp2.json")).volume_exact() == 4);
    CHECK(kind_of([] { load_polytope(data("malformed_normals.json")); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { load_polytope(data("unbounded.json")); }) == ErrorKind::Unbounded);
    CHECK(kind_of([] { load_polytope(data("missing.json")); }) == ErrorKind::ParseError);
    CHECK(message_of([] { load_polytope(data("malformed_normals.json")); }).find("malformed_normals.json") !=
          std::string::npos);
}

TEST_CASE("polytope parse errors") {
    CHECK(kind_of([] { parse_polytope("{\"dim\": 1, \"normals\": [[1], [-1]"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_polytope("{\"dim\": 1}"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_polytope("{\"dim\": 1, \"normals\": [[0.5], [-1]]}"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_polytope("{\"dim\": 2, \"normals\": [[1], [-1]]}"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_polytope("{\"dim\": 0, \"normals\": [[1], [-1]]}"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_polytope("[1, 2]"); }) == ErrorKind::ParseError);
    CHECK(message_of([] { parse_polytope("{}", "foo.json"); }).find("foo.json") != std::string::npos);
    // Dimension is inferred when absent.
    CHECK(parse_polytope("{\"normals\": [[1], [-1]]}").dim() == 1);
    CHECK(kind_of([] { parse_polytope("{\"normals\": [[2, 1], [-1, 2], [-1, -3]]}"); }) == ErrorKind::NotReflexive);
    CHECK_NOTHROW(parse_polytope("{\"normals\": [[2, 1], [-1, 2], [-1, -3]]}", "p", false));
}

TEST_CASE("PL files") {
    const auto u = load_pl(data("step.json"));
    CHECK(u == step(1, 0));
    const auto v = load_pl(data("mixed_2d.json"));
    REQUIRE(v.pieces().size() == 2);
    CHECK(v.pieces()[0].a == RationalVector{Rational(1, 2), Rational(0)});
    CHECK(v.pieces()[0].c == Rational(1, 3));
    CHECK(v.pieces()[1].a == RationalVector{Rational(-1), Rational(2, 3)});
    CHECK(kind_of([] { parse_pl("{\"pieces\": []}"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_pl("{\"pieces\": [{\"a\": [\"1/0\"], \"c\": 0}]}"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_pl("{\"pieces\": [{\"a\": [\"x\"], \"c\": 0}]}"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_pl("{\"pieces\": [{\"a\": [1], \"c\": 0}, {\"a\": [1, 2], \"c\": 0}]}"); }) ==
          ErrorKind::ParseError);
    // Omitted offsets are zero.
    CHECK(parse_pl("{\"pieces\": [{\"a\": [1]}]}") == PLConvexFunction::coordinate(1, 0));
}

TEST_CASE("vectors") {
    const auto v = parse_vector("[0.5, -2, 3e-1]");
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 0.5);
    CHECK(v[1] == -2.0);
    CHECK(v[2] == 0.3);
    CHECK(kind_of([] { parse_vector("[1, \"a\"]"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_vector("{}"); }) == ErrorKind::ParseError);
}

TEST_CASE("round trips") {
    for (const auto& e : catalog()) {
        const auto q = parse_polytope(dump(to_json(e.polytope)));
        CHECK(q.normals() == e.polytope.normals());
        CHECK(q.label() == e.name);
        CHECK(q.vertices() == e.polytope.vertices());
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto u = random_pl(3, seed);
        CHECK(parse_pl(dump(to_json(u))) == u);
    }
    const Eigen::VectorXd v = (Eigen::VectorXd(3) << 0.1, -1.0 / 3.0, 1e-300).finished();
    CHECK(parse_vector(to_json(v).dump()) == v);
}

TEST_CASE("report serialization") {
    const auto& seg = find_entry("CP1").polytope;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    const auto rr = riemann_roch_check(seg, zero, step(1, 0), 2.0, {1, 2, 3, 4});
    const std::string csv = to_csv(rr);
    std::istringstream lines(csv);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header == "k,N_k,S1,S2,ratio");
    CHECK(first.rfind("1,3,5", 0) == 0);
    const auto j = to_json(rr);
    CHECK(j["records"].size() == 4);
    CHECK(j["records"][1]["S1"].get<double>() == doctest::Approx(17.0));
    CHECK(j.contains("fit"));

    const auto phi = phi_sum_check(seg, PhiSpec::one(), {1, 2});
    CHECK(to_csv(phi).rfind("k,lattice_sum,E,scaled\n", 0) == 0);
    CHECK(to_json(phi)["records"][0]["E_exact"] == "0");

    const auto scan = stability_margin(seg, zero, 5, 3);
    CHECK(to_csv(scan).rfind("index,degenerate,pieces,L,boundary,H,ratio\n", 0) == 0);
    CHECK(!to_json(scan).contains("samples"));
    CHECK(to_json(scan, true)["samples"].size() == 5);

    const auto s = solve_soliton(find_entry("CP2").polytope);
    const auto js = to_json(s);
    CHECK(js["theta"].size() == 2);
    CHECK(js.contains("residual"));
    CHECK(dump(js).back() == '\n');
}

TEST_CASE("write_report writes files") {
    const auto dir = std::filesystem::temp_directory_path() / "toricstab_io_test";
    std::filesystem::create_directories(dir);
    const auto& seg = find_entry("CP1").polytope;
    const auto phi = phi_sum_check(seg, PhiSpec::one(), {1, 2, 3});
    write_report(phi, (dir / "phi.json").string(), ReportFormat::Json);
    write_report(phi, (dir / "phi.csv").string(), ReportFormat::Csv);
    CHECK(read_file((dir / "phi.json").string()) == dump(to_json(phi)));
    CHECK(read_file((dir / "phi.csv").string()) == to_csv(phi));
    CHECK(kind_of([&] { write_file((dir / "no" / "such" / "x.json").string(), "{}"); }) ==
          ErrorKind::InvalidArgument);
    std::filesystem::remove_all(dir);
}
