#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "tieq/config.hpp"
#include "tieq/setio.hpp"

using namespace tieq;

namespace {

// Writes text to a throwaway file and removes it when the scope closes.
struct TempFile {
    std::string path;
    TempFile(const std::string& name, const std::string& text) : path("tieq_iotest_" + name) {
        std::ofstream out(path);
        out << text;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("set files accept comments, blanks, and whitespace") {
    FiniteAbelianGroup g = FiniteAbelianGroup::cyclic(12);
    ParsedSet p = parse_set_text("0\n3\n  5   # trailing comment\n\n# a full-line comment\n11\n", g);
    CHECK(p.elements == std::vector<Index>{0, 3, 5, 11});
    CHECK(p.notices.empty());
}

TEST_CASE("out-of-range coordinates are reduced with a notice") {
    FiniteAbelianGroup g = FiniteAbelianGroup::cyclic(12);
    ParsedSet p = parse_set_text("-1\n14\n", g);
    CHECK(p.elements == std::vector<Index>{2, 11});
    REQUIRE(p.notices.size() == 2);
    CHECK(p.notices[0] == "line 1: coordinates reduced into Z/12");
    CHECK(p.notices[1] == "line 2: coordinates reduced into Z/12");
}

TEST_CASE("duplicates after reduction name both lines") {
    FiniteAbelianGroup g = FiniteAbelianGroup::cyclic(12);
    CHECK_THROWS_WITH_AS((void)parse_set_text("1\n5\n13\n", g),
                         "line 3: duplicate of the element first given on line 1", std::invalid_argument);
}

TEST_CASE("set lines must match the group arity") {
    FiniteAbelianGroup flat({3, 4});
    ParsedSet p = parse_set_text("2 3\n0 1\n", flat);
    CHECK(p.elements == std::vector<Index>{1, 11});  // (0,1) and (2,3) in mixed radix

    CHECK_THROWS_WITH_AS((void)parse_set_text("1 2 3\n", flat), "line 1: expected 2 coordinates, got 3",
                         std::invalid_argument);
    FiniteAbelianGroup cyc = FiniteAbelianGroup::cyclic(7);
    CHECK_THROWS_WITH_AS((void)parse_set_text("1 2\n", cyc), "line 1: expected 1 coordinates, got 2",
                         std::invalid_argument);
}

TEST_CASE("non-integer tokens are rejected with their line") {
    FiniteAbelianGroup g = FiniteAbelianGroup::cyclic(7);
    CHECK_THROWS_WITH_AS((void)parse_set_text("3\nqq\n", g), "line 2: 'qq' is not an integer",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_set_text("1x\n", g), "line 1: '1x' is not an integer",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_set_text("1.5\n", g), "line 1: '1.5' is not an integer",
                         std::invalid_argument);
}

TEST_CASE("set files are read and missing paths fail cleanly") {
    FiniteAbelianGroup g = FiniteAbelianGroup::cyclic(9);
    TempFile f("set.txt", "# three elements\n0\n4\n8\n");
    ParsedSet p = parse_set_file(f.path, g);
    CHECK(p.elements == std::vector<Index>{0, 4, 8});

    CHECK_THROWS_AS((void)parse_set_file("no_such_directory/set.txt", g), std::invalid_argument);
}

TEST_CASE("point files keep coordinates verbatim") {
    LatticePointSet a = parse_point_text("0 0\n2 -3\n99 1\n", 2, "inline");
    CHECK(a.dim == 2);
    CHECK(a.source == "inline");
    REQUIRE(a.points.size() == 3);
    CHECK(a.points[1] == std::vector<std::int64_t>{2, -3});
    CHECK(a.points[2] == std::vector<std::int64_t>{99, 1});  // no reduction for lattice data

    CHECK_THROWS_WITH_AS((void)parse_point_text("1 2\n3\n", 2, ""), "line 2: expected 2 coordinates, got 1",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_point_text("1 2\n# gap\n1 2\n", 2, ""),
                         "line 3: duplicate of the point first given on line 1", std::invalid_argument);
}

TEST_CASE("point files record their path as the source") {
    TempFile f("points.txt", "1 1 1\n0 0 2\n");
    LatticePointSet a = parse_point_file(f.path, 3);
    CHECK(a.source == f.path);
    CHECK(a.points.size() == 2);
}

TEST_CASE("an empty config text yields the documented defaults") {
    Constants c = parse_config_text("");
    CHECK(c.c == doctest::Approx(0.0009765625));
    CHECK(c.otilde_c1 == doctest::Approx(1.0));
    CHECK(c.otilde_c2 == doctest::Approx(1.0));
    CHECK(c.cert_c == doctest::Approx(8.0));
    CHECK(c.delta == doctest::Approx(1.0));
    CHECK(c.eps == doctest::Approx(0.25));
    CHECK(c.rho_scale == doctest::Approx(0.25));
    CHECK(c.step_cap == 12);
    CHECK(c.budget == 4000000);
    CHECK(c.gamma_cap == 3);
    CHECK(c.min_cell == 3);
    CHECK(c.audit_ratio == doctest::Approx(8.0));
}

TEST_CASE("config overrides apply only to the named keys") {
    Constants c = parse_config_text("# tuned\nc = 0.5\nstep_cap = 3\n\naudit_ratio=2.5\neps\t=\t0.1\n");
    CHECK(c.c == doctest::Approx(0.5));
    CHECK(c.step_cap == 3);
    CHECK(c.audit_ratio == doctest::Approx(2.5));
    CHECK(c.eps == doctest::Approx(0.1));
    // Untouched keys keep their defaults.
    CHECK(c.cert_c == doctest::Approx(8.0));
    CHECK(c.budget == 4000000);
}

TEST_CASE("config errors carry the offending line number") {
    CHECK_THROWS_WITH_AS((void)parse_config_text("bogus = 1\n"), "config line 1: unknown key 'bogus'",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_config_text("\n# hi\nbogus = 1\n"), "config line 3: unknown key 'bogus'",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_config_text("eps = fast\n"), "config line 1: bad numeric value 'fast'",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_config_text("eps = 0.5x\n"), "config line 1: bad numeric value '0.5x'",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_config_text("just a banner\n"), "config line 1: expected key=value",
                         std::invalid_argument);
}

TEST_CASE("config files parse like config text") {
    TempFile f("config.txt", "delta = 2.0\ngamma_cap = 5\n");
    Constants c = parse_config_file(f.path);
    CHECK(c.delta == doctest::Approx(2.0));
    CHECK(c.gamma_cap == 5);

    CHECK_THROWS_AS((void)parse_config_file("no_such_directory/c.cfg"), std::invalid_argument);
}
