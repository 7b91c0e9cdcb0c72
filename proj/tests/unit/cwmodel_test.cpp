#include <doctest.h>

#include <fstream>
#include <sstream>

#include <rtorsion/cwmodel.hpp>

#include "support.hpp"

using namespace rtorsion;

namespace {

std::filesystem::path data(std::string_view name) { return std::filesystem::path(RTORSION_TEST_DATA) / name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Errc error_of(const std::filesystem::path& p) {
  try {
    parse_model(p);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("model was accepted: " << p);
  return Errc::ParseError;
}

}  // namespace

TEST_SUITE("cwmodel") {
  TEST_CASE("bundled model passes every check") {
    const ValidationReport r = validate_model(test::figure8(), 100, 1);
    CHECK(r.ok());
    CHECK(r.first_failure() == nullptr);
    CHECK(r.evaluations == 100);
    for (const auto& c : r.checks) {
      INFO(c.name);
      CHECK(c.passed);
      CHECK(c.residual <= 1e-10);
    }
  }

  TEST_CASE("file and embedded text agree") {
    const std::string text = slurp(std::filesystem::path(RTORSION_MODEL_DIR) / "figure8.cwp");
    CHECK(text == figure_eight_model_text());
    const CWPairModel m = parse_model(std::filesystem::path(RTORSION_MODEL_DIR) / "figure8.cwp");
    CHECK(m.name == "figure8");
    CHECK(m.ambient == Ambient::S3);
    CHECK(m.exterior.cells == std::vector<int>{1, 2, 1});
    CHECK(m.torus.complex.cells == std::vector<int>{1, 2, 1});
    CHECK(m.automorphisms.size() == 2);
    CHECK(m.inclusion.factors.size() == 2);
  }

  TEST_CASE("exterior boundary is the Fox matrix") {
    const auto& m = test::figure8();
    const GroupRingMatrix fox = fox_matrix(m.presentation);
    CHECK(m.exterior.boundary[1] == fox);
    // Over the free group ring d2 d1 is r - 1; it only vanishes in the knot group.
    CHECK_FALSE(is_zero(multiply(m.exterior.boundary[1], m.exterior.boundary[0])));
  }

  TEST_CASE("untwisted homology") {
    const auto& m = test::figure8();
    CHECK(untwisted_homology(m, ModelPart::Exterior).betti == std::vector<int>{1, 1, 0});
    CHECK(untwisted_homology(m, ModelPart::Boundary).betti == std::vector<int>{1, 2, 1});
  }

  TEST_CASE("fault models are rejected with the right error") {
    CHECK(error_of(data("corrupted_boundary.cwp")) == Errc::ChainMapViolation);
    CHECK(error_of(data("no_peripheral.cwp")) == Errc::ParseError);
    CHECK(error_of(data("bad_inclusion.cwp")) == Errc::ChainMapViolation);
    CHECK(error_of(data("wrong_torsion.cwp")) == Errc::HomologyMismatch);
    CHECK(error_of(data("h2_nonzero.cwp")) == Errc::HomologyMismatch);
  }

  TEST_CASE("a failing report names the failing check") {
    const CWPairModel m = parse_model_text(slurp(data("corrupted_boundary.cwp")));
    const ValidationReport r = validate_model(m, 20, 3);
    REQUIRE_FALSE(r.ok());
    REQUIRE(r.first_failure() != nullptr);
    CHECK(r.first_failure()->failure == Errc::ChainMapViolation);
    CHECK_FALSE(r.first_failure()->detail.empty());
  }

  TEST_CASE("parse errors carry a line number") {
    const std::string text = std::string(figure_eight_model_text()) + "\n[boundary.d2]\nr = [x^-1 + 3\n";
    try {
      parse_model_text(text);
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ParseError);
      CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_model_text("[presentation]\ngenerators = x\nfoo\n"), Error);
    CHECK_THROWS_AS(load_validated("[cells]\nE = 1 2 1\n"), Error);
  }
}
