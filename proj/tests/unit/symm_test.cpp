#include <doctest.h>

#include <numbers>
#include <random>

#include <rtorsion/error.hpp>
#include <rtorsion/study.hpp>
#include <rtorsion/symm.hpp>
#include <rtorsion/torsion.hpp>

#include "support.hpp"

using namespace rtorsion;

namespace {

const Study& study() {
  static const Study s = run_study(test::figure8(), RunConfig{});
  return s;
}

const OuterAutomorphism& automorphism(const std::string& name) {
  for (const auto& a : test::figure8().automorphisms)
    if (a.name == name) return a;
  FAIL("no automorphism " << name);
  throw;
}

OuterAutomorphism power(const OuterAutomorphism& phi, int n) {
  OuterAutomorphism acc = identity_automorphism(test::figure8().presentation);
  for (int i = 0; i < n; ++i) acc = compose(acc, phi);
  return acc;
}

std::vector<std::vector<SU2Element>> irreducible_points() {
  std::vector<std::vector<SU2Element>> out;
  for (const auto& p : test::figure8_samples(4)) out.push_back(p.images);
  return out;
}

}  // namespace

TEST_SUITE("symm") {
  TEST_CASE("sign flip is an involution that negates odd traces") {
    const auto& rs = test::figure8_space();
    for (const auto& p : test::figure8_samples(10)) {
      const RepPoint q = iota(rs, p);
      CHECK(rs.residual(q.images) < 1e-9);
      const TraceFingerprint f = fingerprint(p.images), g = fingerprint(q.images);
      // alpha(x) = alpha(y) = 1: x and y change sign, xy does not.
      CHECK(g[0] == doctest::Approx(-f[0]).epsilon(1e-12));
      CHECK(g[1] == doctest::Approx(-f[1]).epsilon(1e-12));
      CHECK(g[2] == doctest::Approx(f[2]).epsilon(1e-12));
      CHECK(fingerprint_distance(fingerprint(iota(rs, q).images), f) < 1e-12);
      CHECK(q.regularity.regular());
    }
  }

  TEST_CASE("regauged tangent stays in the pushed class") {
    const auto& rs = test::figure8_space();
    for (const auto& p : test::figure8_samples(5)) {
      const RepPoint q = regauge(rs, p.images, p.tangent);
      CHECK(fingerprint_distance(fingerprint(q.images), fingerprint(p.images)) < 1e-12);
      // Tangent to the chart: its chart displacement reproduces the cocycle.
      const Eigen::VectorXd along = rs.chart_cocycle_matrix(q.images) * q.chart_tangent;
      CHECK((along - stack(q.tangent)).norm() < 1e-9 * stack(q.tangent).norm());
    }
  }

  TEST_CASE("certificates") {
    const auto& m = test::figure8();
    const auto irr = irreducible_points();
    for (const auto& a : m.automorphisms) {
      const Certificate c = certify(m, a, irr);
      INFO(a.name << ": " << c.detail);
      CHECK(c.ok);
      CHECK(c.relator_residual <= 1e-9);
      CHECK(c.peripheral_residual <= 1e-8);
      CHECK(c.meridian_exponent_ok);
      CHECK(c.evaluations == 100);
    }
    OuterAutomorphism wrong = automorphism("phi1");
    wrong.delta = -wrong.delta;
    CHECK_FALSE(certify(m, wrong, irr).ok);
    OuterAutomorphism not_hom = automorphism("phi1");
    not_hom.map.images[1] = parse_word("y^2", m.presentation.generators);
    const Certificate bad = certify(m, not_hom, irr);
    CHECK_FALSE(bad.ok);
    CHECK(bad.relator_residual > 1e-3);
  }

  TEST_CASE("phi2 fixes every character on the circle") {
    const auto& rs = test::figure8_space();
    const auto& phi2 = automorphism("phi2");
    for (const auto& p : test::figure8_samples(20))
      CHECK(fingerprint_distance(fingerprint(act(rs, phi2, p).images), fingerprint(p.images)) <= 1e-8);
  }

  TEST_CASE("relations of the outer automorphism group") {
    const auto& rs = test::figure8_space();
    const auto& phi1 = automorphism("phi1");
    const auto& phi2 = automorphism("phi2");
    const OuterAutomorphism p4 = power(phi1, 4), q2 = power(phi2, 2), pq2 = power(compose(phi1, phi2), 2);
    const auto irr = irreducible_points();
    for (const auto* a : {&p4, &q2, &pq2}) {
      const Certificate c = certify(test::figure8(), *a, irr);
      INFO(a->name << ": " << c.detail);
      CHECK(c.ok);
      CHECK(a->delta == 1);
      CHECK(a->mu_exponent == 1);
    }
    for (const auto& p : test::figure8_samples(8)) {
      const TraceFingerprint f = fingerprint(p.images);
      CHECK(fingerprint_distance(fingerprint(act(rs, p4, p).images), f) <= 1e-8);
      CHECK(fingerprint_distance(fingerprint(act(rs, q2, p).images), f) <= 1e-8);
      CHECK(fingerprint_distance(fingerprint(act(rs, pq2, p).images), f) <= 1e-8);
    }
  }

  TEST_CASE("composition applies phi first") {
    const auto& p = test::figure8().presentation;
    const auto& phi1 = automorphism("phi1");
    const auto& phi2 = automorphism("phi2");
    const OuterAutomorphism c = compose(phi1, phi2);
    for (int j = 0; j < 2; ++j) CHECK(c.map.images[j] == phi2.map.apply(phi1.map.images[j]));
    CHECK(compose(identity_automorphism(p), phi1).map.images == phi1.map.images);
  }

  TEST_CASE("pullback signs") {
    const auto& m = test::figure8();
    const auto& rs = test::figure8_space();
    const Study& st = study();
    CHECK(delta_sign(m, automorphism("phi1"), st.circle) == -1);
    CHECK(delta_sign(m, automorphism("phi2"), st.circle) == 1);
    for (const auto& p : test::figure8_samples(20)) {
      CHECK(std::abs(pullback_ratio(m, rs, automorphism("phi1"), p) + 1.0) <= 1e-5);
      CHECK(std::abs(pullback_ratio(m, rs, automorphism("phi2"), p) - 1.0) <= 1e-5);
      CHECK(std::abs(iota_pullback_ratio(m, rs, p) + 1.0) <= 1e-6);
    }
  }

  TEST_CASE("periodic spline") {
    const double period = 2.5;
    const int n = 200;
    std::vector<double> x(n);
    Eigen::MatrixXcd y(n, 2);
    auto f = [&](double s) {
      const double w = 2.0 * std::numbers::pi * s / period;
      return std::pair<std::complex<double>, std::complex<double>>{std::sin(w), std::complex<double>(std::cos(2 * w), 0.5)};
    };
    for (int i = 0; i < n; ++i) {
      x[i] = period * (i + 0.3 * std::sin(i)) / n;
      std::tie(y(i, 0), y(i, 1)) = f(x[i]);
    }
    const PeriodicSpline sp(x, y, period);
    for (int i = 0; i < n; ++i) CHECK((sp(x[i]) - y.row(i)).norm() < 1e-13);
    double worst = 0.0;
    for (double s = -3.0; s < 6.0; s += 0.0137) {
      const auto [a, b] = f(s);
      const Eigen::RowVectorXcd v = sp(s);
      worst = std::max({worst, std::abs(v(0) - a), std::abs(v(1) - b)});
    }
    CHECK(worst < 1e-6);
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Constant(n, 1, std::complex<double>(2.0, -1.0));
    CHECK(std::abs(PeriodicSpline(x, c, period)(1.234)(0) - std::complex<double>(2.0, -1.0)) < 1e-13);
  }

  TEST_CASE("torsion function") {
    const TorsionFunction& f = study().torsion;
    CHECK(f.closed);
    CHECK(f.period == doctest::Approx(study().circle.total).epsilon(1e-15));
    CHECK(f.lo == -1);
    CHECK(f.hi() == 1);
    for (std::size_t k = 1; k < f.sigma.size(); ++k) CHECK(f.sigma[k] > f.sigma[k - 1]);
    const Eigen::VectorXd tr = f.trace_profile();
    for (Eigen::Index k = 0; k < tr.size(); ++k) {
      const auto& p = study().circle.samples[f.sample[k]].point;
      CHECK(tr(k) == doctest::Approx(evaluate_word(test::figure8().meridian(), p.images).trace()).epsilon(1e-8));
      CHECK(std::abs(f.coeffs(k, 0) - 1.0) < 1e-8);
      CHECK(std::abs(f.coeffs(k, 2) - 1.0) < 1e-8);
    }
  }

  TEST_CASE("symmetry checks") {
    const TorsionFunction& f = study().torsion;
    SUBCASE("identity matches itself at zero shift") {
      const SymmetryReport r = check_symmetry(f, f, SymmetryTransform::identity());
      CHECK(r.pass);
      CHECK(r.residual < 1e-12);
      const double s0 = std::min(r.s0, f.period - r.s0);
      CHECK(s0 < 1e-6);
    }
    SUBCASE("a wrong value sign is detected") {
      const SymmetryReport r = check_symmetry(f, f, {"negated", 1, -1, false, 1});
      CHECK_FALSE(r.pass);
      CHECK(r.residual > 0.1);
    }
    SUBCASE("mismatched periods") {
      TorsionFunction g = f;
      g.period *= 1.01;
      CHECK_THROWS_AS(check_symmetry(f, g, SymmetryTransform::identity()), Error);
      g = f;
      g.closed = false;
      CHECK_THROWS_AS(check_symmetry(f, g, SymmetryTransform::identity()), Error);
    }
    SUBCASE("all relations hold for the bundled model") {
      const auto reports = symmetry_checks(study(), "all", 1e-6);
      CHECK(reports.size() == 7);
      for (const auto& r : reports) {
        INFO(r.transform << " " << r.residual << " " << r.detail);
        CHECK(r.pass);
        CHECK(r.residual <= r.tolerance);
      }
      CHECK_THROWS_AS(symmetry_checks(study(), "aut9", 1e-6), Error);
    }
  }

  TEST_CASE("metabelian locus") {
    const Study& st = study();
    const MetabelianLocus& locus = st.locus;
    CHECK(locus.ambient_zhs);
    REQUIRE(locus.points.size() == 2);
    const double total = st.circle.total;
    double sep = std::abs(locus.points[1].sigma - locus.points[0].sigma);
    sep = std::min(sep, total - sep);
    CHECK(sep == doctest::Approx(total / 2).epsilon(1e-3));
    for (const auto& fp : locus.points) {
      CHECK(std::abs(fp.trace_mu) < 1e-9);
      CHECK(fp.fingerprint_gap < 1e-8);
      // tr rho(mu) = 0 leaves t + 1/t.
      const LaurentPoly t = normalized_torsion(st.model, fp.point.images).poly;
      CHECK(relative_distance(t, LaurentPoly(-1, {1.0, 0.0, 1.0})) < 1e-8);
    }
  }
}
