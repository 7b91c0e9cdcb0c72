#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include <rtorsion/error.hpp>
#include <rtorsion/repspace.hpp>

#include "support.hpp"

using namespace rtorsion;

namespace {

Word random_word(std::mt19937_64& rng, int length) {
  std::uniform_int_distribution<int> gen(0, 1), sign(0, 1);
  std::vector<Letter> letters;
  for (int i = 0; i < length; ++i) letters.push_back({gen(rng), sign(rng) ? 1 : -1});
  return Word(letters);
}

// Nearest fingerprint distance from `p` to any point of `trace`.
double distance_to(const CircleTrace& trace, const RepPoint& p) {
  const TraceFingerprint f = fingerprint(p.images);
  double best = 1e300;
  for (const auto& q : trace.points) best = std::min(best, fingerprint_distance(f, fingerprint(q.images)));
  return best;
}

}  // namespace

TEST_SUITE("repspace") {
  TEST_CASE("word evaluation matches 2x2 products") {
    std::mt19937_64 rng(40);
    for (int trial = 0; trial < 30; ++trial) {
      const std::vector<SU2Element> im{test::random_su2(rng), test::random_su2(rng)};
      const Word w = random_word(rng, 9);
      Eigen::Matrix2cd oracle = Eigen::Matrix2cd::Identity();
      for (const auto& l : w.letters()) {
        const Eigen::Matrix2cd g = test::as_matrix(im[l.gen]);
        oracle = oracle * (l.exp > 0 ? g : Eigen::Matrix2cd(g.adjoint()));
      }
      CHECK((test::as_matrix(evaluate_word(w, im)) - oracle).norm() < 1e-13);
    }
  }

  TEST_CASE("fingerprint is conjugation invariant") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
      const std::vector<SU2Element> im{test::random_su2(rng), test::random_su2(rng)};
      const SU2Element g = test::random_su2(rng);
      const std::vector<SU2Element> conj{g * im[0] * g.inverse(), g * im[1] * g.inverse()};
      const TraceFingerprint f = fingerprint(im);
      CHECK(f.size() == 3);
      CHECK(fingerprint_distance(f, fingerprint(conj)) < 1e-13);
      CHECK(f[2] == doctest::Approx((test::as_matrix(im[0]) * test::as_matrix(im[1])).trace().real()).epsilon(1e-13));
    }
  }

  TEST_CASE("gauge fixing") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
      const std::vector<SU2Element> im{test::random_su2(rng), test::random_su2(rng)};
      const GaugeFixed g = gauge_fix(im);
      CHECK(fingerprint_distance(fingerprint(g.images), fingerprint(im)) < 1e-12);
      CHECK(std::abs(g.images[0].c()) < 1e-12);
      CHECK(std::abs(g.images[0].d()) < 1e-12);
      CHECK(g.images[0].b() > 0.0);
      CHECK(std::abs(g.images[1].d()) < 1e-12);
      CHECK(g.images[1].c() >= 0.0);
      for (int j = 0; j < 2; ++j) CHECK(g.images[j].distance(g.conjugator * im[j] * g.conjugator.inverse()) < 1e-12);
    }
    const SU2Element a = SU2Element::from_axis_angle(0.4, {0, 1, 0});
    const std::vector<SU2Element> parallel{a, a * a};
    CHECK_THROWS_AS(gauge_fix(parallel), Error);
  }

  TEST_CASE("Newton lands on the variety") {
    const auto& rs = test::figure8_space();
    const RepPoint p = rs.solve_near({1.2, 1.2, 2.3});
    CHECK(p.residual < 1e-10);
    CHECK(p.regularity.regular());
    CHECK(check_irreducible(p.images).irreducible);
    CHECK(std::abs(p.chart_tangent.norm() - 1.0) < 1e-12);
  }

  TEST_CASE("abelian seed converges to a reducible representation") {
    const auto& rs = test::figure8_space();
    try {
      rs.solve_near({0.8, 0.8, 0.0});
      FAIL("expected ReducibleLimit");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ReducibleLimit);
    }
  }

  TEST_CASE("the traced circle closes with regular samples") {
    const auto& rs = test::figure8_space();
    const CircleTrace& trace = test::figure8_trace();
    CHECK(trace.closed);
    CHECK(trace.closure_gap <= 1e-6);
    CHECK(trace.points.size() >= 200);
    CHECK(trace.chords.size() == trace.points.size());
    for (const auto& p : trace.points) {
      CHECK(rs.residual(p.images) <= 1e-9);
      CHECK(p.regularity.h0 == 0);
      CHECK(p.regularity.h1 == 1);
      CHECK(p.regularity.h2 == 1);
      CHECK(p.regularity.mu_noncentral);
    }
  }

  TEST_CASE("Euler characteristic of the twisted cohomology") {
    const auto& rs = test::figure8_space();
    for (const auto& p : test::figure8_samples(20)) {
      const Regularity r = rs.regularity(p.images);
      // chi(E) = 1 - 2 + 1 = 0, so the alternating sum of dimensions vanishes.
      CHECK(r.h0 - r.h1 + r.h2 == 0);
    }
  }

  TEST_CASE("tangent cocycles satisfy the cocycle identity") {
    std::mt19937_64 rng(43);
    for (const auto& p : test::figure8_samples(10)) {
      for (int trial = 0; trial < 10; ++trial) {
        const Word a = random_word(rng, 7), b = random_word(rng, 5);
        const Su2Vector lhs = extend_cocycle(a * b, p.images, p.tangent);
        const Su2Vector rhs =
            extend_cocycle(a, p.images, p.tangent) + evaluate_word(a, p.images).conjugate(extend_cocycle(b, p.images, p.tangent));
        CHECK((lhs - rhs).norm() <= 1e-7);
      }
      // The relator is trivial along the curve, so its derivative vanishes.
      CHECK(extend_cocycle(test::figure8().presentation.relators[0], p.images, p.tangent).norm() <= 1e-7);
    }
  }

  TEST_CASE("tangent cocycle agrees with finite differences") {
    const auto& rs = test::figure8_space();
    const SolveOptions tight{1e-14, 60};
    const double h = 1e-3;
    for (const auto& p : test::figure8_samples(8)) {
      const RepPoint fwd = rs.advance(p, h, tight), back = rs.advance(p, -h, tight);
      for (int j = 0; j < 2; ++j) {
        const Su2Vector plus = (fwd.images[j] * p.images[j].inverse()).log();
        const Su2Vector minus = (back.images[j] * p.images[j].inverse()).log();
        const Su2Vector fd = (0.5 / h) * (plus - minus);
        CHECK((fd - p.tangent[j]).norm() <= 1e-5);
      }
    }
  }

  TEST_CASE("horizontal tangent class") {
    const auto& rs = test::figure8_space();
    for (const auto& p : test::figure8_samples(6)) {
      const auto u = rs.tangent_cocycle(p);
      const Eigen::VectorXd v = stack(u);
      CHECK(std::abs(v.norm() - 1.0) < 1e-12);
      CHECK((rs.coboundary0(p.images).transpose() * v).norm() < 1e-10);
      CHECK((rs.coboundary1(p.images) * v).norm() < 1e-8);
      // Same class as the chart tangent: the difference is a coboundary.
      const Eigen::VectorXd h = stack(horizontal_part(p.tangent, rs.coboundary0(p.images)));
      CHECK(std::abs(std::abs(h.normalized().dot(v)) - 1.0) < 1e-10);
    }
  }

  TEST_CASE("restarting from another point retraces the same circle") {
    const auto& rs = test::figure8_space();
    const CircleTrace& trace = test::figure8_trace();
    const RepPoint start = trace.points[trace.points.size() / 3];
    ContinuationOptions opts;
    opts.direction = -1;
    const CircleTrace again = rs.trace_circle(start, opts);
    CHECK(again.closed);
    CHECK(again.length() == doctest::Approx(trace.length()).epsilon(1e-2));
    double worst = 0.0;
    for (std::size_t i = 0; i < again.points.size(); i += 7) worst = std::max(worst, distance_to(trace, again.points[i]));
    CHECK(worst <= 0.02);
  }

  TEST_CASE("sampled representations satisfy the relator") {
    const auto& rs = test::figure8_space();
    const std::vector<std::vector<SU2Element>> irr{test::figure8_samples(1)[0].images};
    const auto reps = sample_representations(test::figure8().presentation, irr, 40, 5);
    CHECK(reps.size() == 40);
    for (const auto& r : reps) CHECK(rs.residual(r) < 1e-10);
  }

  TEST_CASE("chart moves are inverse to differences") {
    std::mt19937_64 rng(44);
    std::normal_distribution<double> g;
    const auto& rs = test::figure8_space();
    const RepPoint p = test::figure8_samples(4)[1];
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd d(rs.chart_dimension());
      for (int i = 0; i < d.size(); ++i) d(i) = 0.1 * g(rng);
      const auto q = rs.apply(p.images, d);
      CHECK((rs.difference(q, p.images) - d).norm() < 1e-12);
    }
  }
}
