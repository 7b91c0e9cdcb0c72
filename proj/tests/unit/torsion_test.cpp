#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include <rtorsion/error.hpp>
#include <rtorsion/symm.hpp>
#include <rtorsion/torsion.hpp>

#include "support.hpp"

using namespace rtorsion;
using C = std::complex<double>;

namespace {

const std::vector<std::string> kNames{"x", "y"};

// Fox derivative of the relator with respect to y, written out by hand.
const std::vector<std::pair<int, const char*>> kFoxY{{1, "x^-1"},
                                                     {-1, "x^-1 y x y^-1"},
                                                     {1, "x^-1 y x y^-1 x"},
                                                     {-1, "x^-1 y x y^-1 x y x^-1 y^-1"},
                                                     {-1, "x^-1 y x y^-1 x y x^-1 y^-1 x y^-1"}};

// det(Phi(dr/dy)) / det(Phi(x) - 1) with Phi(g) = t^alpha(g) rho(g), from
// plain 2x2 matrices.
C wada_oracle(const std::vector<SU2Element>& rho, C t) {
  Eigen::Matrix2cd fy = Eigen::Matrix2cd::Zero();
  for (const auto& [c, text] : kFoxY) {
    Eigen::Matrix2cd g = Eigen::Matrix2cd::Identity();
    C power = 1.0;
    const Word w = parse_word(text, kNames);
    for (const auto& l : w.letters()) {
      const Eigen::Matrix2cd m = test::as_matrix(rho[l.gen]);
      g = g * (l.exp > 0 ? m : Eigen::Matrix2cd(m.adjoint()));
      power *= l.exp > 0 ? t : 1.0 / t;
    }
    fy += static_cast<double>(c) * power * g;
  }
  const Eigen::Matrix2cd dx = t * test::as_matrix(rho[0]) - Eigen::Matrix2cd::Identity();
  return fy.determinant() / dx.determinant();
}

std::vector<std::vector<Word>> random_lifts(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> gen(0, 1), sign(0, 1), len(0, 4);
  auto word = [&] {
    std::vector<Letter> ls;
    for (int i = len(rng); i > 0; --i) ls.push_back({gen(rng), sign(rng) ? 1 : -1});
    return Word(ls);
  };
  return {{word()}, {word(), word()}, {word()}};
}

}  // namespace

TEST_SUITE("torsion") {
  TEST_CASE("normalized torsion is t - 2 tr rho(mu) + 1/t") {
    const auto& m = test::figure8();
    for (const auto& p : test::figure8_samples(25)) {
      const NormalizedTorsion t = normalized_torsion(m, p.images);
      const double tr = evaluate_word(m.meridian(), p.images).trace();
      CHECK(t.poly.lo() == -1);
      CHECK(t.poly.hi() == 1);
      CHECK(std::abs(t.poly.coeff(-1) - 1.0) <= 1e-8);
      CHECK(std::abs(t.poly.coeff(1) - 1.0) <= 1e-8);
      CHECK(std::abs(t.poly.coeff(0) + 2.0 * tr) <= 1e-8);
      CHECK(trace_coefficient(t) == doctest::Approx(tr).epsilon(1e-8));
      CHECK(t.tau0 == -1);
      CHECK(t.shift % 2 != 0);
      CHECK(is_palindromic(t.poly, 1e-8));
    }
  }

  TEST_CASE("agrees with a hand-built Wada quotient up to units") {
    const auto& m = test::figure8();
    for (const auto& p : test::figure8_samples(10)) {
      const NormalizedTorsion t = normalized_torsion(m, p.images);
      const std::vector<C> ts{1.3, 0.7, 2.1, C(0.4, 0.9)};
      const C r0 = wada_oracle(p.images, ts[0]) / t.poly(ts[0]);
      const int k = static_cast<int>(std::lround(std::log(std::abs(r0)) / std::log(1.3)));
      const double s = r0.real() / std::pow(1.3, k);
      CHECK(std::abs(std::abs(s) - 1.0) < 1e-8);
      for (const C x : ts) {
        const C ratio = wada_oracle(p.images, x) / t.poly(x);
        CHECK(std::abs(ratio - s * std::pow(x, k)) <= 1e-8 * std::abs(std::pow(x, k)));
      }
    }
  }

  TEST_CASE("library Wada invariant matches and ignores the dropped generator") {
    const auto& m = test::figure8();
    const Abelianization a = abelianize(m.presentation);
    for (const auto& p : test::figure8_samples(10)) {
      const NormalizedTorsion t = normalized_torsion(m, p.images);
      const UnitClass w0 = wada_invariant(m.presentation, p.images, a, 0);
      const UnitClass w1 = wada_invariant(m.presentation, p.images, a, 1);
      CHECK(equivalent(w0, UnitClass{t.poly}, 1e-8));
      CHECK(equivalent(w1, UnitClass{t.poly}, 1e-8));
      CHECK(equivalent(w0, w1, 1e-8));
    }
  }

  TEST_CASE("Alexander quotient for the trivial twist") {
    const auto& p = test::figure8().presentation;
    const Abelianization a = abelianize(p);
    const UnitClass expected{LaurentPoly(0, {1.0, -3.0, 1.0}), LaurentPoly(0, {-1.0, 1.0})};
    CHECK(equivalent(alexander_wada(p, a, 0), expected, 1e-12));
    CHECK(equivalent(alexander_wada(p, a, 1), expected, 1e-12));
  }

  TEST_CASE("the sign-flipped representation negates the variable") {
    const auto& m = test::figure8();
    const auto& rs = test::figure8_space();
    for (const auto& p : test::figure8_samples(20)) {
      const RepPoint q = iota(rs, p);
      const LaurentPoly a = normalized_torsion(m, q.images).poly;
      const LaurentPoly b = normalized_torsion(m, p.images).poly.negated_variable();
      CHECK((a + b).max_abs() <= 1e-8);
    }
  }

  TEST_CASE("lift changes multiply the raw torsion by an even power of t") {
    const auto& m = test::figure8();
    const Abelianization a = abelianize(m.presentation);
    std::mt19937_64 rng(50);
    const auto samples = test::figure8_samples(5);
    for (int trial = 0; trial < 20; ++trial) {
      const RepPoint& p = samples[trial % samples.size()];
      const LiftChoice lifts = random_lifts(rng);
      const NormalizedTorsion base = normalized_torsion(m, p.images);
      const NormalizedTorsion moved = normalized_torsion(m, p.images, lifts);
      // A lift w in degree i rescales that basis block by det Phi(w) = t^{2 alpha(w)},
      // entering with sign (-1)^i.
      int k = 0;
      for (int i = 0; i < 3; ++i)
        for (const Word& w : lifts[i]) k += (i % 2 == 0 ? 2 : -2) * a(w);
      CHECK(relative_distance(moved.raw, base.raw.shifted(k)) <= 1e-8);
      CHECK(relative_distance(moved.poly, base.poly) <= 1e-8);
    }
  }

  TEST_CASE("conjugation invariance") {
    const auto& m = test::figure8();
    std::mt19937_64 rng(51);
    for (const auto& p : test::figure8_samples(5)) {
      const SU2Element g = test::random_su2(rng);
      std::vector<SU2Element> conj;
      for (const auto& x : p.images) conj.push_back(g * x * g.inverse());
      CHECK(relative_distance(normalized_torsion(m, conj).poly, normalized_torsion(m, p.images).poly) <= 1e-8);
    }
  }

  TEST_CASE("rational torsion divides exactly") {
    const auto& m = test::figure8();
    const Abelianization a = abelianize(m.presentation);
    const RepPoint p = test::figure8_samples(3)[0];
    const RationalTorsion r = alpha_rho_torsion(m.exterior, p.images, a, 3);
    const LaurentPoly q = as_polynomial(r);
    for (const C t : {C(0.3, 0.8), C(1.7, -0.2)}) CHECK(std::abs(q(t) - r(t)) <= 1e-8 * std::abs(r(t)));
    // Another choice of generic point gives the same polynomial.
    CHECK(relative_distance(as_polynomial(alpha_rho_torsion(m.exterior, p.images, a, 99)), q) <= 1e-9);
  }
}
