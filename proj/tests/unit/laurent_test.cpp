#include <doctest.h>

#include <random>

#include <rtorsion/error.hpp>
#include <rtorsion/laurent.hpp>

#include <nlohmann/json.hpp>

using namespace rtorsion;
using C = std::complex<double>;

namespace {

LaurentPoly random_poly(std::mt19937_64& rng, int lo, int hi) {
  std::normal_distribution<double> g;
  std::vector<C> c;
  for (int e = lo; e <= hi; ++e) c.emplace_back(g(rng), g(rng));
  return LaurentPoly(lo, c);
}

LaurentMatrix random_matrix(std::mt19937_64& rng, int n, int max_degree) {
  LaurentMatrix m(n, n);
  std::uniform_int_distribution<int> lo(-1, 0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const int l = lo(rng);
      m(r, c) = random_poly(rng, l, l + max_degree);
    }
  return m;
}

// Laplace expansion along the first row, written independently of the
// library's determinant routines.
LaurentPoly laplace(const LaurentMatrix& m) {
  const int n = m.rows();
  if (n == 1) return m(0, 0);
  LaurentPoly acc;
  for (int c = 0; c < n; ++c) {
    std::vector<int> rows, cols;
    for (int i = 1; i < n; ++i) rows.push_back(i);
    for (int j = 0; j < n; ++j)
      if (j != c) cols.push_back(j);
    const LaurentPoly term = m(0, c) * laplace(m.submatrix(rows, cols));
    acc += (c % 2 == 0) ? term : -term;
  }
  return acc;
}

}  // namespace

TEST_SUITE("laurent") {
  TEST_CASE("construction trims and evaluates") {
    const LaurentPoly p(-1, {0.0, 1.0, -3.0, 1.0, 1e-14});
    CHECK(p.lo() == 0);
    CHECK(p.hi() == 2);
    const C t(0.3, 0.7);
    CHECK(std::abs(p(t) - (1.0 - 3.0 * t + t * t)) < 1e-14);
    CHECK(LaurentPoly(0, {0.0, 0.0}).is_zero());
  }

  TEST_CASE("arithmetic agrees with pointwise evaluation") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
      const LaurentPoly a = random_poly(rng, -2, 3), b = random_poly(rng, -1, 1);
      const C t = std::polar(1.3, 0.1 * trial);
      CHECK(std::abs((a * b)(t) - a(t) * b(t)) < 1e-10 * std::abs(a(t) * b(t)) + 1e-12);
      CHECK(std::abs((a + b)(t) - (a(t) + b(t))) < 1e-12);
      CHECK(std::abs(a.reflected()(t) - a(1.0 / t)) < 1e-10);
      CHECK(std::abs(a.negated_variable()(t) - a(-t)) < 1e-10);
      CHECK(std::abs(a.shifted(3)(t) - t * t * t * a(t)) < 1e-10 * std::abs(a(t)) + 1e-12);
      CHECK((a * b).span() == a.span() + b.span());
    }
  }

  TEST_CASE("division recovers factors") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
      const LaurentPoly a = random_poly(rng, -2, 2), b = random_poly(rng, 1, 3);
      const PolyDivision d = divide(a * b, b);
      CHECK(d.remainder.max_abs() < 1e-9 * (a * b).max_abs());
      CHECK(relative_distance(d.quotient, a) < 1e-9);
    }
  }

  TEST_CASE("symmetrize fixtures") {
    // Alexander polynomial of the figure-eight knot.
    const Symmetrized a = symmetrize(LaurentPoly(0, {1.0, -3.0, 1.0}));
    CHECK(a.shift == -1);
    CHECK(relative_distance(a.poly, LaurentPoly(-1, {1.0, -3.0, 1.0})) < 1e-14);

    const Symmetrized b = symmetrize(LaurentPoly(-1, {1.0, -0.8, 1.0}));
    CHECK(b.shift == 0);

    const Symmetrized c = symmetrize(LaurentPoly(C{1.0}));
    CHECK(c.shift == 0);
    CHECK(c.poly.coeff(0) == C{1.0});

    CHECK_THROWS_AS(symmetrize(LaurentPoly(0, {1.0, 2.0})), Error);
    CHECK_THROWS_AS(symmetrize(LaurentPoly(0, {1.0, 2.0, 3.0})), Error);
    CHECK(is_palindromic(LaurentPoly(-2, {2.0, 1.0, 5.0, 1.0, 2.0}), 1e-12));
  }

  TEST_CASE("units: equivalence relation on triples") {
    std::mt19937_64 rng(3);
    const LaurentPoly a = random_poly(rng, 0, 3);
    const LaurentPoly b = -a.shifted(2);
    const LaurentPoly c = b.shifted(-5);
    CHECK(equal_up_to_unit(a, a, 1e-12));
    CHECK(equal_up_to_unit(a, b, 1e-12));
    CHECK(equal_up_to_unit(b, a, 1e-12));
    CHECK(equal_up_to_unit(a, c, 1e-12));
    CHECK_FALSE(equal_up_to_unit(a, a * C(2.0), 1e-12));
    CHECK_FALSE(equal_up_to_unit(a, a + LaurentPoly::monomial(0.1, 1), 1e-12));

    const UnitClass x{a, LaurentPoly(0, {-1.0, 1.0})};
    const UnitClass y{-a.shifted(1), LaurentPoly(0, {-1.0, 1.0}).shifted(-2)};
    CHECK(equivalent(x, y, 1e-12));
  }

  TEST_CASE("determinant fixtures") {
    LaurentMatrix m(1, 1);
    m(0, 0) = LaurentPoly::monomial(1.0, 1);
    CHECK(relative_distance(det(m), LaurentPoly::monomial(1.0, 1)) == 0.0);
    for (int n = 1; n <= 7; ++n) CHECK(relative_distance(det(LaurentMatrix::identity(n)), LaurentPoly(C{1.0})) < 1e-12);
  }

  TEST_CASE("interpolation matches Laplace expansion") {
    std::mt19937_64 rng(4);
    for (int n = 1; n <= 4; ++n)
      for (int trial = 0; trial < 10; ++trial) {
        const LaurentMatrix m = random_matrix(rng, n, 2);
        const LaurentPoly oracle = laplace(m);
        CHECK(relative_distance(det_cofactor(m), oracle) < 1e-10);
        CHECK(relative_distance(det_interpolate(m), oracle) < 1e-9);
      }
    for (int trial = 0; trial < 3; ++trial) {
      const LaurentMatrix m = random_matrix(rng, 6, 2);
      CHECK(relative_distance(det(m), laplace(m)) < 1e-9);
    }
  }

  TEST_CASE("determinant is multiplicative") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
      const LaurentMatrix a = random_matrix(rng, 5, 1), b = random_matrix(rng, 5, 2);
      CHECK(relative_distance(det(a * b), det(a) * det(b)) < 1e-8);
    }
  }

  TEST_CASE("json round trip") {
    const LaurentPoly p(-1, {C(1, 2), C(-3, 0), C(1, -2)});
    nlohmann::json j = p;
    CHECK(j["lo"] == -1);
    CHECK(j["coeffs"].size() == 3);
    const LaurentPoly q = j.get<LaurentPoly>();
    CHECK(relative_distance(p, q) == 0.0);
  }
}
