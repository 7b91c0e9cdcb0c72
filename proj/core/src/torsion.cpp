#include "rtorsion/torsion.hpp"

#include <cmath>
#include <random>

#include "rtorsion/error.hpp"

namespace rtorsion {

int tau0_sign(const EquivariantComplex& exterior, const GroupPresentation& p, int orientation) {
  RealComplex c = untwisted_chain_complex(exterior);
  const Word mu = p.peripheral ? p.peripheral->meridian : Word::generator(0);
  c.homology.resize(c.dims.size());
  for (std::size_t k = 0; k < c.dims.size(); ++k) c.homology[k] = Eigen::MatrixXd(c.dims[k], 0);
  c.homology[0] = Eigen::MatrixXd::Ones(1, 1);
  Eigen::MatrixXd m(c.dims[1], 1);
  for (int j = 0; j < c.dims[1]; ++j) m(j, 0) = orientation * mu.exponent_sum(j);
  c.homology[1] = m;
  const double tau = torsion(c);
  return tau > 0 ? 1 : -1;
}

RationalTorsion alpha_rho_torsion(const EquivariantComplex& exterior, std::span<const SU2Element> rho,
                                  const Abelianization& alpha, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return torsion_rational(alpha_rho_chain_complex(exterior, rho, alpha), rng);
}

LaurentPoly as_polynomial(const RationalTorsion& r, double tol) {
  const PolyDivision d = divide(r.numerator, r.denominator);
  if (d.remainder.max_abs() > tol * std::max(1.0, r.numerator.max_abs()))
    throw Error(Errc::NoSymmetricForm, "torsion is not a Laurent polynomial");
  return d.quotient;
}

NormalizedTorsion normalized_torsion(const CWPairModel& m, std::span<const SU2Element> rho, const LiftChoice& lifts) {
  const Abelianization alpha = abelianize(m.presentation);
  const EquivariantComplex ext = lifts.empty() ? m.exterior : relift(m.exterior, lifts);
  NormalizedTorsion out;
  out.raw = as_polynomial(alpha_rho_torsion(ext, rho, alpha));
  out.tau0 = tau0_sign(m.exterior, m.presentation);
  const Symmetrized s = symmetrize(out.raw);
  out.shift = s.shift;
  if (out.shift % 2 == 0)
    throw Error(Errc::NoSymmetricForm, "centring needs an even power of t, incompatible with an odd Euler class");
  out.poly = s.poly;  // tau0^2 = 1 for the rank-two twist
  return out;
}

UnitClass wada_invariant(const GroupPresentation& p, std::span<const SU2Element> rho, const Abelianization& alpha,
                         int dropped) {
  const int n = p.generator_count();
  const int m = p.relator_count();
  if (m != n - 1) throw Error(Errc::DimensionMismatch, "Wada invariant needs deficiency one");
  if (dropped < 0 || dropped >= n) throw Error(Errc::DimensionMismatch, "dropped generator out of range");
  std::vector<Eigen::MatrixXcd> mats;
  for (const auto& g : rho) mats.push_back(g.matrix());
  LaurentMatrix fox(2 * m, 2 * (n - 1));
  for (int i = 0; i < m; ++i) {
    int col = 0;
    for (int j = 0; j < n; ++j) {
      if (j == dropped) continue;
      fox.set_block(2 * i, 2 * col, evaluate_twisted(fox_derivative(p.relators[i], j), mats, alpha));
      ++col;
    }
  }
  const GroupRingElement xk = GroupRingElement(Word::generator(dropped)) - GroupRingElement::one();
  UnitClass w{det(fox), det(evaluate_twisted(xk, mats, alpha))};
  if (w.denominator.is_zero()) throw Error(Errc::SingularDenominator, "det(Phi(x_k) - 1) vanishes");
  return w;
}

UnitClass alexander_wada(const GroupPresentation& p, const Abelianization& alpha, int dropped) {
  const int n = p.generator_count();
  const int m = p.relator_count();
  if (m != n - 1) throw Error(Errc::DimensionMismatch, "Wada invariant needs deficiency one");
  const std::vector<Eigen::MatrixXcd> one(n, Eigen::MatrixXcd::Identity(1, 1));
  LaurentMatrix fox(m, n - 1);
  for (int i = 0; i < m; ++i) {
    int col = 0;
    for (int j = 0; j < n; ++j) {
      if (j == dropped) continue;
      fox(i, col++) = evaluate_twisted(fox_derivative(p.relators[i], j), one, alpha)(0, 0);
    }
  }
  const GroupRingElement xk = GroupRingElement(Word::generator(dropped)) - GroupRingElement::one();
  UnitClass w{det(fox), evaluate_twisted(xk, one, alpha)(0, 0)};
  if (w.denominator.is_zero()) throw Error(Errc::SingularDenominator, "alpha(x_k) = 0");
  return w;
}

double trace_coefficient(const NormalizedTorsion& t) { return -0.5 * t.poly.coeff(0).real(); }

}  // namespace rtorsion
