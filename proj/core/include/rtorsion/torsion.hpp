#pragma once

#include <cstdint>
#include <span>

#include "rtorsion/algebra.hpp"
#include "rtorsion/chain.hpp"
#include "rtorsion/cwmodel.hpp"
#include "rtorsion/laurent.hpp"
#include "rtorsion/su2.hpp"

namespace rtorsion {

/// T~(t) = tau0^n t^shift T(t), with T the torsion of the acyclic complex
/// C_*(E) (x) C^2 twisted by t^alpha rho.
struct NormalizedTorsion {
  LaurentPoly poly;  // palindromic
  LaurentPoly raw;   // T before the unit is fixed
  int tau0 = 1;
  int shift = 0;
};

/// Sign of the untwisted real torsion of the exterior with homology basis
/// {[pt], orientation * [mu]}.
int tau0_sign(const EquivariantComplex& exterior, const GroupPresentation& p, int orientation = 1);

/// Raw alpha (x) rho torsion as a ratio of Laurent determinants.
RationalTorsion alpha_rho_torsion(const EquivariantComplex& exterior, std::span<const SU2Element> rho,
                                  const Abelianization& alpha, std::uint64_t seed = 7);

/// Exact division num/den; throws NoSymmetricForm if a remainder is left.
LaurentPoly as_polynomial(const RationalTorsion& r, double tol = 1e-8);

/// Throws NotAcyclic, NoSymmetricForm.
NormalizedTorsion normalized_torsion(const CWPairModel& m, std::span<const SU2Element> rho,
                                     const LiftChoice& lifts = {});

/// det(Phi(Fox matrix without column k)) / det(Phi(x_k) - 1) with
/// Phi(g) = t^alpha(g) rho(g). Throws SingularDenominator.
UnitClass wada_invariant(const GroupPresentation& p, std::span<const SU2Element> rho, const Abelianization& alpha,
                         int dropped);

/// Classical Alexander-type invariant for the abelian twist rho = 1 on C^1.
UnitClass alexander_wada(const GroupPresentation& p, const Abelianization& alpha, int dropped);

/// f = -(coefficient of t^0) / 2; equals tr rho(mu) for the figure-eight.
double trace_coefficient(const NormalizedTorsion& t);

}  // namespace rtorsion
