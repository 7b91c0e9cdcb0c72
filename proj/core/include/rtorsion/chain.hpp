#pragma once

#include <complex>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rtorsion/algebra.hpp"
#include "rtorsion/laurent.hpp"
#include "rtorsion/su2.hpp"

namespace rtorsion {

/// Cellular chain complex of the universal cover as free left modules over
/// the group ring. boundary[d - 1] is the d-th boundary: row e (a d-cell),
/// column f (a (d-1)-cell), so that d(e~) = sum_f boundary[d-1][e][f] f~.
struct EquivariantComplex {
  std::vector<int> cells;
  std::vector<GroupRingMatrix> boundary;

  int top() const { return static_cast<int>(cells.size()) - 1; }

  /// The presentation 2-complex: one vertex, an edge per generator and a
  /// 2-cell per relator; boundaries are Fox derivatives and x_j - 1.
  static EquivariantComplex from_presentation(const GroupPresentation& p);
};

/// Per degree and per cell a word w; the new lift of e is e~ . w = w^{-1} e~.
using LiftChoice = std::vector<std::vector<Word>>;

EquivariantComplex relift(const EquivariantComplex& c, const LiftChoice& lifts);

/// Finite based chain complex over Scalar. d[k] maps degree lowest+k+1 to
/// degree lowest+k and has shape dims[k] x dims[k+1]. homology[k] holds
/// cycle representatives of a homology basis in degree lowest+k as columns.
template <class Scalar>
struct BasedComplex {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  int lowest = 0;
  std::vector<int> dims;
  std::vector<Matrix> d;
  std::vector<Matrix> homology;

  int length() const { return static_cast<int>(dims.size()); }
  int degree(int k) const { return lowest + k; }
  /// Checks shapes and that consecutive differentials compose to zero
  /// within `tol` relative; throws DimensionMismatch.
  void check(double tol = 1e-9) const;
};

using RealComplex = BasedComplex<double>;
using ComplexComplex = BasedComplex<std::complex<double>>;

struct TorsionOptions {
  std::mt19937_64* rng = nullptr;  // randomize b_i choices and homology lifts
  double rank_tol = 1e-10;         // relative threshold for numerical rank
};

/// Sign-refined torsion (-1)^{|C|} prod_i [b_i h_i b_{i-1} / c_i]^{(-1)^{i+1}}.
/// Throws NotAcyclic when the given homology bases do not match the homology
/// dimensions and DegenerateBasis when they do not span it.
template <class Scalar>
Scalar torsion(const BasedComplex<Scalar>& c, const TorsionOptions& opts = {});

/// Homology dimensions by numerical rank.
template <class Scalar>
std::vector<int> homology_dimensions(const BasedComplex<Scalar>& c, double rank_tol = 1e-10);

template <class Scalar>
int numerical_rank(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m, double rank_tol = 1e-10);

/// Exponent of -1 in the sign term.
int sign_exponent(const std::vector<int>& dims, const std::vector<int>& betti);

/// Chain complex over Laurent polynomials; same layout as BasedComplex, no
/// homology (used for acyclic twists).
struct LaurentComplex {
  int lowest = 0;
  std::vector<int> dims;
  std::vector<LaurentMatrix> d;

  ComplexComplex evaluate(std::complex<double> t) const;
};

struct RationalTorsion {
  LaurentPoly numerator;
  LaurentPoly denominator;

  std::complex<double> operator()(std::complex<double> t) const { return numerator(t) / denominator(t); }
};

/// Torsion of an acyclic Laurent complex as a ratio of minor determinants.
/// The minors are chosen at a generic point of the unit circle and the
/// result is checked against the numerical torsion there.
RationalTorsion torsion_rational(const LaurentComplex& c, std::mt19937_64& rng);

/// C (x) V with V = C^2 twisted by t^alpha rho, using the right action
/// e~ . g = g^{-1} e~; the block (f, e) of the boundary is Phi(conj(D[e][f])).
LaurentComplex alpha_rho_chain_complex(const EquivariantComplex& c, std::span<const SU2Element> rho,
                                       const Abelianization& alpha);

/// Hom(C, su(2)) twisted by Ad rho, regraded so that C^i sits in degree -i.
/// `basis` expresses the preferred basis of su(2) in standard coordinates
/// (columns); the identity gives (i, j, k).
RealComplex adjoint_cochain_complex(const EquivariantComplex& c, std::span<const SU2Element> rho,
                                    const Eigen::Matrix3d& basis = Eigen::Matrix3d::Identity());

/// Real untwisted chain complex (augmentation) without homology bases.
RealComplex untwisted_chain_complex(const EquivariantComplex& c);

/// Real untwisted cochain complex regraded to negative degrees.
RealComplex untwisted_cochain_complex(const EquivariantComplex& c);

/// Ad rho evaluation of a group ring element, optionally in another basis.
Eigen::Matrix3d adjoint_evaluate(const GroupRingElement& g, std::span<const Eigen::Matrix3d> ad,
                                 std::span<const Eigen::Matrix3d> ad_inv);

}  // namespace rtorsion
