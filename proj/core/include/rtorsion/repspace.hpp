#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rtorsion/algebra.hpp"
#include "rtorsion/chain.hpp"
#include "rtorsion/su2.hpp"

namespace rtorsion {

/// Twisted cohomology dimensions (H^0, H^1, H^2) of Ad rho and whether the
/// meridian has non-central image.
struct Regularity {
  int h0 = -1, h1 = -1, h2 = -1;
  bool mu_noncentral = false;
  bool near_singular = false;  // smallest kept singular value of d^1 below 1e-6 relative

  bool regular() const { return h0 == 0 && h1 == 1 && h2 == 1 && mu_noncentral; }
};

/// A gauge-fixed representation: rho(x_1) = cos t1 + sin t1 i, rho(x_2) =
/// cos t2 + sin t2 (cos b i + sin b j), remaining generators free.
struct RepPoint {
  std::vector<SU2Element> images;
  double residual = 0.0;
  Eigen::VectorXd chart_tangent;   // unit tangent in chart coordinates
  std::vector<Su2Vector> tangent;  // cocycle u(x_j) = rho'(x_j) rho(x_j)^-1 along the chart tangent
  Regularity regularity;
  bool near_reducible = false;

  Eigen::Vector3d gauge() const;  // (t1, t2, b)
};

SU2Element evaluate_word(const Word& w, std::span<const SU2Element> images);

using TraceFingerprint = std::vector<double>;

/// Traces of x_{i1} ... x_{ik} over all nonempty increasing index sets.
TraceFingerprint fingerprint(std::span<const SU2Element> images);
double fingerprint_distance(const TraceFingerprint& a, const TraceFingerprint& b);

struct GaugeFixed {
  std::vector<SU2Element> images;
  SU2Element conjugator;  // images = A rho A^-1
};

/// Conjugates so that x_1 has axis +i and x_2 has axis in the upper (i, j)
/// half-plane. Throws CentralElement / ReducibleLimit.
GaugeFixed gauge_fix(std::span<const SU2Element> images);

/// u(w) for a word, extending generator values by the cocycle rule
/// u(ab) = u(a) + Ad(a) u(b).
Su2Vector extend_cocycle(const Word& w, std::span<const SU2Element> images, std::span<const Su2Vector> u);

struct SolveOptions {
  double tol = 1e-10;
  int max_iterations = 50;
};

struct ContinuationOptions {
  double step = 0.01;            // target fingerprint change per step
  double min_step = 1e-5;        // fingerprint-step floor before PathLost
  double closure_tol = 1e-6;     // fingerprint gap accepted as closed
  int max_points = 200000;
  int direction = 1;             // sign of the initial tangent
  SolveOptions solve;
};

struct CircleTrace {
  std::vector<RepPoint> points;
  bool closed = false;
  double closure_gap = 0.0;
  std::vector<double> chords;  // chords[i]: chart distance from point i to point i+1 (cyclically)
  double length() const;
};

/// Representation variety of a finitely presented group into SU(2) near the
/// irreducible locus, in the gauge above.
class RepSpace {
 public:
  explicit RepSpace(GroupPresentation p);

  const GroupPresentation& presentation() const { return p_; }
  int generator_count() const { return p_.generator_count(); }
  int chart_dimension() const { return 3 * p_.generator_count() - 3; }

  std::vector<SU2Element> from_chart(const Eigen::Vector3d& gauge, std::span<const SU2Element> free = {}) const;
  /// Moves by delta in chart coordinates (gauge angles additive, free
  /// generators by left multiplication with exp).
  std::vector<SU2Element> apply(std::span<const SU2Element> images, const Eigen::VectorXd& delta) const;
  /// delta with apply(b, delta) == a.
  Eigen::VectorXd difference(std::span<const SU2Element> a, std::span<const SU2Element> b) const;
  /// Cocycle values (stacked 3n) per unit chart displacement.
  Eigen::MatrixXd chart_cocycle_matrix(std::span<const SU2Element> images) const;

  /// Vector parts of rho(r_i), stacked.
  Eigen::VectorXd residual_vector(std::span<const SU2Element> images) const;
  /// max_i |rho(r_i) - 1|.
  double residual(std::span<const SU2Element> images) const;
  /// d^1 of the Ad-twisted cochain complex (3m x 3n).
  Eigen::MatrixXd coboundary1(std::span<const SU2Element> images) const;
  /// d^0 (3n x 3).
  Eigen::MatrixXd coboundary0(std::span<const SU2Element> images) const;
  Eigen::MatrixXd chart_jacobian(std::span<const SU2Element> images) const;

  /// Newton from a chart seed to the nearest point of the variety.
  RepPoint solve_near(const Eigen::Vector3d& gauge_seed, const SolveOptions& opts = {}) const;
  /// Newton towards a representation in the slice <delta(q, anchor), normal> = value.
  std::optional<std::vector<SU2Element>> solve_on_slice(std::span<const SU2Element> guess,
                                                        std::span<const SU2Element> anchor,
                                                        const Eigen::VectorXd& normal, double value,
                                                        const SolveOptions& opts = {}) const;
  /// Fills tangent, regularity and flags; orients the tangent so that its
  /// chart direction has positive product with `hint` when one is given.
  RepPoint complete(std::vector<SU2Element> images, const Eigen::VectorXd* hint = nullptr) const;
  /// Point at signed chart distance h along the tangent.
  RepPoint advance(const RepPoint& p, double h, const SolveOptions& opts = {}) const;

  CircleTrace trace_circle(const RepPoint& start, const ContinuationOptions& opts = {}) const;

  Regularity regularity(std::span<const SU2Element> images) const;
  /// Horizontal representative (orthogonal to the coboundaries) of the
  /// tangent class, scaled to unit Killing norm. Throws NotRegular.
  std::vector<Su2Vector> tangent_cocycle(const RepPoint& p) const;
  /// Rate of change of the fingerprint along the unit chart tangent.
  double fingerprint_speed(const RepPoint& p) const;

 private:
  GroupPresentation p_;
};

/// Orthogonal projection of a cocycle onto the complement of the coboundaries.
std::vector<Su2Vector> horizontal_part(const std::vector<Su2Vector>& u, const Eigen::MatrixXd& d0);

Eigen::VectorXd stack(std::span<const Su2Vector> u);
std::vector<Su2Vector> unstack(const Eigen::VectorXd& v);

/// Random representations for numerical identity checks: abelian ones
/// (all generators sharing an axis, angles from the abelianization) and
/// conjugates of the supplied irreducible points.
std::vector<std::vector<SU2Element>> sample_representations(const GroupPresentation& p,
                                                            std::span<const std::vector<SU2Element>> irreducible,
                                                            int count, std::uint64_t seed);

}  // namespace rtorsion
