#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rtorsion/cwmodel.hpp"
#include "rtorsion/repspace.hpp"
#include "rtorsion/volform.hpp"

namespace rtorsion {

/// Generator images plus the claimed peripheral behaviour
/// phi(mu) = w mu^mu_exponent w^-1, phi(lambda) = w lambda^delta w^-1.
using OuterAutomorphism = AutomorphismRecord;

OuterAutomorphism identity_automorphism(const GroupPresentation& p);
/// psi after phi: x -> psi(phi(x)).
OuterAutomorphism compose(const OuterAutomorphism& phi, const OuterAutomorphism& psi);

struct Certificate {
  bool ok = false;
  double relator_residual = 0.0;
  double peripheral_residual = 0.0;
  bool meridian_exponent_ok = false;  // alpha(phi(mu)) = mu_exponent = +-1
  int evaluations = 0;
  std::string detail;
};

/// Relators map to the identity and the peripheral claim holds under random
/// SU(2) representations of the knot group (abelian ones and conjugates of
/// points near `irreducible`).
Certificate certify(const CWPairModel& m, const OuterAutomorphism& phi, std::span<const std::vector<SU2Element>> irreducible,
                    int evaluations = 100, std::uint64_t seed = 11);

/// Gauge-fixed point for the given images with the cocycle u pushed along;
/// the tangent keeps the class of u, corrected by a coboundary so that it is
/// tangent to the chart.
RepPoint regauge(const RepSpace& rs, std::span<const SU2Element> images, std::span<const Su2Vector> u);

/// rho* = (-1)^alpha rho, with iota_* v = v on cocycles.
RepPoint iota(const RepSpace& rs, const RepPoint& p);

/// phi^* rho = rho o phi, with the cocycle pushed forward by the Fox
/// calculus. Throws CentralMuImage when rho(phi(mu)) = +-I.
RepPoint act(const RepSpace& rs, const OuterAutomorphism& phi, const RepPoint& p);

/// delta' with P_{phi^* rho} = delta' P_rho, read from the axes of
/// rho(w^-1 phi(mu) w) and rho(mu). Throws CentralMuImage, InconsistentSign.
int delta_prime(const CWPairModel& m, const OuterAutomorphism& phi, std::span<const SU2Element> rho);

/// delta * delta', checked to be constant over the samples.
int delta_sign(const CWPairModel& m, const OuterAutomorphism& phi, const MetrizedCircle& circle);

/// tau_{phi^* rho}(phi_* v) / tau_rho(v) at the sample's tangent.
double pullback_ratio(const CWPairModel& m, const RepSpace& rs, const OuterAutomorphism& phi, const RepPoint& p);
/// tau_{rho*}(v) / tau_rho(v).
double iota_pullback_ratio(const CWPairModel& m, const RepSpace& rs, const RepPoint& p);

/// Image of a traced circle under a map of representations; chords are
/// recomputed in the chart.
CircleTrace map_trace(const RepSpace& rs, const CircleTrace& trace, const std::function<RepPoint(const RepPoint&)>& f);

/// T_D(s, t) sampled along the positive orientation.
struct TorsionFunction {
  std::vector<double> sigma;    // ascending, in [0, period)
  std::vector<std::size_t> sample;  // metrized sample index per row
  int lo = 0;                   // power of t in column 0
  Eigen::MatrixXcd coeffs;      // one row per sample
  double period = 0.0;
  bool closed = true;

  int hi() const { return lo + static_cast<int>(coeffs.cols()) - 1; }
  /// f(s) = -(coefficient of t^0) / 2 per row.
  Eigen::VectorXd trace_profile() const;
};

/// Throws as normalized_torsion does.
TorsionFunction torsion_function(const CWPairModel& m, const MetrizedCircle& circle);

/// Periodic cubic spline through complex vector data.
class PeriodicSpline {
 public:
  PeriodicSpline(std::vector<double> x, const Eigen::MatrixXcd& y, double period);
  Eigen::RowVectorXcd operator()(double s) const;
  double period() const { return period_; }

 private:
  std::vector<double> x_;
  Eigen::MatrixXcd y_, m_;  // values and second derivatives
  double period_;
};

/// G(sigma) ~ value_sign * F(s_sign * sigma + s0) evaluated at t -> (negate_t ? -1 : 1) * t^t_exponent.
struct SymmetryTransform {
  std::string name;
  int s_sign = 1;
  int value_sign = 1;
  bool negate_t = false;
  int t_exponent = 1;

  static SymmetryTransform identity() { return {"identity", 1, 1, false, 1}; }
  static SymmetryTransform iota() { return {"iota", -1, -1, true, 1}; }
  static SymmetryTransform automorphism(std::string name, int delta_d, int t_exponent) {
    return {std::move(name), delta_d, 1, false, t_exponent};
  }
};

struct SymmetryReport {
  std::string transform;
  double s0 = 0.0;
  double residual = 0.0;
  double tolerance = 1e-6;
  bool pass = false;
  std::string detail;
};

/// Best translation s0 by a grid over one period and golden-section
/// refinement of the sup-norm coefficient residual. Throws
/// ComponentMismatch when the periods differ by more than 1e-4 relative or
/// either function lives on an arc.
SymmetryReport check_symmetry(const TorsionFunction& f, const TorsionFunction& g, const SymmetryTransform& transform,
                              double tol = 1e-6);

struct FixedPoint {
  RepPoint point;
  double sigma = 0.0;
  double trace_mu = 0.0;
  double fingerprint_gap = 0.0;  // distance between the fingerprints of rho and iota(rho)
};

struct MetabelianLocus {
  std::vector<FixedPoint> points;
  bool ambient_zhs = true;  // false: only the fixed-point set of iota is claimed
};

/// Zeros of tr rho_s(mu) refined by secant steps along the circle and
/// confirmed iota-fixed.
MetabelianLocus metabelian_locus(const CWPairModel& m, const RepSpace& rs, const MetrizedCircle& circle);

}  // namespace rtorsion
