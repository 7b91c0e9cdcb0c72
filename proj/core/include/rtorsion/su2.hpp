#pragma once

#include <span>

#include <Eigen/Core>

namespace rtorsion {

/// Element p i + q j + r k of su(2), identified with R^3. The Killing form
/// -tr(XY)/2 is the Euclidean dot product in these coordinates.
struct Su2Vector {
  double p = 0.0, q = 0.0, r = 0.0;

  static Su2Vector from(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }
  Eigen::Vector3d vec() const { return {p, q, r}; }

  double norm() const;
  Su2Vector normalized() const;

  Su2Vector& operator+=(const Su2Vector& o) { p += o.p; q += o.q; r += o.r; return *this; }
  Su2Vector& operator-=(const Su2Vector& o) { p -= o.p; q -= o.q; r -= o.r; return *this; }
  friend Su2Vector operator+(Su2Vector a, const Su2Vector& b) { return a += b; }
  friend Su2Vector operator-(Su2Vector a, const Su2Vector& b) { return a -= b; }
  friend Su2Vector operator-(const Su2Vector& a) { return {-a.p, -a.q, -a.r}; }
  friend Su2Vector operator*(double s, const Su2Vector& a) { return {s * a.p, s * a.q, s * a.r}; }
};

double killing(const Su2Vector& a, const Su2Vector& b);
Su2Vector cross(const Su2Vector& a, const Su2Vector& b);

/// Unit quaternion a + b i + c j + d k, embedded in SU(2) as
/// [[a + b i, c + d i], [-c + d i, a - b i]].
class SU2Element {
 public:
  SU2Element() = default;
  SU2Element(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {}

  static SU2Element identity() { return {}; }
  /// cos(theta) + sin(theta) * axis; axis is normalized here.
  static SU2Element from_axis_angle(double theta, const Su2Vector& axis);
  static SU2Element exp(const Su2Vector& v);
  static SU2Element from_matrix(const Eigen::Matrix2cd& m);
  /// Some g with adjoint() == r, for r in SO(3).
  static SU2Element from_rotation(const Eigen::Matrix3d& r);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double scalar() const { return a_; }
  Su2Vector vector() const { return {b_, c_, d_}; }
  double trace() const { return 2.0 * a_; }

  SU2Element inverse() const { return {a_, -b_, -c_, -d_}; }
  SU2Element operator-() const { return {-a_, -b_, -c_, -d_}; }
  SU2Element renormalized() const;
  double distance(const SU2Element& o) const;  // Euclidean distance in R^4
  Su2Vector log() const;                        // principal branch, |v| <= pi

  Eigen::Matrix2cd matrix() const;
  /// Ad(g) as a rotation matrix acting on Su2Vector coordinates.
  Eigen::Matrix3d adjoint() const;
  Su2Vector conjugate(const Su2Vector& v) const;  // g v g^-1

  friend SU2Element operator*(const SU2Element& x, const SU2Element& y);

 private:
  double a_ = 1.0, b_ = 0.0, c_ = 0.0, d_ = 0.0;
};

struct AxisAngle {
  double theta = 0.0;  // in (0, pi)
  Su2Vector axis;      // unit
};

/// Throws CentralElement when g = +-I within 1e-9 on the trace.
AxisAngle extract_axis_angle(const SU2Element& g);
bool is_central(const SU2Element& g, double tol = 1e-9);

struct IrreducibilityCheck {
  bool irreducible = false;
  bool near_reducible = false;  // irreducible, but every axis pair within 1e-6
  double max_cross = 0.0;
};

/// A tuple generates an irreducible subgroup iff two of its non-central
/// elements have non-parallel axes (|P_i x P_j| >= tol).
IrreducibilityCheck check_irreducible(std::span<const SU2Element> images, double tol = 1e-8);

Eigen::Matrix3d skew(const Su2Vector& v);

}  // namespace rtorsion
