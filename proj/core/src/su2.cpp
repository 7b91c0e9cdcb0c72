#include "rtorsion/su2.hpp"

#include <algorithm>
#include <cmath>

#include "rtorsion/error.hpp"

namespace rtorsion {

double Su2Vector::norm() const { return std::sqrt(p * p + q * q + r * r); }

Su2Vector Su2Vector::normalized() const {
  const double n = norm();
  return (1.0 / n) * *this;
}

double killing(const Su2Vector& a, const Su2Vector& b) { return a.p * b.p + a.q * b.q + a.r * b.r; }

Su2Vector cross(const Su2Vector& a, const Su2Vector& b) {
  return {a.q * b.r - a.r * b.q, a.r * b.p - a.p * b.r, a.p * b.q - a.q * b.p};
}

SU2Element SU2Element::from_axis_angle(double theta, const Su2Vector& axis) {
  const Su2Vector u = axis.normalized();
  const double s = std::sin(theta);
  return {std::cos(theta), s * u.p, s * u.q, s * u.r};
}

SU2Element SU2Element::exp(const Su2Vector& v) {
  const double n = v.norm();
  if (n < 1e-300) return identity();
  // sin(n)/n stays accurate near 0 through the Taylor branch.
  const double k = n < 1e-4 ? 1.0 - n * n / 6.0 : std::sin(n) / n;
  return {std::cos(n), k * v.p, k * v.q, k * v.r};
}

SU2Element SU2Element::from_matrix(const Eigen::Matrix2cd& m) {
  return {m(0, 0).real(), m(0, 0).imag(), m(0, 1).real(), m(0, 1).imag()};
}

SU2Element SU2Element::from_rotation(const Eigen::Matrix3d& r) {
  // Branch on the largest of the four squared components for stability.
  const double tr = r.trace();
  const double w[4] = {1.0 + tr, 1.0 + r(0, 0) - r(1, 1) - r(2, 2), 1.0 - r(0, 0) + r(1, 1) - r(2, 2),
                       1.0 - r(0, 0) - r(1, 1) + r(2, 2)};
  const int k = static_cast<int>(std::max_element(w, w + 4) - w);
  const double s = 2.0 * std::sqrt(w[k]);
  switch (k) {
    case 0:
      return SU2Element(s / 4, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s, (r(1, 0) - r(0, 1)) / s)
          .renormalized();
    case 1:
      return SU2Element((r(2, 1) - r(1, 2)) / s, s / 4, (r(0, 1) + r(1, 0)) / s, (r(0, 2) + r(2, 0)) / s)
          .renormalized();
    case 2:
      return SU2Element((r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, s / 4, (r(1, 2) + r(2, 1)) / s)
          .renormalized();
    default:
      return SU2Element((r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s, s / 4)
          .renormalized();
  }
}

SU2Element SU2Element::renormalized() const {
  const double n = std::sqrt(a_ * a_ + b_ * b_ + c_ * c_ + d_ * d_);
  return {a_ / n, b_ / n, c_ / n, d_ / n};
}

double SU2Element::distance(const SU2Element& o) const {
  const double da = a_ - o.a_, db = b_ - o.b_, dc = c_ - o.c_, dd = d_ - o.d_;
  return std::sqrt(da * da + db * db + dc * dc + dd * dd);
}

Su2Vector SU2Element::log() const {
  const Su2Vector v = vector();
  const double s = v.norm();
  if (s < 1e-300) return {};
  const double angle = std::atan2(s, a_);
  return (angle / s) * v;
}

Eigen::Matrix2cd SU2Element::matrix() const {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  m << C(a_, b_), C(c_, d_), C(-c_, d_), C(a_, -b_);
  return m;
}

Eigen::Matrix3d SU2Element::adjoint() const {
  const double a = a_, b = b_, c = c_, d = d_;
  Eigen::Matrix3d r;
  r << a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c),
      2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b),
      2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d;
  return r;
}

Su2Vector SU2Element::conjugate(const Su2Vector& v) const { return Su2Vector::from(adjoint() * v.vec()); }

SU2Element operator*(const SU2Element& x, const SU2Element& y) {
  return {x.a_ * y.a_ - x.b_ * y.b_ - x.c_ * y.c_ - x.d_ * y.d_,
          x.a_ * y.b_ + x.b_ * y.a_ + x.c_ * y.d_ - x.d_ * y.c_,
          x.a_ * y.c_ - x.b_ * y.d_ + x.c_ * y.a_ + x.d_ * y.b_,
          x.a_ * y.d_ + x.b_ * y.c_ - x.c_ * y.b_ + x.d_ * y.a_};
}

bool is_central(const SU2Element& g, double tol) { return std::abs(std::abs(g.trace()) - 2.0) < tol; }

AxisAngle extract_axis_angle(const SU2Element& g) {
  const Su2Vector v = g.vector();
  const double s = v.norm();
  if (is_central(g) || s < 1e-12) throw Error(Errc::CentralElement, "element is +-I");
  return {std::atan2(s, g.scalar()), (1.0 / s) * v};
}

IrreducibilityCheck check_irreducible(std::span<const SU2Element> images, double tol) {
  std::vector<Su2Vector> axes;
  for (const auto& g : images)
    if (g.vector().norm() > 1e-9) axes.push_back(g.vector().normalized());
  IrreducibilityCheck out;
  for (std::size_t i = 0; i < axes.size(); ++i)
    for (std::size_t j = i + 1; j < axes.size(); ++j)
      out.max_cross = std::max(out.max_cross, cross(axes[i], axes[j]).norm());
  out.irreducible = out.max_cross >= tol;
  out.near_reducible = out.irreducible && out.max_cross < 1e-6;
  return out;
}

Eigen::Matrix3d skew(const Su2Vector& v) {
  Eigen::Matrix3d m;
  m << 0, -v.r, v.q, v.r, 0, -v.p, -v.q, v.p, 0;
  return m;
}

}  // namespace rtorsion
