#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Core>

#include <rtorsion/cwmodel.hpp>
#include <rtorsion/repspace.hpp>
#include <rtorsion/su2.hpp>

namespace rtorsion::test {

inline const CWPairModel& figure8() { return figure_eight_model(); }

inline const RepSpace& figure8_space() {
  static const RepSpace rs(figure8().presentation);
  return rs;
}

/// The figure-eight circle traced once from the default seed.
inline const CircleTrace& figure8_trace() {
  static const CircleTrace trace = figure8_space().trace_circle(figure8_space().solve_near({1.2, 1.2, 2.3}));
  return trace;
}

/// `count` evenly spaced points of the traced circle.
inline std::vector<RepPoint> figure8_samples(int count) {
  const auto& pts = figure8_trace().points;
  std::vector<RepPoint> out;
  for (int i = 0; i < count; ++i) out.push_back(pts[i * pts.size() / count]);
  return out;
}

inline SU2Element random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return SU2Element(g(rng), g(rng), g(rng), g(rng)).renormalized();
}

inline Su2Vector random_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng), g(rng)};
}

/// The 2x2 matrix of a + bi + cj + dk, built here rather than by the library.
inline Eigen::Matrix2cd as_matrix(double a, double b, double c, double d) {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  m << C(a, b), C(c, d), C(-c, d), C(a, -b);
  return m;
}

inline Eigen::Matrix2cd as_matrix(const SU2Element& g) { return as_matrix(g.a(), g.b(), g.c(), g.d()); }
inline Eigen::Matrix2cd as_matrix(const Su2Vector& v) { return as_matrix(0.0, v.p, v.q, v.r); }

/// Su2Vector coordinates of a trace-free skew-Hermitian 2x2 matrix.
inline Su2Vector from_matrix(const Eigen::Matrix2cd& m) { return {m(0, 0).imag(), m(0, 1).real(), m(0, 1).imag()}; }

}  // namespace rtorsion::test
