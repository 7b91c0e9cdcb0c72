#include "rtorsion/volform.hpp"

#include <cmath>

#include <Eigen/LU>
#include <Eigen/QR>

#include "rtorsion/error.hpp"
#include "rtorsion/parallel.hpp"
#include "rtorsion/torsion.hpp"

namespace rtorsion {

namespace {

// Value of a cochain on the lift e~ . w, from its value on e~.
Su2Vector relift_value(const Su2Vector& value, const Word& w, std::span<const SU2Element> rho) {
  return evaluate_word(w, rho).inverse().conjugate(value);
}

Eigen::VectorXd coordinates(std::span<const Su2Vector> values, const std::vector<Word>* lifts,
                            std::span<const SU2Element> rho, const Eigen::Matrix3d& binv) {
  Eigen::VectorXd out(3 * values.size());
  for (std::size_t e = 0; e < values.size(); ++e) {
    Su2Vector v = values[e];
    if (lifts && e < lifts->size()) v = relift_value(v, (*lifts)[e], rho);
    out.segment<3>(3 * e) = binv * v.vec();
  }
  return out;
}

}  // namespace

ReferenceClass compute_h_rho(const CWPairModel& m, std::span<const SU2Element> rho) {
  const SU2Element mu = evaluate_word(m.meridian(), rho);
  if (is_central(mu)) throw Error(Errc::CentralMuImage, "rho(mu) is central");
  ReferenceClass out;
  out.axis = mu.vector().normalized();
  const Eigen::Vector3d front = evaluate_word(m.torus.front_vertex, rho).adjoint() * out.axis.vec();
  const auto& row = m.inclusion.maps[2][0];
  Eigen::VectorXd g = Eigen::VectorXd::Zero(3 * row.size());
  for (std::size_t i = 0; i < row.size(); ++i)
    for (const auto& [w, c] : row[i].terms())
      g.segment<3>(3 * i) += static_cast<double>(c) * evaluate_word(w, rho).adjoint().transpose() * front;
  const double norm2 = g.squaredNorm();
  if (norm2 < 1e-20) throw Error(Errc::DegenerateRestriction, "restriction to the boundary torus vanishes");
  out.functional = unstack(g);
  out.cochain = unstack(g / norm2);
  out.pairing = 1.0;
  return out;
}

double tau_eval(const CWPairModel& m, std::span<const SU2Element> rho, std::span<const Su2Vector> v,
                const TauOptions& opts) {
  const EquivariantComplex ext = opts.lifts.empty() ? m.exterior : relift(m.exterior, opts.lifts);
  RealComplex c = adjoint_cochain_complex(ext, rho, opts.basis);
  const std::vector<int> h = homology_dimensions(c);
  if (h.size() != 3 || h[0] != 1 || h[1] != 1 || h[2] != 0)
    throw Error(Errc::NotRegular, "H^*(E; Ad rho) is not (0, 1, 1)");
  const Eigen::Matrix3d binv = opts.basis.inverse();
  const std::vector<Word>* l1 = opts.lifts.size() > 1 ? &opts.lifts[1] : nullptr;
  const std::vector<Word>* l2 = opts.lifts.size() > 2 ? &opts.lifts[2] : nullptr;
  const Eigen::VectorXd vc = coordinates(v, l1, rho, binv);
  if (vc.norm() == 0.0) return 0.0;
  const Eigen::MatrixXd& d0 = c.d[1];
  const Eigen::VectorXd off = vc - d0 * d0.completeOrthogonalDecomposition().solve(vc);
  if (off.norm() <= 1e-9 * vc.norm()) throw Error(Errc::ZeroClass, "tangent cocycle is a coboundary");
  const ReferenceClass ref = compute_h_rho(m, rho);
  c.homology = {coordinates(ref.cochain, l2, rho, binv), vc, Eigen::MatrixXd(c.dims[2], 0)};
  TorsionOptions topts;
  topts.rng = opts.rng;
  return tau0_sign(m.exterior, m.presentation) * torsion(c, topts);
}

namespace {

RepPoint with_unit_tangent(RepPoint p) {
  const double n = p.chart_tangent.norm();
  if (n > 0.0) {
    p.chart_tangent /= n;
    for (auto& v : p.tangent) v = (1.0 / n) * v;
  }
  return p;
}

// tau per unit slice parameter along the segment starting at a point with
// unit tangent t0.
double slice_speed(const CWPairModel& m, const RepPoint& p, const Eigen::VectorXd& t0) {
  const double along = p.chart_tangent.dot(t0);
  if (along <= 0.0) throw Error(Errc::NonRegularSample, "tangent turns back within one segment");
  return tau_eval(m, p.images, p.tangent) / along;
}

}  // namespace

MetrizedCircle metrize(const CWPairModel& m, const RepSpace& rs, const CircleTrace& trace, const MetrizeOptions& opts) {
  const std::size_t n = trace.points.size();
  if (n < 3) throw Error(Errc::NonRegularSample, "too few samples to metrize");
  MetrizedCircle out;
  out.closed = trace.closed;
  out.samples.resize(n);
  const std::size_t segments = out.closed ? n : n - 1;
  std::vector<double> width(segments), mid(segments, 0.0);
  parallel_for(n, [&](std::size_t k) {
    if (!trace.points[k].regularity.regular())
      throw Error(Errc::NonRegularSample, "sample " + std::to_string(k) + " is not regular");
    const RepPoint p = with_unit_tangent(trace.points[k]);
    out.samples[k].point = trace.points[k];
    out.samples[k].tau = tau_eval(m, p.images, p.tangent);
    if (k >= segments) return;
    const RepPoint& q = trace.points[(k + 1) % n];
    width[k] = rs.difference(q.images, p.images).dot(p.chart_tangent);
    if (opts.midpoints) mid[k] = slice_speed(m, with_unit_tangent(rs.advance(p, 0.5 * width[k])), p.chart_tangent);
  });
  double scale = 0.0;
  for (const auto& s : out.samples) scale = std::max(scale, std::abs(s.tau));
  out.orientation = out.samples[0].tau > 0 ? 1 : -1;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = out.samples[k].tau;
    if (std::abs(t) <= 1e-10 * std::max(1.0, scale) || (t > 0 ? 1 : -1) != out.orientation)
      throw Error(Errc::NonRegularSample, "tau vanishes or changes sign at sample " + std::to_string(k));
  }
  for (std::size_t k = 0; k < segments; ++k)
    if (opts.midpoints && (mid[k] > 0 ? 1 : -1) != out.orientation)
      throw Error(Errc::NonRegularSample, "tau changes sign inside segment " + std::to_string(k));

  auto unit = [&](std::size_t k) { return trace.points[k % n].chart_tangent.normalized(); };
  double s = 0.0, coarse = 0.0;
  for (std::size_t k = 0; k < segments; ++k) {
    out.samples[k].s = s;
    // Speeds per unit slice parameter at both ends.
    const double a = std::abs(out.samples[k].tau);
    const double b = std::abs(out.samples[(k + 1) % n].tau) / unit(k + 1).dot(unit(k));
    const double trap = 0.5 * width[k] * (a + b);
    if (opts.midpoints) {
      const double half = 0.25 * width[k] * (a + 2.0 * std::abs(mid[k]) + b);
      s += half + (half - trap) / 3.0;
      coarse += trap;
    } else {
      s += trap;
    }
  }
  if (!out.closed) out.samples[n - 1].s = s;
  out.total = s;
  if (!opts.midpoints) {
    // Every other sample as the coarse rule.
    for (std::size_t k = 0; k < segments; k += 2) {
      const std::size_t next = std::min(k + 2, segments);
      double w = 0.0;
      for (std::size_t j = k; j < next; ++j) w += width[j];
      coarse += 0.5 * w * (std::abs(out.samples[k].tau) + std::abs(out.samples[next % n].tau));
    }
  }
  // Error of the finer of the two rules compared.
  out.volume_error = std::abs(out.total - coarse) / (opts.midpoints ? 4.0 : 3.0);

  for (auto& sample : out.samples) sample.sigma = out.orientation > 0 ? sample.s : out.total - sample.s;
  if (out.closed && out.orientation < 0)
    for (auto& sample : out.samples)
      if (sample.sigma >= out.total) sample.sigma -= out.total;
  return out;
}

}  // namespace rtorsion
