#include "rtorsion/symm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/QR>
#include <Eigen/SparseLU>

#include "rtorsion/error.hpp"
#include "rtorsion/parallel.hpp"
#include "rtorsion/torsion.hpp"

namespace rtorsion {

OuterAutomorphism identity_automorphism(const GroupPresentation& p) {
  OuterAutomorphism id;
  id.name = "identity";
  for (int j = 0; j < p.generator_count(); ++j) id.map.images.push_back(Word::generator(j));
  return id;
}

OuterAutomorphism compose(const OuterAutomorphism& phi, const OuterAutomorphism& psi) {
  OuterAutomorphism out;
  out.name = psi.name + "*" + phi.name;
  for (const auto& w : phi.map.images) out.map.images.push_back(psi.map.apply(w));
  out.delta = phi.delta * psi.delta;
  out.mu_exponent = phi.mu_exponent * psi.mu_exponent;
  // psi(phi(mu)) = psi(w) v mu^(e e') v^-1 psi(w)^-1
  out.conjugator = psi.map.apply(phi.conjugator) * psi.conjugator;
  return out;
}

Certificate certify(const CWPairModel& m, const OuterAutomorphism& phi, std::span<const std::vector<SU2Element>> irreducible,
                    int evaluations, std::uint64_t seed) {
  const GroupPresentation& p = m.presentation;
  Certificate c;
  c.evaluations = evaluations;
  if (static_cast<int>(phi.map.images.size()) != p.generator_count()) {
    c.detail = "wrong number of generator images";
    return c;
  }
  const Abelianization alpha = abelianize(p);
  const Word mu_image = phi.map.apply(m.meridian());
  c.meridian_exponent_ok = std::abs(phi.mu_exponent) == 1 && alpha(mu_image) == phi.mu_exponent;
  const Word& w = phi.conjugator;
  const Word want_mu = w * m.meridian().power(phi.mu_exponent) * w.inverse();
  const Word want_lambda = w * m.longitude().power(phi.delta) * w.inverse();
  const Word lambda_image = phi.map.apply(m.longitude());
  for (const auto& rho : sample_representations(p, irreducible, evaluations, seed)) {
    for (const auto& r : p.relators)
      c.relator_residual = std::max(c.relator_residual, evaluate_word(phi.map.apply(r), rho).distance(SU2Element()));
    c.peripheral_residual = std::max({c.peripheral_residual,
                                      evaluate_word(mu_image, rho).distance(evaluate_word(want_mu, rho)),
                                      evaluate_word(lambda_image, rho).distance(evaluate_word(want_lambda, rho))});
  }
  c.ok = c.meridian_exponent_ok && c.relator_residual <= 1e-9 && c.peripheral_residual <= 1e-8;
  if (!c.meridian_exponent_ok) c.detail = "meridian image does not abelianize to t^mu_exponent with mu_exponent = +-1";
  else if (c.relator_residual > 1e-9) c.detail = "a relator image is nontrivial";
  else if (c.peripheral_residual > 1e-8) c.detail = "peripheral claim fails";
  return c;
}

RepPoint regauge(const RepSpace& rs, std::span<const SU2Element> images, std::span<const Su2Vector> u) {
  const GaugeFixed g = gauge_fix(images);
  std::vector<Su2Vector> v;
  for (const auto& x : u) v.push_back(g.conjugator.conjugate(x));
  // Solve G c - d0 xi = v so that G c is a chart tangent in the class of v.
  const Eigen::MatrixXd cm = rs.chart_cocycle_matrix(g.images);
  const Eigen::MatrixXd d0 = rs.coboundary0(g.images);
  Eigen::MatrixXd a(cm.rows(), cm.cols() + 3);
  a << cm, -d0;
  const Eigen::VectorXd sol = a.completeOrthogonalDecomposition().solve(stack(v));
  RepPoint out;
  out.images = g.images;
  out.residual = rs.residual(out.images);
  out.chart_tangent = sol.head(cm.cols());
  out.tangent = unstack(cm * out.chart_tangent);
  out.regularity = rs.regularity(out.images);
  out.near_reducible = check_irreducible(out.images).near_reducible;
  return out;
}

RepPoint iota(const RepSpace& rs, const RepPoint& p) {
  const Abelianization alpha = abelianize(rs.presentation());
  std::vector<SU2Element> images;
  for (std::size_t j = 0; j < p.images.size(); ++j)
    images.push_back(alpha.exponents[j] % 2 == 0 ? p.images[j] : -p.images[j]);
  return regauge(rs, images, p.tangent);
}

RepPoint act(const RepSpace& rs, const OuterAutomorphism& phi, const RepPoint& p) {
  const GroupPresentation& pres = rs.presentation();
  if (pres.peripheral && is_central(evaluate_word(phi.map.apply(pres.peripheral->meridian), p.images)))
    throw Error(Errc::CentralMuImage, "phi^* rho(mu) is central");
  std::vector<SU2Element> images;
  std::vector<Su2Vector> u;
  for (const auto& w : phi.map.images) {
    images.push_back(evaluate_word(w, p.images));
    u.push_back(extend_cocycle(w, p.images, p.tangent));
  }
  return regauge(rs, images, u);
}

int delta_prime(const CWPairModel& m, const OuterAutomorphism& phi, std::span<const SU2Element> rho) {
  const SU2Element mu = evaluate_word(m.meridian(), rho);
  const Word& w = phi.conjugator;
  const SU2Element pulled = evaluate_word(w.inverse() * phi.map.apply(m.meridian()) * w, rho);
  if (is_central(mu) || is_central(pulled)) throw Error(Errc::CentralMuImage, "meridian image is central");
  const double c = killing(pulled.vector().normalized(), mu.vector().normalized());
  if (std::abs(std::abs(c) - 1.0) > 1e-6)
    throw Error(Errc::InconsistentSign, "meridian axes are not parallel (cos = " + std::to_string(c) + ")");
  return c > 0 ? 1 : -1;
}

int delta_sign(const CWPairModel& m, const OuterAutomorphism& phi, const MetrizedCircle& circle) {
  std::optional<int> sign;
  for (const auto& s : circle.samples) {
    const int d = phi.delta * delta_prime(m, phi, s.point.images);
    if (sign && *sign != d) throw Error(Errc::InconsistentSign, "delta_D differs between samples of one component");
    sign = d;
  }
  if (!sign) throw Error(Errc::InconsistentSign, "no samples");
  return *sign;
}

double pullback_ratio(const CWPairModel& m, const RepSpace& rs, const OuterAutomorphism& phi, const RepPoint& p) {
  const RepPoint q = act(rs, phi, p);
  return tau_eval(m, q.images, q.tangent) / tau_eval(m, p.images, p.tangent);
}

double iota_pullback_ratio(const CWPairModel& m, const RepSpace& rs, const RepPoint& p) {
  const RepPoint q = iota(rs, p);
  return tau_eval(m, q.images, q.tangent) / tau_eval(m, p.images, p.tangent);
}

CircleTrace map_trace(const RepSpace& rs, const CircleTrace& trace, const std::function<RepPoint(const RepPoint&)>& f) {
  CircleTrace out;
  out.closed = trace.closed;
  out.points.resize(trace.points.size());
  parallel_for(trace.points.size(), [&](std::size_t k) { out.points[k] = f(trace.points[k]); });
  const std::size_t n = out.points.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t next = (k + 1) % n;
    out.chords.push_back(k + 1 < n || out.closed ? rs.difference(out.points[next].images, out.points[k].images).norm()
                                                 : 0.0);
  }
  out.closure_gap = trace.closure_gap;
  return out;
}

Eigen::VectorXd TorsionFunction::trace_profile() const {
  const int col = -lo;
  if (col < 0 || col >= coeffs.cols()) return Eigen::VectorXd::Zero(coeffs.rows());
  return -0.5 * coeffs.col(col).real();
}

TorsionFunction torsion_function(const CWPairModel& m, const MetrizedCircle& circle) {
  const std::size_t n = circle.samples.size();
  std::vector<LaurentPoly> polys(n);
  parallel_for(n, [&](std::size_t k) { polys[k] = normalized_torsion(m, circle.samples[k].point.images).poly; });
  TorsionFunction f;
  f.period = circle.total;
  f.closed = circle.closed;
  f.lo = polys[0].lo();
  int hi = polys[0].hi();
  for (const auto& q : polys) {
    f.lo = std::min(f.lo, q.lo());
    hi = std::max(hi, q.hi());
  }
  f.sample.resize(n);
  std::iota(f.sample.begin(), f.sample.end(), 0);
  std::sort(f.sample.begin(), f.sample.end(),
            [&](std::size_t a, std::size_t b) { return circle.samples[a].sigma < circle.samples[b].sigma; });
  f.coeffs = Eigen::MatrixXcd::Zero(n, hi - f.lo + 1);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t k = f.sample[r];
    f.sigma.push_back(circle.samples[k].sigma);
    for (int e = f.lo; e <= hi; ++e) f.coeffs(r, e - f.lo) = polys[k].coeff(e);
  }
  return f;
}

PeriodicSpline::PeriodicSpline(std::vector<double> x, const Eigen::MatrixXcd& y, double period)
    : x_(std::move(x)), y_(y), period_(period) {
  const int n = static_cast<int>(x_.size());
  if (n < 4 || y.rows() != n) throw Error(Errc::DimensionMismatch, "spline needs at least four nodes");
  auto h = [&](int i) { return i + 1 < n ? x_[i + 1] - x_[i] : x_[0] + period_ - x_[n - 1]; };
  for (int i = 0; i < n; ++i)
    if (h(i) <= 0.0) throw Error(Errc::DimensionMismatch, "spline nodes must increase within one period");
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::MatrixXd rhs(n, 2 * y.cols());
  for (int i = 0; i < n; ++i) {
    const int prev = (i + n - 1) % n, next = (i + 1) % n;
    const double hp = h(prev), hi = h(i);
    triplets.emplace_back(i, prev, hp);
    triplets.emplace_back(i, i, 2.0 * (hp + hi));
    triplets.emplace_back(i, next, hi);
    const Eigen::RowVectorXcd r = 6.0 * ((y.row(next) - y.row(i)) / hi - (y.row(i) - y.row(prev)) / hp);
    rhs.row(i) << r.real(), r.imag();
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(a);
  const Eigen::MatrixXd sol = lu.solve(rhs);
  const Eigen::Index c = y.cols();
  m_ = Eigen::MatrixXcd(n, c);
  m_.real() = sol.leftCols(c);
  m_.imag() = sol.rightCols(c);
}

Eigen::RowVectorXcd PeriodicSpline::operator()(double s) const {
  const int n = static_cast<int>(x_.size());
  double u = std::fmod(s - x_[0], period_);
  if (u < 0) u += period_;
  u += x_[0];
  int i = static_cast<int>(std::upper_bound(x_.begin(), x_.end(), u) - x_.begin()) - 1;
  i = std::clamp(i, 0, n - 1);
  const int j = (i + 1) % n;
  const double xr = i + 1 < n ? x_[i + 1] : x_[0] + period_;
  const double h = xr - x_[i];
  const double a = (xr - u) / h, b = (u - x_[i]) / h;
  return a * y_.row(i) + b * y_.row(j) +
         ((a * a * a - a) * m_.row(i) + (b * b * b - b) * m_.row(j)) * (h * h / 6.0);
}

namespace {

// Columns of F re-indexed to G's powers after t -> (+-1) t^(+-1).
Eigen::MatrixXcd transform_columns(const TorsionFunction& f, const TorsionFunction& g, const SymmetryTransform& tr) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(f.coeffs.rows(), g.coeffs.cols());
  for (int e = f.lo; e <= f.hi(); ++e) {
    const int target = tr.t_exponent * e;
    if (target < g.lo || target > g.hi()) continue;
    const double sign = (tr.negate_t && (e % 2 != 0)) ? -1.0 : 1.0;
    out.col(target - g.lo) = tr.value_sign * sign * f.coeffs.col(e - f.lo);
  }
  return out;
}

}  // namespace

SymmetryReport check_symmetry(const TorsionFunction& f, const TorsionFunction& g, const SymmetryTransform& transform,
                              double tol) {
  if (!f.closed || !g.closed) throw Error(Errc::ComponentMismatch, "symmetry matching needs closed components");
  if (std::abs(f.period - g.period) > 1e-4 * std::max(f.period, g.period))
    throw Error(Errc::ComponentMismatch, "components have different total volume");
  for (int e = f.lo; e <= f.hi(); ++e) {
    const int target = transform.t_exponent * e;
    if ((target < g.lo || target > g.hi()) && f.coeffs.col(e - f.lo).cwiseAbs().maxCoeff() > tol)
      throw Error(Errc::ComponentMismatch, "torsion functions have different degree ranges");
  }
  const PeriodicSpline spline(f.sigma, transform_columns(f, g, transform), f.period);
  auto residual = [&](double s0) {
    double r = 0.0;
    for (Eigen::Index k = 0; k < g.coeffs.rows(); ++k) {
      const Eigen::RowVectorXcd diff = g.coeffs.row(k) - spline(transform.s_sign * g.sigma[k] + s0);
      r = std::max(r, diff.cwiseAbs().maxCoeff());
    }
    return r;
  };
  const int grid = 2000;
  const double step = f.period / grid;
  double best = 0.0, best_r = residual(0.0);
  for (int i = 1; i < grid; ++i) {
    const double r = residual(i * step);
    if (r < best_r) best_r = r, best = i * step;
  }
  // Golden-section refinement on [best - step, best + step].
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best - step, b = best + step;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double rc = residual(c), rd = residual(d);
  while (b - a > 1e-13 * std::max(1.0, f.period)) {
    if (rc < rd) {
      b = d, d = c, rd = rc;
      c = b - phi * (b - a), rc = residual(c);
    } else {
      a = c, c = d, rc = rd;
      d = a + phi * (b - a), rd = residual(d);
    }
  }
  const double s0 = rc < rd ? c : d;
  SymmetryReport rep;
  rep.transform = transform.name;
  rep.residual = std::min({rc, rd, best_r});
  rep.s0 = rep.residual == best_r ? best : s0;
  rep.s0 = std::fmod(rep.s0 + f.period, f.period);
  rep.tolerance = tol;
  rep.pass = rep.residual <= tol;
  return rep;
}

MetabelianLocus metabelian_locus(const CWPairModel& m, const RepSpace& rs, const MetrizedCircle& circle) {
  MetabelianLocus out;
  out.ambient_zhs = m.ambient != Ambient::RationalHomologySphere;
  const auto& samples = circle.samples;
  const std::size_t n = samples.size();
  const std::size_t segments = circle.closed ? n : n - 1;
  auto trace_mu = [&](const RepPoint& p) { return evaluate_word(m.meridian(), p.images).trace(); };
  for (std::size_t k = 0; k < segments; ++k) {
    const RepPoint& p = samples[k].point;
    const RepPoint& q = samples[(k + 1) % n].point;
    const double f0 = trace_mu(p), f1 = trace_mu(q);
    const bool crosses = f0 == 0.0 || (f1 != 0.0 && (f0 > 0) != (f1 > 0));
    if (!crosses) continue;
    // Regula falsi (Illinois) in the slice parameter h from p.
    const double width = rs.difference(q.images, p.images).dot(p.chart_tangent);
    double a = 0.0, b = width, fa = f0, fb = f1;
    RepPoint root = p;
    double h = 0.0, fr = f0;
    int side = 0;
    for (int it = 0; it < 100 && std::abs(fr) > 1e-13; ++it) {
      h = (a * fb - b * fa) / (fb - fa);
      root = rs.advance(p, h);
      fr = trace_mu(root);
      if ((fr > 0) == (fb > 0)) {
        b = h, fb = fr;
        if (side == -1) fa /= 2;
        side = -1;
      } else {
        a = h, fa = fr;
        if (side == 1) fb /= 2;
        side = 1;
      }
    }
    const double tau_root =
        std::abs(tau_eval(m, root.images, root.tangent)) / root.chart_tangent.dot(p.chart_tangent);
    const double s = samples[k].s + 0.5 * (std::abs(samples[k].tau) + tau_root) * h;
    FixedPoint fp;
    fp.point = root;
    fp.trace_mu = fr;
    fp.sigma = circle.orientation > 0 ? s : circle.total - s;
    if (circle.closed) fp.sigma = std::fmod(fp.sigma + circle.total, circle.total);
    fp.fingerprint_gap = fingerprint_distance(fingerprint(root.images), fingerprint(iota(rs, root).images));
    if (fp.fingerprint_gap < 1e-6) out.points.push_back(std::move(fp));
  }
  return out;
}

}  // namespace rtorsion
