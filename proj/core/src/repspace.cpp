#include "rtorsion/repspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "rtorsion/error.hpp"

namespace rtorsion {

namespace {

double gauge_angle(const SU2Element& g) { return std::atan2(g.vector().norm(), g.scalar()); }

Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  return a.completeOrthogonalDecomposition().solve(b);
}

}  // namespace

SU2Element evaluate_word(const Word& w, std::span<const SU2Element> images) {
  SU2Element acc;
  for (const auto& l : w.letters()) acc = acc * (l.exp > 0 ? images[l.gen] : images[l.gen].inverse());
  return acc;
}

Eigen::VectorXd stack(std::span<const Su2Vector> u) {
  Eigen::VectorXd v(3 * u.size());
  for (std::size_t j = 0; j < u.size(); ++j) v.segment<3>(3 * j) = u[j].vec();
  return v;
}

std::vector<Su2Vector> unstack(const Eigen::VectorXd& v) {
  std::vector<Su2Vector> u(v.size() / 3);
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = Su2Vector::from(v.segment<3>(3 * j));
  return u;
}

Eigen::Vector3d RepPoint::gauge() const {
  const Su2Vector v = images[1].vector();
  return {std::atan2(images[0].b(), images[0].a()), gauge_angle(images[1]), std::atan2(v.q, v.p)};
}

TraceFingerprint fingerprint(std::span<const SU2Element> images) {
  const std::size_t n = images.size();
  TraceFingerprint fp;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    SU2Element acc;
    for (std::size_t j = 0; j < n; ++j)
      if (mask & (std::size_t{1} << j)) acc = acc * images[j];
    fp.push_back(acc.trace());
  }
  return fp;
}

double fingerprint_distance(const TraceFingerprint& a, const TraceFingerprint& b) {
  if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "fingerprints of different length");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

GaugeFixed gauge_fix(std::span<const SU2Element> images) {
  if (images.size() < 2) throw Error(Errc::ReducibleLimit, "need two generators to fix the gauge");
  const Su2Vector p1 = extract_axis_angle(images[0]).axis;
  const Su2Vector p2 = extract_axis_angle(images[1]).axis;
  const Su2Vector perp = p2 - killing(p2, p1) * p1;
  if (perp.norm() < 1e-8) throw Error(Errc::ReducibleLimit, "first two generators have parallel axes");
  const Su2Vector e2 = perp.normalized();
  const Su2Vector e3 = cross(p1, e2);
  Eigen::Matrix3d r;
  r.row(0) = p1.vec().transpose();
  r.row(1) = e2.vec().transpose();
  r.row(2) = e3.vec().transpose();
  GaugeFixed out{{}, SU2Element::from_rotation(r)};
  for (const auto& g : images) out.images.push_back((out.conjugator * g * out.conjugator.inverse()).renormalized());
  return out;
}

Su2Vector extend_cocycle(const Word& w, std::span<const SU2Element> images, std::span<const Su2Vector> u) {
  SU2Element prefix;
  Su2Vector acc;
  for (const auto& l : w.letters()) {
    if (l.exp > 0) {
      acc += prefix.conjugate(u[l.gen]);
      prefix = prefix * images[l.gen];
    } else {
      prefix = prefix * images[l.gen].inverse();
      acc -= prefix.conjugate(u[l.gen]);
    }
  }
  return acc;
}

double CircleTrace::length() const {
  double s = 0.0;
  for (double c : chords) s += c;
  return s;
}

RepSpace::RepSpace(GroupPresentation p) : p_(std::move(p)) {
  p_.validate();
  if (p_.generator_count() < 2) throw Error(Errc::DimensionMismatch, "need at least two generators");
}

std::vector<SU2Element> RepSpace::from_chart(const Eigen::Vector3d& gauge, std::span<const SU2Element> free) const {
  std::vector<SU2Element> images(p_.generator_count());
  images[0] = SU2Element::from_axis_angle(gauge(0), {1, 0, 0});
  images[1] = SU2Element::from_axis_angle(gauge(1), {std::cos(gauge(2)), std::sin(gauge(2)), 0});
  for (int k = 2; k < p_.generator_count(); ++k)
    images[k] = static_cast<std::size_t>(k - 2) < free.size() ? free[k - 2] : SU2Element::identity();
  return images;
}

std::vector<SU2Element> RepSpace::apply(std::span<const SU2Element> images, const Eigen::VectorXd& delta) const {
  RepPoint tmp;
  tmp.images.assign(images.begin(), images.end());
  const Eigen::Vector3d g = tmp.gauge() + delta.head<3>();
  std::vector<SU2Element> free;
  for (int k = 2; k < p_.generator_count(); ++k)
    free.push_back((SU2Element::exp(Su2Vector::from(delta.segment<3>(3 * k - 3))) * images[k]).renormalized());
  return from_chart(g, free);
}

Eigen::VectorXd RepSpace::difference(std::span<const SU2Element> a, std::span<const SU2Element> b) const {
  RepPoint pa, pb;
  pa.images.assign(a.begin(), a.end());
  pb.images.assign(b.begin(), b.end());
  Eigen::VectorXd d(chart_dimension());
  d.head<3>() = pa.gauge() - pb.gauge();
  for (int k = 2; k < p_.generator_count(); ++k) d.segment<3>(3 * k - 3) = (a[k] * b[k].inverse()).log().vec();
  return d;
}

Eigen::MatrixXd RepSpace::chart_cocycle_matrix(std::span<const SU2Element> images) const {
  const int n = p_.generator_count();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(3 * n, chart_dimension());
  RepPoint tmp;
  tmp.images.assign(images.begin(), images.end());
  const Eigen::Vector3d c = tmp.gauge();
  const double s2 = std::sin(c(1)), c2 = std::cos(c(1));
  const Eigen::Vector3d axis(std::cos(c(2)), std::sin(c(2)), 0.0);
  const Eigen::Vector3d axis_prime(-std::sin(c(2)), std::cos(c(2)), 0.0);
  g(0, 0) = 1.0;
  g.block<3, 1>(3, 1) = axis;
  g.block<3, 1>(3, 2) = s2 * c2 * axis_prime + s2 * s2 * Eigen::Vector3d::UnitZ();
  for (int k = 2; k < n; ++k) g.block<3, 3>(3 * k, 3 * k - 3).setIdentity();
  return g;
}

Eigen::VectorXd RepSpace::residual_vector(std::span<const SU2Element> images) const {
  Eigen::VectorXd f(3 * p_.relator_count());
  for (int i = 0; i < p_.relator_count(); ++i) f.segment<3>(3 * i) = evaluate_word(p_.relators[i], images).vector().vec();
  return f;
}

double RepSpace::residual(std::span<const SU2Element> images) const {
  double m = 0.0;
  for (const auto& r : p_.relators) m = std::max(m, evaluate_word(r, images).distance(SU2Element::identity()));
  return m;
}

Eigen::MatrixXd RepSpace::coboundary1(std::span<const SU2Element> images) const {
  const int n = p_.generator_count();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3 * p_.relator_count(), 3 * n);
  for (int i = 0; i < p_.relator_count(); ++i) {
    SU2Element prefix;
    for (const auto& l : p_.relators[i].letters()) {
      if (l.exp > 0) {
        d.block<3, 3>(3 * i, 3 * l.gen) += prefix.adjoint();
        prefix = prefix * images[l.gen];
      } else {
        prefix = prefix * images[l.gen].inverse();
        d.block<3, 3>(3 * i, 3 * l.gen) -= prefix.adjoint();
      }
    }
  }
  return d;
}

Eigen::MatrixXd RepSpace::coboundary0(std::span<const SU2Element> images) const {
  const int n = p_.generator_count();
  Eigen::MatrixXd d(3 * n, 3);
  for (int j = 0; j < n; ++j) d.block<3, 3>(3 * j, 0) = images[j].adjoint() - Eigen::Matrix3d::Identity();
  return d;
}

Eigen::MatrixXd RepSpace::chart_jacobian(std::span<const SU2Element> images) const {
  const int m = p_.relator_count();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3 * m, 3 * m);
  for (int i = 0; i < m; ++i) {
    const SU2Element q = evaluate_word(p_.relators[i], images);
    w.block<3, 3>(3 * i, 3 * i) = q.scalar() * Eigen::Matrix3d::Identity() - skew(q.vector());
  }
  return w * coboundary1(images) * chart_cocycle_matrix(images);
}

RepPoint RepSpace::solve_near(const Eigen::Vector3d& gauge_seed, const SolveOptions& opts) const {
  std::vector<SU2Element> images = from_chart(gauge_seed);
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Eigen::VectorXd f = residual_vector(images);
    if (!f.allFinite()) break;
    if (f.cwiseAbs().maxCoeff() <= opts.tol && residual(images) <= 10 * opts.tol) {
      if (check_irreducible(std::span<const SU2Element>(images).first(2)).max_cross < 1e-8)
        throw Error(Errc::ReducibleLimit, "Newton converged to a reducible representation");
      return complete(std::move(images));
    }
    const Eigen::VectorXd delta = solve_least_squares(chart_jacobian(images), -f);
    images = apply(images, delta);
  }
  throw Error(Errc::NoConvergence, "Newton did not reach residual " + std::to_string(opts.tol));
}

std::optional<std::vector<SU2Element>> RepSpace::solve_on_slice(std::span<const SU2Element> guess,
                                                                std::span<const SU2Element> anchor,
                                                                const Eigen::VectorXd& normal, double value,
                                                                const SolveOptions& opts) const {
  std::vector<SU2Element> images(guess.begin(), guess.end());
  const int dim = chart_dimension();
  const int rows = 3 * p_.relator_count();
  Eigen::MatrixXd a(rows + 1, dim);
  Eigen::VectorXd b(rows + 1);
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Eigen::VectorXd f = residual_vector(images);
    const double g = normal.dot(difference(images, anchor)) - value;
    if (!f.allFinite() || !std::isfinite(g)) return std::nullopt;
    const double err = std::max(f.cwiseAbs().maxCoeff(), std::abs(g));
    if (err <= opts.tol) {
      if (residual(images) > 10 * opts.tol) return std::nullopt;  // converged onto rho(r) = -1
      return images;
    }
    if (it > 3 && err > 0.5 * last) return std::nullopt;  // not contracting
    last = err;
    a.topRows(rows) = chart_jacobian(images);
    a.row(rows) = normal.transpose();
    b.head(rows) = -f;
    b(rows) = -g;
    images = apply(images, solve_least_squares(a, b));
  }
  return std::nullopt;
}

Regularity RepSpace::regularity(std::span<const SU2Element> images) const {
  Regularity reg;
  const Eigen::MatrixXd d0 = coboundary0(images);
  const Eigen::MatrixXd d1 = coboundary1(images);
  const int r0 = numerical_rank<double>(d0, 1e-8);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d1);
  const auto& s = svd.singularValues();
  int r1 = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > 1e-8 * s(0)) ++r1;
  reg.h0 = 3 - r0;
  reg.h1 = 3 * p_.generator_count() - r0 - r1;
  reg.h2 = 3 * p_.relator_count() - r1;
  reg.near_singular = r1 > 0 && s(r1 - 1) < 1e-6 * s(0);
  const Word mu = p_.peripheral ? p_.peripheral->meridian : Word::generator(0);
  reg.mu_noncentral = !is_central(evaluate_word(mu, images));
  return reg;
}

RepPoint RepSpace::complete(std::vector<SU2Element> images, const Eigen::VectorXd* hint) const {
  RepPoint p;
  p.images = std::move(images);
  p.residual = residual(p.images);
  const Eigen::MatrixXd j = chart_jacobian(p.images);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeFullV);
  p.chart_tangent = svd.matrixV().col(chart_dimension() - 1);
  if (hint && p.chart_tangent.dot(*hint) < 0) p.chart_tangent = -p.chart_tangent;
  p.tangent = unstack(chart_cocycle_matrix(p.images) * p.chart_tangent);
  p.regularity = regularity(p.images);
  p.near_reducible = check_irreducible(p.images).near_reducible;
  return p;
}

RepPoint RepSpace::advance(const RepPoint& p, double h, const SolveOptions& opts) const {
  const auto predicted = apply(p.images, h * p.chart_tangent);
  auto sol = solve_on_slice(predicted, p.images, p.chart_tangent, h, opts);
  if (!sol) throw Error(Errc::PathLost, "corrector failed at chart distance " + std::to_string(h));
  return complete(std::move(*sol), &p.chart_tangent);
}

double RepSpace::fingerprint_speed(const RepPoint& p) const {
  const std::size_t n = p.images.size();
  double speed = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Letter> ls;
    for (std::size_t j = 0; j < n; ++j)
      if (mask & (std::size_t{1} << j)) ls.push_back({static_cast<int>(j), 1});
    const Word w(ls);
    // d tr(rho(w)) = 2 Re(u(w) rho(w)) = -2 u(w) . vec(rho(w))
    const double rate = -2.0 * killing(extend_cocycle(w, p.images, p.tangent), evaluate_word(w, p.images).vector());
    speed = std::max(speed, std::abs(rate));
  }
  return speed;
}

CircleTrace RepSpace::trace_circle(const RepPoint& start_point, const ContinuationOptions& opts) const {
  CircleTrace trace;
  RepPoint start = complete(start_point.images);
  if (opts.direction < 0) {
    start.chart_tangent = -start.chart_tangent;
    start.tangent = unstack(chart_cocycle_matrix(start.images) * start.chart_tangent);
  }
  if (start.regularity.h0 != 0) throw Error(Errc::ReducibleLimit, "start point is reducible");
  if (start.regularity.h1 != 1) throw Error(Errc::Bifurcation, "start point has dim H^1 = " + std::to_string(start.regularity.h1));
  const TraceFingerprint fp0 = fingerprint(start.images);
  const Eigen::VectorXd t0 = start.chart_tangent;
  trace.points.push_back(start);

  RepPoint cur = start;
  double g_prev = 0.0, dist_prev = 0.0;
  while (static_cast<int>(trace.points.size()) < opts.max_points) {
    const double speed = std::max(fingerprint_speed(cur), 1e-12);
    double h = opts.step / speed;
    std::optional<RepPoint> next;
    while (!next) {
      if (h * speed < opts.min_step)
        throw Error(Errc::PathLost, "step fell below the floor after " + std::to_string(trace.points.size()) + " points");
      const auto predicted = apply(cur.images, h * cur.chart_tangent);
      auto sol = solve_on_slice(predicted, cur.images, cur.chart_tangent, h, opts.solve);
      if (sol && fingerprint_distance(fingerprint(*sol), fingerprint(cur.images)) <= 2.5 * opts.step) {
        RepPoint cand = complete(std::move(*sol), &cur.chart_tangent);
        if (cand.chart_tangent.dot(cur.chart_tangent) > 0.8) {
          next = std::move(cand);
          break;
        }
      }
      h *= 0.5;
    }
    if (next->regularity.h0 != 0) throw Error(Errc::ReducibleLimit, "path reached a reducible representation");
    if (next->regularity.h1 > 1) throw Error(Errc::Bifurcation, "dim H^1 jumped to " + std::to_string(next->regularity.h1));

    const double g = t0.dot(difference(next->images, start.images));
    const double dist = fingerprint_distance(fingerprint(next->images), fp0);
    if (trace.points.size() >= 3 && g_prev < 0.0 && g >= 0.0 && std::min(dist, dist_prev) < 4.0 * opts.step) {
      auto closing = solve_on_slice(next->images, start.images, t0, 0.0, opts.solve);
      if (closing) {
        const double gap = fingerprint_distance(fingerprint(*closing), fp0);
        if (gap <= opts.closure_tol) {
          trace.closed = true;
          trace.closure_gap = gap;
          break;
        }
      }
    }
    g_prev = g;
    dist_prev = dist;
    trace.points.push_back(*next);
    cur = std::move(*next);
  }
  const std::size_t n = trace.points.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    trace.chords.push_back(difference(trace.points[i + 1].images, trace.points[i].images).norm());
  if (trace.closed) trace.chords.push_back(difference(trace.points[0].images, trace.points[n - 1].images).norm());
  return trace;
}

std::vector<Su2Vector> horizontal_part(const std::vector<Su2Vector>& u, const Eigen::MatrixXd& d0) {
  const Eigen::VectorXd v = stack(u);
  const Eigen::VectorXd xi = solve_least_squares(d0, v);
  return unstack(v - d0 * xi);
}

std::vector<Su2Vector> RepSpace::tangent_cocycle(const RepPoint& p) const {
  if (p.regularity.h1 != 1 || p.regularity.h0 != 0)
    throw Error(Errc::NotRegular, "tangent class needs dim H^0 = 0 and dim H^1 = 1");
  auto h = horizontal_part(p.tangent, coboundary0(p.images));
  const double norm = stack(h).norm();
  if (norm < 1e-12) throw Error(Errc::ZeroClass, "tangent cocycle is a coboundary");
  for (auto& v : h) v = (1.0 / norm) * v;
  return h;
}

std::vector<std::vector<SU2Element>> sample_representations(const GroupPresentation& p,
                                                            std::span<const std::vector<SU2Element>> irreducible,
                                                            int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  auto random_unit = [&] {
    return SU2Element(g(rng), g(rng), g(rng), g(rng)).renormalized();
  };
  std::vector<int> alpha(p.generator_count(), 1);
  try {
    alpha = abelianize(p).exponents;
  } catch (const Error&) {
    // Without a rank-one abelianization only the trivial abelian family is used.
    std::fill(alpha.begin(), alpha.end(), 0);
  }
  std::vector<std::vector<SU2Element>> out;
  for (int s = 0; s < count; ++s) {
    const SU2Element conj = random_unit();
    std::vector<SU2Element> images;
    if (irreducible.empty() || s % 2 == 0) {
      const Su2Vector axis = random_unit().vector().normalized();
      const double theta = angle(rng);
      for (int j = 0; j < p.generator_count(); ++j)
        images.push_back(SU2Element::from_axis_angle(theta * alpha[j], axis));
    } else {
      for (const auto& x : irreducible[(s / 2) % irreducible.size()]) images.push_back(conj * x * conj.inverse());
    }
    out.push_back(std::move(images));
  }
  return out;
}

}  // namespace rtorsion
