#include "rtorsion/study.hpp"

#include <cmath>

#include "rtorsion/error.hpp"

namespace rtorsion {

CWPairModel load_model(const std::string& name_or_path) {
  if (name_or_path == "figure8") return figure_eight_model();
  return parse_model(name_or_path);
}

Study run_study(CWPairModel model, const RunConfig& config) {
  config.validate();
  RepSpace space(model.presentation);
  ContinuationOptions opts;
  opts.step = config.step;
  CircleTrace trace = space.trace_circle(space.solve_near(config.seed), opts);
  MetrizedCircle circle = metrize(model, space, trace);
  TorsionFunction torsion = torsion_function(model, circle);
  MetabelianLocus locus = metabelian_locus(model, space, circle);
  return {std::move(model), std::move(space), std::move(trace), std::move(circle), std::move(torsion), std::move(locus)};
}

namespace {

std::string t_power(int e) { return e > 0 ? "t" : "t^-1"; }

std::vector<SymmetryReport> automorphism_checks(const Study& st, const OuterAutomorphism& phi, double tol) {
  const CWPairModel& m = st.model;
  std::vector<SymmetryReport> out;
  std::vector<std::vector<SU2Element>> irreducible;
  for (std::size_t k = 0; k < st.trace.points.size(); k += std::max<std::size_t>(1, st.trace.points.size() / 4))
    irreducible.push_back(st.trace.points[k].images);
  const Certificate cert = certify(m, phi, irreducible);
  SymmetryReport c;
  c.transform = phi.name + " certificate";
  c.residual = std::max(cert.relator_residual, cert.peripheral_residual);
  c.tolerance = 1e-9;
  c.pass = cert.ok;
  c.detail = cert.detail;
  out.push_back(c);
  if (!cert.ok) return out;

  const int d = delta_sign(m, phi, st.circle);
  SymmetryReport pull;
  pull.transform = phi.name + " tau pullback";
  pull.tolerance = 1e-5;
  const std::size_t n = st.trace.points.size();
  for (int i = 0; i < 20; ++i) {
    const RepPoint& p = st.trace.points[i * n / 20];
    pull.residual = std::max(pull.residual, std::abs(pullback_ratio(m, st.space, phi, p) - d));
  }
  pull.pass = pull.residual <= pull.tolerance;
  pull.detail = "delta_D = " + std::to_string(d);
  out.push_back(pull);

  const CircleTrace image = map_trace(st.space, st.trace, [&](const RepPoint& p) { return act(st.space, phi, p); });
  const TorsionFunction g = torsion_function(m, metrize(m, st.space, image));
  std::vector<SymmetryReport> tries;
  for (int e : {phi.mu_exponent, -phi.mu_exponent}) {
    tries.push_back(check_symmetry(st.torsion, g, SymmetryTransform::automorphism(phi.name, d, e), tol));
    tries.back().transform = phi.name + ": T(" + std::string(d > 0 ? "" : "-") + "s, " + t_power(e) + ")";
  }
  const bool first = tries[0].residual <= tries[1].residual;
  SymmetryReport best = tries[first ? 0 : 1];
  const SymmetryReport& other = tries[first ? 1 : 0];
  best.detail = other.transform + " residual " + format_double(other.residual);
  out.push_back(best);
  return out;
}

}  // namespace

std::vector<SymmetryReport> symmetry_checks(const Study& st, const std::string& which, double tol) {
  std::vector<SymmetryReport> out;
  if (which == "iota" || which == "all") {
    const CircleTrace image = map_trace(st.space, st.trace, [&](const RepPoint& p) { return iota(st.space, p); });
    const TorsionFunction g = torsion_function(st.model, metrize(st.model, st.space, image));
    SymmetryReport r = check_symmetry(st.torsion, g, SymmetryTransform::iota(), tol);
    r.transform = "iota: -T(-s, -t)";
    out.push_back(r);
  }
  for (std::size_t i = 0; i < st.model.automorphisms.size(); ++i) {
    if (which != "all" && which != "aut" + std::to_string(i + 1)) continue;
    for (auto& r : automorphism_checks(st, st.model.automorphisms[i], tol)) out.push_back(std::move(r));
  }
  if (out.empty()) throw Error(Errc::InvalidConfig, "no check named " + which);
  return out;
}

}  // namespace rtorsion
