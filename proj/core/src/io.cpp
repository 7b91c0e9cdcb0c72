#include "rtorsion/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "rtorsion/error.hpp"

namespace rtorsion {

void RunConfig::validate() const {
  if (!(step >= 1e-5 && step <= 0.1)) throw Error(Errc::InvalidConfig, "step must lie in [1e-5, 0.1]");
  if (!(tol > 0.0)) throw Error(Errc::InvalidConfig, "tolerance must be positive");
  if (!seed.allFinite()) throw Error(Errc::InvalidConfig, "seed must be finite");
  const bool numbered = check.size() > 3 && check.starts_with("aut") &&
                        check.find_first_not_of("0123456789", 3) == std::string::npos;
  if (check != "all" && check != "iota" && !numbered)
    throw Error(Errc::InvalidConfig, "--check expects iota, autN or all");
}

std::string RunConfig::canonical() const {
  std::string s = "model=" + model + ";step=" + format_double(step) + ";tol=" + format_double(tol) + ";seed=";
  for (int i = 0; i < 3; ++i) s += format_double(seed[i]) + (i < 2 ? "," : "");
  s += ";check=" + check;
  return s;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical())));
  return buf;
}

std::string format_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

nlohmann::json header(const RunConfig& c) {
  return {{"config_hash", c.hash()}, {"config", c.canonical()}};
}

}  // namespace

nlohmann::json circle_json(const CWPairModel& m, const CircleTrace& trace, const MetrizedCircle& circle,
                           const MetabelianLocus& locus, const RunConfig& config) {
  nlohmann::json j = header(config);
  j["model"] = m.name;
  j["closed"] = circle.closed;
  j["closure_gap"] = trace.closure_gap;
  j["chart_length"] = trace.length();
  j["total_volume"] = circle.total;
  j["volume_error"] = circle.volume_error;
  j["orientation"] = circle.orientation;
  auto& samples = j["samples"] = nlohmann::json::array();
  for (const auto& s : circle.samples) {
    const Eigen::Vector3d g = s.point.gauge();
    const Regularity& r = s.point.regularity;
    samples.push_back({{"s", s.s},
                       {"sigma", s.sigma},
                       {"tau", s.tau},
                       {"gauge", {g[0], g[1], g[2]}},
                       {"trace_mu", evaluate_word(m.meridian(), s.point.images).trace()},
                       {"regularity", {r.h0, r.h1, r.h2}},
                       {"flagged", s.point.near_reducible || r.near_singular}});
  }
  auto& fixed = j["iota_fixed_points"] = nlohmann::json::array();
  for (const auto& f : locus.points)
    fixed.push_back({{"sigma", f.sigma}, {"trace_mu", f.trace_mu}, {"fingerprint_gap", f.fingerprint_gap}});
  j["ambient_integral_homology_sphere"] = locus.ambient_zhs;
  return j;
}

nlohmann::json torsion_samples_json(const TorsionFunction& f, const RunConfig& config) {
  nlohmann::json j = header(config);
  j["period"] = f.period;
  auto& rows = j["samples"] = nlohmann::json::array();
  for (Eigen::Index k = 0; k < f.coeffs.rows(); ++k) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (Eigen::Index c = 0; c < f.coeffs.cols(); ++c) coeffs.push_back({f.coeffs(k, c).real(), f.coeffs(k, c).imag()});
    rows.push_back({{"sigma", f.sigma[k]}, {"lo", f.lo}, {"coeffs", std::move(coeffs)}});
  }
  return j;
}

std::string f_of_s_csv(const TorsionFunction& f, const RunConfig& config) {
  std::string out = "# config_hash " + config.hash() + "\ns,f\n";
  const Eigen::VectorXd profile = f.trace_profile();
  for (Eigen::Index k = 0; k < profile.size(); ++k)
    out += format_double(f.sigma[k]) + "," + format_double(profile[k]) + "\n";
  return out;
}

nlohmann::json symmetry_report_json(const std::vector<SymmetryReport>& reports, const RunConfig& config) {
  nlohmann::json j = header(config);
  auto& checks = j["checks"] = nlohmann::json::array();
  bool all = true;
  for (const auto& r : reports) {
    checks.push_back({{"transform", r.transform},
                      {"s0", r.s0},
                      {"residual", r.residual},
                      {"tolerance", r.tolerance},
                      {"pass", r.pass},
                      {"detail", r.detail}});
    all = all && r.pass;
  }
  j["pass"] = all;
  return j;
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::InvalidConfig, "cannot write " + path.string());
  f << text;
}

}  // namespace rtorsion
