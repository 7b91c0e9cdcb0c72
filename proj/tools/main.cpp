#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <rtorsion/error.hpp>
#include <rtorsion/study.hpp>

using namespace rtorsion;

namespace {

enum ExitCode { kOk = 0, kInput = 2, kNumerical = 3, kSymmetry = 4 };

std::vector<double> parse_seed(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(Errc::InvalidConfig, "--seed expects numbers separated by commas");
    }
  }
  if (v.size() < 2 || v.size() > 3) throw Error(Errc::InvalidConfig, "--seed expects theta,phi[,beta]");
  return v;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int cmd_validate(const std::string& model) {
  CWPairModel m;
  try {
    m = parse_model_text(model == "figure8" ? std::string(figure_eight_model_text()) : read_text(model));
  } catch (const Error& e) {
    std::cout << "FAIL parse: " << e.what() << "\n";
    return kInput;
  }
  ValidationReport report;
  try {
    report = validate_model(m);
  } catch (const Error& e) {
    std::cout << "FAIL validation: " << e.what() << "\n";
    return is_input_error(e.code()) ? kInput : kNumerical;
  }
  for (const auto& c : report.checks)
    std::printf("%s %-44s residual %.3g%s%s\n", c.passed ? "ok  " : "FAIL", c.name.c_str(), c.residual,
                c.passed ? "" : "  ", c.passed ? "" : (std::string(errc_name(c.failure)) + ": " + c.detail).c_str());
  std::printf("%d random evaluations\n", report.evaluations);
  return report.ok() ? kOk : kInput;
}

void emit_circle(const Study& st, const RunConfig& c) {
  write_file(c.out / "circle.json", circle_json(st.model, st.trace, st.circle, st.locus, c).dump(1) + "\n");
  std::printf("circle: %zu samples, closed %s (gap %.2e), total volume %.10f (error %.1e), %zu iota-fixed points\n",
              st.circle.samples.size(), st.circle.closed ? "yes" : "no", st.trace.closure_gap, st.circle.total,
              st.circle.volume_error, st.locus.points.size());
}

void emit_torsion(const Study& st, const RunConfig& c) {
  write_file(c.out / "torsion-samples.json", torsion_samples_json(st.torsion, c).dump(1) + "\n");
  write_file(c.out / "f_of_s.csv", f_of_s_csv(st.torsion, c));
  const Eigen::VectorXd f = st.torsion.trace_profile();
  std::printf("torsion: %zu samples, f(s) in [%.6f, %.6f]\n", st.torsion.sigma.size(), f.minCoeff(), f.maxCoeff());
}

int run(const RunConfig& c) {
  c.validate();
  Study st = run_study(load_model(c.model), c);
  emit_circle(st, c);
  if (c.command == "trace") return kOk;
  emit_torsion(st, c);
  if (c.command == "torsion") return kOk;
  const auto reports = symmetry_checks(st, c.check, c.tol);
  write_file(c.out / "symmetry-report.json", symmetry_report_json(reports, c).dump(1) + "\n");
  bool ok = true;
  for (const auto& r : reports) {
    std::printf("%s %-28s residual %.3g (tol %.0e)%s%s\n", r.pass ? "ok  " : "FAIL", r.transform.c_str(), r.residual,
                r.tolerance, r.detail.empty() ? "" : "  ", r.detail.c_str());
    ok = ok && r.pass;
  }
  return ok ? kOk : kSymmetry;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SU(2) representation circles, twisted torsion and the torsion volume form of knot exteriors"};
  app.require_subcommand(1);

  std::string validate_model_arg = "figure8";
  auto* validate = app.add_subcommand("validate", "check a CW-pair model file");
  validate->add_option("model,--model", validate_model_arg, "model path or 'figure8'");

  RunConfig config;
  std::string seed_text;
  std::string out_dir = ".";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", config.model, "model path or 'figure8'")->capture_default_str();
    sub->add_option("--step", config.step, "target fingerprint change per continuation step")->capture_default_str();
    sub->add_option("--tol", config.tol, "tolerance for the symmetry checks")->capture_default_str();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed_text, "starting chart point theta1,theta2[,beta]");
  };
  auto* trace = app.add_subcommand("trace", "trace and metrize the representation circle");
  auto* torsion = app.add_subcommand("torsion", "also sample the normalized torsion along the circle");
  auto* symmetry = app.add_subcommand("symmetry", "also verify the iota and automorphism symmetries");
  for (auto* sub : {trace, torsion, symmetry}) add_common(sub);
  symmetry->add_option("--check", config.check, "iota, autN or all")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_model_arg);
    config.command = app.get_subcommands().front()->get_name();
    config.out = out_dir;
    if (!seed_text.empty()) {
      const auto v = parse_seed(seed_text);
      config.seed = {v[0], v[1], v.size() > 2 ? v[2] : config.seed[2]};
    }
    return run(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? kInput : kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
}
