#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "rtorsion/repspace.hpp"
#include "rtorsion/symm.hpp"
#include "rtorsion/volform.hpp"

namespace rtorsion {

struct RunConfig {
  std::string command;
  std::string model = "figure8";  // a path, or the name of a bundled model
  double step = 0.01;
  double tol = 1e-6;
  Eigen::Vector3d seed{1.2, 1.2, 2.3};  // (theta1, theta2, beta)
  std::filesystem::path out = ".";
  std::string check = "all";

  /// Throws InvalidConfig.
  void validate() const;
  /// Everything that influences the numbers, in a fixed textual form.
  std::string canonical() const;
  std::string hash() const;  // 16 hex digits of FNV-1a over canonical()
};

std::uint64_t fnv1a(std::string_view text);

/// Shortest round-trip decimal form.
std::string format_double(double x);

nlohmann::json circle_json(const CWPairModel& m, const CircleTrace& trace, const MetrizedCircle& circle,
                           const MetabelianLocus& locus, const RunConfig& config);
nlohmann::json torsion_samples_json(const TorsionFunction& f, const RunConfig& config);
std::string f_of_s_csv(const TorsionFunction& f, const RunConfig& config);
nlohmann::json symmetry_report_json(const std::vector<SymmetryReport>& reports, const RunConfig& config);

void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace rtorsion
