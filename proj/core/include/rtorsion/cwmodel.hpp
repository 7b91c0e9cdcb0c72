#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtorsion/algebra.hpp"
#include "rtorsion/chain.hpp"
#include "rtorsion/error.hpp"

namespace rtorsion {

enum class Ambient { S3, IntegralHomologySphere, RationalHomologySphere };

/// Boundary torus: one vertex, edges lambda and mu, one square attached
/// along [lambda, mu]. Boundary entries live in the knot group ring.
struct TorusData {
  EquivariantComplex complex;
  Word attaching;     // lambda mu lambda^-1 mu^-1 in the knot group generators
  Word front_vertex;  // lift of the front vertex of sigma, for cup products
};

/// sign * conjugator * r_relator^sign * conjugator^-1
struct IdentityFactor {
  int sign = 1;
  Word conjugator;
  int relator = 0;
};

/// Cellular inclusion of the torus: maps[d] has a row per torus d-cell and a
/// column per d-cell of the exterior.
struct Inclusion {
  std::vector<GroupRingMatrix> maps;
  std::vector<IdentityFactor> factors;
};

/// Automorphism data as written in a model file: generator images and the
/// claimed peripheral behaviour phi(mu) = w mu^mu_exponent w^-1,
/// phi(lambda) = w lambda^delta w^-1.
struct AutomorphismRecord {
  std::string name;
  Endomorphism map;
  int delta = 1;
  int mu_exponent = 1;
  Word conjugator;
};

struct CWPairModel {
  std::string name;
  GroupPresentation presentation;
  Ambient ambient = Ambient::S3;
  std::vector<std::int64_t> declared_torsion;
  EquivariantComplex exterior;
  TorusData torus;
  Inclusion inclusion;
  std::vector<AutomorphismRecord> automorphisms;

  const Word& longitude() const { return presentation.peripheral->longitude; }
  const Word& meridian() const { return presentation.peripheral->meridian; }
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  std::string detail;
  Errc failure = Errc::ChainMapViolation;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  int evaluations = 0;

  bool ok() const;
  const ValidationCheck* first_failure() const;
};

/// Parses without validating. Throws ParseError with the line number.
CWPairModel parse_model_text(std::string_view text);

/// Symbolic checks plus `evaluations` random numerical evaluations.
ValidationReport validate_model(const CWPairModel& m, int evaluations = 100, std::uint64_t seed = 1);

/// Reads, parses and validates; throws the first failing check's error.
CWPairModel parse_model(const std::filesystem::path& path);
CWPairModel load_validated(std::string_view text);

/// The bundled figure-eight model (same text as models/figure8.cwp).
const CWPairModel& figure_eight_model();
std::string_view figure_eight_model_text();

enum class ModelPart { Exterior, Boundary };
IntegerHomology untwisted_homology(const CWPairModel& m, ModelPart part);

}  // namespace rtorsion
