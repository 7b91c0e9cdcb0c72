#pragma once

#include <string>
#include <vector>

#include "rtorsion/cwmodel.hpp"
#include "rtorsion/io.hpp"
#include "rtorsion/repspace.hpp"
#include "rtorsion/symm.hpp"
#include "rtorsion/volform.hpp"

namespace rtorsion {

/// "figure8" names the bundled model; anything else is read as a path.
CWPairModel load_model(const std::string& name_or_path);

/// One traced and metrized component with its torsion function.
struct Study {
  CWPairModel model;
  RepSpace space;
  CircleTrace trace;
  MetrizedCircle circle;
  TorsionFunction torsion;
  MetabelianLocus locus;
};

/// Traces from the configured seed, metrizes and samples the torsion.
Study run_study(CWPairModel model, const RunConfig& config);

/// Checks for `which` in {iota, autN, all}: the iota relation of the torsion
/// function, and per automorphism its certificate, the tau pullback sign and
/// the torsion-function relation (both t and t^-1 matchings are tried; the
/// report names the one that matches).
std::vector<SymmetryReport> symmetry_checks(const Study& study, const std::string& which, double tol);

}  // namespace rtorsion
