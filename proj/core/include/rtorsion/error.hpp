#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rtorsion {

enum class Errc {
  // input
  ParseError,
  ChainMapViolation,
  HomologyMismatch,
  FreeRankNotOne,
  MeridianNotGenerator,
  DimensionMismatch,
  ComponentMismatch,
  InvalidConfig,
  // numerical breakdown
  CentralElement,
  DegenerateBasis,
  NoSymmetricForm,
  SingularDenominator,
  NotAcyclic,
  NoConvergence,
  ReducibleLimit,
  PathLost,
  Bifurcation,
  NotRegular,
  DegenerateRestriction,
  ZeroClass,
  NonRegularSample,
  CentralMuImage,
  InconsistentSign,
};

std::string_view errc_name(Errc code);

/// Input errors are problems with the supplied model or arguments; everything
/// else signals a numerical breakdown at some representation.
bool is_input_error(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace rtorsion
