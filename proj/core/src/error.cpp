#include "rtorsion/error.hpp"

namespace rtorsion {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::ParseError: return "ParseError";
    case Errc::ChainMapViolation: return "ChainMapViolation";
    case Errc::HomologyMismatch: return "HomologyMismatch";
    case Errc::FreeRankNotOne: return "FreeRankNotOne";
    case Errc::MeridianNotGenerator: return "MeridianNotGenerator";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ComponentMismatch: return "ComponentMismatch";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::CentralElement: return "CentralElement";
    case Errc::DegenerateBasis: return "DegenerateBasis";
    case Errc::NoSymmetricForm: return "NoSymmetricForm";
    case Errc::SingularDenominator: return "SingularDenominator";
    case Errc::NotAcyclic: return "NotAcyclic";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::ReducibleLimit: return "ReducibleLimit";
    case Errc::PathLost: return "PathLost";
    case Errc::Bifurcation: return "Bifurcation";
    case Errc::NotRegular: return "NotRegular";
    case Errc::DegenerateRestriction: return "DegenerateRestriction";
    case Errc::ZeroClass: return "ZeroClass";
    case Errc::NonRegularSample: return "NonRegularSample";
    case Errc::CentralMuImage: return "CentralMuImage";
    case Errc::InconsistentSign: return "InconsistentSign";
  }
  return "Unknown";
}

bool is_input_error(Errc code) {
  switch (code) {
    case Errc::ParseError:
    case Errc::ChainMapViolation:
    case Errc::HomologyMismatch:
    case Errc::FreeRankNotOne:
    case Errc::MeridianNotGenerator:
    case Errc::DimensionMismatch:
    case Errc::ComponentMismatch:
    case Errc::InvalidConfig:
      return true;
    default:
      return false;
  }
}

}  // namespace rtorsion
