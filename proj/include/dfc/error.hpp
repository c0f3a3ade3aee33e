#pragma once

#include <stdexcept>
#include <string>

namespace dfc {

enum class Errc {
  DegreeZero,
  IllConditioned,
  EmptyCoeffs,
  PoleInsideDisc,
  OriginInversion,
  EmptyRegion,
  Mu0NotInRegion,
  NotZeroSum,
  NotUnitSum,
  OutOfRange,
  WindowMiss,
  UnknownSystem,
  NoConvergence,
  SingularJacobianEvaluation,
  HistoryTooShort,
  ParseError,
};

inline const char* to_string(Errc e) {
  switch (e) {
    case Errc::DegreeZero: return "DegreeZero";
    case Errc::IllConditioned: return "IllConditioned";
    case Errc::EmptyCoeffs: return "EmptyCoeffs";
    case Errc::PoleInsideDisc: return "PoleInsideDisc";
    case Errc::OriginInversion: return "OriginInversion";
    case Errc::EmptyRegion: return "EmptyRegion";
    case Errc::Mu0NotInRegion: return "Mu0NotInRegion";
    case Errc::NotZeroSum: return "NotZeroSum";
    case Errc::NotUnitSum: return "NotUnitSum";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::WindowMiss: return "WindowMiss";
    case Errc::UnknownSystem: return "UnknownSystem";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::SingularJacobianEvaluation: return "SingularJacobianEvaluation";
    case Errc::HistoryTooShort: return "HistoryTooShort";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dfc
