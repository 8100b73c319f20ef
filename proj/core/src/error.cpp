#include "discgame/error.hpp"

namespace discgame {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonSquare: return "NonSquare";
    case Errc::NonFinite: return "NonFinite";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NotDistribution: return "NotDistribution";
    case Errc::NotSkew: return "NotSkew";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::OddRank: return "OddRank";
    case Errc::RankTooLarge: return "RankTooLarge";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Parse: return "Parse";
    case Errc::ZeroOperator: return "ZeroOperator";
    case Errc::EigenFailure: return "EigenFailure";
    case Errc::DegenerateBasis: return "DegenerateBasis";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::Overflow: return "Overflow";
    case Errc::DegenerateSupport: return "DegenerateSupport";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::StepTooLarge: return "StepTooLarge";
    case Errc::BlowUp: return "BlowUp";
    case Errc::DegeneratePoints: return "DegeneratePoints";
    case Errc::Unattainable: return "Unattainable";
    case Errc::NotEquilibrium: return "NotEquilibrium";
    case Errc::OriginNotInterior: return "OriginNotInterior";
  }
  return "Unknown";
}

bool is_input_error(Errc code) noexcept {
  switch (code) {
    case Errc::NonSquare:
    case Errc::NonFinite:
    case Errc::LengthMismatch:
    case Errc::NotDistribution:
    case Errc::NotSkew:
    case Errc::NotSymmetric:
    case Errc::IndexOutOfRange:
    case Errc::OddRank:
    case Errc::RankTooLarge:
    case Errc::DimensionMismatch:
    case Errc::InvalidArgument:
    case Errc::Parse:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace discgame
