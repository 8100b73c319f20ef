#ifndef DISCGAME_ERROR_HPP
#define DISCGAME_ERROR_HPP

#include <stdexcept>
#include <string>

namespace discgame {

/// Failure categories raised by the library. Every thrown discgame::Error
/// carries exactly one of these.
enum class Errc {
  // input shape / validation
  NonSquare,
  NonFinite,
  LengthMismatch,
  NotDistribution,
  NotSkew,
  NotSymmetric,
  IndexOutOfRange,
  OddRank,
  RankTooLarge,
  DimensionMismatch,
  InvalidArgument,
  Parse,
  // numerical
  ZeroOperator,
  EigenFailure,
  DegenerateBasis,
  OutOfDomain,
  Overflow,
  DegenerateSupport,
  NoConvergence,
  StepTooLarge,
  BlowUp,
  DegeneratePoints,
  Unattainable,
  NotEquilibrium,
  OriginNotInterior,
};

const char* to_string(Errc code) noexcept;

/// True for errors that stem from malformed input rather than from a
/// numerical procedure. The CLI maps these to exit status 1.
bool is_input_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace discgame

#endif  // DISCGAME_ERROR_HPP
