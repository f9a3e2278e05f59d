#pragma once

#include <stdexcept>
#include <string>

namespace kontact {

enum class Errc {
  SyntaxError,
  UnknownSymbol,
  ZeroDenominator,
  PoleAtPoint,
  UnboundSymbol,
  ChartMismatch,
  DegreeZero,
  LengthMismatch,
  RankComputationOverflow,
  NotKContact,
  SingularSolve,
  NotHamiltonianInput,
  NoAnnihilator,
  SymmetryFailure,
  SpanFailure,
  NotMaxNonintegrable,
  NotProjectable,
  NotClosed,
  DegenerateFrame,
  LambdaNotConstant,
  DependentProjections,
  SampleNotOnZeroSet,
  PoleEncountered,
  DegenerateSeeds,
  UnknownExample,
  InvalidInput,
  Internal,
};

const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// SyntaxError carries the 0-based byte offset into the parsed text.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t pos, const std::string& msg)
      : Error(Errc::SyntaxError, "at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  std::size_t position() const noexcept { return pos_; }

 private:
  std::size_t pos_;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

}  // namespace kontact
