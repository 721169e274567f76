#pragma once

#include <stdexcept>
#include <string>

namespace spherecx {

enum class ErrorCode {
  NotTrivalent,
  Disconnected,
  WrongRank,
  RankTooSmall,
  EmptySubsystem,
  BadMatching,
  BadChi,
  IncompatiblePieces,
  BoundaryParallelDisk,
  NestingInconsistent,
  ScaffoldMismatch,
  NotCoordinateDisjoint,
  NotProperSubsystem,
  NotInnermost,
  IndexOutOfRange,
  BadAlignment,
  NoPathFoundWithinBudget,
  BudgetExceeded,
  NotAdjacent,
  HypothesisNotCertified,
  UnsupportedPreset,
  ConfigInvalid,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spherecx
