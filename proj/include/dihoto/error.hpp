#pragma once

#include <stdexcept>
#include <string>

namespace dihoto {

enum class ErrorKind {
    CycleDetected,
    NotBounded,
    NotComparable,
    UnsupportedDimension,
    NotLoopless,
    NotABall,
    WouldCreateLoop,
    ResolutionStuck,
    MalformedCell,
    UnsupportedCellDimension,
    TInvalid,
    BallMismatch,
    DanglingAttachment,
    ParseError,
};

inline const char* to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::NotBounded: return "NotBounded";
    case ErrorKind::NotComparable: return "NotComparable";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::NotLoopless: return "NotLoopless";
    case ErrorKind::NotABall: return "NotABall";
    case ErrorKind::WouldCreateLoop: return "WouldCreateLoop";
    case ErrorKind::ResolutionStuck: return "ResolutionStuck";
    case ErrorKind::MalformedCell: return "MalformedCell";
    case ErrorKind::UnsupportedCellDimension: return "UnsupportedCellDimension";
    case ErrorKind::TInvalid: return "TInvalid";
    case ErrorKind::BallMismatch: return "BallMismatch";
    case ErrorKind::DanglingAttachment: return "DanglingAttachment";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace dihoto
