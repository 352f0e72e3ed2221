#pragma once

#include <stdexcept>
#include <string>

namespace pcurv {

enum class ErrorCode {
    Ok = 0,
    InvalidInput,
    InvalidParams,
    DimensionMismatch,
    AllWeightsZero,
    RaggedRows,
    ParseError,
    EmptyFile,
    EmptyInput,
    IoError,
    NegativeScale,
    SingletonPoint,
    InsufficientPoints,
    NoNeighbors,
    DegenerateNeighborhood,
    InsufficientNeighbors,
    CodimensionNotOne,
    ZeroVector,
    LengthMismatch,
    MissingColumn,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::AllWeightsZero: return "AllWeightsZero";
        case ErrorCode::RaggedRows: return "RaggedRows";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::EmptyFile: return "EmptyFile";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::NegativeScale: return "NegativeScale";
        case ErrorCode::SingletonPoint: return "SingletonPoint";
        case ErrorCode::InsufficientPoints: return "InsufficientPoints";
        case ErrorCode::NoNeighbors: return "NoNeighbors";
        case ErrorCode::DegenerateNeighborhood: return "DegenerateNeighborhood";
        case ErrorCode::InsufficientNeighbors: return "InsufficientNeighbors";
        case ErrorCode::CodimensionNotOne: return "CodimensionNotOne";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::MissingColumn: return "MissingColumn";
    }
    return "Unknown";
}

/// Library-wide exception carrying a machine-checkable code.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace pcurv
