#pragma once

#include <stdexcept>
#include <string>

namespace ltedci {

enum class Err {
    InvalidConfig,
    UnsupportedBandwidth,
    InvalidPort,
    OutOfRange,
    IoFailure,
    TruncatedFile,
    MissingMetadata,
    DimensionMismatch,
    InsufficientSamples,
    OddBitCount,
    InputTooShort,
    LengthMismatch,
    NoPssFound,
    NoSssFound,
    CrcFail,
    InvalidFieldValue,
    LowConfidence,
    ControlRegionTooSmall,
    CapacityExceeded,
    UnsupportedFormat,
    SizeMismatch,
    MalformedRaField,
    InvalidRiv,
    WrongBitmapLength,
    EmptyAllocation,
    EmptyInput,
    ScheduleOverflow,
};

const char* errName(Err e);

class Error : public std::runtime_error {
  public:
    Error(Err code, const std::string& what)
        : std::runtime_error(std::string(errName(code)) + ": " + what), code_(code) {}
    Err code() const { return code_; }

  private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace ltedci
