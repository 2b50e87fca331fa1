#include "ltedci/errors.hpp"

namespace ltedci {

const char* errName(Err e) {
    switch (e) {
        case Err::InvalidConfig: return "InvalidConfig";
        case Err::UnsupportedBandwidth: return "UnsupportedBandwidth";
        case Err::InvalidPort: return "InvalidPort";
        case Err::OutOfRange: return "OutOfRange";
        case Err::IoFailure: return "IoFailure";
        case Err::TruncatedFile: return "TruncatedFile";
        case Err::MissingMetadata: return "MissingMetadata";
        case Err::DimensionMismatch: return "DimensionMismatch";
        case Err::InsufficientSamples: return "InsufficientSamples";
        case Err::OddBitCount: return "OddBitCount";
        case Err::InputTooShort: return "InputTooShort";
        case Err::LengthMismatch: return "LengthMismatch";
        case Err::NoPssFound: return "NoPssFound";
        case Err::NoSssFound: return "NoSssFound";
        case Err::CrcFail: return "CrcFail";
        case Err::InvalidFieldValue: return "InvalidFieldValue";
        case Err::LowConfidence: return "LowConfidence";
        case Err::ControlRegionTooSmall: return "ControlRegionTooSmall";
        case Err::CapacityExceeded: return "CapacityExceeded";
        case Err::UnsupportedFormat: return "UnsupportedFormat";
        case Err::SizeMismatch: return "SizeMismatch";
        case Err::MalformedRaField: return "MalformedRaField";
        case Err::InvalidRiv: return "InvalidRiv";
        case Err::WrongBitmapLength: return "WrongBitmapLength";
        case Err::EmptyAllocation: return "EmptyAllocation";
        case Err::EmptyInput: return "EmptyInput";
        case Err::ScheduleOverflow: return "ScheduleOverflow";
    }
    return "UnknownError";
}

}  // namespace ltedci
