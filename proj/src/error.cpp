#include "aerobench/error.hpp"

namespace aerobench {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnsupportedSection: return "UnsupportedSection";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::TruncatedStream: return "TruncatedStream";
    case ErrorCode::NonTriangleFace: return "NonTriangleFace";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::OverlappingSplits: return "OverlappingSplits";
    case ErrorCode::UnknownDesignId: return "UnknownDesignId";
    case ErrorCode::DuplicateDesignId: return "DuplicateDesignId";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::EmptyTrainSplit: return "EmptyTrainSplit";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::EmptyCategory: return "EmptyCategory";
    case ErrorCode::SampleLargerThanMesh: return "SampleLargerThanMesh";
    case ErrorCode::EmptyPointSet: return "EmptyPointSet";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ZeroVarianceTruth: return "ZeroVarianceTruth";
    case ErrorCode::ZeroNormTruth: return "ZeroNormTruth";
    case ErrorCode::MissingPrediction: return "MissingPrediction";
    case ErrorCode::TooFewDesigns: return "TooFewDesigns";
    case ErrorCode::MetricMismatch: return "MetricMismatch";
    case ErrorCode::OrientationInconsistent: return "OrientationInconsistent";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::UnknownDtype: return "UnknownDtype";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::MissingDenormalization: return "MissingDenormalization";
    case ErrorCode::AdapterCrash: return "AdapterCrash";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::ProtocolViolation: return "ProtocolViolation";
    case ErrorCode::EmptyTrainingPool: return "EmptyTrainingPool";
    case ErrorCode::NoModels: return "NoModels";
    case ErrorCode::MissingPair: return "MissingPair";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "UnknownError";
}

} // namespace aerobench
