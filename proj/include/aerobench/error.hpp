// error.hpp — single exception type with a machine-checkable code.
//
// Every failure the harness can report carries one of these codes so tests
// and callers can branch on the condition instead of parsing messages.
#pragma once

#include <stdexcept>
#include <string>

namespace aerobench {

enum class ErrorCode {
    // mesh_io
    UnsupportedSection,
    IndexOutOfRange,
    TruncatedStream,
    NonTriangleFace,
    BadMagic,
    VersionMismatch,
    ChecksumMismatch,
    // dataset_registry
    OverlappingSplits,
    UnknownDesignId,
    DuplicateDesignId,
    MissingField,
    EmptyTrainSplit,
    ZeroVariance,
    EmptyCategory,
    // geometry_sampling
    SampleLargerThanMesh,
    EmptyPointSet,
    // metrics_core
    LengthMismatch,
    EmptyInput,
    ZeroVarianceTruth,
    ZeroNormTruth,
    MissingPrediction,
    // uncertainty_stats
    TooFewDesigns,
    MetricMismatch,
    // physics_checks
    OrientationInconsistent,
    DegenerateFace,
    // model_adapter
    UnknownDtype,
    CountMismatch,
    MissingDenormalization,
    AdapterCrash,
    Timeout,
    ProtocolViolation,
    // synth_baseline
    EmptyTrainingPool,
    // analysis_report
    NoModels,
    MissingPair,
    RankDeficient,
    NoConvergence,
    IoFailure,
    // cli
    ConfigError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace aerobench
