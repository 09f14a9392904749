#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adbench {

// Error taxonomy shared by every module. The name() string is stable and is
// what ends up in skipped.csv error rows.
enum class Err {
    NonFiniteValue,
    LabelDomain,
    LengthMismatch,
    DimMismatch,
    KTooLarge,
    DegenerateData,
    SingleClassTraining,
    TooFewSamples,
    NonConvergence,
    FactorOutOfRange,
    RatioOutOfRange,
    SingleClassEval,
    NoPositives,
    NoAnomalies,
    ClassTooSmall,
    MissingCell,
    TooFewPairs,
    DegenerateTable,
    ParseError,
    MissingLabelColumn,
    AnomalyRatioTooHigh,
    BadParameter,
    IoError,
};

std::string_view err_name(Err code) noexcept;

class BenchError : public std::runtime_error {
public:
    BenchError(Err code, const std::string& message)
        : std::runtime_error(std::string(err_name(code)) + ": " + message), code_(code) {}

    Err code() const noexcept { return code_; }
    std::string_view name() const noexcept { return err_name(code_); }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& message) {
    throw BenchError(code, message);
}

inline void require(bool cond, Err code, const std::string& message) {
    if (!cond) fail(code, message);
}

} // namespace adbench
