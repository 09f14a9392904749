#include "adbench/core/types.hpp"

#include <cmath>

#include "adbench/core/error.hpp"

namespace adbench {

std::string_view err_name(Err code) noexcept {
    switch (code) {
    case Err::NonFiniteValue: return "NonFiniteValue";
    case Err::LabelDomain: return "LabelDomain";
    case Err::LengthMismatch: return "LengthMismatch";
    case Err::DimMismatch: return "DimMismatch";
    case Err::KTooLarge: return "KTooLarge";
    case Err::DegenerateData: return "DegenerateData";
    case Err::SingleClassTraining: return "SingleClassTraining";
    case Err::TooFewSamples: return "TooFewSamples";
    case Err::NonConvergence: return "NonConvergence";
    case Err::FactorOutOfRange: return "FactorOutOfRange";
    case Err::RatioOutOfRange: return "RatioOutOfRange";
    case Err::SingleClassEval: return "SingleClassEval";
    case Err::NoPositives: return "NoPositives";
    case Err::NoAnomalies: return "NoAnomalies";
    case Err::ClassTooSmall: return "ClassTooSmall";
    case Err::MissingCell: return "MissingCell";
    case Err::TooFewPairs: return "TooFewPairs";
    case Err::DegenerateTable: return "DegenerateTable";
    case Err::ParseError: return "ParseError";
    case Err::MissingLabelColumn: return "MissingLabelColumn";
    case Err::AnomalyRatioTooHigh: return "AnomalyRatioTooHigh";
    case Err::BadParameter: return "BadParameter";
    case Err::IoError: return "IoError";
    }
    return "UnknownError";
}

bool DataMatrix::all_finite() const noexcept {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

DataMatrix DataMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    DataMatrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.front().size();
    m.values_.reserve(m.rows_ * m.cols_);
    for (const auto& r : rows) {
        require(r.size() == m.cols_, Err::LengthMismatch, "ragged row in matrix assembly");
        m.values_.insert(m.values_.end(), r.begin(), r.end());
    }
    return m;
}

void DataMatrix::append_row(std::span<const double> row) {
    if (rows_ == 0 && cols_ == 0) cols_ = row.size();
    require(row.size() == cols_, Err::LengthMismatch, "appended row has wrong width");
    values_.insert(values_.end(), row.begin(), row.end());
    ++rows_;
}

ValidatedDataset validate_dataset(DataMatrix x, LabelVector y) {
    require(x.rows() >= 1 && x.cols() >= 1, Err::LengthMismatch,
            "matrix must have at least one row and one column");
    require(x.all_finite(), Err::NonFiniteValue, "feature matrix contains NaN or Inf");
    require(y.binary(), Err::LabelDomain, "labels must be 0 or 1");
    require(x.rows() == y.size(), Err::LengthMismatch,
            "label vector length does not match matrix rows");
    return {std::move(x), std::move(y)};
}

} // namespace adbench
