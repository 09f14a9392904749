#include "adbench/bench/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace adbench::bench {

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    require(ec == std::errc(), Err::IoError, "float formatting failed");
    return std::string(buffer, ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& raw, std::size_t line_no, std::size_t col_no) {
    const std::string cell = trim(raw);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
        fail(Err::ParseError, "non-numeric cell '" + cell + "' at line " +
                                  std::to_string(line_no) + ", column " +
                                  std::to_string(col_no + 1));
    return value;
}

} // namespace

std::pair<DataMatrix, LabelVector> load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), Err::IoError, "cannot open " + path.string());

    std::string line;
    require(static_cast<bool>(std::getline(in, line)), Err::ParseError,
            path.string() + " is empty; header row required");
    const auto header = split_line(line);
    require(header.size() >= 2, Err::MissingLabelColumn,
            "need at least one feature column and a trailing label column");
    require(trim(header.back()) == "label", Err::MissingLabelColumn,
            "final column must be named 'label', got '" + trim(header.back()) + "'");
    const std::size_t n_cols = header.size();
    const std::size_t d = n_cols - 1;

    DataMatrix x;
    std::vector<int> labels;
    std::size_t line_no = 1;
    std::vector<double> row(d);
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        require(cells.size() == n_cols, Err::ParseError,
                "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                    " cells, expected " + std::to_string(n_cols));
        for (std::size_t j = 0; j < d; ++j) row[j] = parse_cell(cells[j], line_no, j);
        const double label = parse_cell(cells[d], line_no, d);
        require(label == 0.0 || label == 1.0, Err::LabelDomain,
                "label must be 0 or 1 at line " + std::to_string(line_no));
        x.append_row(row);
        labels.push_back(static_cast<int>(label));
    }
    require(x.rows() >= 1, Err::ParseError, path.string() + " contains no data rows");
    auto validated = validate_dataset(std::move(x), LabelVector(std::move(labels)));
    return {std::move(validated.x), std::move(validated.y)};
}

void write_dataset_csv(const std::filesystem::path& path, const DataMatrix& x,
                       const LabelVector& y) {
    require(x.rows() == y.size(), Err::LengthMismatch, "labels do not match rows");
    std::ofstream out(path, std::ios::binary); // \n endings on every platform
    require(out.good(), Err::IoError, "cannot write " + path.string());
    for (std::size_t j = 0; j < x.cols(); ++j) out << "f" << j << ",";
    out << "label\n";
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) out << format_double(x(i, j)) << ",";
        out << y[i] << "\n";
    }
    require(out.good(), Err::IoError, "write failed for " + path.string());
}

} // namespace adbench::bench
