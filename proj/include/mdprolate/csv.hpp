#ifndef MDPROLATE_CSV_HPP_
#define MDPROLATE_CSV_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdprolate/types.hpp"

namespace mdprolate {

/// 17 significant digits, '.' decimal point. Throws NumericalError on NaN/Inf.
std::string format_number(double x);

/// Writes `contents` to `path` via a temporary file in the same directory and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// One line of a verification/experiment report.
struct ReportRow {
  std::string experiment;
  std::string parameters;  // "key=value;key=value"
  std::string metric;
  double value = 0.0;
  double tolerance = 0.0;  // bound or threshold the value was compared against
  bool pass = true;
};

/// Sorts rows by (experiment, parameters), keeping insertion order otherwise.
void sort_rows(std::vector<ReportRow>& rows);
bool all_pass(std::span<const ReportRow> rows);

std::string rows_to_csv(std::span<const ReportRow> rows);
nlohmann::json rows_to_json(std::span<const ReportRow> rows);

/// index,eigenvalue
std::string spectrum_csv(const Vector<double>& eigenvalues);

/// One column pair (re, im) per vector: v0_re,v0_im,v1_re,...
std::string vectors_csv(const CMatrix<double>& vectors);

/// Rows of a complex matrix, columns re/im interleaved: c0_re,c0_im,c1_re,...
std::string matrix_csv(const CMatrix<double>& m);

/// Rejects any NaN/Inf number inside a JSON document.
void check_finite(const nlohmann::json& doc);

}  // namespace mdprolate

#endif  // MDPROLATE_CSV_HPP_
