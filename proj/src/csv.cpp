#include "mdprolate/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace mdprolate {

std::string format_number(double x) {
  if (!std::isfinite(x)) throw NumericalError("refusing to serialize a non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw ConfigError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void sort_rows(std::vector<ReportRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.experiment != b.experiment) return a.experiment < b.experiment;
    return a.parameters < b.parameters;
  });
}

bool all_pass(std::span<const ReportRow> rows) {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

std::string rows_to_csv(std::span<const ReportRow> rows) {
  std::string out = "experiment,parameters,metric,value,tolerance,pass\n";
  for (const auto& r : rows) {
    out += r.experiment + "," + r.parameters + "," + r.metric + "," + format_number(r.value) + "," +
           format_number(r.tolerance) + "," + (r.pass ? "pass" : "fail") + "\n";
  }
  return out;
}

nlohmann::json rows_to_json(std::span<const ReportRow> rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) {
    // route through format_number for the finiteness guard
    (void)format_number(r.value);
    (void)format_number(r.tolerance);
    out.push_back({{"experiment", r.experiment},
                   {"parameters", r.parameters},
                   {"metric", r.metric},
                   {"value", r.value},
                   {"tolerance", r.tolerance},
                   {"pass", r.pass}});
  }
  return out;
}

std::string spectrum_csv(const Vector<double>& eigenvalues) {
  std::string out = "index,eigenvalue\n";
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    out += std::to_string(i) + "," + format_number(eigenvalues(i)) + "\n";
  }
  return out;
}

std::string vectors_csv(const CMatrix<double>& vectors) {
  std::string out;
  for (Index j = 0; j < vectors.cols(); ++j) {
    out += (j ? "," : "") + ("v" + std::to_string(j) + "_re,v" + std::to_string(j) + "_im");
  }
  out += "\n";
  for (Index i = 0; i < vectors.rows(); ++i) {
    for (Index j = 0; j < vectors.cols(); ++j) {
      out += (j ? "," : "") + format_number(vectors(i, j).real()) + "," + format_number(vectors(i, j).imag());
    }
    out += "\n";
  }
  return out;
}

std::string matrix_csv(const CMatrix<double>& m) {
  std::string out;
  for (Index j = 0; j < m.cols(); ++j) {
    out += (j ? "," : "") + ("c" + std::to_string(j) + "_re,c" + std::to_string(j) + "_im");
  }
  out += "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      out += (j ? "," : "") + format_number(m(i, j).real()) + "," + format_number(m(i, j).imag());
    }
    out += "\n";
  }
  return out;
}

void check_finite(const nlohmann::json& doc) {
  if (doc.is_number_float()) {
    (void)format_number(doc.get<double>());
  } else if (doc.is_structured()) {
    for (const auto& item : doc) check_finite(item);
  }
}

}  // namespace mdprolate
