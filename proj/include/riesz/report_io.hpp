#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "riesz/error.hpp"
#include "riesz/series.hpp"

namespace riesz::io {

inline constexpr const char* kVersion = "1.0.0";

/// 17 significant digits: round-trips every double.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// "re+imi" with both parts at full precision.
inline std::string fmt(cplx v) {
  std::string im = fmt(std::abs(v.imag()));
  return fmt(v.real()) + (std::signbit(v.imag()) ? "-" : "+") + im + "i";
}

/// Rows joined with LF, fields with commas.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

  void row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) throw DomainError("CSV row has the wrong number of fields");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  std::size_t columns_;
  std::ostringstream out_;
};

/// Writes to a sibling temporary file and renames it over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw InputError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot move report into place at " + path.string() + ": " + ec.message());
  }
}

/// x,tau,re,im,ref_re,ref_im,abs_err,quad_err; reference fields are empty
/// when no reference was computed.
inline std::string sweep_csv(const ConvergenceReport& report) {
  CsvWriter csv({"x", "tau", "re", "im", "ref_re", "ref_im", "abs_err", "quad_err"});
  for (const auto& r : report.records) {
    csv.row({fmt(r.x), fmt(r.point.imag()), fmt(r.value.real()), fmt(r.value.imag()),
             r.reference ? fmt(r.reference->real()) : "", r.reference ? fmt(r.reference->imag()) : "",
             r.abs_error ? fmt(*r.abs_error) : "", fmt(r.quad_err)});
  }
  return csv.str();
}

inline nlohmann::json sweep_records_json(const ConvergenceReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.records) {
    nlohmann::json row = {{"x", r.x}, {"tau", r.point.imag()}, {"re", r.value.real()}, {"im", r.value.imag()},
                          {"quad_err", r.quad_err}};
    if (r.reference) {
      row["ref_re"] = r.reference->real();
      row["ref_im"] = r.reference->imag();
    }
    if (r.abs_error) row["abs_err"] = *r.abs_error;
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json versions() {
  return {{"riesz", kVersion},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"compiler", __VERSION__}};
}

/// {config, records, summary, versions}
inline std::string json_envelope(const nlohmann::json& config, const nlohmann::json& records,
                                 const nlohmann::json& summary) {
  nlohmann::json doc = {{"config", config}, {"records", records}, {"summary", summary}, {"versions", versions()}};
  return doc.dump(2) + "\n";
}

}  // namespace riesz::io
