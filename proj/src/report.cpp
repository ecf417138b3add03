#include "tale/report.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "tale/errors.hpp"

namespace tale {

Json report_envelope(const std::string& kind, bool with_timestamp) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  if (with_timestamp) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::ostringstream ss;
    ss << std::put_time(std::gmtime(&t), "%FT%TZ");
    j["generated_at"] = ss.str();
  }
  return j;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  for (size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 == header.size() ? "\n" : ",");
  out << std::setprecision(17);
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 == row.size() ? "\n" : ",");
  }
}

}  // namespace tale
