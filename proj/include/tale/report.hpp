#ifndef TALE_REPORT_HPP
#define TALE_REPORT_HPP

#include <json.hpp>
#include <string>
#include <vector>

namespace tale {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

// Report envelope: schema version first, optional timestamp (omitted under
// --no-timestamp so reruns are byte-identical).
Json report_envelope(const std::string& kind, bool with_timestamp);

void write_json(const std::string& path, const Json& j);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace tale

#endif
