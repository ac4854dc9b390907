#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

namespace resistweave {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "resistweave.report/1";

/// Serializes with every floating-point value printed to 17 significant
/// digits. Non-finite numbers become the strings "Infinity", "-Infinity" and
/// "NaN". indent < 0 writes a single line.
std::string dump_json(const Json& value, int indent = 2);
void write_json(std::ostream& out, const Json& value, int indent = 2);

}  // namespace resistweave
