#include "resistweave/report.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "resistweave/io.hpp"

namespace resistweave {

namespace {

void dump(const Json& v, int indent, int level, std::string& out) {
  const bool pretty = indent >= 0;
  auto newline = [&](int lvl) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * lvl), ' ');
  };

  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(level + 1);
        out += Json(it.key()).dump();
        out += pretty ? ": " : ":";
        dump(it.value(), indent, level + 1, out);
      }
      newline(level);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(v.begin(), v.end(), [](const Json& x) { return x.is_structured(); });
      out += '[';
      bool first = true;
      for (const auto& x : v) {
        if (!first) out += flat && pretty ? ", " : ",";
        first = false;
        if (!flat) newline(level + 1);
        dump(x, indent, level + 1, out);
      }
      if (!flat) newline(level);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      if (std::isnan(x)) {
        out += "\"NaN\"";
      } else if (std::isinf(x)) {
        out += x > 0 ? "\"Infinity\"" : "\"-Infinity\"";
      } else {
        std::string s = format_double(x);
        // Keep floats recognisable as floats after a round trip.
        if (s.find_first_of(".eE") == std::string::npos) s += ".0";
        out += s;
      }
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string dump_json(const Json& value, int indent) {
  std::string out;
  dump(value, indent, 0, out);
  return out;
}

void write_json(std::ostream& out, const Json& value, int indent) { out << dump_json(value, indent) << '\n'; }

}  // namespace resistweave
