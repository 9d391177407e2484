#include "json_writer.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "warpkit/error.hpp"
#include "warpkit/io.hpp"

namespace warpkit::cli {
namespace {

void emit(std::ostringstream& out, const Json& v, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << pad << Json(it.key()).dump() << ": ";
        emit(out, it.value(), depth + 1);
      }
      out << '\n' << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      bool scalars = true;
      for (const auto& e : v) scalars = scalars && !e.is_structured();
      if (scalars) {
        out << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out << ", ";
          emit(out, v[i], depth + 1);
        }
        out << ']';
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        emit(out, v[i], depth + 1);
      }
      out << '\n' << close << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) out << "null";
      else out << format_double(d);
      return;
    }
    default: out << v.dump(); return;
  }
}

}  // namespace

std::string to_json_text(const Json& value) {
  std::ostringstream out;
  emit(out, value, 0);
  out << '\n';
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  f << text;
  if (!f) throw DataError("cannot write " + path.string());
}

}  // namespace warpkit::cli
