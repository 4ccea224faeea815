#include "infodelta/json_out.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "infodelta/error.hpp"

namespace infodelta {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

namespace {

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

void dump_into(const nlohmann::json& v, std::string& out, int depth) {
  using value_t = nlohmann::json::value_t;
  switch (v.type()) {
    case value_t::number_float: {
      double d = v.get<double>();
      out += std::isfinite(d) ? fixed6(d) : "null";
      break;
    }
    case value_t::object: {
      if (v.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        indent(out, depth + 1);
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        dump_into(it.value(), out, depth + 1);
      }
      out += '\n';
      indent(out, depth);
      out += '}';
      break;
    }
    case value_t::array: {
      if (v.empty()) {
        out += "[]";
        break;
      }
      // arrays of scalars stay on one line
      bool scalar = true;
      for (const auto& e : v)
        if (e.is_structured()) scalar = false;
      if (scalar) {
        out += '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          dump_into(v[i], out, depth);
        }
        out += ']';
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        indent(out, depth + 1);
        dump_into(v[i], out, depth + 1);
      }
      out += '\n';
      indent(out, depth);
      out += ']';
      break;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string dump_fixed(const nlohmann::json& value) {
  std::string out;
  dump_into(value, out, 0);
  out += '\n';
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace infodelta
