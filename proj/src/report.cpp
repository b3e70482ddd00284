#include "stpfault/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "stpfault/errors.hpp"
#include "stpfault/network.hpp"

namespace stpfault {

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

std::string vector_string(const DeltaVector& v) {
  return "delta" + std::to_string(v.dim()) + "^" + std::to_string(v.position());
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::size_t parse_number(std::string_view s, std::string_view what) {
  s = trim(s);
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw ArgumentError("bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

/// Strip an optional "deltaN" prefix and check N against dim.
std::string_view strip_dim(std::string_view s, std::size_t dim, char stop) {
  s = trim(s);
  if (s.rfind("delta", 0) == 0) {
    const auto end = s.find(stop);
    if (end == std::string_view::npos) throw ArgumentError("malformed delta notation '" + std::string(s) + "'");
    const auto n = parse_number(s.substr(5, end - 5), "dimension");
    if (n != dim) {
      throw DimensionError("'" + std::string(s) + "' is over delta" + std::to_string(n) + ", expected delta" + std::to_string(dim));
    }
    s = s.substr(end);
  }
  return s;
}

}  // namespace

DeltaVector parse_vector(std::string_view text, std::size_t dim) {
  auto s = strip_dim(text, dim, '^');
  if (!s.empty() && s.front() == '^') s.remove_prefix(1);
  const auto pos = parse_number(s, "position");
  if (pos == 0 || pos > dim) {
    throw DimensionError("position " + std::to_string(pos) + " outside delta" + std::to_string(dim));
  }
  return delta(dim, pos);
}

DeltaSet parse_set(std::string_view text, std::size_t dim) {
  auto s = strip_dim(text, dim, '{');
  if (s == "all") return DeltaSet::full(dim);
  if (!s.empty() && s.front() == '{') {
    if (s.back() != '}') throw ArgumentError("unterminated set '" + std::string(text) + "'");
    s = s.substr(1, s.size() - 2);
  }
  DeltaSet out(dim);
  s = trim(s);
  if (s.empty()) return out;
  while (true) {
    const auto comma = s.find(',');
    out.insert(parse_vector(s.substr(0, comma), dim));
    if (comma == std::string_view::npos) break;
    s = s.substr(comma + 1);
  }
  return out;
}

std::pair<std::size_t, std::vector<std::size_t>> parse_rendered_set(std::string_view text) {
  if (text.rfind("delta", 0) != 0) throw ArgumentError("not a rendered set '" + std::string(text) + "'");
  const auto brace = text.find('{');
  if (brace == std::string_view::npos) throw ArgumentError("not a rendered set '" + std::string(text) + "'");
  const auto dim = parse_number(text.substr(5, brace - 5), "dimension");
  return {dim, parse_set(text, dim).positions()};
}

Json drug_tuple_json(const DeltaVector& d, const std::vector<std::string>& ids) {
  Json j = Json::object();
  const auto bits = decode_bools(d.offset(), ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) j[ids[i]] = bits[i] ? "on" : "off";
  return j;
}

Json fault_tuple_json(const DeltaVector& f, const std::vector<std::string>& ids) {
  Json j = Json::object();
  const auto vals = decode_faults(f.offset(), ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    j[ids[i]] = vals[i] == kStuckAt1 ? "sa-1" : vals[i] == kStuckAt0 ? "sa-0" : "none";
  }
  return j;
}

namespace {

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

void text_into(std::string& out, const Json& j, std::size_t indent) {
  const std::string pad(indent, ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (is_scalar(v)) {
        out += pad + k + ": " + scalar_text(v) + "\n";
      } else if (v.is_array() && std::all_of(v.begin(), v.end(), is_scalar)) {
        std::string line;
        for (const auto& e : v) line += (line.empty() ? "" : " ") + scalar_text(e);
        out += pad + k + ": [" + line + "]\n";
      } else if (v.empty()) {
        out += pad + k + ": " + (v.is_array() ? "[]" : "{}") + "\n";
      } else {
        out += pad + k + ":\n";
        text_into(out, v, indent + 2);
      }
    }
    return;
  }
  if (j.is_array()) {
    for (const auto& e : j) {
      if (is_scalar(e)) {
        out += pad + "- " + scalar_text(e) + "\n";
      } else {
        out += pad + "-\n";
        text_into(out, e, indent + 2);
      }
    }
    return;
  }
  out += pad + scalar_text(j) + "\n";
}

}  // namespace

std::string render_text(const Json& report) {
  std::string out;
  text_into(out, report, 0);
  return out;
}

std::string render_json(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace stpfault
