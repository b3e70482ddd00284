#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stpfault/logical_matrix.hpp"

namespace stpfault {

using Json = nlohmann::ordered_json;

/// "fnv1a64:" followed by 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

/// "delta4^2"
std::string vector_string(const DeltaVector& v);
/// Parse "delta4^2" or a bare 1-based position (dimension supplied by the caller).
DeltaVector parse_vector(std::string_view text, std::size_t dim);
/// Parse "delta9{1,3}", "{1,3}" or "1,3"; "all" gives the full set.
DeltaSet parse_set(std::string_view text, std::size_t dim);
/// Parse the dimension and positions out of a rendered set, e.g. "delta9{1,3}".
std::pair<std::size_t, std::vector<std::size_t>> parse_rendered_set(std::string_view text);

/// Drug vector as per-drug on/off entries, e.g. {"d1": "on", "d2": "off"}.
Json drug_tuple_json(const DeltaVector& d, const std::vector<std::string>& ids);
/// Fault vector as per-fault values, e.g. {"f1": "sa-0", "f2": "none"}.
Json fault_tuple_json(const DeltaVector& f, const std::vector<std::string>& ids);

/// Indented "key: value" text, in document order.
std::string render_text(const Json& report);
/// Pretty JSON with a trailing newline; parse + re-render gives identical bytes.
std::string render_json(const Json& report);

}  // namespace stpfault
