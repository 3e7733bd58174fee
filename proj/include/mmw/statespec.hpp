#ifndef MMW_STATESPEC_HPP
#define MMW_STATESPEC_HPP

#include <json.hpp>
#include <string>

#include "mmw/witnesses.hpp"

// File-schema layer: human-writable JSON state specs and correlation grids.
// Formal schemas live in schemas/. Complex numbers are [re, im] pairs
// throughout.

namespace mmw {

struct spec_error : error {
  using error::error;
};

// Parse failures carry the byte offset reported by the JSON parser; field
// failures name the offending field path.
nlohmann::json load_json_file(const std::string& path);

// Builds the state described by a spec document and returns the spec with
// all defaults resolved (cutoffs, leakage tolerance) for report echoing.
struct BuiltState {
  FockState state;
  nlohmann::ordered_json resolved;
};
BuiltState build_state(const nlohmann::json& spec);

CorrelationGrid parse_grid(const nlohmann::json& doc);

// FNV-1a 64 content hash, formatted "fnv1a64:<hex>".
std::string digest_bytes(const std::string& bytes);
std::string digest_file(const std::string& path);

}  // namespace mmw

#endif  // MMW_STATESPEC_HPP
