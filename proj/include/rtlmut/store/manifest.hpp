#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace rtlmut::store {

// Line-delimited persistence: a header line carrying schema_version and the
// record type tag, then one JSON record per line. Unknown fields in records
// are preserved verbatim on rewrite.
struct Manifest {
  uint32_t schema_version = 1;
  std::string record_type;
  // Extra header fields (config, fingerprints, ...); preserved on rewrite.
  nlohmann::json header_extra = nlohmann::json::object();
  std::vector<nlohmann::json> records;
};

class ManifestError : public std::runtime_error {
public:
  explicit ManifestError(const std::string& msg) : std::runtime_error(msg) {}
};

std::string manifest_to_string(const Manifest& m);
Manifest manifest_from_string(const std::string& text, const std::string& origin = "<string>");

Manifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const Manifest& m);

}  // namespace rtlmut::store
