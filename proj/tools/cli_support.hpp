#pragma once

#include "shintani/cmtraces.hpp"
#include "shintani/numeric.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace shintani::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kCacheVersion = "shintani-cache-1";

struct Config {
    int precision_digits = 30;
    int threads = 1;
    std::string cache_dir;  // empty disables the cache
    std::string format = "json";
    double tolerance = 0;  // 0 keeps per-identity defaults

    void validate() const;  // throws DomainError
    Precision precision() const;
    Json to_json() const;
};

// JSON files keyed by operation, canonical parameters and cache version. Writes go to a
// temporary file in the same directory and are renamed into place.
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path dir, std::string version = kCacheVersion);
    bool enabled() const { return !dir_.empty(); }
    std::filesystem::path path_for(const std::string& op, const Json& params) const;
    // nullopt for missing, stale or corrupt entries; corrupt ones set *warning
    std::optional<Json> get(const std::string& op, const Json& params, std::string* warning = nullptr) const;
    void put(const std::string& op, const Json& params, const Json& value) const;

private:
    std::filesystem::path dir_;
    std::string version_;
};

// Serialization with stable key order, 17 significant digits for floats.
std::string dump_json(const Json& j, int indent = 2);
// One row per array element (or a single row for an object); nested objects flatten to dotted
// keys, arrays are embedded as JSON text.
std::string dump_csv(const Json& rows);

Json to_json(const Complex& z);
Json to_json(const Rational& q);  // "p/q" string
Json to_json(const cmtraces::IdentityReport& r);

}  // namespace shintani::cli
