#include "cli_support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace shintani::cli {

void Config::validate() const {
    try {
        precision().validate();
    } catch (const std::invalid_argument& e) {
        throw DomainError(std::string("--precision: ") + e.what());
    }
    if (threads < 1 || threads > 256) throw DomainError("--threads must lie in [1, 256]");
    if (format != "json" && format != "csv") throw DomainError("--format must be json or csv");
    if (tolerance < 0 || !std::isfinite(tolerance)) throw DomainError("--tolerance must be a non-negative number");
}

Precision Config::precision() const {
    Precision p;
    p.working_digits = precision_digits;
    p.tail_tolerance = std::pow(10.0, -precision_digits);
    return p;
}

Json Config::to_json() const {
    Json j;
    j["precision_digits"] = precision_digits;
    j["threads"] = threads;
    j["cache_dir"] = cache_dir;
    j["format"] = format;
    j["tolerance"] = tolerance;
    return j;
}

namespace {

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void dump_into(const Json& j, int indent, int level, std::string& out) {
    const std::string pad = indent > 0 ? std::string(static_cast<size_t>(indent * (level + 1)), ' ') : "";
    const std::string close_pad = indent > 0 ? std::string(static_cast<size_t>(indent * level), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",";
                    out += nl;
                }
                first = false;
                out += pad + Json(it.key()).dump() + (indent > 0 ? ": " : ":");
                dump_into(it.value(), indent, level + 1, out);
            }
            out += nl + close_pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[";
            out += nl;
            bool first = true;
            for (const auto& e : j) {
                if (!first) {
                    out += ",";
                    out += nl;
                }
                first = false;
                out += pad;
                dump_into(e, indent, level + 1, out);
            }
            out += nl + close_pad + "]";
            return;
        }
        case Json::value_t::number_float: out += format_double(j.get<double>()); return;
        default: out += j.dump(); return;
    }
}

void flatten(const Json& j, const std::string& prefix, Json& row) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), row);
    } else {
        row[prefix] = j;
    }
}

std::string csv_cell(const Json& v) {
    std::string s;
    if (v.is_string()) s = v.get<std::string>();
    else if (v.is_number_float()) s = format_double(v.get<double>());
    else if (v.is_array()) s = dump_json(v, 0);
    else s = v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    return s;
}

}  // namespace

ResultCache::ResultCache(std::filesystem::path dir, std::string version)
    : dir_(std::move(dir)), version_(std::move(version)) {}

std::filesystem::path ResultCache::path_for(const std::string& op, const Json& params) const {
    return dir_ / (op + "-" + fnv1a_hex(op + "|" + params.dump() + "|" + version_) + ".json");
}

std::optional<Json> ResultCache::get(const std::string& op, const Json& params, std::string* warning) const {
    if (!enabled()) return std::nullopt;
    const auto path = path_for(op, params);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    Json j = Json::parse(buf.str(), nullptr, false);
    const bool shaped = !j.is_discarded() && j.is_object() && j.contains("version") && j.contains("operation") &&
                        j.contains("params") && j.contains("value");
    if (!shaped) {
        if (warning) *warning = "corrupt cache entry " + path.string() + "; recomputing";
        return std::nullopt;
    }
    if (j["version"] != version_ || j["operation"] != op || j["params"] != params) return std::nullopt;
    return j["value"];
}

void ResultCache::put(const std::string& op, const Json& params, const Json& value) const {
    if (!enabled()) return;
    std::filesystem::create_directories(dir_);
    Json j;
    j["version"] = version_;
    j["operation"] = op;
    j["params"] = params;
    j["value"] = value;
    static std::atomic<unsigned> counter{0};
    const auto path = path_for(op, params);
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
        out << dump_json(j) << "\n";
        if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump_into(j, indent, 0, out);
    return out;
}

std::string dump_csv(const Json& rows) {
    Json list = rows.is_array() ? rows : Json::array({rows});
    if (list.empty()) return "";
    std::vector<Json> flat;
    for (const auto& r : list) {
        Json row = Json::object();
        flatten(r, "", row);
        flat.push_back(row);
    }
    // union of keys; a key first seen in a later row goes right after its predecessor in that row
    std::vector<std::string> cols;
    for (const auto& row : flat) {
        size_t pos = 0;
        for (auto it = row.begin(); it != row.end(); ++it) {
            auto found = std::find(cols.begin(), cols.end(), it.key());
            if (found == cols.end()) found = cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(pos), it.key());
            pos = static_cast<size_t>(found - cols.begin()) + 1;
        }
    }
    std::string out;
    for (size_t c = 0; c < cols.size(); ++c) out += (c ? "," : "") + csv_cell(Json(cols[c]));
    out += "\n";
    for (const auto& row : flat) {
        for (size_t c = 0; c < cols.size(); ++c) {
            if (c) out += ",";
            if (row.contains(cols[c])) out += csv_cell(row[cols[c]]);
        }
        out += "\n";
    }
    return out;
}

Json to_json(const Complex& z) {
    Json j;
    j["re"] = to_double(z.real());
    j["im"] = to_double(z.imag());
    return j;
}

Json to_json(const Rational& q) { return Json(to_string(q)); }

Json to_json(const cmtraces::IdentityReport& r) {
    Json j;
    j["identity_id"] = r.identity_id;
    Json params = Json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    j["params"] = params;
    j["target"] = to_double(r.target);
    j["computed"] = to_double(r.computed.real());
    j["computed_imag"] = to_double(r.computed.imag());
    j["abs_error"] = r.error.empty() ? Json(to_double(r.abs_error)) : Json(nullptr);
    j["tolerance"] = r.tolerance;
    j["runtime_ms"] = static_cast<long long>(std::llround(r.runtime_ms));
    j["pass"] = r.pass;
    j["error"] = r.error;
    return j;
}

}  // namespace shintani::cli
