// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include "crudwalk/runtime/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace crudwalk::runtime {

namespace {

const std::set<std::string> kAnnotations{
    "description", "title", "example", "examples", "default", "readOnly", "writeOnly",
    "nullable", "deprecated", "xml", "externalDocs", "additionalProperties"};
const std::set<std::string> kConstraints{
    "type", "enum", "const", "properties", "required", "items", "minimum", "maximum",
    "exclusiveMinimum", "exclusiveMaximum", "minLength", "maxLength", "minItems", "maxItems", "format"};
const std::set<std::string> kFormats{"int32", "int64", "float", "double"};

void check_supported(const Json& schema, const std::string& where) {
    if (!schema.is_object()) throw UnsupportedSchema(where + ": schema must be an object");
    for (const auto& [key, v] : schema.items()) {
        if (key.rfind("x-", 0) == 0 || kAnnotations.count(key) || kConstraints.count(key)) continue;
        throw UnsupportedSchema(where + ": unsupported schema construct '" + key + "'");
    }
    if (schema.contains("format")) {
        const std::string f = schema["format"].is_string() ? schema["format"].get<std::string>() : "";
        if (!kFormats.count(f)) throw UnsupportedSchema(where + ": unsupported format '" + f + "'");
    }
}

std::string type_of(const Json& schema, const std::string& where) {
    if (schema.contains("type")) {
        const Json& t = schema["type"];
        if (t.is_string()) return t.get<std::string>();
        if (t.is_array()) {
            for (const auto& x : t) {
                if (x.is_string() && x != "null") return x.get<std::string>();
            }
        }
        throw UnsupportedSchema(where + ": unsupported 'type' value " + t.dump());
    }
    if (schema.contains("properties")) return "object";
    if (schema.contains("items")) return "array";
    throw UnsupportedSchema(where + ": schema has no type");
}

bool is_type(const Json& v, const std::string& type) {
    if (type == "integer") return v.is_number_integer() || (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>());
    if (type == "number") return v.is_number();
    if (type == "string") return v.is_string();
    if (type == "boolean") return v.is_boolean();
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "null") return v.is_null();
    return false;
}

}  // namespace

Generator::Generator(const GeneratorConfig& config) : config_(config), rng_(config.seed) {}

std::int64_t Generator::next_id(std::string_view id_space) {
    auto it = counters_.find(id_space);
    if (it == counters_.end()) it = counters_.emplace(std::string(id_space), config_.id_base).first;
    return it->second++;
}

Json Generator::generate(const Json& schema, std::string_view key_field, std::string_view id_space) {
    Json out = value(schema, "schema");
    if (!key_field.empty() && out.is_object()) {
        const std::string key(key_field);
        const Json& props = schema.value("properties", Json::object());
        const bool as_string = props.contains(key) && props[key].value("type", "") == "string";
        const std::int64_t id = next_id(id_space.empty() ? key_field : id_space);
        out[key] = as_string ? Json(std::to_string(id)) : Json(id);
    }
    return out;
}

Json Generator::value(const Json& schema, const std::string& where) {
    check_supported(schema, where);
    if (schema.contains("const")) return schema["const"];
    if (schema.contains("enum")) {
        const Json& options = schema["enum"];
        if (!options.is_array() || options.empty()) throw UnsupportedSchema(where + ": enum must be a non-empty list");
        return options[static_cast<std::size_t>(rng_.uniform(0, static_cast<std::int64_t>(options.size()) - 1))];
    }
    const std::string type = type_of(schema, where);
    if (type == "integer") {
        std::int64_t lo = schema.contains("minimum") ? schema["minimum"].get<std::int64_t>() : config_.min_integer;
        std::int64_t hi = schema.contains("maximum") ? schema["maximum"].get<std::int64_t>() : config_.max_integer;
        if (schema.contains("exclusiveMinimum") && schema["exclusiveMinimum"].is_number()) {
            lo = schema["exclusiveMinimum"].get<std::int64_t>() + 1;
        }
        if (schema.contains("exclusiveMaximum") && schema["exclusiveMaximum"].is_number()) {
            hi = schema["exclusiveMaximum"].get<std::int64_t>() - 1;
        }
        if (schema.contains("minimum") && !schema.contains("maximum")) hi = std::max(hi, lo + (config_.max_integer - config_.min_integer));
        if (schema.contains("maximum") && !schema.contains("minimum")) lo = std::min(lo, hi - (config_.max_integer - config_.min_integer));
        if (lo > hi) throw UnsupportedSchema(where + ": empty integer range");
        return rng_.uniform(lo, hi);
    }
    if (type == "number") {
        const double lo = schema.value("minimum", config_.min_number);
        const double hi = schema.value("maximum", std::max(config_.max_number, lo));
        if (lo > hi) throw UnsupportedSchema(where + ": empty number range");
        // Two decimals keep values exact through JSON text.
        return std::round(rng_.uniform_real(lo, hi) * 100.0) / 100.0;
    }
    if (type == "boolean") return rng_.coin();
    if (type == "string") {
        const std::size_t lo = schema.value("minLength", config_.min_string);
        const std::size_t hi = schema.value("maxLength", std::max(config_.max_string, lo));
        if (lo > hi) throw UnsupportedSchema(where + ": empty length range");
        const auto n = static_cast<std::size_t>(rng_.uniform(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
        std::string s;
        for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('a' + rng_.uniform(0, 25)));
        return s;
    }
    if (type == "array") {
        if (!schema.contains("items")) throw UnsupportedSchema(where + ": array without items");
        const std::size_t lo = schema.value("minItems", config_.min_items);
        const std::size_t hi = schema.value("maxItems", std::max(config_.max_items, lo));
        const auto n = static_cast<std::size_t>(rng_.uniform(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
        Json out = Json::array();
        for (std::size_t i = 0; i < n; ++i) out.push_back(value(schema["items"], where + ".items"));
        return out;
    }
    if (type == "object") {
        const Json& props = schema.value("properties", Json::object());
        for (const auto& r : schema.value("required", Json::array())) {
            if (!props.contains(r.get<std::string>())) {
                throw UnsupportedSchema(where + ": required property '" + r.get<std::string>() + "' is not defined");
            }
        }
        Json out = Json::object();
        for (const auto& [name, sub] : props.items()) out[name] = value(sub, where + "." + name);
        return out;
    }
    throw UnsupportedSchema(where + ": unsupported type '" + type + "'");
}

std::optional<std::string> validate(const Json& value, const Json& schema) {
    struct V {
        static std::optional<std::string> run(const Json& v, const Json& s, const std::string& at) {
            if (s.contains("const") && v != s["const"]) return at + ": expected " + s["const"].dump();
            if (s.contains("enum")) {
                const auto& e = s["enum"];
                if (std::find(e.begin(), e.end(), v) == e.end()) return at + ": not one of " + e.dump();
                return std::nullopt;
            }
            std::string type;
            try {
                type = type_of(s, at);
            } catch (const UnsupportedSchema&) {
                return std::nullopt;
            }
            if (s.contains("type") && s["type"].is_array()) {
                bool any = false;
                for (const auto& t : s["type"]) any = any || is_type(v, t.get<std::string>());
                if (!any) return at + ": expected one of " + s["type"].dump();
                if (v.is_null()) return std::nullopt;
            } else if (!is_type(v, type)) {
                return at + ": expected " + type;
            }
            if (v.is_number()) {
                const double x = v.get<double>();
                if (s.contains("minimum") && x < s["minimum"].get<double>()) return at + ": below minimum";
                if (s.contains("maximum") && x > s["maximum"].get<double>()) return at + ": above maximum";
                if (s.contains("exclusiveMinimum") && s["exclusiveMinimum"].is_number() &&
                    x <= s["exclusiveMinimum"].get<double>()) {
                    return at + ": not above exclusiveMinimum";
                }
                if (s.contains("exclusiveMaximum") && s["exclusiveMaximum"].is_number() &&
                    x >= s["exclusiveMaximum"].get<double>()) {
                    return at + ": not below exclusiveMaximum";
                }
            }
            if (v.is_string()) {
                const auto n = v.get_ref<const std::string&>().size();
                if (s.contains("minLength") && n < s["minLength"].get<std::size_t>()) return at + ": too short";
                if (s.contains("maxLength") && n > s["maxLength"].get<std::size_t>()) return at + ": too long";
            }
            if (v.is_array()) {
                if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) return at + ": too few items";
                if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) return at + ": too many items";
                if (s.contains("items")) {
                    for (std::size_t i = 0; i < v.size(); ++i) {
                        if (auto e = run(v[i], s["items"], at + "[" + std::to_string(i) + "]")) return e;
                    }
                }
            }
            if (v.is_object()) {
                for (const auto& r : s.value("required", Json::array())) {
                    if (!v.contains(r.get<std::string>())) return at + ": missing required '" + r.get<std::string>() + "'";
                }
                const Json& props = s.value("properties", Json::object());
                for (const auto& [name, sub] : props.items()) {
                    if (v.contains(name)) {
                        if (auto e = run(v[name], sub, at + "." + name)) return e;
                    }
                }
            }
            return std::nullopt;
        }
    };
    return V::run(value, schema, "$");
}

void EmulatedState::add(const std::string& tla_id, const std::string& resource, const Json& data,
                        const std::string& key_field) {
    if (entries_.count(tla_id)) throw InternalError("emulator already holds '" + tla_id + "' (malformed sequence)");
    EmulatedEntry e{resource, data, data.is_object() && data.contains(key_field) ? data[key_field] : Json()};
    entries_.emplace(tla_id, std::move(e));
    key_fields_[tla_id] = key_field;
    order_.push_back(tla_id);
}

void EmulatedState::remove(const std::string& tla_id) {
    if (!entries_.erase(tla_id)) throw InternalError("emulator has no '" + tla_id + "' to delete");
    key_fields_.erase(tla_id);
    order_.erase(std::remove(order_.begin(), order_.end(), tla_id), order_.end());
}

void EmulatedState::update(const std::string& tla_id, const Json& data) {
    const auto it = entries_.find(tla_id);
    if (it == entries_.end()) throw InternalError("emulator has no '" + tla_id + "' to update");
    it->second.data = data;
    const auto& key = key_fields_[tla_id];
    if (data.is_object() && data.contains(key)) it->second.id = data[key];
}

std::optional<EmulatedEntry> EmulatedState::recycle(const std::string& tla_id) const {
    const auto it = entries_.find(tla_id);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void EmulatedState::reset() {
    entries_.clear();
    order_.clear();
    key_fields_.clear();
}

void SnapshotStore::put(const std::string& path, HttpResponse response) {
    if (!items_.emplace(path, Snapshot{std::move(response), {}}).second) {
        throw InternalError("snapshot of " + path + " was already taken");
    }
}

void SnapshotStore::put_error(const std::string& path, const std::string& reason) {
    if (!items_.emplace(path, Snapshot{std::nullopt, reason}).second) {
        throw InternalError("snapshot of " + path + " was already taken");
    }
}

const Snapshot* SnapshotStore::get(const std::string& path) const {
    const auto it = items_.find(path);
    return it == items_.end() ? nullptr : &it->second;
}

}  // namespace crudwalk::runtime
