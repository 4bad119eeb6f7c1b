// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "crudwalk/speckit/speckit.hpp"

namespace crudwalk::speckit {

namespace {

const std::vector<std::string> kMethods{"get", "put", "post", "delete", "patch", "head", "options", "trace"};

Json plain_scalar(const std::string& s) {
    static const std::regex int_re(R"([-+]?[0-9]+)");
    static const std::regex float_re(R"([-+]?([0-9]+\.[0-9]*|\.[0-9]+|[0-9]+)([eE][-+]?[0-9]+)?)");
    if (s.empty() || s == "~" || s == "null" || s == "Null" || s == "NULL") return nullptr;
    if (s == "true" || s == "True" || s == "TRUE") return true;
    if (s == "false" || s == "False" || s == "FALSE") return false;
    if (std::regex_match(s, int_re)) {
        try {
            return std::stoll(s);
        } catch (const std::out_of_range&) {
            return std::stod(s);
        }
    }
    if (std::regex_match(s, float_re)) return std::stod(s);
    return s;
}

Json convert(const YAML::Node& n) {
    switch (n.Type()) {
        case YAML::NodeType::Null:
        case YAML::NodeType::Undefined:
            return nullptr;
        case YAML::NodeType::Scalar:
            // yaml-cpp tags quoted scalars "!" and plain ones "?".
            if (n.Tag() == "!") return n.Scalar();
            return plain_scalar(n.Scalar());
        case YAML::NodeType::Sequence: {
            Json out = Json::array();
            for (const auto& item : n) out.push_back(convert(item));
            return out;
        }
        case YAML::NodeType::Map: {
            Json out = Json::object();
            for (const auto& kv : n) out[kv.first.Scalar()] = convert(kv.second);
            return out;
        }
    }
    return nullptr;
}

std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

class Loader {
  public:
    explicit Loader(Json doc) { out_.document = std::move(doc); }

    OasDocument run() {
        const Json& doc = out_.document;
        if (!doc.is_object()) throw InputError("OpenAPI document must be a mapping");
        if (!doc.contains("openapi")) {
            warn("missing-version", "document", "no 'openapi' version field");
        } else if (!doc["openapi"].is_string() || doc["openapi"].get<std::string>().rfind("3.", 0) != 0) {
            error("unsupported-version", "document", "only OpenAPI 3.x documents are supported");
        }
        if (doc.contains("components") && doc["components"].contains("schemas")) {
            schemas_ = &doc["components"]["schemas"];
        }
        if (!doc.contains("paths") || !doc["paths"].is_object()) {
            error("missing-paths", "document", "document has no 'paths' mapping");
            return std::move(out_);
        }
        for (const auto& [path, item] : doc["paths"].items()) read_path(path, item);
        check_unused_schemas();
        return std::move(out_);
    }

  private:
    void add(Diagnostic::Severity s, std::string code, std::string where, std::string msg) {
        out_.diagnostics.push_back({s, std::move(code), std::move(where), std::move(msg)});
    }
    void error(std::string code, std::string where, std::string msg) {
        add(Diagnostic::Severity::Error, std::move(code), std::move(where), std::move(msg));
    }
    void warn(std::string code, std::string where, std::string msg) {
        add(Diagnostic::Severity::Warning, std::move(code), std::move(where), std::move(msg));
    }

    /// Follows local `#/components/schemas/...` references, recording each name used.
    std::optional<Json> resolve(const Json& schema, const std::string& where, int depth = 0) {
        if (depth > 32) {
            error("recursive-schema", where, "schema references nest too deeply (cycle?)");
            return std::nullopt;
        }
        if (schema.is_object()) {
            if (schema.contains("$ref")) {
                const std::string ref = schema["$ref"].is_string() ? schema["$ref"].get<std::string>() : "";
                const std::string prefix = "#/components/schemas/";
                if (ref.rfind(prefix, 0) != 0) {
                    error("unresolved-ref", where, "unsupported reference '" + ref + "'");
                    return std::nullopt;
                }
                const std::string name = ref.substr(prefix.size());
                used_.insert(name);
                if (schemas_ == nullptr || !schemas_->contains(name)) {
                    error("unresolved-ref", where, "reference to undefined schema '" + name + "'");
                    return std::nullopt;
                }
                return resolve((*schemas_)[name], where, depth + 1);
            }
            Json out = Json::object();
            for (const auto& [k, v] : schema.items()) {
                auto r = resolve(v, where, depth + 1);
                if (!r) return std::nullopt;
                out[k] = std::move(*r);
            }
            return std::optional<Json>(std::in_place, std::move(out));
        }
        if (schema.is_array()) {
            Json out = Json::array();
            for (const auto& v : schema) {
                auto r = resolve(v, where, depth + 1);
                if (!r) return std::nullopt;
                out.push_back(std::move(*r));
            }
            return std::optional<Json>(std::in_place, std::move(out));
        }
        return std::optional<Json>(std::in_place, schema);
    }

    static std::optional<std::string> ref_name(const Json& schema) {
        if (schema.is_object() && schema.contains("$ref") && schema["$ref"].is_string()) {
            const std::string ref = schema["$ref"];
            const auto slash = ref.rfind('/');
            return slash == std::string::npos ? ref : ref.substr(slash + 1);
        }
        return std::nullopt;
    }

    static const Json* json_media(const Json& holder) {
        if (!holder.is_object() || !holder.contains("content") || !holder["content"].is_object()) return nullptr;
        const Json& content = holder["content"];
        if (content.empty()) return nullptr;
        const Json& media = content.contains("application/json") ? content["application/json"] : content.begin().value();
        return media.contains("schema") ? &media["schema"] : nullptr;
    }

    std::vector<Parameter> read_params(const Json& list, const std::string& where) {
        std::vector<Parameter> out;
        if (!list.is_array()) return out;
        std::set<std::pair<std::string, std::string>> seen;
        for (const auto& raw : list) {
            auto p = resolve(raw, where);
            if (!p || !p->is_object() || !p->contains("name") || !p->contains("in")) {
                error("invalid-parameter", where, "parameter needs 'name' and 'in'");
                continue;
            }
            Parameter param{(*p)["name"].get<std::string>(), (*p)["in"].get<std::string>(),
                            p->value("required", false), p->value("schema", Json::object())};
            if (!seen.emplace(param.name, param.in).second) {
                error("duplicate-parameter", where, "parameter '" + param.name + "' (" + param.in + ") is declared twice");
                continue;
            }
            out.push_back(std::move(param));
        }
        return out;
    }

    void read_path(const std::string& path, const Json& item) {
        if (path.empty() || path[0] != '/') {
            error("invalid-path", path, "path '" + path + "' must start with '/'");
            return;
        }
        if (!item.is_object()) {
            error("invalid-path", path, "path item must be a mapping");
            return;
        }
        const auto shared = read_params(item.value("parameters", Json::array()), path);
        for (const auto& method : kMethods) {
            if (item.contains(method)) read_operation(path, method, item[method], shared);
        }
    }

    void read_operation(const std::string& path, const std::string& method, const Json& op,
                        const std::vector<Parameter>& shared) {
        ApiOperation a;
        a.verb = upper(method);
        a.path_template = path;
        const std::string where = a.verb + " " + path;
        if (op.contains("operationId")) {
            a.operation_id = op["operationId"];
        } else if (op.contains("operationID")) {
            a.operation_id = op["operationID"];
        } else {
            error("missing-operation-id", where, "operation has no operationId");
            a.operation_id = method + path;
        }
        if (!ids_.insert(a.operation_id).second) {
            error("duplicate-operation-id", where, "operationId '" + a.operation_id + "' is used twice");
        }
        a.summary = op.value("summary", std::string());
        if (op.contains("tags") && op["tags"].is_array()) {
            for (const auto& t : op["tags"]) a.tags.push_back(t.get<std::string>());
        }
        a.path_params = template_params(path);

        a.parameters = read_params(op.value("parameters", Json::array()), where);
        for (const auto& s : shared) {
            const bool overridden = std::any_of(a.parameters.begin(), a.parameters.end(), [&](const Parameter& p) {
                return p.name == s.name && p.in == s.in;
            });
            if (!overridden) a.parameters.push_back(s);
        }
        for (const auto& name : a.path_params) {
            const auto it = std::find_if(a.parameters.begin(), a.parameters.end(),
                                         [&](const Parameter& p) { return p.in == "path" && p.name == name; });
            if (it == a.parameters.end()) {
                error("undefined-path-parameter", where, "path parameter '" + name + "' is not declared");
            } else if (!it->required) {
                error("path-parameter-not-required", where, "path parameter '" + name + "' must be required");
            }
        }
        for (const auto& p : a.parameters) {
            if (p.in == "path" && std::find(a.path_params.begin(), a.path_params.end(), p.name) == a.path_params.end()) {
                error("unknown-path-parameter", where, "path parameter '" + p.name + "' does not appear in the path");
            }
        }

        if (op.contains("requestBody")) {
            if (const Json* schema = json_media(op["requestBody"])) {
                a.request_schema_ref = ref_name(*schema);
                a.request_schema = resolve(*schema, where);
            }
        }
        if (!a.request_schema && (a.verb == "POST" || a.verb == "PUT")) {
            error("missing-request-body", where, "missing request body schema");
        }

        if (!op.contains("responses") || !op["responses"].is_object() || op["responses"].empty()) {
            error("missing-responses", where, "missing response codes");
        } else {
            bool success = false;
            for (const auto& [code, raw] : op["responses"].items()) {
                Response r;
                if (const Json* schema = json_media(raw)) {
                    r.schema_ref = ref_name(*schema);
                    r.schema = resolve(*schema, where);
                }
                if (code.size() == 3 && code[0] == '2') success = true;
                a.responses.emplace(code, std::move(r));
            }
            if (!success) warn("no-success-response", where, "no 2xx response is declared");
        }
        out_.operations.push_back(std::move(a));
    }

    void collect_refs(const Json& j) {
        if (j.is_object()) {
            if (const auto name = ref_name(j)) used_.insert(*name);
            for (const auto& [_, v] : j.items()) collect_refs(v);
        } else if (j.is_array()) {
            for (const auto& v : j) collect_refs(v);
        }
    }

    void check_unused_schemas() {
        if (schemas_ == nullptr) return;
        // Schemas referenced only from other schemas count as used when their referrer is.
        for (bool grew = true; grew;) {
            grew = false;
            for (const auto& name : std::set<std::string>(used_)) {
                if (!schemas_->contains(name)) continue;
                const std::size_t before = used_.size();
                collect_refs((*schemas_)[name]);
                grew = grew || used_.size() != before;
            }
        }
        for (const auto& [name, _] : schemas_->items()) {
            if (!used_.count(name)) {
                warn("unused-schema", "components.schemas." + name, "schema '" + name + "' is never referenced");
            }
        }
    }

    OasDocument out_;
    const Json* schemas_ = nullptr;
    std::set<std::string> used_;
    std::set<std::string> ids_;
};

}  // namespace

const Response* ApiOperation::success_response() const {
    for (const auto& [code, r] : responses) {
        if (code.size() == 3 && code[0] == '2') return &r;
    }
    return nullptr;
}

const ApiOperation* OasDocument::operation(std::string_view id) const {
    for (const auto& op : operations) {
        if (op.operation_id == id) return &op;
    }
    return nullptr;
}

bool OasDocument::has_errors() const {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::Error; });
}

std::vector<std::string> template_params(std::string_view path_template) {
    std::vector<std::string> out;
    for (std::size_t pos = path_template.find('{'); pos != std::string_view::npos;
         pos = path_template.find('{', pos + 1)) {
        const auto end = path_template.find('}', pos);
        if (end == std::string_view::npos) break;
        out.emplace_back(path_template.substr(pos + 1, end - pos - 1));
    }
    return out;
}

Json yaml_to_json(std::string_view text) {
    try {
        return convert(YAML::Load(std::string(text)));
    } catch (const YAML::Exception& e) {
        throw InputError(std::string("not valid YAML: ") + e.what());
    }
}

OasDocument load_oas(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    Json doc;
    if (first != std::string_view::npos && (text[first] == '{' || text[first] == '[')) {
        try {
            doc = Json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw InputError(std::string("not valid JSON: ") + e.what());
        }
    } else {
        doc = yaml_to_json(text);
    }
    return Loader(std::move(doc)).run();
}

OasDocument load_oas_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return load_oas(ss.str());
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

}  // namespace crudwalk::speckit
