// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "crudwalk/glacier/glacier.hpp"
#include "crudwalk/speckit/speckit.hpp"

namespace crudwalk::speckit {

namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::optional<ClauseOrigin> origin_from(const std::string& s) {
    if (s == "inferred") return ClauseOrigin::Inferred;
    if (s == "inferred-extra") return ClauseOrigin::InferredExtra;
    if (s == "manual") return ClauseOrigin::Manual;
    return std::nullopt;
}

/// Splits "/r/{k}" into ("/r", "k"); nullopt when the last segment is not a placeholder.
std::optional<std::pair<std::string, std::string>> split_item(const std::string& path) {
    const auto slash = path.rfind('/');
    if (slash == std::string::npos || slash == 0) return std::nullopt;
    const std::string last = path.substr(slash + 1);
    if (last.size() < 3 || last.front() != '{' || last.back() != '}') return std::nullopt;
    return std::make_pair(path.substr(0, slash), last.substr(1, last.size() - 2));
}

const Json* op_object(const Json& doc, const ApiOperation& op) {
    const Json& paths = doc["paths"];
    const auto method = lower(op.verb);
    if (!paths.contains(op.path_template) || !paths[op.path_template].contains(method)) return nullptr;
    return &paths[op.path_template][method];
}

std::vector<std::string> string_list(const Json& holder, const char* a, const char* b, const std::string& where) {
    std::vector<std::string> out;
    for (const char* key : {a, b}) {
        if (!holder.contains(key)) continue;
        const Json& list = holder[key];
        if (list.is_string()) {
            out.push_back(list.get<std::string>());
        } else if (list.is_array()) {
            for (const auto& item : list) {
                if (!item.is_string()) throw InputError(where + ": '" + key + "' entries must be strings");
                out.push_back(item.get<std::string>());
            }
        } else {
            throw InputError(where + ": '" + key + "' must be a list of formulas");
        }
    }
    return out;
}

glacier::Clause parse_clause(const std::string& text, const std::string& where, std::size_t index,
                             std::vector<std::string>& warnings) {
    try {
        auto r = glacier::parse_with_warnings(text);
        for (auto& w : r.warnings) warnings.push_back(where + " clause " + std::to_string(index) + ": " + w);
        return {text, std::move(r.formula)};
    } catch (const glacier::ParseError& e) {
        throw InputError(where + " clause " + std::to_string(index) + ": " + e.what());
    }
}

std::vector<ClauseOrigin> read_origins(const Json* op, const char* key, std::size_t n) {
    std::vector<ClauseOrigin> out(n, ClauseOrigin::Manual);
    if (op == nullptr || !op->contains("x-contract-origin")) return out;
    const Json& o = (*op)["x-contract-origin"];
    if (!o.contains(key) || !o[key].is_array()) return out;
    for (std::size_t i = 0; i < n && i < o[key].size(); ++i) {
        if (o[key][i].is_string()) {
            if (auto v = origin_from(o[key][i].get<std::string>())) out[i] = *v;
        }
    }
    return out;
}

/// Reads what the document already carries: operations, manual clauses, invariants.
ExtendedSpec collect(const OasDocument& oas) {
    ExtendedSpec spec;
    spec.document = oas.document;
    spec.operations = oas.operations;
    for (const auto& d : oas.diagnostics) {
        if (d.severity == Diagnostic::Severity::Warning) spec.warnings.push_back(d.location + ": " + d.message);
    }
    for (const auto& op : spec.operations) {
        OperationContract c;
        const Json* obj = op_object(spec.document, op);
        if (obj != nullptr) {
            const std::string where = "operation " + op.operation_id;
            const auto reqs = string_list(*obj, "x-requires", "requires", where + " requires");
            const auto ens = string_list(*obj, "x-ensures", "ensures", where + " ensures");
            for (std::size_t i = 0; i < reqs.size(); ++i) {
                auto clause = parse_clause(reqs[i], where + " requires", i, spec.warnings);
                if (glacier::contains_prev(clause.formula)) {
                    throw InputError(where + " requires clause " + std::to_string(i) + ": prev is only allowed in ensures");
                }
                c.contract.preconditions.push_back(std::move(clause));
            }
            for (std::size_t i = 0; i < ens.size(); ++i) {
                c.contract.postconditions.push_back(parse_clause(ens[i], where + " ensures", i, spec.warnings));
            }
            c.pre_origin = read_origins(obj, "requires", reqs.size());
            c.post_origin = read_origins(obj, "ensures", ens.size());
        }
        spec.contracts.emplace(op.operation_id, std::move(c));
    }
    const auto invs = string_list(spec.document, "x-invariants", "invariants", "invariants");
    for (std::size_t i = 0; i < invs.size(); ++i) {
        auto clause = parse_clause(invs[i], "invariant", i, spec.warnings);
        const auto free = glacier::free_params(clause.formula);
        if (!free.empty()) {
            throw InputError("invariant " + std::to_string(i) + " has unbound parameter '" + *free.begin() + "'");
        }
        if (glacier::contains_prev(clause.formula)) {
            throw InputError("invariant " + std::to_string(i) + ": prev is not allowed in invariants");
        }
        spec.invariants.push_back(std::move(clause));
    }
    // Key of each collection: the placeholder of its sibling item template.
    for (const auto& op : spec.operations) {
        if (auto item = split_item(op.path_template)) spec.resource_keys.emplace(item->first, item->second);
    }
    return spec;
}

bool has_get(const ExtendedSpec& spec, const std::string& path) {
    return std::any_of(spec.operations.begin(), spec.operations.end(),
                       [&](const ApiOperation& op) { return op.verb == "GET" && op.path_template == path; });
}

bool same_schema(const ApiOperation& op, const Response& r) {
    if (!op.request_schema || !r.schema) return false;
    if (op.request_schema_ref && r.schema_ref) return *op.request_schema_ref == *r.schema_ref;
    return *op.request_schema == *r.schema;
}

bool schema_has_property(const std::optional<Json>& schema, const std::string& name) {
    return schema && schema->contains("properties") && (*schema)["properties"].contains(name);
}

void add_clause(std::vector<glacier::Clause>& clauses, std::vector<ClauseOrigin>& origins, const std::string& text,
                ClauseOrigin origin) {
    auto formula = glacier::parse(text);
    const std::string printed = glacier::print(formula);
    for (const auto& c : clauses) {
        if (glacier::print(c.formula) == printed) return;
    }
    clauses.push_back({printed, std::move(formula)});
    origins.push_back(origin);
}

}  // namespace

std::string to_string(ClauseOrigin origin) {
    switch (origin) {
        case ClauseOrigin::Inferred: return "inferred";
        case ClauseOrigin::InferredExtra: return "inferred-extra";
        case ClauseOrigin::Manual: return "manual";
    }
    return "manual";
}

const ApiOperation* ExtendedSpec::operation(std::string_view id) const {
    for (const auto& op : operations) {
        if (op.operation_id == id) return &op;
    }
    return nullptr;
}

const glacier::Contract* ExtendedSpec::contract(std::string_view id) const {
    const auto it = contracts.find(std::string(id));
    return it == contracts.end() ? nullptr : &it->second.contract;
}

ExtendedSpec infer_contracts(const OasDocument& oas) {
    ExtendedSpec spec = collect(oas);
    for (const auto& op : spec.operations) {
        auto& c = spec.contracts[op.operation_id];
        auto& pre = c.contract.preconditions;
        auto& post = c.contract.postconditions;
        const std::string& path = op.path_template;

        if (op.verb == "POST") {
            const auto key = spec.resource_keys.find(path);
            if (key == spec.resource_keys.end()) {
                spec.warnings.push_back(op.operation_id + ": no item path " + path + "/{key}; contract not inferred");
                continue;
            }
            const std::string item = path + "/{" + key->second + "}";
            if (!has_get(spec, item)) {
                spec.warnings.push_back(op.operation_id + ": no GET " + item + "; contract not inferred");
                continue;
            }
            if (!schema_has_property(op.request_schema, key->second)) {
                spec.warnings.push_back(op.operation_id + ": request schema has no key field '" + key->second + "'");
            }
            const std::string probe = "res_code(GET " + path + "/req_body(@){" + key->second + "})";
            add_clause(pre, c.pre_origin, probe + " = 404", ClauseOrigin::Inferred);
            add_clause(post, c.post_origin, probe + " = 200", ClauseOrigin::Inferred);
            const Response* ok = op.success_response();
            if (ok != nullptr && same_schema(op, *ok)) {
                add_clause(post, c.post_origin, "req_body(@) = res_body(@)", ClauseOrigin::Inferred);
            }
        } else if (op.verb == "DELETE" || op.verb == "PUT") {
            if (!split_item(path)) {
                spec.warnings.push_back(op.operation_id + ": " + path + " is not an item path; contract not inferred");
                continue;
            }
            if (!has_get(spec, path)) {
                spec.warnings.push_back(op.operation_id + ": no GET " + path + "; contract not inferred");
                continue;
            }
            if (op.verb == "DELETE") {
                add_clause(pre, c.pre_origin, "res_code(GET " + path + ") = 200", ClauseOrigin::Inferred);
                add_clause(post, c.post_origin, "res_code(GET " + path + ") = 404", ClauseOrigin::Inferred);
                const Response* ok = op.success_response();
                if (ok != nullptr && ok->schema) {
                    add_clause(post, c.post_origin, "req_body(@) = prev(res_body(GET " + path + "))",
                               ClauseOrigin::Inferred);
                }
            } else {
                add_clause(pre, c.pre_origin, "res_code(GET " + path + ") = 200", ClauseOrigin::InferredExtra);
                add_clause(post, c.post_origin, "req_body(@) = res_body(GET " + path + ")", ClauseOrigin::InferredExtra);
            }
        }
    }
    return spec;
}

Json emit_extended_json(const ExtendedSpec& spec) {
    Json doc = spec.document;
    for (const auto& op : spec.operations) {
        const auto it = spec.contracts.find(op.operation_id);
        if (it == spec.contracts.end()) continue;
        auto& paths = doc["paths"];
        const auto method = lower(op.verb);
        if (!paths.contains(op.path_template) || !paths[op.path_template].contains(method)) continue;
        Json& obj = paths[op.path_template][method];
        obj.erase("requires");
        obj.erase("ensures");
        obj.erase("x-requires");
        obj.erase("x-ensures");
        obj.erase("x-contract-origin");
        const auto& c = it->second;
        if (c.contract.preconditions.empty() && c.contract.postconditions.empty()) continue;
        Json reqs = Json::array(), ens = Json::array(), origin = Json::object();
        origin["requires"] = Json::array();
        origin["ensures"] = Json::array();
        for (std::size_t i = 0; i < c.contract.preconditions.size(); ++i) {
            reqs.push_back(c.contract.preconditions[i].text);
            origin["requires"].push_back(to_string(i < c.pre_origin.size() ? c.pre_origin[i] : ClauseOrigin::Manual));
        }
        for (std::size_t i = 0; i < c.contract.postconditions.size(); ++i) {
            ens.push_back(c.contract.postconditions[i].text);
            origin["ensures"].push_back(to_string(i < c.post_origin.size() ? c.post_origin[i] : ClauseOrigin::Manual));
        }
        obj["x-requires"] = std::move(reqs);
        obj["x-ensures"] = std::move(ens);
        obj["x-contract-origin"] = std::move(origin);
    }
    doc.erase("invariants");
    doc.erase("x-invariants");
    if (!spec.invariants.empty()) {
        Json invs = Json::array();
        for (const auto& inv : spec.invariants) invs.push_back(inv.text);
        doc["x-invariants"] = std::move(invs);
    }
    return doc;
}

namespace {

bool needs_quotes(const std::string& s) {
    const Json reread = yaml_to_json(s);
    return !reread.is_string() || reread.get<std::string>() != s;
}

void emit_yaml(YAML::Emitter& out, const Json& j) {
    switch (j.type()) {
        case Json::value_t::object:
            out << YAML::BeginMap;
            for (const auto& [k, v] : j.items()) {
                out << YAML::Key;
                if (needs_quotes(k)) out << YAML::DoubleQuoted;
                out << k << YAML::Value;
                emit_yaml(out, v);
            }
            out << YAML::EndMap;
            break;
        case Json::value_t::array:
            out << YAML::BeginSeq;
            for (const auto& v : j) emit_yaml(out, v);
            out << YAML::EndSeq;
            break;
        case Json::value_t::string: {
            const auto& s = j.get_ref<const std::string&>();
            if (s.empty() || needs_quotes(s)) out << YAML::DoubleQuoted;
            out << s;
            break;
        }
        case Json::value_t::boolean:
            out << (j.get<bool>() ? "true" : "false");
            break;
        case Json::value_t::null:
            out << YAML::Null;
            break;
        default:
            out << j.dump();
    }
}

}  // namespace

std::string emit_extended(const ExtendedSpec& spec, bool as_json) {
    const Json doc = emit_extended_json(spec);
    if (as_json) return doc.dump(2) + "\n";
    YAML::Emitter out;
    out.SetIndent(2);
    emit_yaml(out, doc);
    return std::string(out.c_str()) + "\n";
}

ExtendedSpec load_extended(std::string_view text) { return collect(load_oas(text)); }

ExtendedSpec load_extended_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return load_extended(ss.str());
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

seqgen::OperationCatalog make_catalog(const ExtendedSpec& spec) {
    seqgen::OperationCatalog out;
    std::set<std::string> keys;
    for (const auto& [_, k] : spec.resource_keys) keys.insert(k);
    for (const auto& op : spec.operations) {
        seqgen::OperationInfo info;
        info.operation_id = op.operation_id;
        info.verb = op.verb;
        info.path_template = op.path_template;
        info.path_params = op.path_params;
        info.collection = op.path_template;
        if (const auto item = split_item(op.path_template)) {
            info.collection = item->first;
            info.key_param = item->second;
        } else if (op.verb == "POST") {
            const auto it = spec.resource_keys.find(op.path_template);
            if (it != spec.resource_keys.end()) info.key_param = it->second;
        }
        if (op.request_schema && op.request_schema->contains("properties")) {
            for (const auto& [name, _] : (*op.request_schema)["properties"].items()) {
                if (name != info.key_param && keys.count(name)) info.reference_fields.push_back(name);
            }
        }
        out.emplace(op.operation_id, std::move(info));
    }
    return out;
}

}  // namespace crudwalk::speckit
