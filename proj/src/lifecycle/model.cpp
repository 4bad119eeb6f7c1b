// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include "crudwalk/lifecycle/model.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace crudwalk::lifecycle {

const ResourceSpec* LifecycleModel::resource(std::string_view name) const {
    for (const auto& r : resources) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

const Constant* LifecycleModel::constant(std::string_view name) const {
    for (const auto& c : constants) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

namespace {

Value scalar_value(const YAML::Node& n) {
    const std::string s = n.as<std::string>();
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used == s.size()) return Value{static_cast<std::int64_t>(v)};
    } catch (const std::exception&) {
    }
    return Value{s};
}

std::vector<std::string> string_list(const YAML::Node& n, const std::string& where) {
    if (!n) return {};
    if (!n.IsSequence()) throw InputError(where + " must be a list");
    std::vector<std::string> out;
    for (const auto& item : n) out.push_back(item.as<std::string>());
    return out;
}

std::vector<std::pair<std::string, std::string>> pair_map(const YAML::Node& n, const std::string& where) {
    std::vector<std::pair<std::string, std::string>> out;
    if (!n) return out;
    if (!n.IsMap()) throw InputError(where + " must be a mapping");
    for (const auto& kv : n) out.emplace_back(kv.first.as<std::string>(), kv.second.as<std::string>());
    return out;
}

template <class Fn>
auto with_context(const std::string& where, Fn&& fn) {
    try {
        return fn();
    } catch (const ExprError& e) {
        throw InputError(where + ": " + e.what());
    }
}

void validate(const LifecycleModel& m) {
    std::set<std::string> names;
    for (const auto& r : m.resources) {
        if (!names.insert(r.name).second) throw InputError("duplicate resource or constant '" + r.name + "'");
        if (r.ids.empty()) throw InputError("resource '" + r.name + "' has an empty id domain");
        if (std::set<std::string>(r.ids.begin(), r.ids.end()).size() != r.ids.size()) {
            throw InputError("resource '" + r.name + "' lists an id twice");
        }
        for (const auto& f : r.fields) {
            const bool ok = f.kind == FieldSpec::Kind::Domain ? m.constant(f.target) != nullptr
                                                               : m.resource(f.target) != nullptr;
            if (!ok) throw InputError("field '" + r.name + "." + f.name + "' refers to unknown '" + f.target + "'");
        }
    }
    for (const auto& c : m.constants) {
        if (!names.insert(c.name).second) throw InputError("duplicate resource or constant '" + c.name + "'");
        if (c.values.empty()) throw InputError("constant '" + c.name + "' must be a non-empty finite set");
    }
    std::set<std::string> action_names;
    for (const auto& a : m.actions) {
        if (!action_names.insert(a.name).second) throw InputError("duplicate action '" + a.name + "'");
        for (const auto& [p, res] : a.params) {
            if (m.resource(res) == nullptr) throw InputError("action '" + a.name + "': unknown resource '" + res + "'");
        }
        for (const auto& [p, c] : a.choices) {
            if (m.constant(c) == nullptr) throw InputError("action '" + a.name + "': unknown constant '" + c + "'");
        }
        for (const auto& e : a.effects) {
            if (m.resource(e.resource) == nullptr) {
                throw InputError("action '" + a.name + "': effect on unknown resource '" + e.resource + "'");
            }
        }
        for (const auto& u : a.unchanged) {
            if (m.resource(u) == nullptr) throw InputError("action '" + a.name + "': unknown resource '" + u + "' in unchanged");
        }
    }
}

}  // namespace

LifecycleModel load_model(std::string_view yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml_text));
    } catch (const YAML::Exception& e) {
        throw InputError(std::string("model is not valid YAML: ") + e.what());
    }
    if (!root.IsMap()) throw InputError("model must be a YAML mapping");
    LifecycleModel m;
    try {
        m.name = root["name"] ? root["name"].as<std::string>() : "model";
        if (const auto consts = root["constants"]) {
            for (const auto& kv : consts) {
                Constant c{kv.first.as<std::string>(), {}};
                if (!kv.second.IsSequence()) throw InputError("constant '" + c.name + "' must be a list");
                for (const auto& v : kv.second) c.values.push_back(scalar_value(v));
                m.constants.push_back(std::move(c));
            }
        }
        const auto resources = root["resources"];
        if (!resources || !resources.IsMap()) throw InputError("model needs a 'resources' mapping");
        for (const auto& kv : resources) {
            ResourceSpec r;
            r.name = kv.first.as<std::string>();
            r.ids = string_list(kv.second["ids"], "resource '" + r.name + "' ids");
            if (const auto fields = kv.second["fields"]) {
                for (const auto& f : fields) {
                    FieldSpec spec;
                    spec.name = f.first.as<std::string>();
                    const auto& def = f.second;
                    if (def["set"]) {
                        spec.kind = FieldSpec::Kind::SetOf;
                        spec.target = def["set"].as<std::string>();
                    } else if (def["ref"]) {
                        spec.kind = FieldSpec::Kind::RefTo;
                        spec.target = def["ref"].as<std::string>();
                    } else if (def["domain"]) {
                        spec.kind = FieldSpec::Kind::Domain;
                        spec.target = def["domain"].as<std::string>();
                    } else {
                        throw InputError("field '" + r.name + "." + spec.name + "' needs set, ref or domain");
                    }
                    r.fields.push_back(std::move(spec));
                }
            }
            m.resources.push_back(std::move(r));
        }
        for (const auto& node : root["actions"]) {
            ActionSpec a;
            a.name = node["name"].as<std::string>();
            const std::string where = "action '" + a.name + "'";
            a.params = pair_map(node["params"], where + " params");
            a.choices = pair_map(node["choose"], where + " choose");
            for (const auto& g : string_list(node["guard"], where + " guard")) {
                a.guard.push_back(with_context(where + " guard", [&] { return parse_expr(g); }));
                a.guard_text.push_back(g);
            }
            for (const auto& e : string_list(node["effect"], where + " effect")) {
                a.effects.push_back(with_context(where + " effect", [&] { return parse_effect(e); }));
            }
            a.unchanged = string_list(node["unchanged"], where + " unchanged");
            m.actions.push_back(std::move(a));
        }
        if (const auto invs = root["invariants"]) {
            for (const auto& kv : invs) {
                NamedPredicate p{kv.first.as<std::string>(), kv.second.as<std::string>(), nullptr};
                p.expr = with_context("invariant '" + p.name + "'", [&] { return parse_expr(p.text); });
                m.invariants.push_back(std::move(p));
            }
        }
        if (const auto term = root["terminal"]) {
            m.terminal_text = term.as<std::string>();
            if (m.terminal_text != "all_empty") {
                m.terminal = with_context("terminal", [&] { return parse_expr(m.terminal_text); });
            }
        }
        if (const auto fg = root["final_guard"]) m.final_guard = fg.as<bool>();
    } catch (const YAML::Exception& e) {
        throw InputError(std::string("malformed model: ") + e.what());
    }
    validate(m);
    return m;
}

LifecycleModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return load_model(ss.str());
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

}  // namespace crudwalk::lifecycle
