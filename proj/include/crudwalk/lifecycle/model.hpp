// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crudwalk/lifecycle/expr.hpp"

namespace crudwalk::lifecycle {

struct FieldSpec {
    enum class Kind { SetOf, RefTo, Domain };
    std::string name;
    Kind kind = Kind::SetOf;
    std::string target;  // resource name (SetOf/RefTo) or constant name (Domain)
};

struct ResourceSpec {
    std::string name;
    std::vector<std::string> ids;
    std::vector<FieldSpec> fields;
};

struct Constant {
    std::string name;
    std::vector<Value> values;
};

struct ActionSpec {
    std::string name;
    /// Parameter name and the resource whose id domain it ranges over, in label order.
    std::vector<std::pair<std::string, std::string>> params;
    /// Extra choices ranging over constants; they do not appear in the edge label.
    std::vector<std::pair<std::string, std::string>> choices;
    std::vector<NodePtr> guard;
    std::vector<std::string> guard_text;
    std::vector<Effect> effects;
    /// Resources the action declares untouched; checked on every firing.
    std::vector<std::string> unchanged;
};

struct NamedPredicate {
    std::string name;
    std::string text;
    NodePtr expr;
};

struct LifecycleModel {
    std::string name;
    std::vector<Constant> constants;
    std::vector<ResourceSpec> resources;
    std::vector<ActionSpec> actions;
    std::vector<NamedPredicate> invariants;
    /// Null means "every resource map is empty".
    NodePtr terminal;
    std::string terminal_text = "all_empty";
    /// Disable every action once final is TRUE, making final states sinks.
    bool final_guard = true;

    const ResourceSpec* resource(std::string_view name) const;
    const Constant* constant(std::string_view name) const;
};

/// Reads a model from YAML text. Throws InputError naming the offending entry.
LifecycleModel load_model(std::string_view yaml_text);
LifecycleModel load_model_file(const std::string& path);

}  // namespace crudwalk::lifecycle
