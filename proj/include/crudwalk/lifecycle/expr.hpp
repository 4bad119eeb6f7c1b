// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

// The small expression language used by lifecycle models for guards, effects,
// invariants and terminal predicates.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crudwalk/error.hpp"

namespace crudwalk::lifecycle {

struct Value;

struct SetValue {
    std::vector<Value> items;  // sorted, unique
};
struct RecordValue {
    std::map<std::string, Value> fields;
};
/// A resource map: abstract records keyed by symbolic id.
struct MapValue {
    std::map<std::string, Value> entries;
};

struct Value {
    std::variant<bool, std::int64_t, std::string, SetValue, RecordValue, MapValue> v;

    bool is_collection() const;
    std::size_t size() const;  // sets and maps only
    std::string str() const;   // canonical text
};

bool operator==(const Value& a, const Value& b);
bool operator<(const Value& a, const Value& b);
inline bool operator==(const SetValue& a, const SetValue& b) { return a.items == b.items; }
inline bool operator==(const RecordValue& a, const RecordValue& b) { return a.fields == b.fields; }
inline bool operator==(const MapValue& a, const MapValue& b) { return a.entries == b.entries; }

class ExprError : public InputError {
  public:
    using InputError::InputError;
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    enum class Kind {
        Name, Int, Bool, SetLit, RecLit, Index, Field, Size,
        Not, And, Or, Implies, Eq, Ne, Lt, Le, Gt, Ge, In, NotIn, ForAll, Exists,
    };
    Kind kind;
    std::string text;  // Name / Field / binder name / record field names joined
    std::int64_t number = 0;
    std::vector<NodePtr> kids;
    std::vector<std::string> keys;  // RecLit field names, parallel to kids
};

/// Resolves a free name (parameter, bound variable, resource map or constant domain).
using Lookup = std::function<const Value*(std::string_view)>;

NodePtr parse_expr(std::string_view text);
Value eval(const Node& node, const Lookup& lookup);
bool eval_bool(const Node& node, const Lookup& lookup);

/// Effect statement forms: `res[k](.f)* := e`, `res[k].f += e`, `res[k].f -= e`,
/// `remove res[k]`.
struct Effect {
    enum class Kind { Assign, Add, Remove, Delete };
    Kind kind;
    std::string resource;
    NodePtr key;
    std::vector<std::string> path;  // field path below the record
    NodePtr value;                  // null for Delete
    std::string text;
};

Effect parse_effect(std::string_view text);

}  // namespace crudwalk::lifecycle
