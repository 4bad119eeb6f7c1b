// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace crudwalk::glacier {

/// Owning, deep-copying pointer used to make the AST recursive while keeping value
/// semantics (copy and structural ==).
template <class T>
class Box {
  public:
    Box() = default;
    Box(T value) : p_(std::make_unique<T>(std::move(value))) {}  // NOLINT(implicit)
    Box(const Box& other) : p_(other.p_ ? std::make_unique<T>(*other.p_) : nullptr) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other) {
        if (this != &other) p_ = other.p_ ? std::make_unique<T>(*other.p_) : nullptr;
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;
    ~Box() = default;

    T& operator*() { return *p_; }
    const T& operator*() const { return *p_; }
    T* operator->() { return p_.get(); }
    const T* operator->() const { return p_.get(); }

    friend bool operator==(const Box& a, const Box& b) {
        if (!a.p_ || !b.p_) return a.p_ == b.p_;
        return *a.p_ == *b.p_;
    }

  private:
    std::unique_ptr<T> p_;
};

enum class Func { ReqBody, ResBody, ResCode };

struct ApiCall;

/// `{pid}` or `{t.tid}` inside a URL template.
struct Placeholder {
    std::string path;
    bool dotted() const { return path.find('.') != std::string::npos; }
    std::string root() const { return path.substr(0, path.find('.')); }
    bool operator==(const Placeholder&) const = default;
};

/// A URL template piece: literal text, a placeholder, or a call whose value is spliced
/// in (`/players/req_body(@){pid}`).
using UrlPart = std::variant<std::string, Placeholder, Box<ApiCall>>;

struct SelfTarget {
    bool operator==(const SelfTarget&) const = default;
};

struct HttpTarget {
    std::string method;  // upper case
    std::vector<UrlPart> url;
    bool operator==(const HttpTarget&) const = default;
};

struct FieldSuffix {
    std::string name;
    bool operator==(const FieldSuffix&) const = default;
};

struct FuncSuffix {
    std::string name;
    bool operator==(const FuncSuffix&) const = default;
};

using Suffix = std::variant<FieldSuffix, FuncSuffix>;

struct ApiCall {
    Func func = Func::ResBody;
    std::variant<SelfTarget, HttpTarget> target;
    std::optional<Suffix> suffix;

    bool is_self() const { return std::holds_alternative<SelfTarget>(target); }
    bool operator==(const ApiCall&) const = default;
};

struct Prev {
    ApiCall call;
    bool operator==(const Prev&) const = default;
};

struct Literal {
    std::variant<std::int64_t, double, std::string, bool> value;
    bool operator==(const Literal&) const = default;
};

using Expr = std::variant<ApiCall, Prev, Literal>;

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class BoolOp { And, Or, Implies };
enum class QuantKind { ForAll, Exists };

struct Formula;

struct Binding {
    std::string var;
    ApiCall source;
    bool operator==(const Binding&) const = default;
};

struct Quantified {
    QuantKind kind = QuantKind::ForAll;
    std::vector<Binding> bindings;
    Box<Formula> body;
    bool operator==(const Quantified&) const = default;
};

/// operands[0] ops[0] operands[1] ... kept flat as written. Precedence (and binds
/// tighter than or, => is lowest and right-associative) is applied on evaluation.
struct BoolChain {
    std::vector<Formula> operands;
    std::vector<BoolOp> ops;
    bool operator==(const BoolChain&) const = default;
};

struct Comparison {
    Expr lhs;
    CmpOp op = CmpOp::Eq;
    Expr rhs;
    bool operator==(const Comparison&) const = default;
};

struct Formula {
    std::variant<Quantified, BoolChain, Comparison> node;
    bool operator==(const Formula&) const = default;
};

/// A formula together with the source text it was parsed from (reports cite the text).
struct Clause {
    std::string text;
    Formula formula;
};

struct Contract {
    std::vector<Clause> preconditions;   // requires
    std::vector<Clause> postconditions;  // ensures
};

}  // namespace crudwalk::glacier
