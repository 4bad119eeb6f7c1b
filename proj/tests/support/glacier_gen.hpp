// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

// Random well-formed GLACIER ASTs for round-trip fuzzing.

#pragma once

#include <string>
#include <vector>

#include "crudwalk/glacier/ast.hpp"
#include "crudwalk/rng.hpp"

namespace crudwalk::oracles {

class FormulaGen {
  public:
    explicit FormulaGen(std::uint64_t seed) : rng_(seed) {}

    glacier::Formula formula() {
        scope_.clear();
        next_var_ = 0;
        return formula(3);
    }

  private:
    Rng rng_;
    std::vector<std::string> scope_;
    int next_var_ = 0;

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(rng_.uniform(0, static_cast<std::int64_t>(v.size()) - 1))];
    }

    glacier::Formula formula(int depth) {
        const auto roll = depth <= 0 ? 0 : rng_.uniform(0, 4);
        if (roll <= 1) return glacier::Formula{comparison()};
        if (roll == 2) return quantified(depth);
        return chain(depth);
    }

    glacier::Formula quantified(int depth) {
        glacier::Quantified q;
        q.kind = rng_.coin() ? glacier::QuantKind::ForAll : glacier::QuantKind::Exists;
        const std::size_t mark = scope_.size();
        const int n = static_cast<int>(rng_.uniform(1, 2));
        for (int i = 0; i < n; ++i) {
            glacier::ApiCall src = call(glacier::Func::ResBody, 1, false);
            std::string var = "v" + std::to_string(next_var_++);
            scope_.push_back(var);
            q.bindings.push_back({var, src});
        }
        q.body = formula(depth - 1);
        scope_.resize(mark);
        return glacier::Formula{std::move(q)};
    }

    glacier::Formula chain(int depth) {
        glacier::BoolChain c;
        const int n = static_cast<int>(rng_.uniform(2, 4));
        for (int i = 0; i < n; ++i) {
            if (i > 0) c.ops.push_back(pick(std::vector{glacier::BoolOp::And, glacier::BoolOp::Or, glacier::BoolOp::Implies}));
            c.operands.push_back(formula(depth - 1));
        }
        return glacier::Formula{std::move(c)};
    }

    glacier::Comparison comparison() {
        glacier::Comparison c;
        c.lhs = expr();
        c.op = pick(std::vector{glacier::CmpOp::Eq, glacier::CmpOp::Ne, glacier::CmpOp::Lt, glacier::CmpOp::Le,
                                glacier::CmpOp::Gt, glacier::CmpOp::Ge});
        c.rhs = expr();
        return c;
    }

    glacier::Expr expr() {
        switch (rng_.uniform(0, 3)) {
            case 0: return glacier::Prev{call(random_func(), 1, false)};
            case 1: return literal();
            default: return call(random_func(), 1, true);
        }
    }

    glacier::Func random_func() {
        return pick(std::vector{glacier::Func::ReqBody, glacier::Func::ResBody, glacier::Func::ResCode});
    }

    glacier::Literal literal() {
        switch (rng_.uniform(0, 4)) {
            case 0: return {rng_.uniform(-1000, 1000)};
            case 1: return {static_cast<double>(rng_.uniform(-5000, 5000)) / 8.0};
            case 2: return {pick(std::vector<std::string>{"", "abc", "with \"quote\"", "back\\slash", "x y"})};
            case 3: return {rng_.coin()};
            default: return {static_cast<std::int64_t>(pick(std::vector{200, 404, 409, 422}))};
        }
    }

    glacier::ApiCall call(glacier::Func f, int depth, bool allow_self) {
        glacier::ApiCall c;
        c.func = f;
        if (allow_self && rng_.uniform(0, 3) == 0) {
            c.target = glacier::SelfTarget{};
        } else {
            glacier::HttpTarget t;
            t.method = rng_.uniform(0, 5) == 0 ? "POST" : "GET";
            t.url = url(depth);
            c.target = std::move(t);
        }
        const auto s = rng_.uniform(0, 3);
        if (s == 1 && f != glacier::Func::ResCode) c.suffix = glacier::FieldSuffix{pick(std::vector<std::string>{"pid", "name", "tid"})};
        if (s == 2) c.suffix = glacier::FuncSuffix{"len"};
        return c;
    }

    std::vector<glacier::UrlPart> url(int depth) {
        std::vector<glacier::UrlPart> parts;
        const int segs = static_cast<int>(rng_.uniform(1, 3));
        for (int i = 0; i < segs; ++i) {
            const std::string word = pick(std::vector<std::string>{"players", "tournaments", "t-1", "a_b", "x.json"});
            const auto kind = rng_.uniform(0, 3);
            if (kind == 0 || i == 0) {
                append_literal(parts, "/" + word);
            } else if (kind == 1) {
                append_literal(parts, "/");
                parts.emplace_back(placeholder());
            } else if (kind == 2 && depth > 0) {
                append_literal(parts, "/");
                glacier::ApiCall inner = call(random_func() == glacier::Func::ReqBody ? glacier::Func::ReqBody
                                                                                       : glacier::Func::ResBody,
                                              depth - 1, true);
                inner.suffix = glacier::FieldSuffix{"pid"};
                parts.emplace_back(glacier::Box<glacier::ApiCall>(std::move(inner)));
            } else {
                append_literal(parts, "/" + word);
            }
        }
        return parts;
    }

    glacier::Placeholder placeholder() {
        if (!scope_.empty() && rng_.coin()) return {pick(scope_) + "." + pick(std::vector<std::string>{"tid", "pid"})};
        return {pick(std::vector<std::string>{"pid", "tid", "eid"})};
    }

    static void append_literal(std::vector<glacier::UrlPart>& parts, const std::string& text) {
        if (!parts.empty()) {
            if (auto* s = std::get_if<std::string>(&parts.back())) {
                *s += text;
                return;
            }
        }
        parts.emplace_back(text);
    }
};

}  // namespace crudwalk::oracles
