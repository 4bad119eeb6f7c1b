// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "crudwalk/glacier/glacier.hpp"

namespace crudwalk::glacier {

namespace {

struct Walker {
    std::vector<std::string> scope;
    std::set<std::string> free;
    std::vector<ApiCall> prevs;

    void call(const ApiCall& c) {
        if (const auto* t = std::get_if<HttpTarget>(&c.target)) {
            for (const auto& part : t->url) {
                if (const auto* p = std::get_if<Placeholder>(&part)) {
                    const bool bound = std::find(scope.begin(), scope.end(), p->root()) != scope.end();
                    if (!bound && !p->dotted()) free.insert(p->path);
                } else if (const auto* inner = std::get_if<Box<ApiCall>>(&part)) {
                    call(**inner);
                }
            }
        }
    }

    void expr(const Expr& e) {
        if (const auto* c = std::get_if<ApiCall>(&e)) {
            call(*c);
        } else if (const auto* p = std::get_if<Prev>(&e)) {
            call(p->call);
            if (std::find(prevs.begin(), prevs.end(), p->call) == prevs.end()) prevs.push_back(p->call);
        }
    }

    void formula(const Formula& f) {
        if (const auto* c = std::get_if<Comparison>(&f.node)) {
            expr(c->lhs);
            expr(c->rhs);
        } else if (const auto* ch = std::get_if<BoolChain>(&f.node)) {
            for (const auto& op : ch->operands) formula(op);
        } else if (const auto* q = std::get_if<Quantified>(&f.node)) {
            const std::size_t mark = scope.size();
            for (const auto& b : q->bindings) {
                call(b.source);
                scope.push_back(b.var);
            }
            formula(*q->body);
            scope.resize(mark);
        }
    }
};

}  // namespace

std::set<std::string> free_params(const Formula& f) {
    Walker w;
    w.formula(f);
    return w.free;
}

std::vector<ApiCall> prev_calls(const Formula& f) {
    Walker w;
    w.formula(f);
    return w.prevs;
}

bool contains_prev(const Formula& f) { return !prev_calls(f).empty(); }

}  // namespace crudwalk::glacier
