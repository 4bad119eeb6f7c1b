// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include "crudwalk/evaluator/evaluator.hpp"

#include <algorithm>

#include "crudwalk/glacier/glacier.hpp"

namespace crudwalk::evaluator {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

/// A term's value, or why it has none (missing field, non-JSON body, ...).
struct Term {
    std::optional<Json> value;
    std::string missing;

    static Term of(Json v) { return {std::move(v), {}}; }
    static Term none(std::string why) { return {std::nullopt, std::move(why)}; }
};

std::string brief(const Json& v) {
    std::string s = v.dump();
    if (s.size() > 120) s = s.substr(0, 117) + "...";
    return s;
}

class Evaluator {
  public:
    Evaluator(const EvalContext& ctx, bool allow_prev, std::size_t& requests)
        : ctx_(ctx), allow_prev_(allow_prev), requests_(requests) {}

    bool run(const glacier::Formula& f, std::string& witness) {
        const bool ok = formula(f);
        if (!ok) witness = witness_;
        return ok;
    }

    /// Resolves an explicit target to a path; nullopt (with `why`) when a spliced
    /// value is missing.
    std::optional<std::string> url(const glacier::HttpTarget& t, std::string& why) {
        std::string out;
        for (const auto& part : t.url) {
            if (const auto* s = std::get_if<std::string>(&part)) {
                out += *s;
            } else if (const auto* p = std::get_if<glacier::Placeholder>(&part)) {
                auto v = placeholder(*p);
                if (!v.value) {
                    why = v.missing;
                    return std::nullopt;
                }
                auto s2 = splice(*v.value);
                if (!s2) {
                    why = "{" + p->path + "} is not a scalar: " + brief(*v.value);
                    return std::nullopt;
                }
                out += *s2;
            } else {
                const auto& call = *std::get<glacier::Box<glacier::ApiCall>>(part);
                auto v = api_call(call);
                if (!v.value) {
                    why = v.missing;
                    return std::nullopt;
                }
                auto s2 = splice(*v.value);
                if (!s2) {
                    why = glacier::print(call) + " is not a scalar: " + brief(*v.value);
                    return std::nullopt;
                }
                out += *s2;
            }
        }
        return out;
    }

  private:
    static std::optional<std::string> splice(const Json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
        if (v.is_number() || v.is_boolean()) return v.dump();
        return std::nullopt;
    }

    Term placeholder(const glacier::Placeholder& p) {
        const std::string root = p.root();
        const Json* base = nullptr;
        for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
            if (it->first == root) {
                base = &it->second;
                break;
            }
        }
        if (base == nullptr) {
            if (p.dotted()) throw EvalError("placeholder {" + p.path + "} has no binder '" + root + "'");
            if (ctx_.op != nullptr) {
                const auto it = ctx_.op->path_params.find(root);
                if (it != ctx_.op->path_params.end()) return Term::of(it->second);
            }
            throw EvalError("placeholder {" + p.path + "} is not bound");
        }
        Json v = *base;
        std::size_t pos = root.size();
        while (pos < p.path.size()) {
            const auto next = p.path.find('.', pos + 1);
            const std::string field = p.path.substr(pos + 1, next == std::string::npos ? std::string::npos : next - pos - 1);
            if (!v.is_object() || !v.contains(field)) return Term::none("missing field '" + field + "' in {" + p.path + "}");
            v = Json(v[field]);
            pos = next == std::string::npos ? p.path.size() : next;
        }
        return Term::of(std::move(v));
    }

    runtime::HttpResponse fetch(const std::string& path) {
        if (ctx_.fetcher == nullptr) throw EvalError("no service to query for GET " + path);
        if (requests_ >= ctx_.get_budget) {
            throw EvalError("GET budget of " + std::to_string(ctx_.get_budget) + " requests exhausted");
        }
        ++requests_;
        return ctx_.fetcher->get(path);
    }

    static Term body_term(const runtime::HttpResponse& r, const std::string& what) {
        if (!r.json_body) return Term::none(what + " has no JSON body (status " + std::to_string(r.status) + ")");
        return Term::of(r.body);
    }

    static Term apply_suffix(Term t, const std::optional<glacier::Suffix>& suffix) {
        if (!suffix || !t.value) return t;
        return std::visit(overloaded{
                              [&](const glacier::FieldSuffix& f) -> Term {
                                  if (!t.value->is_object() || !t.value->contains(f.name)) {
                                      return Term::none("missing field '" + f.name + "' in " + brief(*t.value));
                                  }
                                  return Term::of((*t.value)[f.name]);
                              },
                              [&](const glacier::FuncSuffix& f) -> Term {
                                  if (f.name != "len") throw EvalError("unknown function '." + f.name + "'");
                                  const Json& v = *t.value;
                                  if (v.is_array() || v.is_object()) return Term::of(v.size());
                                  if (v.is_string()) return Term::of(v.get_ref<const std::string&>().size());
                                  return Term::none(".len of a non-collection " + brief(v));
                              },
                          },
                          *suffix);
    }

    static Term from_response(glacier::Func func, const runtime::HttpResponse& r, const std::string& what) {
        if (func == glacier::Func::ResCode) return Term::of(r.status);
        return body_term(r, what);
    }

    Term api_call(const glacier::ApiCall& c) {
        Term t;
        if (c.is_self()) {
            if (ctx_.op == nullptr) throw EvalError("@ used outside an operation");
            if (c.func == glacier::Func::ReqBody) {
                t = Term::of(ctx_.op->request_body);
            } else {
                if (!ctx_.op->response) throw EvalError(glacier::print(c) + " needs a response (preconditions run before the request)");
                t = from_response(c.func, *ctx_.op->response, "response");
            }
        } else {
            const auto& target = std::get<glacier::HttpTarget>(c.target);
            if (c.func == glacier::Func::ReqBody) throw EvalError("req_body of an explicit request is not observable");
            if (target.method != "GET") {
                throw EvalError("evaluation issues only GET requests, not " + target.method);
            }
            std::string why;
            const auto path = url(target, why);
            if (!path) return Term::none(why);
            t = from_response(c.func, fetch(*path), "GET " + *path);
        }
        return apply_suffix(std::move(t), c.suffix);
    }

    Term prev(const glacier::Prev& p) {
        if (!allow_prev_) throw EvalError("prev(...) is only allowed in postconditions");
        if (p.call.is_self()) throw EvalError("prev(...) needs an explicit GET request");
        const auto& target = std::get<glacier::HttpTarget>(p.call.target);
        std::string why;
        const auto path = url(target, why);
        if (!path) return Term::none(why);
        const runtime::Snapshot* snap = ctx_.snapshots != nullptr ? ctx_.snapshots->get(*path) : nullptr;
        if (snap == nullptr) return Term::none("snapshot unavailable for GET " + *path);
        if (!snap->response) return Term::none("snapshot unavailable: " + snap->error);
        return apply_suffix(from_response(p.call.func, *snap->response, "snapshot of GET " + *path), p.call.suffix);
    }

    Term expr(const glacier::Expr& e) {
        return std::visit(overloaded{
                              [&](const glacier::ApiCall& c) { return api_call(c); },
                              [&](const glacier::Prev& p) { return prev(p); },
                              [&](const glacier::Literal& l) {
                                  return std::visit([](const auto& v) { return Term::of(Json(v)); }, l.value);
                              },
                          },
                          e);
    }

    bool fail(std::string why) {
        witness_ = std::move(why);
        return false;
    }

    bool comparison(const glacier::Comparison& c) {
        const Term lhs = expr(c.lhs);
        const Term rhs = expr(c.rhs);
        const std::string shown = glacier::print(c.lhs) + " " + glacier::print(c.op) + " " + glacier::print(c.rhs);
        if (!lhs.value) return fail(shown + ": " + lhs.missing);
        if (!rhs.value) return fail(shown + ": " + rhs.missing);
        const Json& a = *lhs.value;
        const Json& b = *rhs.value;
        bool ok = false;
        switch (c.op) {
            case glacier::CmpOp::Eq: ok = json_equal(a, b); break;
            case glacier::CmpOp::Ne: ok = !json_equal(a, b); break;
            default: {
                int order = 0;
                if (a.is_number() && b.is_number()) {
                    if (a.is_number_integer() && b.is_number_integer()) {
                        const auto x = a.get<std::int64_t>(), y = b.get<std::int64_t>();
                        order = x < y ? -1 : (x > y ? 1 : 0);
                    } else {
                        const double x = a.get<double>(), y = b.get<double>();
                        order = x < y ? -1 : (x > y ? 1 : 0);
                    }
                } else if (a.is_string() && b.is_string()) {
                    order = a.get_ref<const std::string&>().compare(b.get_ref<const std::string&>());
                    order = order < 0 ? -1 : (order > 0 ? 1 : 0);
                } else {
                    return fail(shown + ": cannot order " + brief(a) + " and " + brief(b));
                }
                switch (c.op) {
                    case glacier::CmpOp::Lt: ok = order < 0; break;
                    case glacier::CmpOp::Le: ok = order <= 0; break;
                    case glacier::CmpOp::Gt: ok = order > 0; break;
                    case glacier::CmpOp::Ge: ok = order >= 0; break;
                    default: break;
                }
            }
        }
        if (!ok) return fail(shown + ": left side is " + brief(a) + ", right side is " + brief(b));
        return true;
    }

    bool quantified(const glacier::Quantified& q, std::size_t index) {
        if (index == q.bindings.size()) return formula(*q.body);
        const auto& b = q.bindings[index];
        const Term source = api_call(b.source);
        const bool forall = q.kind == glacier::QuantKind::ForAll;
        if (!source.value) return fail(b.var + " in " + glacier::print(b.source) + ": " + source.missing);
        if (!source.value->is_array()) {
            return fail(b.var + " in " + glacier::print(b.source) + ": not a collection: " + brief(*source.value));
        }
        for (const auto& element : *source.value) {
            env_.emplace_back(b.var, element);
            const bool holds = quantified(q, index + 1);
            env_.pop_back();
            if (forall && !holds) {
                witness_ = "for " + b.var + " = " + brief(element) + ": " + witness_;
                return false;
            }
            if (!forall && holds) return true;
        }
        if (!forall) return fail("no " + b.var + " in " + glacier::print(b.source) + " satisfies the body");
        return true;
    }

    // Precedence: and over or over => (right-associative).
    bool range(const glacier::BoolChain& c, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            if (c.ops[i] == glacier::BoolOp::Implies) return !range(c, lo, i) || range(c, i + 1, hi);
        }
        std::size_t start = lo;
        for (std::size_t i = lo; i < hi; ++i) {
            if (c.ops[i] == glacier::BoolOp::Or) {
                if (conjunction(c, start, i)) return true;
                start = i + 1;
            }
        }
        return conjunction(c, start, hi);
    }

    bool conjunction(const glacier::BoolChain& c, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i <= hi; ++i) {
            if (!formula(c.operands[i])) return false;
        }
        return true;
    }

    bool formula(const glacier::Formula& f) {
        return std::visit(overloaded{
                              [&](const glacier::Quantified& q) { return quantified(q, 0); },
                              [&](const glacier::BoolChain& c) {
                                  return c.operands.empty() || range(c, 0, c.operands.size() - 1);
                              },
                              [&](const glacier::Comparison& c) { return comparison(c); },
                          },
                          f.node);
    }

    const EvalContext& ctx_;
    bool allow_prev_;
    std::size_t& requests_;
    std::vector<std::pair<std::string, Json>> env_;
    std::string witness_;
};

}  // namespace

bool json_equal(const Json& a, const Json& b) {
    if (a.is_number() && b.is_number()) {
        if (a.is_number_integer() && b.is_number_integer()) {
            if (a.is_number_unsigned() || b.is_number_unsigned()) return a.get<double>() == b.get<double>();
            return a.get<std::int64_t>() == b.get<std::int64_t>();
        }
        return a.get<double>() == b.get<double>();
    }
    if (a.type() != b.type()) return false;
    if (a.is_object()) {
        if (a.size() != b.size()) return false;
        for (const auto& [k, v] : a.items()) {
            const auto it = b.find(k);
            if (it == b.end() || !json_equal(v, *it)) return false;
        }
        return true;
    }
    if (a.is_array()) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!json_equal(a[i], b[i])) return false;
        }
        return true;
    }
    return a == b;
}

Verdict eval_all(const std::vector<glacier::Clause>& clauses, const EvalContext& ctx, bool allow_prev) {
    Verdict v;
    for (const auto& clause : clauses) {
        Evaluator e(ctx, allow_prev, v.requests);
        std::string witness;
        const bool ok = e.run(clause.formula, witness);
        v.clauses.push_back(ok);
        if (!ok) {
            v.value = false;
            v.failures.push_back({clause.text, witness});
        }
    }
    return v;
}

Verdict eval(const glacier::Clause& clause, const EvalContext& ctx) { return eval_all({clause}, ctx, true); }

Verdict eval_pre(const glacier::Contract& contract, const EvalContext& ctx) {
    if (ctx.op == nullptr) throw EvalError("preconditions need the current operation");
    if (ctx.op->response) throw EvalError("preconditions are evaluated before the request");
    return eval_all(contract.preconditions, ctx, false);
}

Verdict eval_post(const glacier::Contract& contract, const EvalContext& ctx) {
    if (ctx.op == nullptr || !ctx.op->response) throw EvalError("postconditions need the operation's response");
    return eval_all(contract.postconditions, ctx, true);
}

Verdict eval_inv(const std::vector<glacier::Clause>& invariants, const EvalContext& ctx) {
    if (ctx.op != nullptr) throw EvalError("invariants are evaluated outside any operation");
    return eval_all(invariants, ctx, false);
}

std::size_t capture_snapshots(const glacier::Contract& contract, const EvalContext& ctx,
                              runtime::SnapshotStore& store) {
    std::size_t requests = 0;
    for (const auto& clause : contract.postconditions) {
        for (const auto& call : glacier::prev_calls(clause.formula)) {
            if (call.is_self()) continue;  // rejected when the clause is evaluated
            const auto& target = std::get<glacier::HttpTarget>(call.target);
            if (target.method != "GET") continue;
            Evaluator e(ctx, false, requests);
            std::string why;
            std::optional<std::string> path;
            try {
                path = e.url(target, why);
            } catch (const EvalError& err) {
                // Typically a placeholder bound by a quantifier; evaluation reports it.
                continue;
            }
            if (!path || store.contains(*path)) continue;
            if (ctx.fetcher == nullptr) throw EvalError("no service to query for snapshots");
            try {
                ++requests;
                store.put(*path, ctx.fetcher->get(*path));
            } catch (const runtime::TransportError& err) {
                store.put_error(*path, std::string("transport: ") + err.what());
            }
        }
    }
    return requests;
}

}  // namespace crudwalk::evaluator
