// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>

#include "crudwalk/glacier/glacier.hpp"

namespace crudwalk::glacier {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string print_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string out(buf, res.ptr);
    if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
    return out;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    return out + "\"";
}

const char* func_name(Func f) {
    switch (f) {
        case Func::ReqBody: return "req_body";
        case Func::ResBody: return "res_body";
        case Func::ResCode: return "res_code";
    }
    return "?";
}

}  // namespace

std::string print(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

std::string print(BoolOp op) {
    switch (op) {
        case BoolOp::And: return "and";
        case BoolOp::Or: return "or";
        case BoolOp::Implies: return "=>";
    }
    return "?";
}

std::string print(const ApiCall& c) {
    std::string out = func_name(c.func);
    out += "(";
    std::visit(overloaded{[&](const SelfTarget&) { out += "@"; },
                          [&](const HttpTarget& t) {
                              out += t.method + " ";
                              for (const auto& part : t.url) {
                                  std::visit(overloaded{[&](const std::string& s) { out += s; },
                                                        [&](const Placeholder& p) { out += "{" + p.path + "}"; },
                                                        [&](const Box<ApiCall>& inner) { out += print(*inner); }},
                                             part);
                              }
                          }},
               c.target);
    out += ")";
    if (c.suffix) {
        std::visit(overloaded{[&](const FieldSuffix& f) { out += "{" + f.name + "}"; },
                              [&](const FuncSuffix& f) { out += "." + f.name; }},
                   *c.suffix);
    }
    return out;
}

std::string print(const Expr& e) {
    return std::visit(overloaded{[](const ApiCall& c) { return print(c); },
                                 [](const Prev& p) { return "prev(" + print(p.call) + ")"; },
                                 [](const Literal& l) {
                                     return std::visit(
                                         overloaded{[](std::int64_t v) { return std::to_string(v); },
                                                    [](double v) { return print_double(v); },
                                                    [](const std::string& s) { return quote(s); },
                                                    [](bool b) { return std::string(b ? "true" : "false"); }},
                                         l.value);
                                 }},
                      e);
}

std::string print(const Formula& f) {
    return std::visit(
        overloaded{[](const Comparison& c) { return print(c.lhs) + " " + print(c.op) + " " + print(c.rhs); },
                   [](const Quantified& q) {
                       std::string out = q.kind == QuantKind::ForAll ? "for " : "exists ";
                       for (std::size_t i = 0; i < q.bindings.size(); ++i) {
                           if (i > 0) out += ", ";
                           out += q.bindings[i].var + " in " + print(q.bindings[i].source);
                       }
                       return out + " :- " + print(*q.body);
                   },
                   [](const BoolChain& c) {
                       std::string out;
                       for (std::size_t i = 0; i < c.operands.size(); ++i) {
                           if (i > 0) out += " " + print(c.ops[i - 1]) + " ";
                           const auto& operand = c.operands[i];
                           const bool wrap = !std::holds_alternative<Comparison>(operand.node);
                           out += wrap ? "(" + print(operand) + ")" : print(operand);
                       }
                       return out;
                   }},
        f.node);
}

}  // namespace crudwalk::glacier
