// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include "crudwalk/lifecycle/expr.hpp"

#include <algorithm>
#include <cctype>

namespace crudwalk::lifecycle {

bool Value::is_collection() const {
    return std::holds_alternative<SetValue>(v) || std::holds_alternative<MapValue>(v);
}

std::size_t Value::size() const {
    if (const auto* s = std::get_if<SetValue>(&v)) return s->items.size();
    if (const auto* m = std::get_if<MapValue>(&v)) return m->entries.size();
    throw ExprError("size of a value that is neither a set nor a map: " + str());
}

std::string Value::str() const {
    struct Printer {
        std::string operator()(bool b) const { return b ? "TRUE" : "FALSE"; }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(const SetValue& s) const {
            std::string out = "{";
            for (std::size_t i = 0; i < s.items.size(); ++i) out += (i ? ", " : "") + s.items[i].str();
            return out + "}";
        }
        std::string operator()(const RecordValue& r) const {
            std::string out = "[";
            bool first = true;
            for (const auto& [k, val] : r.fields) {
                out += (first ? "" : ", ") + k + " |-> " + val.str();
                first = false;
            }
            return out + "]";
        }
        std::string operator()(const MapValue& m) const {
            if (m.entries.empty()) return "<<>>";
            std::string out = "(";
            bool first = true;
            for (const auto& [k, val] : m.entries) {
                out += (first ? "" : " @@ ") + k + " :> " + val.str();
                first = false;
            }
            return out + ")";
        }
    };
    return std::visit(Printer{}, v);
}

bool operator==(const Value& a, const Value& b) {
    if (a.is_collection() && b.is_collection() && a.size() == 0 && b.size() == 0) return true;
    return a.v == b.v;
}

bool operator<(const Value& a, const Value& b) {
    if (a.v.index() != b.v.index()) return a.v.index() < b.v.index();
    return a.str() < b.str();
}

namespace {

struct Token {
    enum class T { Ident, Int, Sym, End } type;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
    static const std::vector<std::string_view> syms{":=", "+=", "-=", "=>", "<=", ">=", "!=", "=", "<", ">",
                                                    "[",  "]",  ".",  ",",  ":",  "{",  "}",  "(", ")", "|"};
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = i;
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            out.push_back({Token::T::Ident, std::string(s.substr(start, i - start)), start});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            out.push_back({Token::T::Int, std::string(s.substr(start, i - start)), start});
            continue;
        }
        bool matched = false;
        for (const auto sym : syms) {
            if (s.substr(i, sym.size()) == sym) {
                out.push_back({Token::T::Sym, std::string(sym), i});
                i += sym.size();
                matched = true;
                break;
            }
        }
        if (!matched) throw ExprError("unexpected character '" + std::string(1, c) + "' at " + std::to_string(i));
    }
    out.push_back({Token::T::End, "", s.size()});
    return out;
}

NodePtr make(Node::Kind k, std::vector<NodePtr> kids = {}, std::string text = {}) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->kids = std::move(kids);
    n->text = std::move(text);
    return n;
}

class Parser {
  public:
    explicit Parser(std::string_view text) : src_(text), toks_(tokenize(text)) {}

    NodePtr whole_expr() {
        auto e = expr();
        expect_end();
        return e;
    }

    Effect effect() {
        Effect eff;
        eff.text = std::string(src_);
        if (peek_ident("remove")) {
            ++i_;
            eff.kind = Effect::Kind::Delete;
            lvalue(eff);
            if (!eff.path.empty()) fail("remove takes a whole entry, not a field");
            expect_end();
            return eff;
        }
        lvalue(eff);
        if (accept(":=")) {
            eff.kind = Effect::Kind::Assign;
        } else if (accept("+=")) {
            eff.kind = Effect::Kind::Add;
        } else if (accept("-=")) {
            eff.kind = Effect::Kind::Remove;
        } else {
            fail("expected ':=', '+=' or '-='");
        }
        if (eff.kind != Effect::Kind::Assign && eff.path.empty()) fail("'+=' and '-=' apply to a set field");
        eff.value = expr();
        expect_end();
        return eff;
    }

  private:
    std::string_view src_;
    std::vector<Token> toks_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ExprError("in '" + std::string(src_) + "' at " + std::to_string(toks_[i_].pos) + ": " + msg);
    }

    const Token& cur() const { return toks_[i_]; }
    bool peek(std::string_view sym) const { return cur().type == Token::T::Sym && cur().text == sym; }
    bool peek_ident(std::string_view word) const { return cur().type == Token::T::Ident && cur().text == word; }
    bool accept(std::string_view sym) {
        if (!peek(sym)) return false;
        ++i_;
        return true;
    }
    void expect(std::string_view sym) {
        if (!accept(sym)) fail("expected '" + std::string(sym) + "'");
    }
    void expect_end() {
        if (cur().type != Token::T::End) fail("unexpected '" + cur().text + "'");
    }
    std::string ident() {
        if (cur().type != Token::T::Ident) fail("expected a name");
        return toks_[i_++].text;
    }

    void lvalue(Effect& eff) {
        eff.resource = ident();
        expect("[");
        eff.key = expr();
        expect("]");
        while (accept(".")) eff.path.push_back(ident());
    }

    NodePtr expr() {
        auto lhs = disj();
        if (accept("=>")) return make(Node::Kind::Implies, {lhs, expr()});
        return lhs;
    }

    NodePtr disj() {
        auto lhs = conj();
        while (peek_ident("or")) {
            ++i_;
            lhs = make(Node::Kind::Or, {lhs, conj()});
        }
        return lhs;
    }

    NodePtr conj() {
        auto lhs = negation();
        while (peek_ident("and")) {
            ++i_;
            lhs = make(Node::Kind::And, {lhs, negation()});
        }
        return lhs;
    }

    NodePtr negation() {
        if (peek_ident("not")) {
            ++i_;
            return make(Node::Kind::Not, {negation()});
        }
        if (peek_ident("forall") || peek_ident("exists")) {
            const auto kind = cur().text == "forall" ? Node::Kind::ForAll : Node::Kind::Exists;
            ++i_;
            std::string var = ident();
            if (!peek_ident("in")) fail("expected 'in'");
            ++i_;
            auto domain = postfix();
            expect(":");
            return make(kind, {domain, expr()}, var);
        }
        return comparison();
    }

    NodePtr comparison() {
        auto lhs = postfix();
        static const std::vector<std::pair<std::string_view, Node::Kind>> ops{
            {"=", Node::Kind::Eq}, {"!=", Node::Kind::Ne}, {"<=", Node::Kind::Le},
            {">=", Node::Kind::Ge}, {"<", Node::Kind::Lt}, {">", Node::Kind::Gt}};
        for (const auto& [sym, kind] : ops) {
            if (accept(sym)) return make(kind, {lhs, postfix()});
        }
        if (peek_ident("in")) {
            ++i_;
            return make(Node::Kind::In, {lhs, postfix()});
        }
        if (peek_ident("notin")) {
            ++i_;
            return make(Node::Kind::NotIn, {lhs, postfix()});
        }
        if (peek_ident("not") && toks_[i_ + 1].type == Token::T::Ident && toks_[i_ + 1].text == "in") {
            i_ += 2;
            return make(Node::Kind::NotIn, {lhs, postfix()});
        }
        return lhs;
    }

    NodePtr postfix() {
        auto base = primary();
        for (;;) {
            if (accept("[")) {
                auto key = expr();
                expect("]");
                base = make(Node::Kind::Index, {base, key});
            } else if (accept(".")) {
                base = make(Node::Kind::Field, {base}, ident());
            } else {
                return base;
            }
        }
    }

    NodePtr primary() {
        const Token& t = cur();
        if (t.type == Token::T::Int) {
            ++i_;
            auto n = make(Node::Kind::Int);
            std::const_pointer_cast<Node>(n)->number = std::stoll(t.text);
            return n;
        }
        if (t.type == Token::T::Ident) {
            static const std::vector<std::string> reserved{"and", "or", "not", "in", "notin", "forall", "exists"};
            if (std::find(reserved.begin(), reserved.end(), t.text) != reserved.end()) fail("unexpected '" + t.text + "'");
            ++i_;
            if (t.text == "TRUE" || t.text == "true") return make(Node::Kind::Bool, {}, "1");
            if (t.text == "FALSE" || t.text == "false") return make(Node::Kind::Bool, {}, "");
            return make(Node::Kind::Name, {}, t.text);
        }
        if (accept("(")) {
            auto e = expr();
            expect(")");
            return e;
        }
        if (accept("|")) {
            auto e = postfix();
            expect("|");
            return make(Node::Kind::Size, {e});
        }
        if (accept("{")) {
            if (accept("}")) return make(Node::Kind::SetLit);
            const bool record = cur().type == Token::T::Ident && toks_[i_ + 1].type == Token::T::Sym &&
                                toks_[i_ + 1].text == ":";
            auto n = std::make_shared<Node>();
            n->kind = record ? Node::Kind::RecLit : Node::Kind::SetLit;
            do {
                if (record) {
                    n->keys.push_back(ident());
                    expect(":");
                }
                n->kids.push_back(expr());
            } while (accept(","));
            expect("}");
            return n;
        }
        fail("expected an expression");
    }
};

Value as_key_value(const std::string& key) { return Value{key}; }

std::string key_of(const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v.v)) return *s;
    throw ExprError("map key must be a symbolic id, got " + v.str());
}

std::int64_t int_of(const Value& v) {
    if (const auto* i = std::get_if<std::int64_t>(&v.v)) return *i;
    throw ExprError("expected an integer, got " + v.str());
}

bool bool_of(const Value& v) {
    if (const auto* b = std::get_if<bool>(&v.v)) return *b;
    throw ExprError("expected a boolean, got " + v.str());
}

std::vector<Value> members(const Value& v) {
    if (const auto* s = std::get_if<SetValue>(&v.v)) return s->items;
    if (const auto* m = std::get_if<MapValue>(&v.v)) {
        std::vector<Value> keys;
        for (const auto& entry : m->entries) keys.push_back(as_key_value(entry.first));
        return keys;
    }
    throw ExprError("cannot iterate over " + v.str());
}

}  // namespace

NodePtr parse_expr(std::string_view text) { return Parser(text).whole_expr(); }

Effect parse_effect(std::string_view text) { return Parser(text).effect(); }

bool eval_bool(const Node& node, const Lookup& lookup) { return bool_of(eval(node, lookup)); }

Value eval(const Node& node, const Lookup& lookup) {
    using K = Node::Kind;
    switch (node.kind) {
        case K::Name: {
            const Value* v = lookup(node.text);
            if (v == nullptr) throw ExprError("unknown name '" + node.text + "'");
            return *v;
        }
        case K::Int: return Value{node.number};
        case K::Bool: return Value{!node.text.empty()};
        case K::SetLit: {
            SetValue s;
            for (const auto& k : node.kids) s.items.push_back(eval(*k, lookup));
            std::sort(s.items.begin(), s.items.end());
            s.items.erase(std::unique(s.items.begin(), s.items.end()), s.items.end());
            return Value{std::move(s)};
        }
        case K::RecLit: {
            RecordValue r;
            for (std::size_t i = 0; i < node.kids.size(); ++i) r.fields[node.keys[i]] = eval(*node.kids[i], lookup);
            return Value{std::move(r)};
        }
        case K::Index: {
            const Value base = eval(*node.kids[0], lookup);
            const std::string key = key_of(eval(*node.kids[1], lookup));
            const auto* m = std::get_if<MapValue>(&base.v);
            if (m == nullptr) throw ExprError("indexing a value that is not a resource map");
            const auto it = m->entries.find(key);
            if (it == m->entries.end()) throw ExprError("no entry '" + key + "'");
            return it->second;
        }
        case K::Field: {
            const Value base = eval(*node.kids[0], lookup);
            const auto* r = std::get_if<RecordValue>(&base.v);
            if (r == nullptr) throw ExprError("field '" + node.text + "' of a non-record " + base.str());
            const auto it = r->fields.find(node.text);
            if (it == r->fields.end()) throw ExprError("record has no field '" + node.text + "'");
            return it->second;
        }
        case K::Size: return Value{static_cast<std::int64_t>(eval(*node.kids[0], lookup).size())};
        case K::Not: return Value{!eval_bool(*node.kids[0], lookup)};
        case K::And: return Value{eval_bool(*node.kids[0], lookup) && eval_bool(*node.kids[1], lookup)};
        case K::Or: return Value{eval_bool(*node.kids[0], lookup) || eval_bool(*node.kids[1], lookup)};
        case K::Implies: return Value{!eval_bool(*node.kids[0], lookup) || eval_bool(*node.kids[1], lookup)};
        case K::Eq: return Value{eval(*node.kids[0], lookup) == eval(*node.kids[1], lookup)};
        case K::Ne: return Value{!(eval(*node.kids[0], lookup) == eval(*node.kids[1], lookup))};
        case K::Lt: return Value{int_of(eval(*node.kids[0], lookup)) < int_of(eval(*node.kids[1], lookup))};
        case K::Le: return Value{int_of(eval(*node.kids[0], lookup)) <= int_of(eval(*node.kids[1], lookup))};
        case K::Gt: return Value{int_of(eval(*node.kids[0], lookup)) > int_of(eval(*node.kids[1], lookup))};
        case K::Ge: return Value{int_of(eval(*node.kids[0], lookup)) >= int_of(eval(*node.kids[1], lookup))};
        case K::In:
        case K::NotIn: {
            const Value elem = eval(*node.kids[0], lookup);
            const Value coll = eval(*node.kids[1], lookup);
            bool found = false;
            if (const auto* m = std::get_if<MapValue>(&coll.v)) {
                found = m->entries.contains(key_of(elem));
            } else if (const auto* s = std::get_if<SetValue>(&coll.v)) {
                found = std::binary_search(s->items.begin(), s->items.end(), elem);
            } else {
                throw ExprError("membership test against " + coll.str());
            }
            return Value{node.kind == K::In ? found : !found};
        }
        case K::ForAll:
        case K::Exists: {
            const bool all = node.kind == K::ForAll;
            for (const Value& item : members(eval(*node.kids[0], lookup))) {
                const Lookup inner = [&](std::string_view name) -> const Value* {
                    return name == node.text ? &item : lookup(name);
                };
                const bool holds = eval_bool(*node.kids[1], inner);
                if (all && !holds) return Value{false};
                if (!all && holds) return Value{true};
            }
            return Value{all};
        }
    }
    throw ExprError("unhandled expression node");
}

}  // namespace crudwalk::lifecycle
