// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "crudwalk/glacier/glacier.hpp"

namespace crudwalk::glacier {

ParseError::ParseError(std::size_t position, const std::string& message)
    : InputError("formula position " + std::to_string(position) + ": " + message), position_(position) {}

namespace {

const std::set<std::string, std::less<>> kKeywords{"for",      "exists",   "in",       "and",  "or",   "prev",
                                                   "req_body", "res_body", "res_code", "true", "false"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
  public:
    explicit Parser(std::string_view text) : s_(text) {}

    ParseResult run() {
        ParseResult r;
        r.formula = formula();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        r.warnings = std::move(warnings_);
        return r;
    }

  private:
    std::string_view s_;
    std::size_t pos_ = 0;
    std::vector<std::string> scope_;       // binders visible at the current point
    std::set<std::string> all_binders_;    // every binder seen so far in the formula
    std::vector<std::string> warnings_;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }
    [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const { throw ParseError(at, msg); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool peek_str(std::string_view lit) { return s_.substr(pos_, lit.size()) == lit; }

    bool accept(std::string_view lit) {
        skip_ws();
        if (peek_str(lit)) {
            pos_ += lit.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view lit) {
        if (!accept(lit)) fail("expected '" + std::string(lit) + "'");
    }

    /// Keyword match that does not swallow a prefix of a longer identifier.
    bool peek_keyword(std::string_view kw) {
        skip_ws();
        if (!peek_str(kw)) return false;
        const std::size_t end = pos_ + kw.size();
        return end >= s_.size() || !ident_char(s_[end]);
    }

    bool accept_keyword(std::string_view kw) {
        if (!peek_keyword(kw)) return false;
        pos_ += kw.size();
        return true;
    }

    std::string ident() {
        skip_ws();
        if (pos_ >= s_.size() || !ident_start(s_[pos_])) fail("expected identifier");
        const std::size_t start = pos_;
        while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    Formula formula() {
        skip_ws();
        if (peek_keyword("for") || peek_keyword("exists")) return quantified();
        return chain();
    }

    Formula quantified() {
        Quantified q;
        q.kind = accept_keyword("for") ? QuantKind::ForAll : (accept_keyword("exists"), QuantKind::Exists);
        const std::size_t scope_mark = scope_.size();
        do {
            const std::size_t at = (skip_ws(), pos_);
            std::string var = ident();
            if (kKeywords.contains(var)) fail_at(at, "'" + var + "' is reserved");
            if (!accept_keyword("in")) fail("expected 'in'");
            ApiCall source = api_call_required();
            if (all_binders_.contains(var)) {
                fail_at(at, "variable '" + var + "' is bound more than once");
            }
            all_binders_.insert(var);
            scope_.push_back(var);
            q.bindings.push_back({std::move(var), std::move(source)});
        } while (accept(","));
        if (!accept(":-") && !accept(":")) fail("expected ':-' or ':' after quantifier bindings");
        q.body = formula();
        scope_.resize(scope_mark);
        return Formula{std::move(q)};
    }

    std::optional<BoolOp> bool_op() {
        skip_ws();
        if (accept_keyword("and") || accept("&&") || accept("∧")) return BoolOp::And;
        if (accept_keyword("or") || accept("||") || accept("∨")) return BoolOp::Or;
        if (accept("=>") || accept("⇒")) return BoolOp::Implies;
        return std::nullopt;
    }

    Formula chain() {
        BoolChain c;
        c.operands.push_back(operand());
        while (auto op = bool_op()) {
            c.ops.push_back(*op);
            c.operands.push_back(operand());
        }
        if (c.ops.empty()) return std::move(c.operands.front());
        return Formula{std::move(c)};
    }

    Formula operand() {
        skip_ws();
        if (accept("(")) {
            Formula inner = formula();
            expect(")");
            return inner;
        }
        if (peek_keyword("for") || peek_keyword("exists")) {
            fail("a quantified formula inside a boolean chain must be parenthesized");
        }
        Comparison cmp;
        cmp.lhs = expr();
        const auto op = comparator();
        if (!op) fail("expected comparator");
        cmp.op = *op;
        cmp.rhs = expr();
        return Formula{std::move(cmp)};
    }

    std::optional<CmpOp> comparator() {
        skip_ws();
        if (peek_str("=>")) return std::nullopt;
        if (accept("<=") || accept("≤")) return CmpOp::Le;
        if (accept(">=") || accept("≥")) return CmpOp::Ge;
        if (accept("!=") || accept("≠")) return CmpOp::Ne;
        if (accept("==") || accept("=")) return CmpOp::Eq;
        if (accept("<")) return CmpOp::Lt;
        if (accept(">")) return CmpOp::Gt;
        return std::nullopt;
    }

    Expr expr() {
        skip_ws();
        if (accept_keyword("prev")) {
            expect("(");
            ApiCall inner = api_call_required();
            expect(")");
            return Prev{std::move(inner)};
        }
        if (auto call = api_call()) return std::move(*call);
        return literal();
    }

    std::optional<Func> func_keyword() {
        if (accept_keyword("req_body")) return Func::ReqBody;
        if (accept_keyword("res_body")) return Func::ResBody;
        if (accept_keyword("res_code")) return Func::ResCode;
        return std::nullopt;
    }

    ApiCall api_call_required() {
        auto call = api_call();
        if (!call) fail("expected req_body, res_body or res_code");
        return std::move(*call);
    }

    std::optional<ApiCall> api_call() {
        skip_ws();
        const std::size_t start = pos_;
        const auto func = func_keyword();
        if (!func) return std::nullopt;
        ApiCall call;
        call.func = *func;
        expect("(");
        skip_ws();
        if (accept("@")) {
            call.target = SelfTarget{};
        } else {
            HttpTarget t;
            t.method = ident();
            for (auto& ch : t.method) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            static const std::set<std::string, std::less<>> methods{"GET", "POST", "PUT", "PATCH", "DELETE", "HEAD"};
            if (!methods.contains(t.method)) fail("unknown HTTP method '" + t.method + "'");
            skip_ws();
            t.url = url();
            call.target = std::move(t);
        }
        expect(")");
        call.suffix = suffix();
        if (call.func == Func::ResCode && call.suffix && std::holds_alternative<FieldSuffix>(*call.suffix)) {
            fail_at(start, "res_code does not take a {field} suffix");
        }
        return call;
    }

    std::optional<Suffix> suffix() {
        // No whitespace skipping: the suffix is glued to the closing parenthesis.
        if (pos_ < s_.size() && s_[pos_] == '{') {
            ++pos_;
            FieldSuffix f{ident()};
            expect("}");
            return f;
        }
        if (pos_ + 1 < s_.size() && s_[pos_] == '.' && ident_start(s_[pos_ + 1])) {
            ++pos_;
            const std::size_t at = pos_;
            FuncSuffix f{ident()};
            if (!kKnownFuncs.contains(f.name)) {
                warnings_.push_back("position " + std::to_string(at) + ": unknown function '." + f.name + "'");
            }
            return f;
        }
        return std::nullopt;
    }

    bool at_embedded_call() const {
        for (std::string_view kw : {"req_body(", "res_body(", "res_code("}) {
            if (s_.substr(pos_, kw.size()) == kw) return true;
        }
        return false;
    }

    std::vector<UrlPart> url() {
        if (pos_ >= s_.size() || s_[pos_] != '/') fail("URL must start with '/'");
        std::vector<UrlPart> parts;
        std::string literal;
        auto flush = [&] {
            if (!literal.empty()) parts.emplace_back(std::move(literal));
            literal.clear();
        };
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (c == '{') {
                flush();
                ++pos_;
                const std::size_t at = pos_;
                std::string path = ident();
                while (pos_ < s_.size() && s_[pos_] == '.') {
                    ++pos_;
                    path += "." + ident();
                }
                expect("}");
                Placeholder ph{path};
                const bool bound = std::find(scope_.begin(), scope_.end(), ph.root()) != scope_.end();
                if (ph.dotted() && !bound) fail_at(at, "unbound variable '" + ph.root() + "'");
                parts.emplace_back(std::move(ph));
                continue;
            }
            if (!literal.empty() && literal.back() == '/' && at_embedded_call()) {
                flush();
                const std::size_t at = pos_;
                ApiCall inner = api_call_required();
                if (!inner.suffix || !std::holds_alternative<FieldSuffix>(*inner.suffix)) {
                    fail_at(at, "a call spliced into a URL needs a {field} suffix");
                }
                parts.emplace_back(Box<ApiCall>(std::move(inner)));
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c)) || c == ')' || c == '(' || c == ',' || c == '}') break;
            literal.push_back(c);
            ++pos_;
        }
        flush();
        return parts;
    }

    Literal literal() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of formula");
        if (accept_keyword("true")) return Literal{true};
        if (accept_keyword("false")) return Literal{false};
        const char c = s_[pos_];
        if (c == '"') return string_literal();
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return number_literal();
        fail("expected an expression");
    }

    Literal string_literal() {
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            char c = s_[pos_++];
            if (c == '\\') {
                if (pos_ >= s_.size()) break;
                const char e = s_[pos_++];
                switch (e) {
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    case '"':
                    case '\\': c = e; break;
                    default: fail_at(pos_ - 1, std::string("unknown escape '\\") + e + "'");
                }
            }
            out.push_back(c);
        }
        if (pos_ >= s_.size()) fail("unterminated string literal");
        ++pos_;
        return Literal{std::move(out)};
    }

    Literal number_literal() {
        const std::size_t start = pos_;
        if (s_[pos_] == '-') ++pos_;
        bool is_double = false;
        auto digits = [&] {
            const std::size_t d = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return pos_ > d;
        };
        if (!digits()) fail_at(start, "malformed number");
        if (pos_ < s_.size() && s_[pos_] == '.') {
            is_double = true;
            ++pos_;
            if (!digits()) fail_at(start, "malformed number");
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            is_double = true;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (!digits()) fail_at(start, "malformed number");
        }
        const char* first = s_.data() + start;
        const char* last = s_.data() + pos_;
        if (is_double) {
            double v = 0;
            if (std::from_chars(first, last, v).ec != std::errc{}) fail_at(start, "malformed number");
            return Literal{v};
        }
        std::int64_t v = 0;
        if (std::from_chars(first, last, v).ec != std::errc{}) fail_at(start, "integer out of range");
        return Literal{v};
    }
};

}  // namespace

ParseResult parse_with_warnings(std::string_view text) { return Parser(text).run(); }

Formula parse(std::string_view text) { return parse_with_warnings(text).formula; }

}  // namespace crudwalk::glacier
