// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include "crudwalk/ssg/dot.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <tuple>

namespace crudwalk::ssg {

DotParseError::DotParseError(int line, const std::string& message)
    : InputError("DOT line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

enum class Tok { Id, Str, LBrace, RBrace, LBracket, RBracket, Semi, Comma, Equals, Arrow, UndirectedEdge, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
};

class Lexer {
  public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_trivia();
        if (pos_ >= text_.size()) {
            return {Tok::End, "", line_};
        }
        const char c = text_[pos_];
        const int line = line_;
        switch (c) {
            case '{': ++pos_; return {Tok::LBrace, "{", line};
            case '}': ++pos_; return {Tok::RBrace, "}", line};
            case '[': ++pos_; return {Tok::LBracket, "[", line};
            case ']': ++pos_; return {Tok::RBracket, "]", line};
            case ';': ++pos_; return {Tok::Semi, ";", line};
            case ',': ++pos_; return {Tok::Comma, ",", line};
            case '=': ++pos_; return {Tok::Equals, "=", line};
            case '"': return quoted();
            default: break;
        }
        if (c == '-' && pos_ + 1 < text_.size()) {
            const char d = text_[pos_ + 1];
            if (d == '>') {
                pos_ += 2;
                return {Tok::Arrow, "->", line};
            }
            if (d == '-') {
                pos_ += 2;
                return {Tok::UndirectedEdge, "--", line};
            }
        }
        if (c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
            return numeral();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80) {
            const std::size_t start = pos_;
            while (pos_ < text_.size()) {
                const auto ch = static_cast<unsigned char>(text_[pos_]);
                if (!(std::isalnum(ch) || ch == '_' || ch >= 0x80)) break;
                ++pos_;
            }
            return {Tok::Id, std::string(text_.substr(start, pos_ - start)), line};
        }
        throw DotParseError(line, std::string("unexpected character '") + c + "'");
    }

  private:
    void skip_trivia() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                skip_line();
            } else if (c == '#' && at_line_start()) {
                skip_line();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                const int start_line = line_;
                pos_ += 2;
                while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) {
                    if (text_[pos_] == '\n') ++line_;
                    ++pos_;
                }
                if (pos_ + 1 >= text_.size()) {
                    throw DotParseError(start_line, "unterminated block comment");
                }
                pos_ += 2;
            } else {
                break;
            }
        }
    }

    bool at_line_start() const {
        std::size_t p = pos_;
        while (p > 0) {
            const char c = text_[p - 1];
            if (c == '\n') return true;
            if (c != ' ' && c != '\t') return false;
            --p;
        }
        return true;
    }

    void skip_line() {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    }

    Token quoted() {
        const int line = line_;
        ++pos_;
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
                if (text_[pos_ + 1] == '\n') ++line_;
                pos_ += 2;
                continue;
            }
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
        if (pos_ >= text_.size()) {
            throw DotParseError(line, "unterminated string");
        }
        std::string raw(text_.substr(start, pos_ - start));
        ++pos_;
        return {Tok::Str, std::move(raw), line};
    }

    Token numeral() {
        const int line = line_;
        const std::size_t start = pos_;
        if (text_[pos_] == '-') ++pos_;
        bool digits = false;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            digits = digits || text_[pos_] != '.';
            ++pos_;
        }
        if (!digits) {
            throw DotParseError(line, "malformed numeral");
        }
        return {Tok::Id, std::string(text_.substr(start, pos_ - start)), line};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

struct Attributes {
    std::optional<std::string> label;
    bool initial = false;
};

class Parser {
  public:
    explicit Parser(std::string_view text) : lexer_(text) { advance(); }

    RawGraph parse() {
        RawGraph graph;
        if (is_keyword("strict")) advance();
        if (is_keyword("graph")) {
            throw DotParseError(tok_.line, "undirected graphs are not supported");
        }
        if (!is_keyword("digraph")) {
            throw DotParseError(tok_.line, "expected 'digraph'");
        }
        advance();
        if (tok_.kind == Tok::Id || tok_.kind == Tok::Str) {
            graph.name = tok_.text;
            advance();
        }
        expect(Tok::LBrace, "'{'");
        statements(graph);
        expect(Tok::RBrace, "'}'");
        if (tok_.kind != Tok::End) {
            if (is_keyword("digraph") || is_keyword("strict") || is_keyword("graph")) {
                throw DotParseError(tok_.line, "multiple graphs in one document");
            }
            throw DotParseError(tok_.line, "trailing content after graph");
        }
        return graph;
    }

  private:
    void advance() { tok_ = lexer_.next(); }

    bool is_keyword(std::string_view kw) const {
        if (tok_.kind != Tok::Id || tok_.text.size() != kw.size()) return false;
        for (std::size_t i = 0; i < kw.size(); ++i) {
            if (std::tolower(static_cast<unsigned char>(tok_.text[i])) != kw[i]) return false;
        }
        return true;
    }

    void expect(Tok kind, const char* what) {
        if (tok_.kind != kind) {
            throw DotParseError(tok_.line, std::string("expected ") + what + ", found '" + tok_.text + "'");
        }
        advance();
    }

    void statements(RawGraph& graph) {
        while (tok_.kind != Tok::RBrace) {
            if (tok_.kind == Tok::End) {
                throw DotParseError(tok_.line, "unexpected end of input, missing '}'");
            }
            statement(graph);
            if (tok_.kind == Tok::Semi || tok_.kind == Tok::Comma) advance();
        }
    }

    void statement(RawGraph& graph) {
        if (is_keyword("subgraph")) {
            advance();
            if (tok_.kind == Tok::Id || tok_.kind == Tok::Str) advance();
            expect(Tok::LBrace, "'{'");
            statements(graph);
            expect(Tok::RBrace, "'}'");
            return;
        }
        if (tok_.kind == Tok::LBrace) {
            advance();
            statements(graph);
            expect(Tok::RBrace, "'}'");
            return;
        }
        if (is_keyword("node") || is_keyword("edge") || is_keyword("graph")) {
            advance();
            attribute_lists();
            return;
        }
        if (tok_.kind != Tok::Id && tok_.kind != Tok::Str) {
            throw DotParseError(tok_.line, "expected a statement, found '" + tok_.text + "'");
        }
        const int line = tok_.line;
        std::string first = tok_.text;
        advance();
        if (tok_.kind == Tok::Equals) {
            advance();
            if (tok_.kind != Tok::Id && tok_.kind != Tok::Str) {
                throw DotParseError(tok_.line, "expected attribute value");
            }
            advance();
            return;
        }
        if (tok_.kind == Tok::UndirectedEdge) {
            throw DotParseError(tok_.line, "undirected edge '--' in a digraph");
        }
        std::vector<std::string> chain{std::move(first)};
        while (tok_.kind == Tok::Arrow) {
            advance();
            if (tok_.kind != Tok::Id && tok_.kind != Tok::Str) {
                throw DotParseError(tok_.line, "expected node id after '->'");
            }
            chain.push_back(tok_.text);
            advance();
        }
        const Attributes attrs = attribute_lists();
        if (chain.size() == 1) {
            graph.nodes.push_back(DotNode{chain.front(), attrs.label, attrs.initial, line});
            return;
        }
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            graph.edges.push_back(DotEdge{chain[i], chain[i + 1], attrs.label, line});
        }
    }

    Attributes attribute_lists() {
        Attributes attrs;
        while (tok_.kind == Tok::LBracket) {
            advance();
            while (tok_.kind != Tok::RBracket) {
                if (tok_.kind != Tok::Id && tok_.kind != Tok::Str) {
                    throw DotParseError(tok_.line, "expected attribute name, found '" + tok_.text + "'");
                }
                std::string key = tok_.text;
                advance();
                std::string value = "true";
                if (tok_.kind == Tok::Equals) {
                    advance();
                    if (tok_.kind != Tok::Id && tok_.kind != Tok::Str) {
                        throw DotParseError(tok_.line, "expected attribute value for '" + key + "'");
                    }
                    value = tok_.text;
                    advance();
                }
                if (key == "label") {
                    attrs.label = value;
                } else if (key == "style" && value.find("filled") != std::string::npos) {
                    attrs.initial = true;
                } else if (key == "initial") {
                    attrs.initial = value == "true" || value == "TRUE" || value == "1";
                }
                if (tok_.kind == Tok::Comma || tok_.kind == Tok::Semi) advance();
                if (tok_.kind == Tok::End) {
                    throw DotParseError(tok_.line, "unterminated attribute list");
                }
            }
            advance();
        }
        return attrs;
    }

    Lexer lexer_;
    Token tok_{Tok::End, "", 1};
};

std::string quote_id(const std::string& id) {
    bool plain = !id.empty();
    bool numeric = !id.empty();
    for (std::size_t i = 0; i < id.size(); ++i) {
        const auto c = static_cast<unsigned char>(id[i]);
        if (!(std::isalnum(c) || c == '_')) plain = false;
        if (!(std::isdigit(c) || (i == 0 && c == '-' && id.size() > 1))) numeric = false;
    }
    if (plain && std::isdigit(static_cast<unsigned char>(id.front()))) plain = numeric;
    if (plain || numeric) return id;
    return "\"" + id + "\"";
}

}  // namespace

RawGraph parse_dot(std::string_view text) { return Parser(text).parse(); }

RawGraph clean(const RawGraph& raw) {
    RawGraph out;
    out.name = raw.name;
    std::set<std::tuple<std::string, std::optional<std::string>, bool>> seen_nodes;
    for (const auto& node : raw.nodes) {
        if (seen_nodes.emplace(node.id, node.label, node.initial_flag).second) {
            out.nodes.push_back(node);
        }
    }
    std::set<std::tuple<std::string, std::string, std::optional<std::string>>> seen_edges;
    for (const auto& edge : raw.edges) {
        if (seen_edges.emplace(edge.from, edge.to, edge.label).second) {
            out.edges.push_back(edge);
        }
    }
    return out;
}

double DedupReport::statement_reduction() const {
    if (original_statements == 0) return 0.0;
    return 1.0 - static_cast<double>(clean_statements) / static_cast<double>(original_statements);
}

double DedupReport::byte_reduction() const {
    if (original_bytes == 0) return 0.0;
    return 1.0 - static_cast<double>(clean_bytes) / static_cast<double>(original_bytes);
}

DedupReport dedup_report(const RawGraph& original, const RawGraph& cleaned) {
    return DedupReport{original.statement_count(), cleaned.statement_count(), emit_dot(original).size(),
                       emit_dot(cleaned).size()};
}

std::string emit_dot(const RawGraph& raw) {
    std::ostringstream out;
    out << "digraph " << (raw.name.empty() ? std::string("G") : quote_id(raw.name)) << " {\n";
    for (const auto& node : raw.nodes) {
        out << quote_id(node.id);
        if (node.label || node.initial_flag) {
            out << " [";
            if (node.label) out << "label=\"" << *node.label << "\"";
            if (node.initial_flag) out << (node.label ? "," : "") << "style = filled";
            out << "]";
        }
        out << ";\n";
    }
    for (const auto& edge : raw.edges) {
        out << quote_id(edge.from) << " -> " << quote_id(edge.to);
        if (edge.label) out << " [label=\"" << *edge.label << "\"]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace crudwalk::ssg
