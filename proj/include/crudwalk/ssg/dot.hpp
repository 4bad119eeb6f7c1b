// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crudwalk/error.hpp"

namespace crudwalk::ssg {

class DotParseError : public InputError {
  public:
    DotParseError(int line, const std::string& message);
    int line() const noexcept { return line_; }

  private:
    int line_;
};

struct DotNode {
    std::string id;
    std::optional<std::string> label;
    // Set for TLC's `style = filled` marker or an explicit `initial=true` attribute.
    bool initial_flag = false;
    int line = 0;

    bool same_statement(const DotNode& other) const {
        return id == other.id && label == other.label && initial_flag == other.initial_flag;
    }
};

struct DotEdge {
    std::string from;
    std::string to;
    std::optional<std::string> label;
    int line = 0;

    bool same_statement(const DotEdge& other) const {
        return from == other.from && to == other.to && label == other.label;
    }
};

/// Statement-level view of a DOT document. Duplicates are preserved; see clean().
struct RawGraph {
    std::string name;
    std::vector<DotNode> nodes;
    std::vector<DotEdge> edges;

    std::size_t statement_count() const { return nodes.size() + edges.size(); }
};

/// Parses the DOT subset emitted by TLC (`-dump dot`) and by emit_dot().
///
/// Accepts `strict`, graph attribute statements, nested `subgraph` blocks (flattened),
/// `//`, `#` and `/* */` comments. Attributes other than `label`, `style` and `initial`
/// are ignored.
RawGraph parse_dot(std::string_view text);

/// Drops repeated node statements and repeated (from, to, label) edge statements,
/// keeping the first occurrence of each. Idempotent.
RawGraph clean(const RawGraph& raw);

struct DedupReport {
    std::size_t original_statements = 0;
    std::size_t clean_statements = 0;
    std::size_t original_bytes = 0;
    std::size_t clean_bytes = 0;

    /// Fraction of statements removed, in [0, 1].
    double statement_reduction() const;
    double byte_reduction() const;
};

DedupReport dedup_report(const RawGraph& original, const RawGraph& cleaned);

/// Renders the graph back to DOT. Labels are written verbatim between quotes.
std::string emit_dot(const RawGraph& raw);

}  // namespace crudwalk::ssg
