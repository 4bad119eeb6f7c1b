// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "crudwalk/error.hpp"
#include "crudwalk/glacier/ast.hpp"

namespace crudwalk::glacier {

class ParseError : public InputError {
  public:
    ParseError(std::size_t position, const std::string& message);
    /// Zero-based byte offset into the formula text.
    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

struct ParseResult {
    Formula formula;
    std::vector<std::string> warnings;
};

/// Suffix functions the evaluator understands.
inline const std::set<std::string, std::less<>> kKnownFuncs{"len"};

/// Parses one formula. Throws ParseError on syntax errors, unbound or shadowed
/// variables, and `res_code(...){field}`.
ParseResult parse_with_warnings(std::string_view text);
Formula parse(std::string_view text);

std::string print(const Formula& f);
std::string print(const Expr& e);
std::string print(const ApiCall& c);
std::string print(CmpOp op);
std::string print(BoolOp op);

/// Undotted URL placeholders not bound by an enclosing quantifier.
std::set<std::string> free_params(const Formula& f);

/// Distinct calls wrapped in prev(...), in first-occurrence order.
std::vector<ApiCall> prev_calls(const Formula& f);
bool contains_prev(const Formula& f);

}  // namespace crudwalk::glacier
