// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crudwalk/glacier/ast.hpp"
#include "crudwalk/runtime/runtime.hpp"

namespace crudwalk::evaluator {

using runtime::Json;

/// The operation `@` refers to.
struct CurrentOperation {
    std::string verb;
    std::string url;
    /// Generated body (POST, PUT) or the recycled resource (DELETE).
    Json request_body;
    /// Concrete values of the operation's path parameters ({pid} -> 7).
    std::map<std::string, Json> path_params;
    /// Absent before the request is sent.
    std::optional<runtime::HttpResponse> response;
};

struct EvalContext {
    const CurrentOperation* op = nullptr;
    runtime::Fetcher* fetcher = nullptr;
    const runtime::SnapshotStore* snapshots = nullptr;
    /// GETs one eval_* call may issue.
    std::size_t get_budget = 256;
};

struct Failure {
    std::string clause;
    std::string witness;
};

struct Verdict {
    bool value = true;
    std::vector<Failure> failures;
    std::vector<bool> clauses;  // per-clause results, in clause order
    std::size_t requests = 0;   // GETs issued
};

/// A contract that cannot be evaluated as written (prev in a precondition, an
/// unbound placeholder, a non-GET request, an exhausted GET budget). Transport
/// failures surface as runtime::TransportError instead.
class EvalError : public InputError {
  public:
    using InputError::InputError;
};

/// Structural equality: object field order is irrelevant, integers equal decimals of the
/// same value.
bool json_equal(const Json& a, const Json& b);

Verdict eval(const glacier::Clause& clause, const EvalContext& ctx);
/// Conjunction over `clauses`, sharing one GET budget.
Verdict eval_all(const std::vector<glacier::Clause>& clauses, const EvalContext& ctx, bool allow_prev);

/// Before the request: needs ctx.op with no response. prev is rejected.
Verdict eval_pre(const glacier::Contract& contract, const EvalContext& ctx);
/// After the request: needs ctx.op with a response, and ctx.snapshots when prev occurs.
Verdict eval_post(const glacier::Contract& contract, const EvalContext& ctx);
/// Service-wide: ctx.op must be null.
Verdict eval_inv(const std::vector<glacier::Clause>& invariants, const EvalContext& ctx);

/// Issues the GETs the postconditions' prev(...) calls need, once per distinct path,
/// before the request is sent. Failures are stored as "snapshot unavailable".
/// Returns the number of GETs issued.
std::size_t capture_snapshots(const glacier::Contract& contract, const EvalContext& ctx,
                              runtime::SnapshotStore& store);

}  // namespace crudwalk::evaluator
