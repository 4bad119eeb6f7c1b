// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "crudwalk/error.hpp"
#include "crudwalk/glacier/ast.hpp"
#include "crudwalk/seqgen/calls.hpp"

namespace crudwalk::speckit {

using Json = nlohmann::ordered_json;

struct Parameter {
    std::string name;
    std::string in;  // path, query, header or cookie
    bool required = false;
    Json schema;
};

struct Response {
    std::optional<Json> schema;          // resolved
    std::optional<std::string> schema_ref;  // component name when given by $ref
};

struct ApiOperation {
    std::string operation_id;
    std::string verb;  // upper case
    std::string path_template;
    std::vector<std::string> path_params;  // in template order
    std::vector<Parameter> parameters;
    std::optional<Json> request_schema;  // resolved
    std::optional<std::string> request_schema_ref;
    std::map<std::string, Response> responses;  // status code text ("200", "default") -> response
    std::vector<std::string> tags;
    std::string summary;

    /// Lowest declared 2xx response, if any.
    const Response* success_response() const;
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string code;      // short machine-readable tag, e.g. "missing-request-body"
    std::string location;  // "POST /players" or "components.schemas.X"
    std::string message;
};

struct OasDocument {
    Json document;
    std::vector<ApiOperation> operations;
    std::vector<Diagnostic> diagnostics;

    const ApiOperation* operation(std::string_view id) const;
    bool has_errors() const;
};

/// Parses an OpenAPI 3.x document (YAML or JSON) and runs the structural checks.
/// Throws InputError only when the text is not a document at all.
OasDocument load_oas(std::string_view text);
OasDocument load_oas_file(const std::string& path);

/// Converts YAML text to JSON, keeping mapping order. Plain scalars become numbers,
/// booleans or null when they look like one; quoted scalars stay strings.
Json yaml_to_json(std::string_view text);

enum class ClauseOrigin { Inferred, InferredExtra, Manual };
std::string to_string(ClauseOrigin origin);

struct OperationContract {
    glacier::Contract contract;
    std::vector<ClauseOrigin> pre_origin;   // parallel to contract.preconditions
    std::vector<ClauseOrigin> post_origin;  // parallel to contract.postconditions
};

struct ExtendedSpec {
    /// The source document; emit_extended() writes contracts back into a copy of it.
    Json document;
    std::vector<ApiOperation> operations;
    std::map<std::string, OperationContract> contracts;  // by operationId
    std::vector<glacier::Clause> invariants;
    /// Collection path -> key parameter ("/players" -> "pid").
    std::map<std::string, std::string> resource_keys;
    std::vector<std::string> warnings;

    const ApiOperation* operation(std::string_view id) const;
    const glacier::Contract* contract(std::string_view id) const;
};

/// Adds CRUD contracts. Clauses already present in the document (`x-requires`,
/// `x-ensures`, `x-invariants`, or the bare forms) are kept as manual clauses and
/// inferred clauses that print identically are not repeated.
ExtendedSpec infer_contracts(const OasDocument& oas);

/// The source document with `x-requires`, `x-ensures` and `x-contract-origin` on each
/// operation and `x-invariants` at the top level.
Json emit_extended_json(const ExtendedSpec& spec);
std::string emit_extended(const ExtendedSpec& spec, bool as_json = false);

/// Reads an extended document. Throws InputError naming the operation and clause index
/// on a formula that does not parse, or on an invariant with free parameters.
ExtendedSpec load_extended(std::string_view text);
ExtendedSpec load_extended_file(const std::string& path);

/// The view sequence generation needs.
seqgen::OperationCatalog make_catalog(const ExtendedSpec& spec);

/// "/players/{pid}" -> {"pid"}.
std::vector<std::string> template_params(std::string_view path_template);

}  // namespace crudwalk::speckit
