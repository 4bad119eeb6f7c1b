// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "crudwalk/rng.hpp"
#include "crudwalk/seqgen/paths.hpp"

namespace crudwalk::seqgen {

/// What sequence generation needs to know about one API operation.
struct OperationInfo {
    std::string operation_id;
    std::string verb;           // upper case
    std::string path_template;  // e.g. "/players/{pid}"
    std::vector<std::string> path_params;
    /// Name of the parameter holding the identity of the resource this operation creates
    /// or addresses ("pid" for POST /players and DELETE /players/{pid}). Empty if unknown.
    std::string key_param;
    /// Request-body fields that reference other resources, in schema order.
    std::vector<std::string> reference_fields;
    /// Collection the resource belongs to, e.g. "/players".
    std::string collection;
};

using OperationCatalog = std::map<std::string, OperationInfo, std::less<>>;

/// One invocation with symbolic (model-value) arguments.
struct Call {
    std::string operation_id;
    std::string verb;
    std::string path;
    std::map<std::string, std::string> params;
    /// Parameter naming the resource this call creates or addresses.
    std::string key_param;

    /// Model value bound to key_param, "" if none.
    std::string target() const;

    bool operator==(const Call&) const = default;
};

struct CallSequence {
    std::vector<Call> calls;
    Path source_path;
};

/// Parsed edge label: `op`, `op(v1, v2)` or `op(name=v1, ...)`.
struct EdgeLabel {
    std::string operation;
    std::vector<std::pair<std::string, std::string>> args;  // name empty for positional
};

std::optional<EdgeLabel> parse_edge_label(std::string_view label);

/// Turns a label into a call using the catalog. Positional arguments bind first to the
/// operation's key parameter, then to its remaining path parameters, then to its
/// reference fields. Throws InputError for unknown operations or surplus arguments.
Call make_call(const EdgeLabel& label, const OperationCatalog& catalog);

/// Re-attaches operations to state paths: each edge contributes the call named by its
/// lexicographically least label; unlabeled edges and the sink edge contribute nothing.
std::vector<CallSequence> to_call_sequences(const StateSpaceGraph& graph, const std::vector<Path>& paths,
                                            const OperationCatalog& catalog);

/// PUT operations available for each collection, derived from the catalog.
using PutCatalog = std::map<std::string, std::vector<OperationInfo>>;
PutCatalog put_catalog(const OperationCatalog& catalog);

inline constexpr int kMaxConsecutivePuts = 3;

/// Chooses how many PUTs to insert for one created resource, given the upper bound.
using PutCountChooser = std::function<int(Rng&, int max_puts)>;

/// Inserts 0..max_puts consecutive PUTs per created resource, at a uniformly chosen slot
/// after its POST and before its matching DELETE (or anywhere after the POST when the
/// sequence never deletes it). Throws InputError when max_puts is outside [0, 3].
std::vector<CallSequence> insert_puts(const std::vector<CallSequence>& sequences, const PutCatalog& puts,
                                      int max_puts, std::uint64_t seed, const PutCountChooser& chooser = {});

struct CoverageReport {
    double state_coverage = 0;       // percent over non-sink states
    double transition_coverage = 0;  // percent over non-sink (from, to) pairs
    double label_coverage = 0;       // percent over individual labels on non-sink edges
    std::size_t states_visited = 0, states_total = 0;
    std::size_t transitions_visited = 0, transitions_total = 0;
    std::size_t labels_visited = 0, labels_total = 0;
};

CoverageReport coverage_report(const StateSpaceGraph& graph, const std::vector<Path>& paths);

struct LengthStats {
    std::size_t min = 0, max = 0;
    double avg = 0;
};

/// Call counts per sequence.
LengthStats length_stats(const std::vector<CallSequence>& sequences);

nlohmann::ordered_json sequences_to_json(const std::vector<CallSequence>& sequences, std::uint64_t seed,
                                         const StateSpaceGraph* graph = nullptr);

struct SequencesFile {
    std::uint64_t seed = 0;
    std::vector<CallSequence> sequences;
};

/// Reads the sequences document. Source paths are not restored.
SequencesFile sequences_from_json(const nlohmann::json& doc);

}  // namespace crudwalk::seqgen
