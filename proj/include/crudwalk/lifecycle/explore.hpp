// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crudwalk/lifecycle/model.hpp"
#include "crudwalk/ssg/dot.hpp"

namespace crudwalk::lifecycle {

/// One abstract state: a map per resource in declaration order, plus the final flag.
struct LifecycleState {
    std::vector<MapValue> maps;
    bool final = false;

    /// Resources in declaration order, ids in map order, record fields alphabetical.
    std::string canonical() const;
    bool operator==(const LifecycleState&) const = default;
};

struct TraceStep {
    std::string label;  // empty for the initial state
    LifecycleState state;
};

using Trace = std::vector<TraceStep>;

class ExploreError : public InputError {
  public:
    ExploreError(const std::string& message, Trace trace);
    const Trace& trace() const noexcept { return trace_; }

  private:
    Trace trace_;
};

struct ExploredTransition {
    std::size_t from = 0;
    std::size_t to = 0;
    std::string label;
    bool operator==(const ExploredTransition&) const = default;
};

struct Exploration {
    std::vector<LifecycleState> states;  // index 0 is the initial state
    std::vector<ExploredTransition> transitions;
    std::vector<std::size_t> parent;     // BFS tree parent, parent[0] == 0
    std::vector<std::string> parent_label;

    std::size_t final_count() const;
    Trace trace_to(std::size_t state) const;
};

struct ExploreOptions {
    std::size_t max_states = 10'000'000;
};

/// Breadth-first exploration from the empty initial state. Checks the type invariant,
/// declared invariants and frame conditions in every reached state; throws ExploreError
/// with a shortest trace on the first violation, or when max_states is exceeded.
Exploration explore(const LifecycleModel& model, const ExploreOptions& options = {});

/// Evaluates `predicate` (model expression text) in every reachable state. Returns a
/// shortest counterexample trace when it fails somewhere.
std::optional<Trace> check_invariant(const LifecycleModel& model, const std::string& predicate,
                                     const ExploreOptions& options = {});

/// DOT-ready graph: node ids are discovery indices, the initial node carries
/// `style=filled`, node labels list the maps and `final = TRUE/FALSE`.
ssg::RawGraph to_raw_graph(const LifecycleModel& model, const Exploration& exploration);

std::string format_trace(const Trace& trace);

}  // namespace crudwalk::lifecycle
