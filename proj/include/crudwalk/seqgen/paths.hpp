// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "crudwalk/ssg/graph.hpp"

namespace crudwalk::seqgen {

using ssg::StateId;
using ssg::StateSpaceGraph;

struct Path {
    std::vector<StateId> states;

    bool operator==(const Path&) const = default;
};

struct PathSets {
    /// Paths ending at the super-final sink, in discovery order.
    std::vector<Path> complete;
    /// Paths ending at an already-discovered state, in discovery order.
    std::vector<Path> incomplete;
};

/// Breadth-first collection of paths from the initial state. Every edge of the graph
/// ends exactly one collected path or one BFS tree branch, so complete + incomplete
/// jointly traverse all edges and number at most edge_count().
PathSets paths_to(const StateSpaceGraph& graph);

/// Reverse breadth-first search from the sink: element u is a shortest path u -> sink.
/// States that cannot reach the sink get an empty path (never the case for built graphs).
std::vector<Path> paths_from(const StateSpaceGraph& graph);

/// Complete paths plus each incomplete path completed with the stored shortest suffix
/// from its last state. Output order: complete paths first, then completions in the
/// order the incomplete paths were discovered.
std::vector<Path> select_sequences(const StateSpaceGraph& graph);

}  // namespace crudwalk::seqgen
