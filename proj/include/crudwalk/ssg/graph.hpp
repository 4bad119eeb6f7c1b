// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crudwalk/error.hpp"
#include "crudwalk/ssg/dot.hpp"

namespace crudwalk::ssg {

/// Dense state index, contiguous in [0, state_count()).
struct StateId {
    std::uint32_t value = 0;

    constexpr auto operator<=>(const StateId&) const = default;
};

class GraphError : public InputError {
  public:
    GraphError(const std::string& message, std::vector<std::string> offenders = {});
    const std::vector<std::string>& offenders() const noexcept { return offenders_; }

  private:
    std::vector<std::string> offenders_;
};

struct BuildOptions {
    /// ECMAScript regex searched in node labels to mark final states.
    std::string final_pattern = R"(final\s*=\s*TRUE)";
    /// Raw id of the initial state; overrides flags and in-degree detection.
    std::optional<std::string> initial_id;
    /// Remove unreachable / non-co-reachable states instead of failing.
    bool prune = false;
    bool allow_self_loops = false;
};

/// Immutable state-space graph with a synthetic super-final sink.
///
/// The sink is always the last index. Adjacency lists are sorted ascending and free of
/// duplicates; parallel edges from the input are merged and their labels kept as a set.
class StateSpaceGraph {
  public:
    std::size_t state_count() const { return out_adj_.size(); }
    /// Number of distinct (from, to) pairs, sink edges included.
    std::size_t edge_count() const { return edge_count_; }

    StateId initial() const { return initial_; }
    StateId super_final() const { return super_final_; }
    const std::vector<StateId>& finals() const { return finals_; }
    bool is_final(StateId s) const;

    std::span<const StateId> successors(StateId u) const { return out_adj_.at(u.value); }
    std::span<const StateId> predecessors(StateId v) const { return in_adj_.at(v.value); }
    bool has_edge(StateId u, StateId v) const;

    /// Sorted operation labels on (u, v); empty for unlabeled edges and sink edges.
    const std::vector<std::string>& edge_labels(StateId u, StateId v) const;

    /// Raw DOT id of a state; the sink reports "<super-final>".
    const std::string& raw_id(StateId s) const { return raw_ids_.at(s.value); }
    std::optional<StateId> find(const std::string& raw_id) const;
    const std::string& node_label(StateId s) const { return node_labels_.at(s.value); }

    /// Calls fn(u, v) for every edge in ascending (u, v) order.
    void for_each_edge(const std::function<void(StateId, StateId)>& fn) const;

    friend StateSpaceGraph build(const RawGraph& raw, const BuildOptions& options);

  private:
    std::vector<std::vector<StateId>> out_adj_;
    std::vector<std::vector<StateId>> in_adj_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::string>> labels_;
    std::vector<std::string> raw_ids_;
    std::vector<std::string> node_labels_;
    std::unordered_map<std::string, StateId> index_;
    std::vector<StateId> finals_;
    std::vector<bool> final_mask_;
    StateId initial_;
    StateId super_final_;
    std::size_t edge_count_ = 0;
};

/// Builds and validates a graph. Throws GraphError naming the offending states when the
/// initial state is ambiguous, no state is final, a self-loop is present (unless allowed),
/// or some state is unreachable from the initial state or cannot reach the sink.
StateSpaceGraph build(const RawGraph& raw, const BuildOptions& options = {});

struct GraphStats {
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::size_t labels = 0;
};

/// Counts without the synthetic sink and its edges (comparable to model-checker output).
GraphStats model_stats(const StateSpaceGraph& graph);
/// Counts over the graph actually traversed by sequence generation.
GraphStats traversal_stats(const StateSpaceGraph& graph);

/// Checks the structural invariants (adjacency duality, sink law, reachability,
/// co-reachability). Returns a description of the first violation, if any.
std::optional<std::string> check_invariants(const StateSpaceGraph& graph);

}  // namespace crudwalk::ssg

template <>
struct std::hash<crudwalk::ssg::StateId> {
    std::size_t operator()(crudwalk::ssg::StateId s) const noexcept { return std::hash<std::uint32_t>{}(s.value); }
};
