// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include "crudwalk/ssg/graph.hpp"

#include <algorithm>
#include <deque>
#include <regex>
#include <set>

namespace crudwalk::ssg {

namespace {

std::string join(const std::vector<std::string>& items, std::size_t limit = 20) {
    std::string out;
    for (std::size_t i = 0; i < items.size() && i < limit; ++i) {
        if (i > 0) out += ", ";
        out += items[i];
    }
    if (items.size() > limit) out += ", ... (" + std::to_string(items.size()) + " total)";
    return out;
}

std::vector<bool> bfs_mask(const std::vector<std::vector<std::uint32_t>>& adj,
                           const std::vector<std::uint32_t>& sources) {
    std::vector<bool> seen(adj.size(), false);
    std::deque<std::uint32_t> queue;
    for (auto s : sources) {
        if (!seen[s]) {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const auto u = queue.front();
        queue.pop_front();
        for (auto v : adj[u]) {
            if (!seen[v]) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

const std::vector<std::string> kNoLabels;
const std::string kSinkId = "<super-final>";

}  // namespace

GraphError::GraphError(const std::string& message, std::vector<std::string> offenders)
    : InputError(offenders.empty() ? message : message + ": " + join(offenders)), offenders_(std::move(offenders)) {}

bool StateSpaceGraph::is_final(StateId s) const { return final_mask_.at(s.value); }

bool StateSpaceGraph::has_edge(StateId u, StateId v) const {
    const auto& succ = out_adj_.at(u.value);
    return std::binary_search(succ.begin(), succ.end(), v);
}

const std::vector<std::string>& StateSpaceGraph::edge_labels(StateId u, StateId v) const {
    const auto it = labels_.find({u.value, v.value});
    return it == labels_.end() ? kNoLabels : it->second;
}

std::optional<StateId> StateSpaceGraph::find(const std::string& raw_id) const {
    const auto it = index_.find(raw_id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void StateSpaceGraph::for_each_edge(const std::function<void(StateId, StateId)>& fn) const {
    for (std::uint32_t u = 0; u < out_adj_.size(); ++u) {
        for (const auto v : out_adj_[u]) fn(StateId{u}, v);
    }
}

StateSpaceGraph build(const RawGraph& raw, const BuildOptions& options) {
    if (raw.nodes.empty() && raw.edges.empty()) {
        throw GraphError("graph is empty");
    }

    std::vector<std::string> ids;
    std::unordered_map<std::string, std::uint32_t> index;
    auto intern = [&](const std::string& id) {
        const auto [it, inserted] = index.emplace(id, static_cast<std::uint32_t>(ids.size()));
        if (inserted) ids.push_back(id);
        return it->second;
    };
    for (const auto& node : raw.nodes) intern(node.id);
    for (const auto& edge : raw.edges) {
        intern(edge.from);
        intern(edge.to);
    }

    const std::size_t n = ids.size();
    std::vector<std::string> node_labels(n);
    std::vector<bool> has_label(n, false);
    std::vector<bool> flagged(n, false);
    for (const auto& node : raw.nodes) {
        const auto i = index.at(node.id);
        if (node.label && !has_label[i]) {
            node_labels[i] = *node.label;
            has_label[i] = true;
        }
        flagged[i] = flagged[i] || node.initial_flag;
    }

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::set<std::string>> edges;
    std::vector<std::string> self_loops;
    for (const auto& edge : raw.edges) {
        const auto u = index.at(edge.from);
        const auto v = index.at(edge.to);
        if (u == v && !options.allow_self_loops) {
            self_loops.push_back(edge.from);
            continue;
        }
        auto& labels = edges[{u, v}];
        if (edge.label && !edge.label->empty()) labels.insert(*edge.label);
    }
    if (!self_loops.empty()) {
        std::sort(self_loops.begin(), self_loops.end());
        self_loops.erase(std::unique(self_loops.begin(), self_loops.end()), self_loops.end());
        throw GraphError("self-loops are not permitted", self_loops);
    }

    std::vector<std::vector<std::uint32_t>> out(n), in(n);
    for (const auto& [key, labels] : edges) {
        out[key.first].push_back(key.second);
        in[key.second].push_back(key.first);
    }

    std::uint32_t initial = 0;
    if (options.initial_id) {
        const auto it = index.find(*options.initial_id);
        if (it == index.end()) throw GraphError("initial state '" + *options.initial_id + "' does not occur in the graph");
        initial = it->second;
    } else {
        std::vector<std::uint32_t> candidates;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (flagged[i]) candidates.push_back(i);
        }
        if (candidates.empty()) {
            for (std::uint32_t i = 0; i < n; ++i) {
                const bool only_self = std::all_of(in[i].begin(), in[i].end(), [&](auto p) { return p == i; });
                if (only_self) candidates.push_back(i);
            }
        }
        if (candidates.size() != 1) {
            std::vector<std::string> names;
            for (auto c : candidates) names.push_back(ids[c]);
            throw GraphError(candidates.empty() ? "no initial state: every state has a predecessor"
                                                : "ambiguous initial state, candidates",
                             names);
        }
        initial = candidates.front();
    }

    const std::regex final_re(options.final_pattern);
    std::vector<std::uint32_t> finals;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (has_label[i] && std::regex_search(node_labels[i], final_re)) finals.push_back(i);
    }
    if (finals.empty()) {
        throw GraphError("no final state matches /" + options.final_pattern + "/");
    }

    const auto reachable = bfs_mask(out, {initial});
    const auto coreachable = bfs_mask(in, finals);
    std::vector<std::string> offenders;
    std::vector<bool> keep(n, true);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (!reachable[i] || !coreachable[i]) {
            offenders.push_back(ids[i]);
            keep[i] = false;
        }
    }
    if (!offenders.empty() && !options.prune) {
        throw GraphError("states not on any path from the initial state to a final state", offenders);
    }
    if (!keep[initial]) {
        throw GraphError("initial state '" + ids[initial] + "' cannot reach any final state");
    }

    // Re-index the surviving states densely, preserving first-appearance order.
    std::vector<std::uint32_t> remap(n, 0);
    StateSpaceGraph g;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (!keep[i]) continue;
        remap[i] = static_cast<std::uint32_t>(g.raw_ids_.size());
        g.raw_ids_.push_back(ids[i]);
        g.node_labels_.push_back(node_labels[i]);
    }
    const auto m = static_cast<std::uint32_t>(g.raw_ids_.size());
    g.raw_ids_.push_back(kSinkId);
    g.node_labels_.push_back("");
    g.out_adj_.assign(m + 1, {});
    g.in_adj_.assign(m + 1, {});
    g.final_mask_.assign(m + 1, false);
    g.initial_ = StateId{remap[initial]};
    g.super_final_ = StateId{m};

    for (const auto& [key, labels] : edges) {
        if (!keep[key.first] || !keep[key.second]) continue;
        const StateId u{remap[key.first]};
        const StateId v{remap[key.second]};
        g.out_adj_[u.value].push_back(v);
        g.in_adj_[v.value].push_back(u);
        if (!labels.empty()) g.labels_[{u.value, v.value}] = std::vector<std::string>(labels.begin(), labels.end());
    }
    for (auto f : finals) {
        if (!keep[f]) continue;
        const StateId u{remap[f]};
        g.finals_.push_back(u);
        g.final_mask_[u.value] = true;
        g.out_adj_[u.value].push_back(g.super_final_);
        g.in_adj_[m].push_back(u);
    }
    std::size_t count = 0;
    for (auto& succ : g.out_adj_) {
        std::sort(succ.begin(), succ.end());
        count += succ.size();
    }
    for (auto& pred : g.in_adj_) std::sort(pred.begin(), pred.end());
    g.edge_count_ = count;
    for (std::uint32_t i = 0; i <= m; ++i) g.index_.emplace(g.raw_ids_[i], StateId{i});
    return g;
}

GraphStats traversal_stats(const StateSpaceGraph& graph) {
    GraphStats stats{graph.state_count(), graph.edge_count(), 0};
    graph.for_each_edge([&](StateId u, StateId v) { stats.labels += graph.edge_labels(u, v).size(); });
    return stats;
}

GraphStats model_stats(const StateSpaceGraph& graph) {
    GraphStats stats = traversal_stats(graph);
    stats.states -= 1;
    stats.transitions -= graph.finals().size();
    return stats;
}

std::optional<std::string> check_invariants(const StateSpaceGraph& graph) {
    const auto n = static_cast<std::uint32_t>(graph.state_count());
    for (std::uint32_t u = 0; u < n; ++u) {
        for (const auto v : graph.successors(StateId{u})) {
            const auto pred = graph.predecessors(v);
            if (!std::binary_search(pred.begin(), pred.end(), StateId{u})) {
                return "adjacency mismatch on edge " + graph.raw_id(StateId{u}) + " -> " + graph.raw_id(v);
            }
        }
        for (const auto p : graph.predecessors(StateId{u})) {
            if (!graph.has_edge(p, StateId{u})) {
                return "in-adjacency lists " + graph.raw_id(p) + " -> " + graph.raw_id(StateId{u}) +
                       " without a matching out edge";
            }
        }
    }
    if (!graph.successors(graph.super_final()).empty()) return "super-final sink has outgoing edges";
    for (const auto f : graph.finals()) {
        if (!graph.has_edge(f, graph.super_final())) return "final state " + graph.raw_id(f) + " is not linked to the sink";
    }
    std::vector<std::vector<std::uint32_t>> out(n), in(n);
    graph.for_each_edge([&](StateId u, StateId v) {
        out[u.value].push_back(v.value);
        in[v.value].push_back(u.value);
    });
    const auto fwd = bfs_mask(out, {graph.initial().value});
    const auto bwd = bfs_mask(in, {graph.super_final().value});
    for (std::uint32_t u = 0; u < n; ++u) {
        if (!fwd[u]) return "state " + graph.raw_id(StateId{u}) + " is unreachable";
        if (!bwd[u]) return "state " + graph.raw_id(StateId{u}) + " cannot reach the sink";
    }
    return std::nullopt;
}

}  // namespace crudwalk::ssg
