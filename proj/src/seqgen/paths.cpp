// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include "crudwalk/seqgen/paths.hpp"

#include <deque>

namespace crudwalk::seqgen {

PathSets paths_to(const StateSpaceGraph& graph) {
    const std::size_t n = graph.state_count();
    const StateId initial = graph.initial();
    const StateId sink = graph.super_final();

    PathSets result;
    std::vector<Path> paths(n);
    std::vector<bool> found(n, false);
    std::deque<StateId> fifo;

    found[sink.value] = true;
    paths[initial.value] = Path{{initial}};
    fifo.push_back(initial);
    found[initial.value] = true;

    while (!fifo.empty()) {
        const StateId u = fifo.front();
        fifo.pop_front();
        for (const StateId v : graph.successors(u)) {
            Path extended = paths[u.value];
            extended.states.push_back(v);
            if (!found[v.value]) {
                paths[v.value] = std::move(extended);
                fifo.push_back(v);
                found[v.value] = true;
            } else if (v == sink) {
                result.complete.push_back(std::move(extended));
            } else {
                result.incomplete.push_back(std::move(extended));
            }
        }
    }
    return result;
}

std::vector<Path> paths_from(const StateSpaceGraph& graph) {
    const std::size_t n = graph.state_count();
    const StateId sink = graph.super_final();

    std::vector<Path> paths(n);
    std::vector<bool> found(n, false);
    std::deque<StateId> fifo;

    paths[sink.value] = Path{{sink}};
    fifo.push_back(sink);
    found[sink.value] = true;

    while (!fifo.empty()) {
        const StateId v = fifo.front();
        fifo.pop_front();
        for (const StateId u : graph.predecessors(v)) {
            if (found[u.value]) continue;
            Path prefixed;
            prefixed.states.reserve(paths[v.value].states.size() + 1);
            prefixed.states.push_back(u);
            prefixed.states.insert(prefixed.states.end(), paths[v.value].states.begin(), paths[v.value].states.end());
            paths[u.value] = std::move(prefixed);
            fifo.push_back(u);
            found[u.value] = true;
        }
    }
    return paths;
}

std::vector<Path> select_sequences(const StateSpaceGraph& graph) {
    PathSets sets = paths_to(graph);
    const std::vector<Path> from = paths_from(graph);

    std::vector<Path> selected = std::move(sets.complete);
    selected.reserve(selected.size() + sets.incomplete.size());
    for (Path& p : sets.incomplete) {
        const StateId last = p.states.back();
        p.states.pop_back();
        const auto& suffix = from[last.value].states;
        p.states.insert(p.states.end(), suffix.begin(), suffix.end());
        selected.push_back(std::move(p));
    }
    return selected;
}

}  // namespace crudwalk::seqgen
