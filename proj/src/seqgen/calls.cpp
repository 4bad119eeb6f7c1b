// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include "crudwalk/seqgen/calls.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

#include "crudwalk/error.hpp"

namespace crudwalk::seqgen {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_word(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || c == '_' || c == '-' || c == '.' || c == ':' || c == '@';
    });
}

}  // namespace

std::string Call::target() const {
    if (key_param.empty()) return {};
    const auto it = params.find(key_param);
    return it == params.end() ? std::string{} : it->second;
}

std::optional<EdgeLabel> parse_edge_label(std::string_view label) {
    label = trim(label);
    EdgeLabel out;
    const auto open = label.find('(');
    if (open == std::string_view::npos) {
        if (!is_word(label)) return std::nullopt;
        out.operation = std::string(label);
        return out;
    }
    if (label.back() != ')') return std::nullopt;
    const auto name = trim(label.substr(0, open));
    if (!is_word(name)) return std::nullopt;
    out.operation = std::string(name);
    std::string_view body = trim(label.substr(open + 1, label.size() - open - 2));
    while (!body.empty()) {
        const auto comma = body.find(',');
        const auto piece = trim(body.substr(0, comma));
        const auto eq = piece.find('=');
        if (eq == std::string_view::npos) {
            if (!is_word(piece)) return std::nullopt;
            out.args.emplace_back("", std::string(piece));
        } else {
            const auto key = trim(piece.substr(0, eq));
            const auto value = trim(piece.substr(eq + 1));
            if (!is_word(key) || !is_word(value)) return std::nullopt;
            out.args.emplace_back(std::string(key), std::string(value));
        }
        if (comma == std::string_view::npos) break;
        body = trim(body.substr(comma + 1));
        if (body.empty()) return std::nullopt;
    }
    return out;
}

Call make_call(const EdgeLabel& label, const OperationCatalog& catalog) {
    const auto it = catalog.find(label.operation);
    if (it == catalog.end()) {
        throw InputError("edge label names operation '" + label.operation + "', which the OpenAPI document lacks");
    }
    const OperationInfo& op = it->second;
    Call call{op.operation_id, op.verb, op.path_template, {}, op.key_param};

    std::vector<std::string> slots;
    auto add_slot = [&](const std::string& name) {
        if (!name.empty() && std::find(slots.begin(), slots.end(), name) == slots.end()) slots.push_back(name);
    };
    add_slot(op.key_param);
    for (const auto& p : op.path_params) add_slot(p);
    for (const auto& f : op.reference_fields) add_slot(f);

    for (const auto& [name, value] : label.args) {
        if (!name.empty()) call.params[name] = value;
    }
    std::size_t next_slot = 0;
    for (const auto& [name, value] : label.args) {
        if (!name.empty()) continue;
        while (next_slot < slots.size() && call.params.contains(slots[next_slot])) ++next_slot;
        if (next_slot == slots.size()) {
            throw InputError("too many arguments in label for operation '" + op.operation_id + "'");
        }
        call.params[slots[next_slot++]] = value;
    }
    return call;
}

std::vector<CallSequence> to_call_sequences(const StateSpaceGraph& graph, const std::vector<Path>& paths,
                                            const OperationCatalog& catalog) {
    std::vector<CallSequence> out;
    out.reserve(paths.size());
    for (const Path& path : paths) {
        CallSequence seq;
        seq.source_path = path;
        for (std::size_t i = 0; i + 1 < path.states.size(); ++i) {
            const StateId u = path.states[i];
            const StateId v = path.states[i + 1];
            if (v == graph.super_final()) continue;
            const auto& labels = graph.edge_labels(u, v);
            if (labels.empty()) continue;
            const auto parsed = parse_edge_label(labels.front());
            if (!parsed) {
                throw InputError("cannot read operation from edge label '" + labels.front() + "'");
            }
            seq.calls.push_back(make_call(*parsed, catalog));
        }
        out.push_back(std::move(seq));
    }
    return out;
}

PutCatalog put_catalog(const OperationCatalog& catalog) {
    PutCatalog puts;
    for (const auto& [id, op] : catalog) {
        if (op.verb == "PUT" && !op.collection.empty()) puts[op.collection].push_back(op);
    }
    return puts;
}

std::vector<CallSequence> insert_puts(const std::vector<CallSequence>& sequences, const PutCatalog& puts,
                                      int max_puts, std::uint64_t seed, const PutCountChooser& chooser) {
    if (max_puts < 0 || max_puts > kMaxConsecutivePuts) {
        throw InputError("the number of consecutive PUTs must be between 0 and " +
                         std::to_string(kMaxConsecutivePuts) + ", got " + std::to_string(max_puts));
    }
    if (max_puts == 0) return sequences;

    Rng rng(derive_seed(seed, "puts"));
    std::vector<CallSequence> out = sequences;
    for (CallSequence& seq : out) {
        auto& calls = seq.calls;
        for (std::size_t i = 0; i < calls.size(); ++i) {
            if (calls[i].verb != "POST") continue;
            const std::string target = calls[i].target();
            const auto available = puts.find(calls[i].path);
            if (target.empty() || available == puts.end() || available->second.empty()) continue;

            const int k = chooser ? std::clamp(chooser(rng, max_puts), 0, max_puts)
                                  : static_cast<int>(rng.uniform(0, max_puts));
            if (k == 0) continue;

            std::size_t upper = calls.size();
            const std::string item_prefix = calls[i].path + "/";
            for (std::size_t j = i + 1; j < calls.size(); ++j) {
                if (calls[j].verb == "DELETE" && calls[j].target() == target &&
                    calls[j].path.rfind(item_prefix, 0) == 0) {
                    upper = j;
                    break;
                }
            }
            const auto slot = static_cast<std::size_t>(rng.uniform(static_cast<std::int64_t>(i + 1),
                                                                   static_cast<std::int64_t>(upper)));
            std::vector<Call> inserted;
            for (int n = 0; n < k; ++n) {
                const auto& choices = available->second;
                const auto& op = choices[static_cast<std::size_t>(
                    rng.uniform(0, static_cast<std::int64_t>(choices.size()) - 1))];
                Call put{op.operation_id, op.verb, op.path_template, {}, op.key_param};
                for (const auto& [name, value] : calls[i].params) {
                    put.params[name == calls[i].key_param ? op.key_param : name] = value;
                }
                inserted.push_back(std::move(put));
            }
            calls.insert(calls.begin() + static_cast<std::ptrdiff_t>(slot), inserted.begin(), inserted.end());
        }
    }
    return out;
}

CoverageReport coverage_report(const StateSpaceGraph& graph, const std::vector<Path>& paths) {
    const StateId sink = graph.super_final();
    std::set<StateId> states;
    std::set<std::pair<StateId, StateId>> edges;
    std::set<std::pair<std::pair<StateId, StateId>, std::string>> labels;
    for (const Path& p : paths) {
        for (std::size_t i = 0; i < p.states.size(); ++i) {
            if (p.states[i] != sink) states.insert(p.states[i]);
            if (i + 1 < p.states.size() && p.states[i + 1] != sink) {
                const std::pair<StateId, StateId> e{p.states[i], p.states[i + 1]};
                edges.insert(e);
                const auto& ls = graph.edge_labels(e.first, e.second);
                if (!ls.empty()) labels.emplace(e, ls.front());
            }
        }
    }
    CoverageReport r;
    r.states_total = graph.state_count() - 1;
    graph.for_each_edge([&](StateId u, StateId v) {
        if (v == sink) return;
        ++r.transitions_total;
        r.labels_total += graph.edge_labels(u, v).size();
    });
    r.states_visited = states.size();
    r.transitions_visited = edges.size();
    r.labels_visited = labels.size();
    auto pct = [](std::size_t a, std::size_t b) { return b == 0 ? 100.0 : 100.0 * static_cast<double>(a) / static_cast<double>(b); };
    r.state_coverage = pct(r.states_visited, r.states_total);
    r.transition_coverage = pct(r.transitions_visited, r.transitions_total);
    r.label_coverage = pct(r.labels_visited, r.labels_total);
    return r;
}

LengthStats length_stats(const std::vector<CallSequence>& sequences) {
    LengthStats s;
    if (sequences.empty()) return s;
    s.min = std::numeric_limits<std::size_t>::max();
    std::size_t total = 0;
    for (const auto& seq : sequences) {
        s.min = std::min(s.min, seq.calls.size());
        s.max = std::max(s.max, seq.calls.size());
        total += seq.calls.size();
    }
    s.avg = static_cast<double>(total) / static_cast<double>(sequences.size());
    return s;
}

nlohmann::ordered_json sequences_to_json(const std::vector<CallSequence>& sequences, std::uint64_t seed,
                                         const StateSpaceGraph* graph) {
    nlohmann::ordered_json doc;
    doc["seed"] = seed;
    auto& arr = doc["sequences"] = nlohmann::ordered_json::array();
    for (const auto& seq : sequences) {
        nlohmann::ordered_json s;
        auto& calls = s["calls"] = nlohmann::ordered_json::array();
        for (const auto& c : seq.calls) {
            nlohmann::ordered_json call;
            call["op"] = c.operation_id;
            call["verb"] = c.verb;
            call["path"] = c.path;
            call["params"] = nlohmann::ordered_json::object();
            for (const auto& [k, v] : c.params) call["params"][k] = v;
            if (!c.key_param.empty()) call["key"] = c.key_param;
            calls.push_back(std::move(call));
        }
        if (graph != nullptr && !seq.source_path.states.empty()) {
            auto& src = s["source_path"] = nlohmann::ordered_json::array();
            for (const auto st : seq.source_path.states) src.push_back(graph->raw_id(st));
        }
        arr.push_back(std::move(s));
    }
    return doc;
}

SequencesFile sequences_from_json(const nlohmann::json& doc) {
    SequencesFile file;
    try {
        file.seed = doc.value("seed", std::uint64_t{0});
        for (const auto& s : doc.at("sequences")) {
            CallSequence seq;
            for (const auto& c : s.at("calls")) {
                Call call;
                call.operation_id = c.at("op").get<std::string>();
                call.verb = c.at("verb").get<std::string>();
                call.path = c.at("path").get<std::string>();
                if (c.contains("params")) {
                    for (const auto& [k, v] : c.at("params").items()) call.params[k] = v.get<std::string>();
                }
                call.key_param = c.value("key", std::string{});
                seq.calls.push_back(std::move(call));
            }
            file.sequences.push_back(std::move(seq));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed sequences document: ") + e.what());
    }
    return file;
}

}  // namespace crudwalk::seqgen
