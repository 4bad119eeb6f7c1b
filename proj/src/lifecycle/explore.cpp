// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include "crudwalk/lifecycle/explore.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace crudwalk::lifecycle {

ExploreError::ExploreError(const std::string& message, Trace trace)
    : InputError(message), trace_(std::move(trace)) {}

std::string LifecycleState::canonical() const {
    std::string out;
    for (const auto& m : maps) out += Value{m}.str() + ";";
    out += final ? "T" : "F";
    return out;
}

std::size_t Exploration::final_count() const {
    return static_cast<std::size_t>(std::count_if(states.begin(), states.end(), [](const auto& s) { return s.final; }));
}

Trace Exploration::trace_to(std::size_t state) const {
    Trace trace;
    for (std::size_t s = state;; s = parent[s]) {
        trace.push_back({s == 0 ? "" : parent_label[s], states[s]});
        if (s == 0) break;
    }
    std::reverse(trace.begin(), trace.end());
    return trace;
}

std::string format_trace(const Trace& trace) {
    std::string out;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out += std::to_string(i) + ": " + (trace[i].label.empty() ? "<init>" : trace[i].label) + " -> " +
               trace[i].state.canonical() + "\n";
    }
    return out;
}

namespace {

struct ProbeFailed {
    std::size_t state;
};

class Explorer {
  public:
    Explorer(const LifecycleModel& model, const ExploreOptions& options, const Node* probe = nullptr)
        : m_(model), opt_(options), probe_(probe) {
        for (const auto& c : m_.constants) {
            SetValue s{c.values};
            std::sort(s.items.begin(), s.items.end());
            constant_values_.emplace(c.name, Value{std::move(s)});
        }
    }

    /// With a probe: the first (hence shallowest) state where it fails, if any.
    std::optional<Trace> run_probe() {
        try {
            run();
        } catch (const ProbeFailed& f) {
            return ex_.trace_to(f.state);
        }
        return std::nullopt;
    }

    Exploration run() {
        LifecycleState init;
        init.maps.resize(m_.resources.size());
        add_state(std::move(init), 0, "");
        check_state(0, nullptr);
        for (std::size_t head = 0; head < ex_.states.size(); ++head) {
            if (m_.final_guard && ex_.states[head].final) continue;
            for (const auto& action : m_.actions) fire_all(head, action);
        }
        return std::move(ex_);
    }

  private:
    const LifecycleModel& m_;
    ExploreOptions opt_;
    const Node* probe_;
    Exploration ex_;
    std::unordered_map<std::string, std::size_t> index_;
    std::unordered_map<std::string, Value> constant_values_;

    Lookup lookup_for(const LifecycleState& s, const std::vector<std::pair<std::string, Value>>& bindings) const {
        return [this, &s, &bindings](std::string_view name) -> const Value* {
            for (const auto& [k, v] : bindings) {
                if (k == name) return &v;
            }
            for (std::size_t i = 0; i < m_.resources.size(); ++i) {
                if (m_.resources[i].name == name) {
                    scratch_.push_back(Value{s.maps[i]});
                    return &scratch_.back();
                }
            }
            if (const auto it = constant_values_.find(std::string(name)); it != constant_values_.end()) return &it->second;
            if (name == "final") {
                scratch_.push_back(Value{s.final});
                return &scratch_.back();
            }
            return nullptr;
        };
    }
    // Backing storage for values materialized during one lookup chain.
    mutable std::deque<Value> scratch_;

    std::size_t add_state(LifecycleState s, std::size_t parent, const std::string& label) {
        const std::string key = s.canonical();
        if (const auto it = index_.find(key); it != index_.end()) return it->second;
        if (ex_.states.size() >= opt_.max_states) {
            throw ExploreError("state cap exceeded: reached " + std::to_string(ex_.states.size()) + " states",
                               ex_.trace_to(parent));
        }
        const std::size_t id = ex_.states.size();
        index_.emplace(key, id);
        ex_.states.push_back(std::move(s));
        ex_.parent.push_back(parent);
        ex_.parent_label.push_back(label);
        return id;
    }

    [[noreturn]] void violation(std::size_t from, const std::string& label, const LifecycleState* next,
                                const std::string& msg) const {
        Trace t = ex_.trace_to(from);
        if (next != nullptr) t.push_back({label, *next});
        throw ExploreError(msg + "\n" + format_trace(t), std::move(t));
    }

    void fire_all(std::size_t from, const ActionSpec& action) {
        std::vector<std::pair<std::string, std::vector<Value>>> axes;
        for (const auto& [p, res] : action.params) {
            std::vector<Value> ids;
            for (const auto& id : m_.resource(res)->ids) ids.push_back(Value{id});
            axes.emplace_back(p, std::move(ids));
        }
        for (const auto& [p, c] : action.choices) axes.emplace_back(p, m_.constant(c)->values);

        std::vector<std::size_t> odometer(axes.size(), 0);
        for (;;) {
            std::vector<std::pair<std::string, Value>> bindings;
            for (std::size_t i = 0; i < axes.size(); ++i) bindings.emplace_back(axes[i].first, axes[i].second[odometer[i]]);
            fire(from, action, bindings);
            std::size_t k = 0;
            while (k < axes.size() && ++odometer[k] == axes[k].second.size()) odometer[k++] = 0;
            if (k == axes.size()) break;
        }
    }

    void fire(std::size_t from, const ActionSpec& action, const std::vector<std::pair<std::string, Value>>& bindings) {
        std::string label = action.name;
        if (!action.params.empty()) {
            label += "(";
            for (std::size_t i = 0; i < action.params.size(); ++i) label += (i ? "," : "") + bindings[i].second.str();
            label += ")";
        }
        // Copy: ex_.states may reallocate when the successor is added.
        const LifecycleState pre = ex_.states[from];
        scratch_.clear();
        const Lookup pre_lookup = lookup_for(pre, bindings);
        LifecycleState next = pre;
        try {
            for (const auto& g : action.guard) {
                if (!eval_bool(*g, pre_lookup)) return;
            }
            for (const auto& eff : action.effects) apply(eff, pre_lookup, next);
            next.final = terminal(next);
        } catch (const ExprError& e) {
            violation(from, label, nullptr, "evaluation failed while firing " + label + ": " + e.what());
        }
        for (const auto& u : action.unchanged) {
            const auto idx = resource_index(u);
            if (!(next.maps[idx] == pre.maps[idx])) violation(from, label, &next, label + " changes '" + u + "' declared unchanged");
        }
        const std::size_t before = ex_.states.size();
        const std::size_t to = add_state(next, from, label);
        if (to == before) check_state(to, &label);
        ex_.transitions.push_back({from, to, label});
    }

    std::size_t resource_index(std::string_view name) const {
        for (std::size_t i = 0; i < m_.resources.size(); ++i) {
            if (m_.resources[i].name == name) return i;
        }
        throw ExprError("unknown resource '" + std::string(name) + "'");
    }

    static std::string key_text(const Value& v) {
        if (const auto* s = std::get_if<std::string>(&v.v)) return *s;
        throw ExprError("resource key must be a symbolic id, got " + v.str());
    }

    void apply(const Effect& eff, const Lookup& pre, LifecycleState& next) const {
        auto& map = next.maps[resource_index(eff.resource)].entries;
        const std::string key = key_text(eval(*eff.key, pre));
        if (eff.kind == Effect::Kind::Delete) {
            if (map.erase(key) == 0) throw ExprError("'" + eff.text + "' removes a missing entry");
            return;
        }
        const Value value = eval(*eff.value, pre);
        if (eff.path.empty()) {
            map[key] = value;
            return;
        }
        const auto it = map.find(key);
        if (it == map.end()) throw ExprError("'" + eff.text + "' updates a missing entry");
        Value* slot = &it->second;
        for (const auto& field : eff.path) {
            auto* rec = std::get_if<RecordValue>(&slot->v);
            if (rec == nullptr || !rec->fields.contains(field)) throw ExprError("'" + eff.text + "' has no field " + field);
            slot = &rec->fields[field];
        }
        if (eff.kind == Effect::Kind::Assign) {
            *slot = value;
            return;
        }
        auto* set = std::get_if<SetValue>(&slot->v);
        if (set == nullptr) throw ExprError("'" + eff.text + "' targets a non-set field");
        auto& items = set->items;
        const auto pos = std::lower_bound(items.begin(), items.end(), value);
        const bool present = pos != items.end() && *pos == value;
        if (eff.kind == Effect::Kind::Add && !present) items.insert(pos, value);
        if (eff.kind == Effect::Kind::Remove && present) items.erase(pos);
    }

    bool terminal(const LifecycleState& s) {
        if (!m_.terminal) {
            return std::all_of(s.maps.begin(), s.maps.end(), [](const MapValue& m) { return m.entries.empty(); });
        }
        const std::vector<std::pair<std::string, Value>> none;
        return eval_bool(*m_.terminal, lookup_for(s, none));
    }

    std::optional<std::string> type_error(const LifecycleState& s) const {
        auto in_ids = [&](const std::string& res, const Value& v) {
            const auto* id = std::get_if<std::string>(&v.v);
            const auto& ids = m_.resource(res)->ids;
            return id != nullptr && std::find(ids.begin(), ids.end(), *id) != ids.end();
        };
        for (std::size_t i = 0; i < m_.resources.size(); ++i) {
            const auto& spec = m_.resources[i];
            for (const auto& [key, rec_value] : s.maps[i].entries) {
                if (std::find(spec.ids.begin(), spec.ids.end(), key) == spec.ids.end()) {
                    return spec.name + " is keyed by '" + key + "' outside its id domain";
                }
                // `{}` parses as an empty set; it stands for the empty record too.
                if (spec.fields.empty() && rec_value.is_collection() && rec_value.size() == 0) continue;
                const auto* rec = std::get_if<RecordValue>(&rec_value.v);
                if (rec == nullptr || rec->fields.size() != spec.fields.size()) {
                    return spec.name + "[" + key + "] is not a record of the declared shape";
                }
                for (const auto& f : spec.fields) {
                    const auto it = rec->fields.find(f.name);
                    if (it == rec->fields.end()) return spec.name + "[" + key + "] lacks field " + f.name;
                    const Value& v = it->second;
                    bool ok = false;
                    if (f.kind == FieldSpec::Kind::RefTo) {
                        ok = in_ids(f.target, v);
                    } else if (f.kind == FieldSpec::Kind::SetOf) {
                        const auto* set = std::get_if<SetValue>(&v.v);
                        ok = set != nullptr && std::all_of(set->items.begin(), set->items.end(),
                                                           [&](const Value& x) { return in_ids(f.target, x); });
                    } else {
                        const auto& dom = m_.constant(f.target)->values;
                        ok = std::find(dom.begin(), dom.end(), v) != dom.end();
                    }
                    if (!ok) return spec.name + "[" + key + "]." + f.name + " = " + v.str() + " is ill-typed";
                }
            }
        }
        return std::nullopt;
    }

    void check_state(std::size_t id, const std::string* label) {
        const LifecycleState s = ex_.states[id];
        const std::size_t from = ex_.parent[id];
        const std::string lbl = label ? *label : "";
        auto fail = [&](const std::string& msg) {
            if (id == 0) violation(0, "", nullptr, msg);
            violation(from, lbl, &s, msg);
        };
        if (const auto err = type_error(s)) fail("type invariant violated: " + *err);
        scratch_.clear();
        const std::vector<std::pair<std::string, Value>> none;
        const Lookup lookup = lookup_for(s, none);
        for (const auto& inv : m_.invariants) {
            bool holds = false;
            try {
                holds = eval_bool(*inv.expr, lookup);
            } catch (const ExprError& e) {
                fail("invariant " + inv.name + " could not be evaluated: " + e.what());
            }
            if (!holds) fail("invariant " + inv.name + " violated");
        }
        if (probe_ != nullptr && !eval_bool(*probe_, lookup)) throw ProbeFailed{id};
    }
};

}  // namespace

Exploration explore(const LifecycleModel& model, const ExploreOptions& options) {
    return Explorer(model, options).run();
}

std::optional<Trace> check_invariant(const LifecycleModel& model, const std::string& predicate,
                                     const ExploreOptions& options) {
    const NodePtr pred = parse_expr(predicate);
    return Explorer(model, options, pred.get()).run_probe();
}

ssg::RawGraph to_raw_graph(const LifecycleModel& model, const Exploration& ex) {
    ssg::RawGraph raw;
    raw.name = model.name;
    for (std::size_t i = 0; i < ex.states.size(); ++i) {
        const auto& s = ex.states[i];
        std::string label;
        for (std::size_t r = 0; r < model.resources.size(); ++r) {
            label += "/\\\\ " + model.resources[r].name + " = " + Value{s.maps[r]}.str() + "\\n";
        }
        label += std::string("/\\\\ final = ") + (s.final ? "TRUE" : "FALSE");
        raw.nodes.push_back({std::to_string(i), label, i == 0, 0});
    }
    for (const auto& t : ex.transitions) {
        raw.edges.push_back({std::to_string(t.from), std::to_string(t.to), t.label, 0});
    }
    return raw;
}

}  // namespace crudwalk::lifecycle
