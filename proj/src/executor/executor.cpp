// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include "crudwalk/executor/executor.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace crudwalk::executor {

namespace {

Json plain(const speckit::Json& j) { return Json::parse(j.dump()); }

std::string fill_template(const std::string& tmpl, const std::map<std::string, Json>& values) {
    std::string out;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] != '{') {
            out += tmpl[i++];
            continue;
        }
        const auto close = tmpl.find('}', i);
        const auto name = tmpl.substr(i + 1, close - i - 1);
        const auto& v = values.at(name);
        out += v.is_string() ? v.get<std::string>() : v.dump();
        i = close + 1;
    }
    return out;
}

std::string first_failure(const char* what, const std::optional<evaluator::Verdict>& v) {
    if (!v || v->value || v->failures.empty()) return {};
    const auto& f = v->failures.front();
    std::string s = std::string(what) + " failed: " + f.clause;
    if (!f.witness.empty()) s += " [" + f.witness + "]";
    return s;
}

std::string explain(const OperationOutcome& o) {
    if (o.classification == Classification::Ok) return {};
    const int status = o.response ? o.response->status : 0;
    std::vector<std::string> parts;
    if (status >= 500) parts.push_back("server error " + std::to_string(status));
    for (auto s : {first_failure("postcondition", o.post), first_failure("invariant", o.inv),
                   first_failure("precondition", o.pre)}) {
        if (!s.empty()) parts.push_back(std::move(s));
    }
    if (parts.empty()) parts.push_back("status " + std::to_string(status) + " with every clause holding");
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
    return out;
}

// Raised inside test_operation when a model value has no emulated resource.
struct Untestable {
    std::string reason;
};

runtime::EmulatedEntry lookup(const SequenceRuntime& rt, const seqgen::Call& call, const std::string& param) {
    const auto it = call.params.find(param);
    if (it == call.params.end()) throw Untestable{"no model value for " + param};
    auto entry = rt.emulator.recycle(it->second);
    if (!entry) throw Untestable{"no emulated resource for " + it->second};
    return *entry;
}

}  // namespace

std::string describe(const seqgen::Call& call) {
    std::string s = call.operation_id + "(";
    bool first = true;
    for (const auto& [k, v] : call.params) {
        s += (first ? "" : ", ") + k + "=" + v;
        first = false;
    }
    return s + ")";
}

TestPlan::TestPlan(const speckit::ExtendedSpec& s) : spec(s), catalog(speckit::make_catalog(s)) {
    for (const auto& op : s.operations) {
        if (op.request_schema) request_schemas.emplace(op.operation_id, plain(*op.request_schema));
    }
    for (const auto& [id, info] : catalog) {
        if (info.verb == "DELETE" && !info.collection.empty() && info.path_params.size() == 1) {
            delete_for.emplace(info.collection, id);
        }
    }
}

SequenceRuntime::SequenceRuntime(const TestPlan& p, HttpClient& c, const runtime::GeneratorConfig& g,
                                 std::size_t budget)
    : plan(p), client(c), generator(g), get_budget(budget) {}

OperationOutcome test_operation(const seqgen::Call& call, bool is_last, SequenceRuntime& rt) {
    OperationOutcome out;
    out.operation_id = call.operation_id;
    out.call = describe(call);
    out.request.method = call.verb;

    const auto info_it = rt.plan.catalog.find(call.operation_id);
    if (info_it == rt.plan.catalog.end()) throw InternalError("operation not in catalog: " + call.operation_id);
    const auto& info = info_it->second;
    static const glacier::Contract kNone;
    const glacier::Contract* found = rt.plan.spec.contract(call.operation_id);
    const glacier::Contract& contract = found ? *found : kNone;
    const auto& invariants = rt.plan.spec.invariants;

    evaluator::EvalContext service{nullptr, &rt.client, &rt.snapshots, rt.get_budget};
    evaluator::CurrentOperation cur;
    cur.verb = call.verb;
    try {
        // invariants first: a sequence that starts broken says nothing about this call
        out.inv = evaluator::eval_inv(invariants, service);

        for (const auto& p : info.path_params) cur.path_params[p] = lookup(rt, call, p).id;

        const auto schema_it = rt.plan.request_schemas.find(call.operation_id);
        const Json* schema = schema_it == rt.plan.request_schemas.end() ? nullptr : &schema_it->second;
        if (call.verb == "POST") {
            if (schema) {
                cur.request_body = rt.generator.generate(*schema, info.key_param, info.collection);
                for (const auto& f : info.reference_fields) {
                    if (call.params.count(f) != 0) cur.request_body[f] = lookup(rt, call, f).id;
                }
            }
        } else if (call.verb == "DELETE") {
            const auto target = call.target();
            if (!target.empty()) {
                auto entry = rt.emulator.recycle(target);
                if (!entry) throw Untestable{"no emulated resource for " + target};
                cur.request_body = entry->data;
            }
        } else if (call.verb == "PUT" || call.verb == "PATCH") {
            const auto target = call.target();
            auto entry = rt.emulator.recycle(target);
            if (!entry) throw Untestable{"no emulated resource for " + (target.empty() ? call.operation_id : target)};
            // fresh values, same identity and references
            cur.request_body = schema ? rt.generator.generate(*schema) : entry->data;
            const auto& existing = entry->data;
            if (!info.key_param.empty() && existing.contains(info.key_param)) {
                cur.request_body[info.key_param] = existing[info.key_param];
            }
            for (const auto& f : info.reference_fields) {
                if (existing.contains(f)) cur.request_body[f] = existing[f];
            }
        }
        cur.url = fill_template(info.path_template, cur.path_params);
        out.request.url = cur.url;
        const bool sends_body = call.verb == "POST" || call.verb == "PUT" || call.verb == "PATCH";
        if (sends_body) out.request.body = cur.request_body;

        evaluator::EvalContext ctx = service;
        ctx.op = &cur;
        out.pre = evaluator::eval_pre(contract, ctx);
        rt.snapshots.clear();
        evaluator::capture_snapshots(contract, ctx, rt.snapshots);

        auto response = rt.client.request(call.verb, cur.url, out.request.body);
        cur.response = response;
        out.response = response;
        const int status = response.status;

        if (status >= 200 && status < 300) {
            const auto target = call.target();
            if (call.verb == "POST" && !target.empty()) {
                rt.emulator.add(target, info.collection, cur.request_body, info.key_param);
            } else if (call.verb == "DELETE" && !target.empty()) {
                rt.emulator.remove(target);
            } else if ((call.verb == "PUT" || call.verb == "PATCH") && !target.empty()) {
                rt.emulator.update(target, cur.request_body);
            }
        }
        if (status < 500) out.post = evaluator::eval_post(contract, ctx);
        if (is_last) out.inv = evaluator::eval_inv(invariants, service);

        out.classification = classify(out.pre->value, out.post ? out.post->value : true, out.inv->value, status);
        out.reason = explain(out);
    } catch (const Untestable& u) {
        out.request.url = info.path_template;
        out.classification = Classification::NotTested;
        out.reason = u.reason;
    } catch (const runtime::TransportError& e) {
        out.classification = Classification::Err;
        out.reason = std::string("transport: ") + e.what();
    } catch (const evaluator::EvalError& e) {
        out.classification = Classification::Err;
        out.reason = std::string("evaluation error: ") + e.what();
    } catch (const runtime::UnsupportedSchema& e) {
        out.classification = Classification::Err;
        out.reason = std::string("unsupported schema: ") + e.what();
    }
    return out;
}

namespace {

runtime::GeneratorConfig generator_for(std::uint64_t seed, std::size_t index) {
    runtime::GeneratorConfig g;
    const auto root = derive_seed(seed, "generator");
    g.seed = derive_seed(root, std::to_string(index));
    // disjoint id blocks keep sequences apart on a shared service and make
    // parallel runs assign the same ids as serial ones
    const auto base = static_cast<std::int64_t>(derive_seed(seed, "ids") % 1000) * 1'000'000;
    g.id_base = 1 + base + static_cast<std::int64_t>(index) * 1000;
    return g;
}

void clean_up(SequenceRuntime& rt) {
    auto order = rt.emulator.creation_order();
    std::reverse(order.begin(), order.end());
    for (const auto& tla : order) {
        const auto entry = rt.emulator.recycle(tla);
        if (!entry) continue;
        const auto del = rt.plan.delete_for.find(entry->resource);
        if (del == rt.plan.delete_for.end()) continue;
        const auto& info = rt.plan.catalog.at(del->second);
        try {
            rt.client.request("DELETE", fill_template(info.path_template, {{info.path_params.front(), entry->id}}));
        } catch (const runtime::TransportError&) {
            // best effort
        }
    }
    rt.emulator.reset();
}

std::vector<OperationOutcome> run_sequence(const seqgen::CallSequence& seq, std::size_t index, const TestPlan& plan,
                                           HttpClient& client, const RunConfig& config) {
    SequenceRuntime rt(plan, client, generator_for(config.seed, index), config.get_budget);
    std::vector<OperationOutcome> outs;
    for (std::size_t i = 0; i < seq.calls.size(); ++i) {
        auto o = test_operation(seq.calls[i], i + 1 == seq.calls.size(), rt);
        o.sequence_index = index;
        o.call_index = i;
        outs.push_back(std::move(o));
    }
    if (config.cleanup) clean_up(rt);
    return outs;
}

}  // namespace

Summary tally(const std::vector<OperationOutcome>& outcomes) {
    Summary s;
    for (const auto& o : outcomes) {
        switch (o.classification) {
            case Classification::Ok: ++s.ok; break;
            case Classification::Warn: ++s.warn; break;
            case Classification::Err: ++s.err; break;
            case Classification::NotTested: ++s.not_tested; break;
        }
    }
    return s;
}

CampaignReport run_campaign(const std::vector<seqgen::CallSequence>& sequences, const speckit::ExtendedSpec& spec,
                            const RunConfig& config) {
    if (config.base_urls.empty()) throw InputError("no base URL given");
    const auto t0 = std::chrono::steady_clock::now();
    const TestPlan plan(spec);

    std::vector<std::unique_ptr<HttpClient>> clients;
    for (const auto& url : config.base_urls) {
        clients.push_back(std::make_unique<HttpClient>(url, config.timeout));
        try {
            clients.back()->get("/");
        } catch (const runtime::TransportError& e) {
            throw InputError("service unreachable: " + std::string(e.what()));
        }
    }

    std::vector<std::vector<OperationOutcome>> per_sequence(sequences.size());
    std::mutex report_mu;
    auto emit = [&](const std::vector<OperationOutcome>& outs) {
        if (!config.on_outcome) return;
        std::lock_guard lock(report_mu);
        for (const auto& o : outs) config.on_outcome(o);
    };

    if (clients.size() == 1) {
        for (std::size_t i = 0; i < sequences.size(); ++i) {
            per_sequence[i] = run_sequence(sequences[i], i, plan, *clients.front(), config);
            emit(per_sequence[i]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::vector<std::thread> workers;
        for (auto& client : clients) {
            workers.emplace_back([&, c = client.get()] {
                try {
                    for (std::size_t i = next++; i < sequences.size(); i = next++) {
                        per_sequence[i] = run_sequence(sequences[i], i, plan, *c, config);
                        emit(per_sequence[i]);
                    }
                } catch (...) {
                    std::lock_guard lock(report_mu);
                    if (!failure) failure = std::current_exception();
                    next = sequences.size();
                }
            });
        }
        for (auto& w : workers) w.join();
        if (failure) std::rethrow_exception(failure);
    }

    CampaignReport report;
    report.seed = config.seed;
    report.base_urls = config.base_urls;
    for (auto& outs : per_sequence) {
        for (auto& o : outs) report.outcomes.push_back(std::move(o));
    }
    report.summary = tally(report.outcomes);
    report.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

namespace {

nlohmann::ordered_json verdict_json(const std::optional<evaluator::Verdict>& v) {
    if (!v) return nullptr;
    nlohmann::ordered_json j;
    j["value"] = v->value;
    auto fails = nlohmann::ordered_json::array();
    for (const auto& f : v->failures) fails.push_back({{"clause", f.clause}, {"witness", f.witness}});
    j["failures"] = std::move(fails);
    return j;
}

}  // namespace

nlohmann::ordered_json outcome_to_json(const OperationOutcome& o, bool include_timing) {
    nlohmann::ordered_json j;
    j["sequence"] = o.sequence_index;
    j["index"] = o.call_index;
    j["operation"] = o.operation_id;
    j["call"] = o.call;
    nlohmann::ordered_json req;
    req["method"] = o.request.method;
    req["url"] = o.request.url;
    req["body"] = o.request.body ? nlohmann::ordered_json::parse(o.request.body->dump()) : nlohmann::ordered_json();
    j["request"] = std::move(req);
    if (o.response) {
        nlohmann::ordered_json res;
        res["status"] = o.response->status;
        res["body"] = o.response->json_body ? nlohmann::ordered_json::parse(o.response->raw)
                                            : nlohmann::ordered_json(o.response->raw);
        if (include_timing) res["latency_ms"] = o.response->latency_ms;
        j["response"] = std::move(res);
    } else {
        j["response"] = nullptr;
    }
    j["pre"] = verdict_json(o.pre);
    j["post"] = verdict_json(o.post);
    j["inv"] = verdict_json(o.inv);
    j["classification"] = to_string(o.classification);
    j["reason"] = o.reason;
    return j;
}

nlohmann::ordered_json report_to_json(const CampaignReport& r, bool include_timing) {
    nlohmann::ordered_json j;
    j["seed"] = r.seed;
    j["baseUrl"] = r.base_urls.empty() ? std::string() : r.base_urls.front();
    if (r.base_urls.size() > 1) j["baseUrls"] = r.base_urls;
    j["summary"] = {{"ok", r.summary.ok},
                    {"warn", r.summary.warn},
                    {"err", r.summary.err},
                    {"not_tested", r.summary.not_tested}};
    auto outs = nlohmann::ordered_json::array();
    for (const auto& o : r.outcomes) outs.push_back(outcome_to_json(o, include_timing));
    j["outcomes"] = std::move(outs);
    if (include_timing) j["duration_ms"] = r.duration_ms;
    return j;
}

int exit_code(const CampaignReport& r) { return r.summary.err == 0 ? 0 : 1; }

}  // namespace crudwalk::executor
