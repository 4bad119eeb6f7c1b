// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crudwalk/evaluator/evaluator.hpp"
#include "crudwalk/runtime/runtime.hpp"
#include "crudwalk/seqgen/calls.hpp"
#include "crudwalk/speckit/speckit.hpp"

namespace crudwalk::executor {

using runtime::Json;

enum class Classification { Ok, Warn, Err, NotTested };
std::string to_string(Classification c);

/// The operation-result table. 5xx is always ERR; status classes a row does not
/// mention (3xx, 5xx in the F/F rows) fall to ERR as well.
Classification classify(bool pre, bool post, bool inv, int status);

class HttpClient : public runtime::Fetcher {
  public:
    explicit HttpClient(const std::string& base_url, std::chrono::milliseconds timeout = std::chrono::seconds(10));
    ~HttpClient() override;

    /// Throws runtime::TransportError on connection failures and timeouts.
    runtime::HttpResponse request(const std::string& method, const std::string& path,
                                  const std::optional<Json>& body = std::nullopt);
    runtime::HttpResponse get(const std::string& path) override { return request("GET", path); }
    const std::string& base_url() const { return base_url_; }

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::string base_url_;
};

struct ConcreteRequest {
    std::string method;
    std::string url;
    std::optional<Json> body;
};

struct OperationOutcome {
    std::size_t sequence_index = 0;
    std::size_t call_index = 0;
    std::string operation_id;
    std::string call;  // e.g. "postEnrolment(eid=e1, pid=p1, tid=t1)"
    ConcreteRequest request;
    std::optional<runtime::HttpResponse> response;
    std::optional<evaluator::Verdict> pre, post, inv;
    Classification classification = Classification::NotTested;
    std::string reason;
};

struct Summary {
    std::size_t ok = 0, warn = 0, err = 0, not_tested = 0;
    bool operator==(const Summary&) const = default;
};

struct CampaignReport {
    std::uint64_t seed = 0;
    std::vector<std::string> base_urls;
    std::vector<OperationOutcome> outcomes;
    Summary summary;
    double duration_ms = 0;
};

/// Everything derived once from the extended specification.
struct TestPlan {
    explicit TestPlan(const speckit::ExtendedSpec& spec);

    const speckit::ExtendedSpec& spec;
    seqgen::OperationCatalog catalog;
    std::map<std::string, Json> request_schemas;       // by operationId
    std::map<std::string, std::string> delete_for;     // collection -> DELETE operationId
};

/// Per-sequence working memory.
struct SequenceRuntime {
    SequenceRuntime(const TestPlan& plan, HttpClient& client, const runtime::GeneratorConfig& generator,
                    std::size_t get_budget = 256);

    const TestPlan& plan;
    HttpClient& client;
    runtime::Generator generator;
    runtime::EmulatedState emulator;
    runtime::SnapshotStore snapshots;
    std::size_t get_budget;
};

OperationOutcome test_operation(const seqgen::Call& call, bool is_last, SequenceRuntime& rt);

struct RunConfig {
    std::vector<std::string> base_urls;  // more than one: sequences run in parallel, one per URL
    std::uint64_t seed = 0;
    std::chrono::milliseconds timeout = std::chrono::seconds(10);
    /// Delete what each sequence left behind, newest first.
    bool cleanup = true;
    std::size_t get_budget = 256;
    std::function<void(const OperationOutcome&)> on_outcome;
};

/// Throws InputError when a service is unreachable before the first sequence.
CampaignReport run_campaign(const std::vector<seqgen::CallSequence>& sequences, const speckit::ExtendedSpec& spec,
                            const RunConfig& config);

Summary tally(const std::vector<OperationOutcome>& outcomes);

nlohmann::ordered_json outcome_to_json(const OperationOutcome& o, bool include_timing = true);
/// `include_timing = false` drops latencies and the duration, for replay comparisons.
nlohmann::ordered_json report_to_json(const CampaignReport& report, bool include_timing = true);

/// 0 when no operation is ERR, 1 otherwise.
int exit_code(const CampaignReport& report);

std::string describe(const seqgen::Call& call);

}  // namespace crudwalk::executor
