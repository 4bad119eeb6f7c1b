// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <map>

#include "crudwalk/demo/demo.hpp"
#include "crudwalk/evaluator/evaluator.hpp"
#include "crudwalk/glacier/glacier.hpp"
#include "crudwalk/speckit/speckit.hpp"

using namespace crudwalk;
using namespace crudwalk::evaluator;
using runtime::HttpResponse;

namespace {

glacier::Clause clause(const std::string& text) { return {text, glacier::parse(text)}; }

glacier::Contract contract(std::vector<std::string> pre, std::vector<std::string> post) {
    glacier::Contract c;
    for (const auto& s : pre) c.preconditions.push_back(clause(s));
    for (const auto& s : post) c.postconditions.push_back(clause(s));
    return c;
}

// Canned responses by path; records every GET.
class FakeFetcher : public runtime::Fetcher {
  public:
    std::map<std::string, HttpResponse> routes;
    std::vector<std::string> calls;
    bool down = false;

    void set(const std::string& path, int status, Json body) {
        HttpResponse r;
        r.status = status;
        r.body = std::move(body);
        r.json_body = true;
        r.raw = r.body.dump();
        routes[path] = r;
    }
    HttpResponse get(const std::string& path) override {
        calls.push_back(path);
        if (down) throw runtime::TransportError("connection refused");
        const auto it = routes.find(path);
        if (it != routes.end()) return it->second;
        HttpResponse r;
        r.status = 404;
        return r;
    }
};

// The demo service without a socket.
class DemoFetcher : public runtime::Fetcher {
  public:
    explicit DemoFetcher(demo::DemoServer& s) : server(s) {}
    HttpResponse get(const std::string& path) override { return send("GET", path); }
    HttpResponse send(const std::string& method, const std::string& path, const Json& body = nullptr) {
        const auto out = server.handle(method, path, body.is_null() ? "" : body.dump());
        HttpResponse r;
        r.status = out.status;
        r.body = out.body;
        r.json_body = true;
        r.raw = out.body.dump();
        return r;
    }
    demo::DemoServer& server;
};

std::vector<glacier::Clause> fixture_invariants() {
    const auto oas = speckit::load_oas_file(std::string(CRUDWALK_FIXTURE_DIR) + "/tournaments/openapi.yaml");
    return speckit::infer_contracts(oas).invariants;
}

TEST(JsonEqual, OrderAndNumbers) {
    EXPECT_TRUE(json_equal(Json::parse(R"({"a":1,"b":[1,2]})"), Json::parse(R"({"b":[1,2.0],"a":1})")));
    EXPECT_FALSE(json_equal(Json::parse("[1,2]"), Json::parse("[2,1]")));
    EXPECT_FALSE(json_equal(Json::parse(R"({"a":1})"), Json::parse(R"({"a":1,"b":2})")));
    EXPECT_FALSE(json_equal(Json("1"), Json(1)));
}

TEST(Eval, QuantifiersOverEmptyCollection) {
    FakeFetcher f;
    f.set("/players", 200, Json::array());
    EvalContext ctx{nullptr, &f, nullptr};
    EXPECT_TRUE(eval(clause("for p in res_body(GET /players) :- res_code(GET /players/{p.pid}) = 0"), ctx).value);
    EXPECT_FALSE(eval(clause("exists p in res_body(GET /players) :- res_code(GET /players/{p.pid}) = 404"), ctx).value);
    EXPECT_EQ(f.calls.size(), 2u);
}

TEST(Eval, QuantifierWitnessNamesElement) {
    FakeFetcher f;
    f.set("/players", 200, Json::parse(R"([{"pid":1},{"pid":2}])"));
    f.set("/players/1", 200, Json::parse(R"({"pid":1})"));
    EvalContext ctx{nullptr, &f, nullptr};
    const auto v = eval(clause("for p in res_body(GET /players) :- res_code(GET /players/{p.pid}) = 200"), ctx);
    ASSERT_FALSE(v.value);
    ASSERT_EQ(v.failures.size(), 1u);
    EXPECT_NE(v.failures[0].witness.find("\"pid\":2"), std::string::npos) << v.failures[0].witness;
}

TEST(Eval, MissingFieldIsFalseNotError) {
    FakeFetcher f;
    f.set("/players/1", 200, Json::parse(R"({"pid":1})"));
    EvalContext ctx{nullptr, &f, nullptr};
    const auto v = eval(clause("res_body(GET /players/1){name} = \"x\""), ctx);
    EXPECT_FALSE(v.value);
    EXPECT_FALSE(v.failures.front().witness.empty());
}

TEST(Eval, Implication) {
    FakeFetcher f;
    EvalContext ctx{nullptr, &f, nullptr};
    EXPECT_TRUE(eval(clause("res_code(GET /a) = 200 => res_code(GET /b) = 200"), ctx).value);
    f.set("/a", 200, nullptr);
    EXPECT_FALSE(eval(clause("res_code(GET /a) = 200 => res_code(GET /b) = 200"), ctx).value);
}

TEST(EvalPre, RejectsPrev) {
    FakeFetcher f;
    CurrentOperation op{"DELETE", "/players/1", Json::object(), {{"pid", 1}}, std::nullopt};
    EvalContext ctx{&op, &f, nullptr};
    EXPECT_THROW(eval_pre(contract({"prev(res_code(GET /players/{pid})) = 200"}, {}), ctx), EvalError);
}

TEST(Eval, UnboundPlaceholderIsEvalError) {
    FakeFetcher f;
    CurrentOperation op{"DELETE", "/players/1", Json::object(), {{"pid", 1}}, std::nullopt};
    EvalContext ctx{&op, &f, nullptr};
    EXPECT_THROW(eval(clause("res_code(GET /players/{tid}) = 200"), ctx), EvalError);
    EXPECT_TRUE(eval(clause("res_code(GET /players/{pid}) = 404"), ctx).value);
    EXPECT_EQ(f.calls.back(), "/players/1");
}

TEST(Eval, GetBudget) {
    FakeFetcher f;
    EvalContext ctx{nullptr, &f, nullptr, 1};
    EXPECT_THROW(eval(clause("res_code(GET /a) = res_code(GET /b)"), ctx), EvalError);
}

TEST(Eval, TransportErrorPropagates) {
    FakeFetcher f;
    f.down = true;
    EvalContext ctx{nullptr, &f, nullptr};
    EXPECT_THROW(eval(clause("res_code(GET /a) = 200"), ctx), runtime::TransportError);
}

TEST(Snapshots, OneGetPerPathAndBeforeTheRequest) {
    FakeFetcher f;
    f.set("/players/1", 200, Json::parse(R"({"pid":1,"name":"a"})"));
    CurrentOperation op{"DELETE", "/players/1", Json::parse(R"({"pid":1,"name":"a"})"), {{"pid", 1}}, std::nullopt};
    EvalContext ctx{&op, &f, nullptr};
    const auto c = contract({}, {"req_body(@) = prev(res_body(GET /players/{pid}))",
                                 "prev(res_code(GET /players/{pid})) = 200"});
    runtime::SnapshotStore store;
    EXPECT_EQ(capture_snapshots(c, ctx, store), 1u);
    EXPECT_EQ(store.size(), 1u);

    // the resource goes away; prev still sees the old value
    f.routes.erase("/players/1");
    HttpResponse r;
    r.status = 200;
    op.response = r;
    ctx.snapshots = &store;
    const auto v = eval_post(c, ctx);
    EXPECT_TRUE(v.value) << (v.failures.empty() ? "" : v.failures[0].witness);
}

TEST(Snapshots, MissingSnapshotIsFalse) {
    FakeFetcher f;
    CurrentOperation op{"DELETE", "/players/1", Json::object(), {{"pid", 1}}, HttpResponse{200, {}, false, "", 0}};
    runtime::SnapshotStore store;
    EvalContext ctx{&op, &f, &store};
    const auto v = eval_post(contract({}, {"prev(res_code(GET /players/{pid})) = 200"}), ctx);
    ASSERT_FALSE(v.value);
    EXPECT_NE(v.failures[0].witness.find("snapshot unavailable"), std::string::npos) << v.failures[0].witness;
}

TEST(Snapshots, TransportFailureStored) {
    FakeFetcher f;
    f.down = true;
    CurrentOperation op{"DELETE", "/players/1", Json::object(), {{"pid", 1}}, std::nullopt};
    EvalContext ctx{&op, &f, nullptr};
    runtime::SnapshotStore store;
    capture_snapshots(contract({}, {"prev(res_code(GET /players/{pid})) = 200"}), ctx, store);
    ASSERT_NE(store.get("/players/1"), nullptr);
    EXPECT_FALSE(store.get("/players/1")->response);
}

TEST(DemoContracts, PlayerPostAndDelete) {
    demo::DemoServer server;
    DemoFetcher f(server);
    const auto post_c = contract({"res_code(GET /players/req_body(@){pid}) = 404"},
                                 {"res_code(GET /players/req_body(@){pid}) = 200", "req_body(@) = res_body(@)"});
    CurrentOperation op{"POST", "/players", Json::parse(R"({"pid":5,"name":"ann"})"), {}, std::nullopt};
    EvalContext ctx{&op, &f, nullptr};
    EXPECT_TRUE(eval_pre(post_c, ctx).value);
    op.response = f.send("POST", "/players", op.request_body);
    EXPECT_EQ(op.response->status, 200);
    EXPECT_TRUE(eval_post(post_c, ctx).value);
    // a second insertion of the same pid violates the precondition
    op.response.reset();
    EXPECT_FALSE(eval_pre(post_c, ctx).value);

    const auto del_c = contract({"res_code(GET /players/{pid}) = 200"},
                                {"res_code(GET /players/{pid}) = 404", "req_body(@) = prev(res_body(GET /players/{pid}))"});
    CurrentOperation del{"DELETE", "/players/5", Json::parse(R"({"pid":5,"name":"ann"})"), {{"pid", 5}}, std::nullopt};
    runtime::SnapshotStore store;
    EvalContext dctx{&del, &f, &store};
    EXPECT_TRUE(eval_pre(del_c, dctx).value);
    capture_snapshots(del_c, dctx, store);
    del.response = f.send("DELETE", "/players/5");
    const auto v = eval_post(del_c, dctx);
    EXPECT_TRUE(v.value) << (v.failures.empty() ? "" : v.failures[0].witness);

    for (const auto& req : server.log()) {
        if (req.method != "GET") EXPECT_TRUE(req.method == "POST" || req.method == "DELETE");
    }
}

TEST(DemoContracts, NoopDeleteBreaksEnsures) {
    demo::FaultFlags faults;
    faults.delete_player_noop = true;
    demo::DemoServer server(faults);
    DemoFetcher f(server);
    f.send("POST", "/players", Json::parse(R"({"pid":5,"name":"ann"})"));
    const auto del_c = contract({}, {"res_code(GET /players/{pid}) = 404"});
    CurrentOperation del{"DELETE", "/players/5", Json::object(), {{"pid", 5}}, std::nullopt};
    del.response = f.send("DELETE", "/players/5");
    EXPECT_EQ(del.response->status, 200);
    EvalContext ctx{&del, &f, nullptr};
    EXPECT_FALSE(eval_post(del_c, ctx).value);
}

TEST(DemoContracts, EvaluationOnlyIssuesGets) {
    demo::DemoServer server;
    DemoFetcher f(server);
    f.send("POST", "/tournaments", Json::parse(R"({"tid":1,"name":"open","capacity":2})"));
    server.reset();
    f.send("POST", "/tournaments", Json::parse(R"({"tid":1,"name":"open","capacity":2})"));
    const auto before = server.log().size();
    EvalContext ctx{nullptr, &f, nullptr};
    EXPECT_TRUE(eval_inv(fixture_invariants(), ctx).value);
    const auto log = server.log();
    ASSERT_GT(log.size(), before);
    for (std::size_t i = before; i < log.size(); ++i) EXPECT_EQ(log[i].method, "GET") << log[i].path;
}

TEST(DemoContracts, CapacityInvariant) {
    const auto inv = fixture_invariants();
    ASSERT_EQ(inv.size(), 1u);
    for (const bool ignore : {false, true}) {
        demo::FaultFlags faults;
        faults.ignore_capacity = ignore;
        demo::DemoServer server(faults);
        DemoFetcher f(server);
        f.send("POST", "/tournaments", Json::parse(R"({"tid":7,"name":"open","capacity":2})"));
        for (int p = 1; p <= 3; ++p) {
            f.send("POST", "/players", Json{{"pid", p}, {"name", "p"}});
            const auto r = f.send("POST", "/enrolments", Json{{"eid", p}, {"pid", p}, {"tid", 7}});
            EXPECT_EQ(r.status, (p == 3 && !ignore) ? 422 : 200);
        }
        EvalContext ctx{nullptr, &f, nullptr};
        const auto v = eval_inv(inv, ctx);
        EXPECT_EQ(v.value, !ignore);
        if (ignore) {
            ASSERT_FALSE(v.failures.empty());
            EXPECT_NE(v.failures[0].witness.find("\"tid\":7"), std::string::npos) << v.failures[0].witness;
        }
    }
}

TEST(EvalInv, RejectsCurrentOperation) {
    FakeFetcher f;
    CurrentOperation op{"GET", "/", Json(), {}, std::nullopt};
    EvalContext ctx{&op, &f, nullptr};
    EXPECT_THROW(eval_inv({clause("res_code(GET /a) = 404")}, ctx), InputError);
}

}  // namespace
