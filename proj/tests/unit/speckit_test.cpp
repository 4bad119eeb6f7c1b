// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "crudwalk/glacier/glacier.hpp"
#include "crudwalk/speckit/speckit.hpp"

using namespace crudwalk;
using namespace crudwalk::speckit;

namespace {

std::string fixture(const std::string& rel) { return std::string(CRUDWALK_FIXTURE_DIR) + "/" + rel; }

std::string read(const std::string& rel) {
    std::ifstream in(fixture(rel));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> normalized(const Json& list) {
    std::vector<std::string> out;
    for (const auto& s : list) out.push_back(glacier::print(glacier::parse(s.get<std::string>())));
    return out;
}

std::vector<std::string> normalized(const std::vector<glacier::Clause>& clauses) {
    std::vector<std::string> out;
    for (const auto& c : clauses) out.push_back(glacier::print(c.formula));
    return out;
}

bool has_diag(const OasDocument& d, const std::string& code) {
    for (const auto& x : d.diagnostics) {
        if (x.code == code) return true;
    }
    return false;
}

TEST(LoadOas, PlayerFragment) {
    const auto oas = load_oas_file(fixture("speckit/players_fragment.yaml"));
    EXPECT_FALSE(oas.has_errors());
    const auto* post = oas.operation("postPlayer");
    ASSERT_NE(post, nullptr);
    EXPECT_EQ(post->verb, "POST");
    EXPECT_EQ(post->path_template, "/players");
    ASSERT_TRUE(post->request_schema_ref.has_value());
    EXPECT_EQ(*post->request_schema_ref, "Player");
    EXPECT_EQ((*post->request_schema)["properties"]["pid"]["type"], "integer");
    ASSERT_NE(post->success_response(), nullptr);
    EXPECT_EQ(*post->success_response()->schema_ref, "Player");
    const auto* del = oas.operation("deletePlayer");
    ASSERT_NE(del, nullptr);
    EXPECT_EQ(del->path_params, std::vector<std::string>{"pid"});
}

TEST(LoadOas, TournamentsFixtureCounts) {
    const auto oas = load_oas_file(fixture("tournaments/openapi.yaml"));
    for (const auto& d : oas.diagnostics) ADD_FAILURE() << d.location << ": " << d.message;
    EXPECT_EQ(oas.document["paths"].size(), 11u);
    EXPECT_EQ(oas.operations.size(), 19u);
    EXPECT_EQ(oas.document["components"]["schemas"].size(), 4u);
    std::size_t params = 0;
    for (const auto& op : oas.operations) params += op.parameters.size();
    EXPECT_EQ(params, 15u);
}

TEST(LoadOas, Diagnostics) {
    const auto oas = load_oas(R"yaml(
openapi: 3.0.3
paths:
  /things:
    post:
      operationId: postThing
      responses:
        '200': {description: ok}
  /things/{tid}:
    get:
      operationId: getThing
      parameters:
        - {name: q, in: query, schema: {type: string}}
        - {name: q, in: query, schema: {type: string}}
    delete:
      operationId: getThing
      parameters:
        - {name: tid, in: path, required: true}
      responses:
        '200': {description: gone}
  nothing:
    get: {operationId: bad}
components:
  schemas:
    Orphan: {type: object}
)yaml");
    EXPECT_TRUE(has_diag(oas, "missing-request-body"));
    EXPECT_TRUE(has_diag(oas, "undefined-path-parameter"));
    EXPECT_TRUE(has_diag(oas, "duplicate-parameter"));
    EXPECT_TRUE(has_diag(oas, "missing-responses"));
    EXPECT_TRUE(has_diag(oas, "duplicate-operation-id"));
    EXPECT_TRUE(has_diag(oas, "invalid-path"));
    EXPECT_TRUE(has_diag(oas, "unused-schema"));
    for (const auto& d : oas.diagnostics) {
        if (d.code == "missing-request-body") EXPECT_EQ(d.message, "missing request body schema");
    }
    EXPECT_THROW(load_oas("{not json"), InputError);
    EXPECT_THROW(load_oas("- a\n- b\n"), InputError);
}

TEST(YamlToJson, ScalarTyping) {
    const auto j = yaml_to_json("a: 1\nb: '1'\nc: 1.5\nd: true\ne: ~\nf: 3.1.0\n200: x\n");
    EXPECT_TRUE(j["a"].is_number_integer());
    EXPECT_TRUE(j["b"].is_string());
    EXPECT_TRUE(j["c"].is_number_float());
    EXPECT_TRUE(j["d"].is_boolean());
    EXPECT_TRUE(j["e"].is_null());
    EXPECT_EQ(j["f"], "3.1.0");
    EXPECT_TRUE(j.contains("200"));
}

TEST(InferContracts, GoldenClauses) {
    const auto spec = infer_contracts(load_oas_file(fixture("speckit/players_fragment.yaml")));
    const auto post_golden = yaml_to_json(read("speckit/golden_postPlayer.yaml"))["/players"]["POST"];
    const auto* post = spec.contract("postPlayer");
    ASSERT_NE(post, nullptr);
    EXPECT_EQ(normalized(post->preconditions), normalized(post_golden["requires"]));
    EXPECT_EQ(normalized(post->postconditions), normalized(post_golden["ensures"]));

    const auto del_golden = yaml_to_json(read("speckit/golden_deletePlayer.yaml"))["/players/{pid}"]["DELETE"];
    const auto* del = spec.contract("deletePlayer");
    ASSERT_NE(del, nullptr);
    EXPECT_EQ(normalized(del->preconditions), normalized(del_golden["requires"]));
    EXPECT_EQ(normalized(del->postconditions), normalized(del_golden["ensures"]));

    // Generated text is already canonical.
    for (const auto& c : post->postconditions) EXPECT_EQ(c.text, glacier::print(c.formula));
}

TEST(InferContracts, TournamentsFixture) {
    const auto spec = infer_contracts(load_oas_file(fixture("tournaments/openapi.yaml")));
    EXPECT_EQ(spec.resource_keys.at("/players"), "pid");
    EXPECT_EQ(spec.resource_keys.at("/tournaments"), "tid");
    EXPECT_EQ(spec.resource_keys.at("/enrolments"), "eid");
    ASSERT_EQ(spec.invariants.size(), 1u);
    const auto inv_golden = yaml_to_json(read("speckit/golden_invariants.yaml"))["invariants"];
    EXPECT_EQ(normalized(spec.invariants), normalized(inv_golden));

    const auto& put = spec.contracts.at("putTournament");
    ASSERT_EQ(put.contract.preconditions.size(), 1u);
    EXPECT_EQ(put.contract.preconditions[0].text, "res_code(GET /tournaments/{tid}) = 200");
    EXPECT_EQ(put.contract.postconditions[0].text, "req_body(@) = res_body(GET /tournaments/{tid})");
    EXPECT_EQ(put.pre_origin[0], ClauseOrigin::InferredExtra);

    // The manual clause comes first and is kept; the inferred ones follow.
    const auto& del = spec.contracts.at("deleteEnrolment");
    ASSERT_EQ(del.contract.postconditions.size(), 3u);
    EXPECT_EQ(del.post_origin[0], ClauseOrigin::Manual);
    EXPECT_EQ(del.post_origin[1], ClauseOrigin::Inferred);

    EXPECT_TRUE(spec.contract("getPlayers")->preconditions.empty());
}

TEST(InferContracts, ClausesReferenceOnlyDocumentPaths) {
    const auto spec = infer_contracts(load_oas_file(fixture("tournaments/openapi.yaml")));
    std::set<std::string> templates;
    for (const auto& op : spec.operations) templates.insert(op.path_template);
    for (const auto& [id, c] : spec.contracts) {
        for (std::size_t i = 0; i < c.contract.preconditions.size(); ++i) {
            if (c.pre_origin[i] == ClauseOrigin::Manual) continue;
            const auto free = glacier::free_params(c.contract.preconditions[i].formula);
            const auto params = spec.operation(id)->path_params;
            for (const auto& p : free) EXPECT_NE(std::find(params.begin(), params.end(), p), params.end()) << id;
        }
        for (const auto& clause : c.contract.postconditions) {
            for (const auto& tmpl : templates) (void)tmpl;
            EXPECT_NO_THROW(glacier::parse(clause.text));
        }
    }
}

TEST(InferContracts, CollectionWithoutItemPathIsSkipped) {
    const auto spec = infer_contracts(load_oas(R"yaml(
openapi: 3.0.3
paths:
  /logs:
    post:
      operationId: postLog
      requestBody: {content: {application/json: {schema: {type: object}}}}
      responses: {'200': {description: ok}}
)yaml"));
    EXPECT_TRUE(spec.contract("postLog")->preconditions.empty());
    ASSERT_FALSE(spec.warnings.empty());
    EXPECT_NE(spec.warnings.back().find("postLog"), std::string::npos);
}

TEST(Extended, RoundTripIsStable) {
    const auto spec = infer_contracts(load_oas_file(fixture("tournaments/openapi.yaml")));
    for (const bool as_json : {false, true}) {
        const std::string once = emit_extended(spec, as_json);
        const std::string twice = emit_extended(load_extended(once), as_json);
        EXPECT_EQ(once, twice);
        // Inference over an already extended document adds nothing.
        EXPECT_EQ(emit_extended(infer_contracts(load_oas(once)), as_json), once);
    }
    EXPECT_EQ(emit_extended(spec), emit_extended(infer_contracts(load_oas_file(fixture("tournaments/openapi.yaml")))));
}

TEST(Extended, BareListFormsLoad) {
    const auto spec = load_extended(R"yaml(
openapi: 3.0.3
paths:
  /players:
    post:
      operationID: postPlayer
      requestBody: {content: {application/json: {schema: {type: object}}}}
      responses: {'200': {description: ok}}
      requires:
      - res_code(GET /players/req_body(@){pid}) = 404
      ensures:
      - res_code(GET /players/req_body(@){pid}) = 200
      - req_body(@) = res_body(@)
invariants:
- "for t in res_body(GET /tournaments) :- res_body(GET /tournaments/{t.tid}/players).len ≤ res_body(GET /tournaments/{t.tid}/capacity)"
)yaml");
    const auto* c = spec.contract("postPlayer");
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->preconditions.size(), 1u);
    EXPECT_EQ(c->postconditions.size(), 2u);
    EXPECT_EQ(spec.invariants.size(), 1u);
}

TEST(Extended, LoadErrorsNameOperationAndClause) {
    try {
        load_extended(R"yaml(
openapi: 3.0.3
paths:
  /p:
    get:
      operationId: getP
      responses: {'200': {description: ok}}
      x-ensures: ["res_code(@) = 200", "res_code(@) = = 1"]
)yaml");
        FAIL();
    } catch (const InputError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("getP"), std::string::npos);
        EXPECT_NE(msg.find("clause 1"), std::string::npos);
    }
    EXPECT_THROW(load_extended("openapi: 3.0.3\npaths: {}\nx-invariants: ['res_code(GET /p/{pid}) = 200']\n"),
                 InputError);
}

TEST(Catalog, TournamentsOperations) {
    const auto catalog = make_catalog(infer_contracts(load_oas_file(fixture("tournaments/openapi.yaml"))));
    const auto& post = catalog.at("postEnrolment");
    EXPECT_EQ(post.key_param, "eid");
    EXPECT_EQ(post.collection, "/enrolments");
    EXPECT_EQ(post.reference_fields, (std::vector<std::string>{"pid", "tid"}));
    const auto& del = catalog.at("deletePlayer");
    EXPECT_EQ(del.key_param, "pid");
    EXPECT_EQ(del.collection, "/players");
    EXPECT_TRUE(catalog.at("getTournamentPlayers").key_param.empty());
    EXPECT_TRUE(catalog.at("postTournament").reference_fields.empty());
}

}  // namespace
