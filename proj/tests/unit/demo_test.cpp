// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "crudwalk/demo/demo.hpp"
#include "crudwalk/rng.hpp"

using namespace crudwalk;
using namespace crudwalk::demo;

namespace {

DemoResponse post(TournamentsStore& s, const std::string& path, const Json& body) {
    return s.handle("POST", path, body.dump());
}

void seed_one_each(TournamentsStore& s) {
    ASSERT_EQ(post(s, "/players", {{"pid", 1}, {"name", "ann"}}).status, 200);
    ASSERT_EQ(post(s, "/tournaments", {{"tid", 10}, {"name", "open"}, {"capacity", 2}}).status, 200);
    ASSERT_EQ(post(s, "/enrolments", {{"eid", 100}, {"pid", 1}, {"tid", 10}}).status, 200);
}

std::set<std::int64_t> ids(const Json& list, const char* key) {
    std::set<std::int64_t> out;
    for (const auto& x : list) out.insert(x.at(key).get<std::int64_t>());
    return out;
}

TEST(Store, FreshListIsEmpty) {
    TournamentsStore s;
    const auto r = s.handle("GET", "/players", "");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(r.body, Json::array());
}

TEST(Store, StatusCodes) {
    TournamentsStore s;
    const Json ann{{"pid", 1}, {"name", "ann"}};
    const auto created = post(s, "/players", ann);
    EXPECT_EQ(created.status, 200);
    EXPECT_EQ(created.body, ann);
    EXPECT_EQ(post(s, "/players", ann).status, 409);
    EXPECT_EQ(s.handle("POST", "/players", "{not json").status, 400);
    EXPECT_EQ(post(s, "/players", {{"pid", 2}}).status, 400);
    EXPECT_EQ(s.handle("GET", "/players/9", "").status, 404);
    EXPECT_EQ(s.handle("DELETE", "/players/9", "").status, 404);
    EXPECT_EQ(s.handle("GET", "/nowhere", "").status, 404);
    EXPECT_EQ(s.handle("PUT", "/players/1", Json{{"pid", 2}, {"name", "x"}}.dump()).status, 400);
    EXPECT_EQ(s.handle("PUT", "/players/1", Json{{"pid", 1}, {"name", "bo"}}.dump()).status, 200);
    EXPECT_EQ(s.handle("GET", "/players/1", "").body["name"], "bo");
}

TEST(Store, EnrolmentKeepsBothSidesAndCapacity) {
    TournamentsStore s;
    seed_one_each(s);
    EXPECT_EQ(ids(s.handle("GET", "/tournaments/10/players", "").body, "pid"), std::set<std::int64_t>{1});
    EXPECT_EQ(ids(s.handle("GET", "/players/1/tournaments", "").body, "tid"), std::set<std::int64_t>{10});
    EXPECT_EQ(s.handle("GET", "/tournaments/10/capacity", "").body, 2);
    EXPECT_EQ(post(s, "/enrolments", {{"eid", 101}, {"pid", 9}, {"tid", 10}}).status, 404);

    post(s, "/players", {{"pid", 2}, {"name", "bo"}});
    post(s, "/players", {{"pid", 3}, {"name", "cy"}});
    EXPECT_EQ(post(s, "/enrolments", {{"eid", 102}, {"pid", 2}, {"tid", 10}}).status, 200);
    EXPECT_EQ(post(s, "/enrolments", {{"eid", 103}, {"pid", 3}, {"tid", 10}}).status, 422);
    // shrinking below the enrolled count is refused too
    EXPECT_EQ(s.handle("PUT", "/tournaments/10", Json{{"tid", 10}, {"name", "o"}, {"capacity", 1}}.dump()).status,
              422);
    // referenced resources cannot go away
    EXPECT_EQ(s.handle("DELETE", "/players/1", "").status, 409);
    EXPECT_EQ(s.handle("DELETE", "/tournaments/10", "").status, 409);

    EXPECT_EQ(s.handle("DELETE", "/enrolments/100", "").status, 200);
    EXPECT_EQ(ids(s.handle("GET", "/tournaments/10/players", "").body, "pid"), std::set<std::int64_t>{2});
    EXPECT_EQ(s.handle("GET", "/players/1/tournaments", "").body, Json::array());
    EXPECT_EQ(s.handle("GET", "/enrolments?tid=10", "").body.size(), 1u);
}

TEST(Store, ResetEmptiesEverything) {
    TournamentsStore s;
    seed_one_each(s);
    s.reset();
    s.reset();
    EXPECT_EQ(s.handle("GET", "/players/1", "").status, 404);
    EXPECT_EQ(s.handle("GET", "/tournaments", "").body, Json::array());
    EXPECT_EQ(s.handle("GET", "/enrolments", "").body, Json::array());
}

TEST(Server, ResetClearsLog) {
    DemoServer server;
    server.handle("POST", "/players", Json{{"pid", 1}, {"name", "a"}}.dump());
    EXPECT_EQ(server.log().size(), 1u);
    server.reset();
    EXPECT_TRUE(server.log().empty());
    EXPECT_EQ(server.handle("GET", "/players/1", "").status, 404);
}

TEST(Faults, ParseNames) {
    const auto f = FaultFlags::parse("deletePlayerNoop,ignoreCapacity");
    EXPECT_TRUE(f.delete_player_noop);
    EXPECT_TRUE(f.ignore_capacity);
    EXPECT_FALSE(f.delete_tournament_random);
    const auto all = FaultFlags::parse("all");
    EXPECT_TRUE(all.delete_player_noop && all.delete_tournament_random && all.delete_enrolment_no_backref);
    EXPECT_FALSE(all.ignore_capacity);
    EXPECT_FALSE(FaultFlags::parse("").any());
    EXPECT_THROW(FaultFlags::parse("deleteEverything"), InputError);
}

TEST(Faults, DeletePlayerNoop) {
    FaultFlags f;
    f.delete_player_noop = true;
    TournamentsStore s(f);
    post(s, "/players", {{"pid", 1}, {"name", "ann"}});
    EXPECT_EQ(s.handle("DELETE", "/players/1", "").status, 200);
    EXPECT_EQ(s.handle("GET", "/players/1", "").status, 200);
}

TEST(Faults, DeleteEnrolmentNoBackref) {
    FaultFlags f;
    f.delete_enrolment_no_backref = true;
    TournamentsStore s(f);
    seed_one_each(s);
    EXPECT_EQ(s.handle("DELETE", "/enrolments/100", "").status, 200);
    EXPECT_EQ(s.handle("GET", "/enrolments/100", "").status, 404);
    EXPECT_EQ(ids(s.handle("GET", "/tournaments/10/players", "").body, "pid"), std::set<std::int64_t>{1});
}

TEST(Faults, DeleteTournamentRandom) {
    FaultFlags f;
    f.delete_tournament_random = true;
    // over several seeds the wrong tournament vanishes at least once, and one always does
    bool wrong = false;
    for (std::uint64_t seed = 0; seed < 16; ++seed) {
        TournamentsStore s(f, seed);
        post(s, "/tournaments", {{"tid", 1}, {"name", "a"}, {"capacity", 1}});
        post(s, "/tournaments", {{"tid", 2}, {"name", "b"}, {"capacity", 1}});
        EXPECT_EQ(s.handle("DELETE", "/tournaments/1", "").status, 200);
        const auto left = ids(s.handle("GET", "/tournaments", "").body, "tid");
        ASSERT_EQ(left.size(), 1u);
        wrong |= left.count(1) == 1;
    }
    EXPECT_TRUE(wrong);
}

TEST(Faults, OthersLeaveUnrelatedEndpointsAlone) {
    FaultFlags f = FaultFlags::parse("all");
    TournamentsStore faulty(f), clean;
    for (auto* s : {&faulty, &clean}) seed_one_each(*s);
    for (const char* path : {"/players", "/tournaments", "/enrolments", "/tournaments/10/players", "/players/1"}) {
        EXPECT_EQ(faulty.handle("GET", path, "").body, clean.handle("GET", path, "").body) << path;
    }
}

// Random valid and invalid calls; the views must stay consistent in correct mode.
TEST(Store, RandomInterleavingsKeepIntegrity) {
    Rng rng(derive_seed(99, "demo-test"));
    TournamentsStore s;
    for (int step = 0; step < 3000; ++step) {
        const auto id = static_cast<std::int64_t>(rng.uniform(1, 4));
        const auto other = static_cast<std::int64_t>(rng.uniform(1, 4));
        switch (rng.uniform(0, 6)) {
            case 0: post(s, "/players", {{"pid", id}, {"name", "p"}}); break;
            case 1:
                post(s, "/tournaments", {{"tid", id}, {"name", "t"}, {"capacity", rng.uniform(1, 3)}});
                break;
            case 2: post(s, "/enrolments", {{"eid", rng.uniform(1, 6)}, {"pid", id}, {"tid", other}}); break;
            case 3: s.handle("DELETE", "/players/" + std::to_string(id), ""); break;
            case 4: s.handle("DELETE", "/tournaments/" + std::to_string(id), ""); break;
            case 5: s.handle("DELETE", "/enrolments/" + std::to_string(rng.uniform(1, 6)), ""); break;
            default:
                s.handle("PUT", "/tournaments/" + std::to_string(id),
                         Json{{"tid", id}, {"name", "u"}, {"capacity", rng.uniform(1, 3)}}.dump());
        }
        const auto players = ids(s.handle("GET", "/players", "").body, "pid");
        const auto tournaments = s.handle("GET", "/tournaments", "").body;
        const auto enrolments = s.handle("GET", "/enrolments", "").body;
        for (const auto& e : enrolments) {
            const auto pid = e["pid"].get<std::int64_t>(), tid = e["tid"].get<std::int64_t>();
            ASSERT_TRUE(players.count(pid)) << step;
            const auto roster = ids(s.handle("GET", "/tournaments/" + std::to_string(tid) + "/players", "").body, "pid");
            ASSERT_TRUE(roster.count(pid)) << step;
        }
        for (const auto& t : tournaments) {
            const auto tid = std::to_string(t["tid"].get<std::int64_t>());
            const auto roster = s.handle("GET", "/tournaments/" + tid + "/players", "").body;
            ASSERT_LE(roster.size(), t["capacity"].get<std::size_t>()) << step;
            ASSERT_EQ(roster.size(), s.handle("GET", "/enrolments?tid=" + tid, "").body.size()) << step;
        }
    }
}

}  // namespace
