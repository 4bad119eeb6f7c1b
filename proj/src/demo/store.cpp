// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <optional>
#include <sstream>

#include "crudwalk/demo/demo.hpp"

namespace crudwalk::demo {

namespace {

DemoResponse problem(int status, const std::string& message) { return {status, Json{{"message", message}}}; }

std::optional<std::int64_t> parse_id(const std::string& s) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

bool int_field(const Json& body, const char* name) { return body.contains(name) && body[name].is_number_integer(); }

bool name_ok(const Json& body) {
    if (!body.contains("name") || !body["name"].is_string()) return false;
    const auto n = body["name"].get_ref<const std::string&>().size();
    return n >= 1 && n <= 20;
}

bool capacity_ok(const Json& body) {
    if (!int_field(body, "capacity")) return false;
    const auto c = body["capacity"].get<std::int64_t>();
    return c >= 1 && c <= 10;
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : path) {
        if (c == '/') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::map<std::string, std::string> parse_query(const std::string& q) {
    std::map<std::string, std::string> out;
    std::stringstream ss(q);
    std::string kv;
    while (std::getline(ss, kv, '&')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            out[kv] = "";
        } else {
            out[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
    }
    return out;
}

const DemoResponse kNoRoute{404, Json{{"message", "no such route"}}};
const DemoResponse kNotAllowed{405, Json{{"message", "method not allowed"}}};

}  // namespace

FaultFlags FaultFlags::parse(std::string_view list) {
    FaultFlags f;
    std::string item;
    std::stringstream ss{std::string(list)};
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (item == "deletePlayerNoop") {
            f.delete_player_noop = true;
        } else if (item == "deleteTournamentRandom") {
            f.delete_tournament_random = true;
        } else if (item == "deleteEnrolmentNoBackref") {
            f.delete_enrolment_no_backref = true;
        } else if (item == "ignoreCapacity") {
            f.ignore_capacity = true;
        } else if (item == "all") {
            f.delete_player_noop = f.delete_tournament_random = f.delete_enrolment_no_backref = true;
        } else {
            throw InputError("unknown fault '" + item + "'");
        }
    }
    return f;
}

std::string FaultFlags::str() const {
    std::string out;
    auto add = [&](bool on, const char* name) {
        if (!on) return;
        if (!out.empty()) out += ",";
        out += name;
    };
    add(delete_player_noop, "deletePlayerNoop");
    add(delete_tournament_random, "deleteTournamentRandom");
    add(delete_enrolment_no_backref, "deleteEnrolmentNoBackref");
    add(ignore_capacity, "ignoreCapacity");
    return out;
}

TournamentsStore::TournamentsStore(FaultFlags faults, std::uint64_t seed)
    : faults_(faults), seed_(seed), rng_(derive_seed(seed, "demo")) {}

void TournamentsStore::reset() {
    players_.clear();
    tournaments_.clear();
    enrolments_.clear();
    rng_ = Rng(derive_seed(seed_, "demo"));
}

Json TournamentsStore::player_json(std::int64_t pid) const {
    const auto it = players_.find(pid);
    if (it == players_.end()) return Json{{"pid", pid}};
    return Json{{"pid", pid}, {"name", it->second.name}};
}

Json TournamentsStore::tournament_json(std::int64_t tid) const {
    const auto& t = tournaments_.at(tid);
    return Json{{"tid", tid}, {"name", t.name}, {"capacity", t.capacity}};
}

Json TournamentsStore::enrolment_json(std::int64_t eid, const Enrolment& e) {
    return Json{{"eid", eid}, {"pid", e.pid}, {"tid", e.tid}};
}

DemoResponse TournamentsStore::handle(const std::string& method, const std::string& target, const std::string& body) {
    const auto qpos = target.find('?');
    const std::string path = target.substr(0, qpos);
    const auto query = qpos == std::string::npos ? std::map<std::string, std::string>{} : parse_query(target.substr(qpos + 1));
    const auto seg = split_path(path);
    Json parsed;
    if (method == "POST" || method == "PUT") {
        try {
            parsed = Json::parse(body);
        } catch (const Json::exception&) {
            return problem(400, "request body is not JSON");
        }
        if (!parsed.is_object()) return problem(400, "request body must be an object");
    }
    if (seg.empty()) return kNoRoute;
    if (seg[0] == "players") return players(method, seg, parsed);
    if (seg[0] == "tournaments") return tournaments(method, seg, parsed);
    if (seg[0] == "enrolments") return enrolments(method, seg, parsed, query);
    return kNoRoute;
}

DemoResponse TournamentsStore::players(const std::string& method, const std::vector<std::string>& seg, const Json& body) {
    if (seg.size() == 1) {
        if (method == "GET") {
            Json out = Json::array();
            for (const auto& [pid, _] : players_) out.push_back(player_json(pid));
            return {200, out};
        }
        if (method == "POST") {
            if (!int_field(body, "pid") || !name_ok(body)) return problem(400, "malformed player");
            const auto pid = body["pid"].get<std::int64_t>();
            if (players_.count(pid)) return problem(409, "player exists");
            players_[pid] = Player{body["name"].get<std::string>(), {}};
            return {200, player_json(pid)};
        }
        return kNotAllowed;
    }
    const auto pid = parse_id(seg[1]);
    if (!pid || seg.size() > 3) return kNoRoute;
    const auto it = players_.find(*pid);
    if (seg.size() == 3) {
        if (method != "GET") return kNotAllowed;
        if (it == players_.end()) return problem(404, "no such player");
        Json out = Json::array();
        if (seg[2] == "tournaments") {
            for (const auto tid : it->second.tournaments) {
                if (tournaments_.count(tid)) out.push_back(tournament_json(tid));
            }
            return {200, out};
        }
        if (seg[2] == "enrolments") {
            for (const auto& [eid, e] : enrolments_) {
                if (e.pid == *pid) out.push_back(enrolment_json(eid, e));
            }
            return {200, out};
        }
        return kNoRoute;
    }
    if (method == "GET") {
        if (it == players_.end()) return problem(404, "no such player");
        return {200, player_json(*pid)};
    }
    if (method == "PUT") {
        if (it == players_.end()) return problem(404, "no such player");
        if (!int_field(body, "pid") || body["pid"].get<std::int64_t>() != *pid || !name_ok(body)) {
            return problem(400, "malformed player");
        }
        it->second.name = body["name"].get<std::string>();
        return {200, player_json(*pid)};
    }
    if (method == "DELETE") {
        if (it == players_.end()) return problem(404, "no such player");
        for (const auto& [_, e] : enrolments_) {
            if (e.pid == *pid) return problem(409, "player is enrolled");
        }
        Json out = player_json(*pid);
        if (!faults_.delete_player_noop) players_.erase(it);
        return {200, out};
    }
    return kNotAllowed;
}

DemoResponse TournamentsStore::tournaments(const std::string& method, const std::vector<std::string>& seg,
                                           const Json& body) {
    if (seg.size() == 1) {
        if (method == "GET") {
            Json out = Json::array();
            for (const auto& [tid, _] : tournaments_) out.push_back(tournament_json(tid));
            return {200, out};
        }
        if (method == "POST") {
            if (!int_field(body, "tid") || !name_ok(body) || !capacity_ok(body)) return problem(400, "malformed tournament");
            const auto tid = body["tid"].get<std::int64_t>();
            if (tournaments_.count(tid)) return problem(409, "tournament exists");
            tournaments_[tid] = Tournament{body["name"].get<std::string>(), body["capacity"].get<std::int64_t>(), {}};
            return {200, tournament_json(tid)};
        }
        return kNotAllowed;
    }
    const auto tid = parse_id(seg[1]);
    if (!tid || seg.size() > 3) return kNoRoute;
    const auto it = tournaments_.find(*tid);
    if (seg.size() == 3) {
        if (method != "GET") return kNotAllowed;
        if (it == tournaments_.end()) return problem(404, "no such tournament");
        if (seg[2] == "players") {
            Json out = Json::array();
            for (const auto pid : it->second.players) out.push_back(player_json(pid));
            return {200, out};
        }
        if (seg[2] == "capacity") return {200, Json(it->second.capacity)};
        if (seg[2] == "enrolments") {
            Json out = Json::array();
            for (const auto& [eid, e] : enrolments_) {
                if (e.tid == *tid) out.push_back(enrolment_json(eid, e));
            }
            return {200, out};
        }
        return kNoRoute;
    }
    if (method == "GET") {
        if (it == tournaments_.end()) return problem(404, "no such tournament");
        return {200, tournament_json(*tid)};
    }
    if (method == "PUT") {
        if (it == tournaments_.end()) return problem(404, "no such tournament");
        if (!int_field(body, "tid") || body["tid"].get<std::int64_t>() != *tid || !name_ok(body) || !capacity_ok(body)) {
            return problem(400, "malformed tournament");
        }
        const auto capacity = body["capacity"].get<std::int64_t>();
        if (!faults_.ignore_capacity && capacity < static_cast<std::int64_t>(it->second.players.size())) {
            return problem(422, "capacity below enrolled players");
        }
        it->second.name = body["name"].get<std::string>();
        it->second.capacity = capacity;
        return {200, tournament_json(*tid)};
    }
    if (method == "DELETE") {
        if (it == tournaments_.end()) return problem(404, "no such tournament");
        if (!it->second.players.empty()) return problem(409, "tournament has players");
        Json out = tournament_json(*tid);
        if (faults_.delete_tournament_random) {
            auto victim = tournaments_.begin();
            std::advance(victim, rng_.uniform(0, static_cast<std::int64_t>(tournaments_.size()) - 1));
            tournaments_.erase(victim);
        } else {
            tournaments_.erase(it);
        }
        return {200, out};
    }
    return kNotAllowed;
}

DemoResponse TournamentsStore::enrolments(const std::string& method, const std::vector<std::string>& seg,
                                          const Json& body, const std::map<std::string, std::string>& query) {
    if (seg.size() == 1) {
        if (method == "GET") {
            std::optional<std::int64_t> pid, tid;
            if (query.count("pid")) pid = parse_id(query.at("pid"));
            if (query.count("tid")) tid = parse_id(query.at("tid"));
            Json out = Json::array();
            for (const auto& [eid, e] : enrolments_) {
                if ((pid && e.pid != *pid) || (tid && e.tid != *tid)) continue;
                out.push_back(enrolment_json(eid, e));
            }
            return {200, out};
        }
        if (method == "POST") {
            if (!int_field(body, "eid") || !int_field(body, "pid") || !int_field(body, "tid")) {
                return problem(400, "malformed enrolment");
            }
            const auto eid = body["eid"].get<std::int64_t>();
            const Enrolment e{body["pid"].get<std::int64_t>(), body["tid"].get<std::int64_t>()};
            if (enrolments_.count(eid)) return problem(409, "enrolment exists");
            const auto p = players_.find(e.pid);
            const auto t = tournaments_.find(e.tid);
            if (p == players_.end() || t == tournaments_.end()) return problem(404, "unknown player or tournament");
            for (const auto& [_, other] : enrolments_) {
                if (other.pid == e.pid && other.tid == e.tid) return problem(409, "player already enrolled");
            }
            if (!faults_.ignore_capacity && static_cast<std::int64_t>(t->second.players.size()) >= t->second.capacity) {
                return problem(422, "tournament is full");
            }
            enrolments_[eid] = e;
            p->second.tournaments.insert(e.tid);
            t->second.players.insert(e.pid);
            return {200, enrolment_json(eid, e)};
        }
        return kNotAllowed;
    }
    const auto eid = parse_id(seg[1]);
    if (!eid || seg.size() > 2) return kNoRoute;
    const auto it = enrolments_.find(*eid);
    if (method == "GET") {
        if (it == enrolments_.end()) return problem(404, "no such enrolment");
        return {200, enrolment_json(*eid, it->second)};
    }
    if (method == "DELETE") {
        if (it == enrolments_.end()) return problem(404, "no such enrolment");
        const Enrolment e = it->second;
        Json out = enrolment_json(*eid, e);
        enrolments_.erase(it);
        if (const auto p = players_.find(e.pid); p != players_.end()) p->second.tournaments.erase(e.tid);
        if (!faults_.delete_enrolment_no_backref) {
            if (const auto t = tournaments_.find(e.tid); t != tournaments_.end()) t->second.players.erase(e.pid);
        }
        return {200, out};
    }
    return kNotAllowed;
}

}  // namespace crudwalk::demo
