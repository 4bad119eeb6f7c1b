// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "crudwalk/error.hpp"
#include "crudwalk/rng.hpp"

namespace crudwalk::demo {

using Json = nlohmann::json;

struct FaultFlags {
    bool delete_player_noop = false;           // deletePlayer answers 200 but keeps the player
    bool delete_tournament_random = false;     // deleteTournament removes a random tournament
    bool delete_enrolment_no_backref = false;  // deleteEnrolment leaves the tournament's players alone
    bool ignore_capacity = false;              // enrolments and updates skip the capacity check

    bool any() const {
        return delete_player_noop || delete_tournament_random || delete_enrolment_no_backref || ignore_capacity;
    }
    /// Comma-separated names: deletePlayerNoop, deleteTournamentRandom,
    /// deleteEnrolmentNoBackref, ignoreCapacity, or "all" for the first three.
    static FaultFlags parse(std::string_view list);
    std::string str() const;
};

struct DemoResponse {
    int status = 200;
    Json body;
};

struct LoggedRequest {
    std::string method;
    std::string path;  // with query string
    std::string body;
    int status = 0;
};

/// The service logic, without transport. Not thread-safe; DemoServer serializes access.
class TournamentsStore {
  public:
    explicit TournamentsStore(FaultFlags faults = {}, std::uint64_t seed = 0);

    /// `target` is the path with an optional query string.
    DemoResponse handle(const std::string& method, const std::string& target, const std::string& body);
    void reset();
    void set_faults(FaultFlags faults) { faults_ = faults; }
    const FaultFlags& faults() const { return faults_; }

  private:
    struct Player {
        std::string name;
        std::set<std::int64_t> tournaments;
    };
    struct Tournament {
        std::string name;
        std::int64_t capacity = 1;
        std::set<std::int64_t> players;
    };
    struct Enrolment {
        std::int64_t pid = 0, tid = 0;
    };

    DemoResponse players(const std::string& method, const std::vector<std::string>& seg, const Json& body);
    DemoResponse tournaments(const std::string& method, const std::vector<std::string>& seg, const Json& body);
    DemoResponse enrolments(const std::string& method, const std::vector<std::string>& seg, const Json& body,
                            const std::map<std::string, std::string>& query);
    Json player_json(std::int64_t pid) const;
    Json tournament_json(std::int64_t tid) const;
    static Json enrolment_json(std::int64_t eid, const Enrolment& e);

    FaultFlags faults_;
    std::uint64_t seed_;
    Rng rng_;
    std::map<std::int64_t, Player> players_;
    std::map<std::int64_t, Tournament> tournaments_;
    std::map<std::int64_t, Enrolment> enrolments_;
};

/// TournamentsStore behind an HTTP listener on a background thread.
class DemoServer {
  public:
    explicit DemoServer(FaultFlags faults = {}, std::uint64_t seed = 0);
    ~DemoServer();
    DemoServer(const DemoServer&) = delete;
    DemoServer& operator=(const DemoServer&) = delete;

    /// Binds and starts serving; port 0 picks a free port. Returns the bound port.
    /// Throws InputError when the port is busy.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    /// Blocks serving on the calling thread until stop() is called from elsewhere.
    void serve_blocking(const std::string& host, int port);
    void stop();

    std::string base_url() const;
    int port() const { return port_; }

    /// Empties the store and the request log.
    void reset();
    void set_faults(FaultFlags faults);
    std::vector<LoggedRequest> log() const;

    /// Same path as an HTTP request, without the network (still logged).
    DemoResponse handle(const std::string& method, const std::string& target, const std::string& body);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    mutable std::mutex mu_;
    TournamentsStore store_;
    std::vector<LoggedRequest> log_;
    std::string host_ = "127.0.0.1";
    int port_ = 0;
    std::thread thread_;
};

}  // namespace crudwalk::demo
