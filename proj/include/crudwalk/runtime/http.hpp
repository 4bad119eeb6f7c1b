// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "crudwalk/error.hpp"

namespace crudwalk::runtime {

using Json = nlohmann::json;

struct HttpResponse {
    int status = 0;
    Json body;             // null when the body is empty or not JSON
    bool json_body = false;
    std::string raw;
    double latency_ms = 0;
};

/// Connection refused, timeout and the like; never an HTTP status.
class TransportError : public Error {
  public:
    using Error::Error;
};

/// Read-only access to the service, used for oracle evaluation and snapshots.
class Fetcher {
  public:
    virtual ~Fetcher() = default;
    /// `path` is relative to the service root, e.g. "/players/3". Throws TransportError.
    virtual HttpResponse get(const std::string& path) = 0;
};

}  // namespace crudwalk::runtime
