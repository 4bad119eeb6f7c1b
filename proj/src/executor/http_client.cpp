// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>

#include "crudwalk/executor/executor.hpp"

namespace crudwalk::executor {

struct HttpClient::Impl {
    explicit Impl(const std::string& url) : client(url) {}
    httplib::Client client;
};

HttpClient::HttpClient(const std::string& base_url, std::chrono::milliseconds timeout)
    : base_url_(base_url) {
    while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
    impl_ = std::make_unique<Impl>(base_url_);
    if (!impl_->client.is_valid()) throw InputError("invalid base URL: " + base_url);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    impl_->client.set_connection_timeout(secs.count(), usecs.count());
    impl_->client.set_read_timeout(secs.count(), usecs.count());
    impl_->client.set_write_timeout(secs.count(), usecs.count());
    impl_->client.set_keep_alive(true);
    impl_->client.set_tcp_nodelay(true);
}

HttpClient::~HttpClient() = default;

runtime::HttpResponse HttpClient::request(const std::string& method, const std::string& path,
                                          const std::optional<Json>& body) {
    auto& c = impl_->client;
    const std::string payload = body ? body->dump() : std::string();
    const char* type = "application/json";
    const auto t0 = std::chrono::steady_clock::now();
    httplib::Result res;
    if (method == "GET") {
        res = c.Get(path);
    } else if (method == "POST") {
        res = c.Post(path, payload, type);
    } else if (method == "PUT") {
        res = c.Put(path, payload, type);
    } else if (method == "PATCH") {
        res = c.Patch(path, payload, type);
    } else if (method == "DELETE") {
        res = body ? c.Delete(path, payload, type) : c.Delete(path);
    } else {
        throw InputError("unsupported HTTP method " + method);
    }
    const auto t1 = std::chrono::steady_clock::now();
    if (!res) {
        throw runtime::TransportError(method + " " + base_url_ + path + ": " + httplib::to_string(res.error()));
    }
    runtime::HttpResponse out;
    out.status = res->status;
    out.raw = res->body;
    out.latency_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (!out.raw.empty()) {
        out.body = Json::parse(out.raw, nullptr, false);
        out.json_body = !out.body.is_discarded();
        if (!out.json_body) out.body = nullptr;
    }
    return out;
}

}  // namespace crudwalk::executor
