// Copyright 2026 The crudwalk Authors
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>

#include "crudwalk/demo/demo.hpp"

namespace crudwalk::demo {

struct DemoServer::Impl {
    httplib::Server server;
};

DemoServer::DemoServer(FaultFlags faults, std::uint64_t seed)
    : impl_(std::make_unique<Impl>()), store_(faults, seed) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        const auto out = handle(req.method, req.target.empty() ? req.path : req.target, req.body);
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json");
    };
    auto& s = impl_->server;
    s.Get(".*", handler);
    s.Post(".*", handler);
    s.Put(".*", handler);
    s.Delete(".*", handler);
    s.Patch(".*", handler);
    s.set_keep_alive_max_count(1000);
    s.set_tcp_nodelay(true);
    // httplib's default adds SO_REUSEPORT, which would let two demos share a port
    s.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
}

DemoServer::~DemoServer() { stop(); }

int DemoServer::start(const std::string& host, int port) {
    if (thread_.joinable()) throw InternalError("demo server already started");
    auto& s = impl_->server;
    host_ = host;
    if (port == 0) {
        port_ = s.bind_to_any_port(host);
    } else {
        port_ = s.bind_to_port(host, port) ? port : -1;
    }
    if (port_ <= 0) throw InputError("cannot bind " + host + ":" + std::to_string(port) + " (port busy?)");
    thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
    s.wait_until_ready();
    return port_;
}

void DemoServer::serve_blocking(const std::string& host, int port) {
    auto& s = impl_->server;
    host_ = host;
    if (!s.bind_to_port(host, port)) throw InputError("cannot bind " + host + ":" + std::to_string(port) + " (port busy?)");
    port_ = port;
    s.listen_after_bind();
}

void DemoServer::stop() {
    impl_->server.stop();
    if (thread_.joinable()) thread_.join();
}

std::string DemoServer::base_url() const { return "http://" + host_ + ":" + std::to_string(port_); }

void DemoServer::reset() {
    std::lock_guard lock(mu_);
    store_.reset();
    log_.clear();
}

void DemoServer::set_faults(FaultFlags faults) {
    std::lock_guard lock(mu_);
    store_.set_faults(faults);
}

std::vector<LoggedRequest> DemoServer::log() const {
    std::lock_guard lock(mu_);
    return log_;
}

DemoResponse DemoServer::handle(const std::string& method, const std::string& target, const std::string& body) {
    std::lock_guard lock(mu_);
    auto out = store_.handle(method, target, body);
    log_.push_back({method, target, body, out.status});
    return out;
}

}  // namespace crudwalk::demo
