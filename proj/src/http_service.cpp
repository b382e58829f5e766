#include <httplib.h>

#include "amiedot/api.hpp"

namespace amiedot {

struct HttpService::Impl {
  const Api& api;
  httplib::Server server;

  explicit Impl(const Api& a) : api(a) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      ApiRequest request;
      request.method = req.method;
      request.path = req.path;
      for (const auto& [key, value] : req.params) request.params.emplace(key, value);
      request.body = req.body;
      const auto response = api.handle(request);
      res.status = response.status;
      res.set_content(response.body.dump(), "application/json");
    };
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Put(".*", handler);
    server.Delete(".*", handler);
    server.Patch(".*", handler);
  }
};

HttpService::HttpService(const Api& api) : impl_(std::make_unique<Impl>(api)) {}

HttpService::~HttpService() { stop(); }

bool HttpService::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }

int HttpService::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpService::run() { return impl_->server.listen_after_bind(); }

void HttpService::stop() {
  if (impl_) impl_->server.stop();
}

bool HttpService::running() const { return impl_->server.is_running(); }

void HttpService::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace amiedot
