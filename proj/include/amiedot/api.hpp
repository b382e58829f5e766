#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "amiedot/analytics.hpp"
#include "amiedot/config.hpp"
#include "amiedot/report.hpp"
#include "amiedot/store.hpp"

namespace amiedot {

enum class RecordKind { user, document, event };

/// Maps an error code onto the service's status codes: 400 validation,
/// 404 unknown entity, 409 duplicate or lending overlap, 500 I/O.
int http_status(ErrorCode code);

/// Parses every nonblank line before anything is written. With a kind, lines
/// are bare records of that kind; without one they are {"kind","body"} log
/// records. Throws malformed-request (or the decoder's error) naming the line.
std::vector<std::pair<std::size_t, LogRecord>> parse_records(std::string_view text,
                                                             std::optional<RecordKind> kind);

/// Parses then applies a JSON-Lines batch. Parse failures write nothing.
ImportReport import_records(Store& store, std::string_view text, std::optional<RecordKind> kind,
                            bool strict_lending);

struct ApiRequest {
  std::string method;
  std::string path;
  Params params;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  Json body;
};

/// Transport-independent request handling for the HTTP service.
class Api {
 public:
  Api(Store& store, bool strict_lending, Stopwords stopwords = Stopwords::builtin());

  ApiResponse handle(const ApiRequest& request) const;

 private:
  ApiResponse post(RecordKind kind, const std::string& body) const;
  ApiResponse get(const std::string& path, const Params& params) const;

  Store& store_;
  bool strict_lending_;
  Stopwords stopwords_;
};

/// HTTP/1.1 front end over an Api.
class HttpService {
 public:
  explicit HttpService(const Api& api);
  ~HttpService();

  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Returns false if the address cannot be bound.
  bool bind(const std::string& host, int port);
  /// Binds an ephemeral port and returns it, or -1.
  int bind_any_port(const std::string& host);
  /// Blocks until stop().
  bool run();
  void stop();
  bool running() const;
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace amiedot
