// Copyright 2026 The FactScout Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The /v1 HTTP API over an opened repository. Requests are routed through
// ApiService::handle, which the socket server and the tests share.
// Ingestion and refinements take the writer lock; searches and reads share
// the reader lock.

#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <string>

#include "factscout/repository.h"

namespace httplib {
class Server;
}

namespace factscout {

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

struct ApiRequest {
  std::string method;
  std::string path;
  std::multimap<std::string, std::string> params;
  std::string body;
  std::map<std::string, std::string> headers;  // lower-case names
};

int http_status_for(ErrorCode code);

class ApiService {
 public:
  explicit ApiService(Repository repo);
  ~ApiService();

  ApiResponse handle(const ApiRequest &request);

  // Blocks until stop(). Returns false when the address cannot be bound.
  bool serve(const std::string &host, int port,
             const std::string &cors_origin = "*");
  // Binds to an ephemeral port and returns it, or -1.
  int bind_any_port(const std::string &host, const std::string &cors_origin = "*");
  void listen_after_bind();
  void stop();

 private:
  ApiResponse post_sources(const ApiRequest &r);
  ApiResponse get_search(const ApiRequest &r);
  ApiResponse post_refinements(const ApiRequest &r);
  ApiResponse get_indicators(const ApiRequest &r);
  ApiResponse get_report(const ApiRequest &r);
  void install_routes(const std::string &cors_origin);

  std::shared_mutex mu_;
  Repository repo_;
  index::Index index_;
  std::unique_ptr<query::Ledger> ledger_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace factscout
