// Copyright 2026 The qliar Authors
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

#pragma once

/**
 * @file
 * HTTP session service. Systems and sessions persist as JSON files under a
 * data directory; session state is never stored, only the event log, and is
 * rebuilt by replaying the log on load.
 *
 *   POST /api/systems                      {name, source}
 *   GET  /api/systems/{id}
 *   POST /api/systems/{id}/sessions        {seed?, orbit?}
 *   GET  /api/sessions/{id}
 *   POST /api/sessions/{id}/measure        {sentence, mode}
 *   POST /api/sessions/{id}/evolve         {dt}
 *   GET  /api/sessions/{id}/series?sentence=&from=&to=&steps=
 *   POST /api/sessions/{id}/reset
 *   GET  /api/sessions/{id}/history
 */

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "qliar/measurement.hpp"

namespace httplib {
class Server;
}

namespace qliar::service {

struct ServiceConfig {
    std::filesystem::path data_dir = "data";
    /// Value of Access-Control-Allow-Origin.
    std::string cors_origin = "*";
    std::size_t max_series_steps = 100000;
};

struct Response {
    int status = 200;
    nlohmann::json body;
};

/// Per-sentence Born weights and the eight largest amplitudes.
nlohmann::json state_summary(const sim::StateVector &state, const sim::LiarModel &model, double sim_time);

/// 32 lowercase hex digits from a 128-bit random value.
std::string random_id();
bool valid_id(const std::string &id);

/// Writes `text` to a temporary sibling then renames it over `path`.
void write_atomic(const std::filesystem::path &path, const std::string &text);

class Service {
  public:
    explicit Service(ServiceConfig config);
    ~Service();

    Service(const Service &) = delete;
    Service &operator=(const Service &) = delete;

    [[nodiscard]] const ServiceConfig &config() const noexcept { return config_; }

    Response create_system(const std::string &body);
    Response get_system(const std::string &id);
    Response create_session(const std::string &system_id, const std::string &body);
    Response get_session(const std::string &id);
    Response measure(const std::string &id, const std::string &body);
    Response evolve(const std::string &id, const std::string &body);
    /// Missing parameters are empty optionals; values are parsed here.
    Response series(const std::string &id, const std::optional<std::string> &sentence,
                    const std::optional<std::string> &from, const std::optional<std::string> &to,
                    const std::optional<std::string> &steps);
    Response reset(const std::string &id);
    Response history(const std::string &id);

    /// Registers every route (and CORS handling) on `server`.
    void mount(httplib::Server &server);

    /// Drops cached sessions and systems so the next access reloads from disk.
    void evict_all();

  private:
    struct StoredSystem;
    struct Session;

    std::shared_ptr<const StoredSystem> find_system(const std::string &id);
    std::shared_ptr<Session> find_session(const std::string &id);
    Response command(const std::string &id, const sim::ScheduleEvent &event);
    void persist(const Session &s) const;

    ServiceConfig config_;
    std::mutex cache_mutex_;
    std::map<std::string, std::shared_ptr<const StoredSystem>> systems_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Runs a Service behind cpp-httplib on a background thread.
class HttpServer {
  public:
    explicit HttpServer(ServiceConfig config);
    ~HttpServer();

    HttpServer(const HttpServer &) = delete;
    HttpServer &operator=(const HttpServer &) = delete;

    /// Binds and starts serving; port 0 picks a free port. Returns the port.
    int start(const std::string &host, int port);
    /// Blocks serving on the calling thread.
    bool listen(const std::string &host, int port);
    void stop();

    [[nodiscard]] int port() const noexcept { return port_; }
    [[nodiscard]] Service &service() noexcept { return *service_; }

  private:
    std::unique_ptr<Service> service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
};

} // namespace qliar::service
