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

#include "qliar/service.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <httplib.h>

namespace qliar::service {

namespace fs = std::filesystem;
using nlohmann::json;
using sim::Action;
using sim::ScheduleEvent;

struct Service::StoredSystem {
    std::string id;
    std::string name;
    std::string source;
    json summary;
    sim::LiarModel model;
};

struct Service::Session {
    std::mutex mutex;
    std::string id;
    std::shared_ptr<const StoredSystem> system;
    std::unique_ptr<sim::TrajectoryRunner> runner;
};

namespace {

/// Carries an HTTP status through the handlers.
struct HttpError {
    int status;
    std::string kind;
    std::string message;
    json extra = json::object();
};

Response error_response(const HttpError &e) {
    json err{{"kind", e.kind}, {"message", e.message}};
    for (const auto &[k, v] : e.extra.items()) {
        err[k] = v;
    }
    return {e.status, {{"error", std::move(err)}}};
}

json parse_body(const std::string &body) {
    if (body.empty()) {
        return json::object();
    }
    try {
        json j = json::parse(body);
        if (!j.is_object()) {
            throw HttpError{400, "bad_request", "request body must be a JSON object"};
        }
        return j;
    } catch (const json::parse_error &e) {
        throw HttpError{400, "bad_request", std::string("malformed JSON body: ") + e.what()};
    }
}

const char *parse_error_kind(ParseError::Kind k) {
    switch (k) {
    case ParseError::Kind::Syntax:
        return "syntax";
    case ParseError::Kind::DanglingReference:
        return "dangling_reference";
    case ParseError::Kind::DuplicateIndex:
        return "duplicate_index";
    case ParseError::Kind::NonContiguous:
        break;
    }
    return "non_contiguous";
}

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

double parse_number(const std::string &text, const char *name) {
    char *end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
        throw HttpError{400, "bad_request", std::string("query parameter '") + name + "' must be a finite number"};
    }
    return v;
}

std::size_t parse_count(const std::string &text, const char *name) {
    const double v = parse_number(text, name);
    if (v < 0 || v != std::floor(v) || v > 1e15) {
        throw HttpError{400, "bad_request", std::string("query parameter '") + name + "' must be a whole number"};
    }
    return static_cast<std::size_t>(v);
}

json outcome_json(const sim::TrajectoryEvent &e) {
    return {{"sentence", e.command.sentence},
            {"value", core::to_string(*e.outcome)},
            {"probability", e.probability}};
}

} // namespace

json state_summary(const sim::StateVector &state, const sim::LiarModel &model, double sim_time) {
    json probabilities = json::array();
    for (std::size_t k = 1; k <= model.sentences(); ++k) {
        const auto w = sim::born_weights(state, model.frame(), k);
        probabilities.push_back({{"sentence", k}, {"p_true", w.p_true}, {"p_false", w.p_false}, {"p_latent", w.p_latent}});
    }

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (std::abs(state[i]) > 1e-12) {
            order.push_back(i);
        }
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(state[a]) > std::abs(state[b]); });
    if (order.size() > 8) {
        order.resize(8);
    }
    json top = json::array();
    for (std::size_t i : order) {
        top.push_back({{"index", i + 1},
                       {"label", state.labels()[i]},
                       {"re", state[i].real()},
                       {"im", state[i].imag()},
                       {"magnitude", std::abs(state[i])},
                       {"phase", std::arg(state[i])}});
    }
    return {{"probabilities", std::move(probabilities)}, {"top_amplitudes", std::move(top)}, {"sim_time", sim_time}};
}

std::string random_id() {
    static thread_local std::random_device rd;
    std::uint64_t hi = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::uint64_t lo = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(hi),
                  static_cast<unsigned long long>(lo));
    return buf;
}

bool valid_id(const std::string &id) {
    return id.size() == 32 && std::all_of(id.begin(), id.end(), [](char c) {
               return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
           });
}

void write_atomic(const fs::path &path, const std::string &text) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp-" + random_id();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error("cannot write " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

Service::Service(ServiceConfig config) : config_(std::move(config)) {
    fs::create_directories(config_.data_dir / "systems");
    fs::create_directories(config_.data_dir / "sessions");
}

Service::~Service() = default;

void Service::evict_all() {
    std::lock_guard lock(cache_mutex_);
    systems_.clear();
    sessions_.clear();
}

std::shared_ptr<const Service::StoredSystem> Service::find_system(const std::string &id) {
    if (!valid_id(id)) {
        throw HttpError{404, "not_found", "unknown system " + id};
    }
    std::lock_guard lock(cache_mutex_);
    if (auto it = systems_.find(id); it != systems_.end()) {
        return it->second;
    }
    const fs::path path = config_.data_dir / "systems" / (id + ".json");
    if (!fs::exists(path)) {
        throw HttpError{404, "not_found", "unknown system " + id};
    }
    const json j = json::parse(read_file(path));
    const std::string name = j.at("name").get<std::string>();
    const std::string source = j.at("source").get<std::string>();
    auto model = graph::compile(graph::parse_system(source, name));
    json summary = model.summary();
    if (summary != j.at("summary")) {
        throw Error("stored system " + id + " no longer compiles to its recorded summary");
    }
    auto stored = std::make_shared<const StoredSystem>(StoredSystem{id, name, source, std::move(summary), std::move(model)});
    systems_[id] = stored;
    return stored;
}

std::shared_ptr<Service::Session> Service::find_session(const std::string &id) {
    if (!valid_id(id)) {
        throw HttpError{404, "not_found", "unknown session " + id};
    }
    {
        std::lock_guard lock(cache_mutex_);
        if (auto it = sessions_.find(id); it != sessions_.end()) {
            return it->second;
        }
    }
    const fs::path path = config_.data_dir / "sessions" / (id + ".json");
    if (!fs::exists(path)) {
        throw HttpError{404, "not_found", "unknown session " + id};
    }
    const json j = json::parse(read_file(path));
    auto session = std::make_shared<Session>();
    session->id = id;
    session->system = find_system(j.at("system_id").get<std::string>());
    const auto seed = j.at("seed").get<std::uint64_t>();
    const auto orbit = j.at("orbit").get<std::size_t>();
    session->runner = std::make_unique<sim::TrajectoryRunner>(session->system->model, seed, orbit);

    // Re-run every recorded command; the log must reproduce itself exactly.
    std::vector<sim::TrajectoryEvent> recorded;
    for (const auto &e : j.at("events")) {
        recorded.push_back(sim::trajectory_event_from_json(e));
    }
    for (const auto &e : recorded) {
        const auto &again = session->runner->apply(e.command);
        if (!(again == e)) {
            throw Error("session " + id + ": event " + std::to_string(e.index) + " does not replay");
        }
    }
    const auto rebuilt = sim::replay(session->system->model, recorded, orbit);
    if (linalg::max_abs_diff(rebuilt, session->runner->state()) > 1e-10) {
        throw Error("session " + id + ": outcome replay diverges from the seeded run");
    }

    std::lock_guard lock(cache_mutex_);
    auto [it, inserted] = sessions_.emplace(id, session);
    return it->second;
}

void Service::persist(const Session &s) const {
    const auto &r = *s.runner;
    json events = json::array();
    for (const auto &e : r.events()) {
        events.push_back(sim::to_json(e));
    }
    const json j{{"session_id", s.id},
                 {"system_id", s.system->id},
                 {"seed", r.rng().seed()},
                 {"rng_algorithm", sim::Rng::kAlgorithm},
                 {"orbit", r.orbit()},
                 {"events", std::move(events)}};
    write_atomic(config_.data_dir / "sessions" / (s.id + ".json"), j.dump(2));
}

namespace {

template <class F> Response guarded(F &&f) {
    try {
        return f();
    } catch (const HttpError &e) {
        return error_response(e);
    } catch (const ImpossibleHypothesisError &e) {
        return error_response({409, "impossible_hypothesis", e.what()});
    } catch (const ArgumentError &e) {
        return error_response({400, "bad_request", e.what()});
    } catch (const std::exception &e) {
        return error_response({500, "internal", e.what()});
    }
}

} // namespace

Response Service::create_system(const std::string &body) {
    return guarded([&]() -> Response {
        const json req = parse_body(body);
        if (!req.contains("source") || !req["source"].is_string()) {
            throw HttpError{400, "bad_request", "body needs a string \"source\""};
        }
        std::string name = "system";
        if (req.contains("name")) {
            if (!req["name"].is_string()) {
                throw HttpError{400, "bad_request", "\"name\" must be a string"};
            }
            name = req["name"].get<std::string>();
        }
        const std::string source = req["source"].get<std::string>();
        std::optional<sim::LiarModel> model;
        try {
            model.emplace(graph::compile(graph::parse_system(source, name)));
        } catch (const ParseError &e) {
            throw HttpError{422, parse_error_kind(e.kind()), e.what(),
                            {{"line", e.line()}, {"column", e.column()}, {"token", e.token()}}};
        } catch (const TopologyError &e) {
            throw HttpError{422, "unsupported_topology", e.what()};
        } catch (const CapacityError &e) {
            throw HttpError{422, "capacity", e.what()};
        }
        const std::string id = random_id();
        json summary = model->summary();
        write_atomic(config_.data_dir / "systems" / (id + ".json"),
                     json{{"system_id", id}, {"name", name}, {"source", source}, {"summary", summary}}.dump(2));
        {
            std::lock_guard lock(cache_mutex_);
            systems_[id] = std::make_shared<const StoredSystem>(StoredSystem{id, name, source, summary, std::move(*model)});
        }
        return {201, {{"system_id", id}, {"summary", std::move(summary)}}};
    });
}

Response Service::get_system(const std::string &id) {
    return guarded([&]() -> Response {
        const auto s = find_system(id);
        return {200, {{"system_id", s->id}, {"name", s->name}, {"summary", s->summary}, {"source", s->source}}};
    });
}

Response Service::create_session(const std::string &system_id, const std::string &body) {
    return guarded([&]() -> Response {
        const json req = parse_body(body);
        const auto system = find_system(system_id);
        std::uint64_t seed = 0;
        if (req.contains("seed")) {
            if (!req["seed"].is_number_unsigned()) {
                throw HttpError{400, "bad_request", "\"seed\" must be a non-negative integer"};
            }
            seed = req["seed"].get<std::uint64_t>();
        } else {
            std::random_device rd;
            seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        }
        std::size_t orbit = 0;
        if (req.contains("orbit")) {
            if (!req["orbit"].is_number_unsigned()) {
                throw HttpError{400, "bad_request", "\"orbit\" must be a non-negative integer"};
            }
            orbit = req["orbit"].get<std::size_t>();
            if (orbit >= system->model.orbits().size()) {
                throw HttpError{400, "bad_request",
                                "orbit " + std::to_string(orbit) + " out of range; system has " +
                                    std::to_string(system->model.orbits().size())};
            }
        }
        auto session = std::make_shared<Session>();
        session->id = random_id();
        session->system = system;
        session->runner = std::make_unique<sim::TrajectoryRunner>(system->model, seed, orbit);
        persist(*session);
        {
            std::lock_guard lock(cache_mutex_);
            sessions_[session->id] = session;
        }
        const auto &r = *session->runner;
        return {201,
                {{"session_id", session->id},
                 {"system_id", system->id},
                 {"seed", seed},
                 {"orbit", orbit},
                 {"sim_time", r.sim_time()},
                 {"state", state_summary(r.state(), system->model, r.sim_time())}}};
    });
}

Response Service::get_session(const std::string &id) {
    return guarded([&]() -> Response {
        const auto s = find_session(id);
        std::lock_guard lock(s->mutex);
        const auto &r = *s->runner;
        return {200,
                {{"session_id", s->id},
                 {"system_id", s->system->id},
                 {"seed", r.rng().seed()},
                 {"orbit", r.orbit()},
                 {"event_count", r.events().size()},
                 {"sim_time", r.sim_time()},
                 {"state", state_summary(r.state(), s->system->model, r.sim_time())}}};
    });
}

Response Service::command(const std::string &id, const ScheduleEvent &event) {
    const auto s = find_session(id);
    std::lock_guard lock(s->mutex);
    const sim::TrajectoryEvent applied = s->runner->apply(event);
    try {
        persist(*s);
    } catch (...) {
        // The on-disk log is the source of truth; drop the unsaved state.
        std::lock_guard cache_lock(cache_mutex_);
        sessions_.erase(id);
        throw;
    }
    const auto &r = *s->runner;
    json out{{"event", sim::to_json(applied)},
             {"sim_time", r.sim_time()},
             {"state", state_summary(r.state(), s->system->model, r.sim_time())}};
    if (applied.outcome) {
        out["outcome"] = outcome_json(applied);
    }
    return {200, std::move(out)};
}

Response Service::measure(const std::string &id, const std::string &body) {
    return guarded([&]() -> Response {
        const json req = parse_body(body);
        if (!req.contains("sentence") || !req["sentence"].is_number_unsigned()) {
            throw HttpError{400, "bad_request", "body needs a positive integer \"sentence\""};
        }
        if (!req.contains("mode") || !req["mode"].is_string()) {
            throw HttpError{400, "bad_request", "body needs \"mode\": sample, hypothesize_true or hypothesize_false"};
        }
        ScheduleEvent e;
        e.sentence = req["sentence"].get<std::size_t>();
        const std::string mode = req["mode"].get<std::string>();
        if (mode == "sample") {
            e.action = Action::Sample;
        } else if (mode == "hypothesize_true" || mode == "hypothesize_false") {
            e.action = Action::Hypothesize;
            e.value = mode == "hypothesize_true";
        } else {
            throw HttpError{400, "bad_request", "unknown mode \"" + mode + "\""};
        }
        return command(id, e);
    });
}

Response Service::evolve(const std::string &id, const std::string &body) {
    return guarded([&]() -> Response {
        const json req = parse_body(body);
        if (!req.contains("dt") || !req["dt"].is_number()) {
            throw HttpError{400, "bad_request", "body needs a numeric \"dt\""};
        }
        ScheduleEvent e;
        e.action = Action::Evolve;
        e.dt = req["dt"].get<double>();
        return command(id, e);
    });
}

Response Service::reset(const std::string &id) {
    return guarded([&]() -> Response {
        ScheduleEvent e;
        e.action = Action::Reset;
        return command(id, e);
    });
}

Response Service::series(const std::string &id, const std::optional<std::string> &sentence,
                         const std::optional<std::string> &from, const std::optional<std::string> &to,
                         const std::optional<std::string> &steps) {
    return guarded([&]() -> Response {
        const auto s = find_session(id);
        if (!sentence) {
            throw HttpError{400, "bad_request", "query parameter 'sentence' is required"};
        }
        const std::size_t k = parse_count(*sentence, "sentence");
        std::lock_guard lock(s->mutex);
        const auto &r = *s->runner;
        const double t0 = from ? parse_number(*from, "from") : r.sim_time();
        const double t1 = to ? parse_number(*to, "to") : t0 + 2.0 * std::numbers::pi;
        const std::size_t n = steps ? parse_count(*steps, "steps") : 128;
        if (n > config_.max_series_steps) {
            throw HttpError{400, "bad_request", "steps exceeds " + std::to_string(config_.max_series_steps)};
        }
        auto series = sim::probability_series(r.state(), s->system->model, k, t0, t1, n, r.sim_time());
        json out = series.to_json();
        out["sim_time"] = r.sim_time();
        return {200, std::move(out)};
    });
}

Response Service::history(const std::string &id) {
    return guarded([&]() -> Response {
        const auto s = find_session(id);
        std::lock_guard lock(s->mutex);
        const auto &r = *s->runner;
        json events = json::array();
        for (const auto &e : r.events()) {
            events.push_back(sim::to_json(e));
        }
        return {200,
                {{"session_id", s->id},
                 {"rng", {{"algorithm", sim::Rng::kAlgorithm}, {"seed", r.rng().seed()}}},
                 {"orbit", r.orbit()},
                 {"sim_time", r.sim_time()},
                 {"events", std::move(events)}}};
    });
}

void Service::mount(httplib::Server &server) {
    auto reply = [](httplib::Response &res, const Response &r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    auto param = [](const httplib::Request &req, const char *name) -> std::optional<std::string> {
        if (!req.has_param(name)) {
            return std::nullopt;
        }
        return req.get_param_value(name);
    };

    const std::string origin = config_.cors_origin;
    server.set_default_headers({{"Access-Control-Allow-Origin", origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(/api/.*)", [](const httplib::Request &, httplib::Response &res) { res.status = 204; });

    server.Post("/api/systems", [=, this](const httplib::Request &req, httplib::Response &res) {
        reply(res, create_system(req.body));
    });
    server.Get(R"(/api/systems/([^/]+))", [=, this](const httplib::Request &req, httplib::Response &res) {
        reply(res, get_system(req.matches[1]));
    });
    server.Post(R"(/api/systems/([^/]+)/sessions)", [=, this](const httplib::Request &req, httplib::Response &res) {
        reply(res, create_session(req.matches[1], req.body));
    });
    server.Get(R"(/api/sessions/([^/]+))", [=, this](const httplib::Request &req, httplib::Response &res) {
        reply(res, get_session(req.matches[1]));
    });
    server.Post(R"(/api/sessions/([^/]+)/measure)", [=, this](const httplib::Request &req, httplib::Response &res) {
        reply(res, measure(req.matches[1], req.body));
    });
    server.Post(R"(/api/sessions/([^/]+)/evolve)", [=, this](const httplib::Request &req, httplib::Response &res) {
        reply(res, evolve(req.matches[1], req.body));
    });
    server.Get(R"(/api/sessions/([^/]+)/series)", [=, this](const httplib::Request &req, httplib::Response &res) {
        reply(res, series(req.matches[1], param(req, "sentence"), param(req, "from"), param(req, "to"),
                          param(req, "steps")));
    });
    server.Post(R"(/api/sessions/([^/]+)/reset)", [=, this](const httplib::Request &req, httplib::Response &res) {
        reply(res, reset(req.matches[1]));
    });
    server.Get(R"(/api/sessions/([^/]+)/history)", [=, this](const httplib::Request &req, httplib::Response &res) {
        reply(res, history(req.matches[1]));
    });
    server.set_error_handler([reply](const httplib::Request &, httplib::Response &res) {
        if (res.body.empty()) {
            const std::string kind = res.status == 404 ? "not_found" : "http_error";
            reply(res, error_response({res.status, kind, "no route for this request"}));
        }
    });
}

HttpServer::HttpServer(ServiceConfig config)
    : service_(std::make_unique<Service>(std::move(config))), server_(std::make_unique<httplib::Server>()) {
    service_->mount(*server_);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string &host, int port) {
    if (port == 0) {
        port_ = server_->bind_to_any_port(host);
    } else {
        port_ = server_->bind_to_port(host, port) ? port : -1;
    }
    if (port_ < 0) {
        throw Error("cannot bind " + host + ":" + std::to_string(port));
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

bool HttpServer::listen(const std::string &host, int port) {
    port_ = port;
    return server_->listen(host, port);
}

void HttpServer::stop() {
    if (server_) {
        server_->stop();
    }
    if (thread_.joinable()) {
        thread_.join();
    }
}

} // namespace qliar::service
