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

#include "qliar/measurement.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace qliar::sim {

double BornWeights::of(TruthValue v) const noexcept {
    switch (v) {
    case TruthValue::True:
        return p_true;
    case TruthValue::False:
        return p_false;
    case TruthValue::Latent:
        break;
    }
    return p_latent;
}

BornWeights born_weights(const StateVector &state, const TruthFrame &frame, std::size_t sentence) {
    return {frame.weight(state, sentence, TruthValue::True), frame.weight(state, sentence, TruthValue::False),
            frame.weight(state, sentence, TruthValue::Latent)};
}

namespace {

MeasurementOutcome collapse(const StateVector &state, const TruthFrame &frame, std::size_t sentence,
                            TruthValue value) {
    StateVector projected = frame.project(state, sentence, value);
    const double w = projected.norm_squared();
    if (w <= kImpossibleWeight) {
        throw ImpossibleHypothesisError("sentence " + std::to_string(sentence) + " cannot be " +
                                        core::to_string(value) + " in the current state (weight " +
                                        std::to_string(w) + ")");
    }
    projected *= 1.0 / std::sqrt(w);
    return {sentence, value, w, std::move(projected)};
}

TruthValue to_value(bool v) { return v ? TruthValue::True : TruthValue::False; }

} // namespace

MeasurementOutcome hypothesize(const StateVector &state, const TruthFrame &frame, std::size_t sentence,
                               bool value) {
    return collapse(state, frame, sentence, to_value(value));
}

MeasurementOutcome hypothesize(const StateVector &state, const LiarModel &model, std::size_t sentence,
                               bool value) {
    return hypothesize(state, model.frame(), sentence, value);
}

Rng::Rng(std::uint64_t seed, std::uint64_t skip) : engine_(seed), seed_(seed), draws_(skip) { engine_.discard(skip); }

double Rng::uniform() {
    ++draws_;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

MeasurementOutcome sample_measure(const StateVector &state, const TruthFrame &frame, std::size_t sentence,
                                  Rng &rng) {
    const BornWeights w = born_weights(state, frame, sentence);
    const std::array<TruthValue, 3> order{TruthValue::True, TruthValue::False, TruthValue::Latent};
    const double u = rng.uniform() * w.total();
    double cumulative = 0.0;
    std::optional<TruthValue> drawn;
    std::optional<TruthValue> last_possible;
    for (TruthValue v : order) {
        const double p = w.of(v);
        if (p <= kImpossibleWeight) {
            continue;
        }
        last_possible = v;
        cumulative += p;
        if (!drawn && u < cumulative) {
            drawn = v;
        }
    }
    if (!last_possible) {
        throw NormalizationError("sample_measure: state has no weight on sentence " + std::to_string(sentence));
    }
    // Rounding can leave u just past the final cumulative sum.
    return collapse(state, frame, sentence, drawn.value_or(*last_possible));
}

MeasurementOutcome sample_measure(const StateVector &state, const LiarModel &model, std::size_t sentence,
                                  Rng &rng) {
    return sample_measure(state, model.frame(), sentence, rng);
}

StateVector evolve_state(const StateVector &state, const LiarModel &model, double dt) {
    if (!std::isfinite(dt)) {
        throw ArgumentError("evolve: dt must be finite");
    }
    return linalg::evolve(model.hamiltonian(), dt, state);
}

namespace {

std::string full_precision(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

void ProbabilitySeries::write_csv(std::ostream &out) const {
    out << "t,sentence,p_true,p_false,p_latent\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        out << full_precision(times[i]) << ',' << sentence << ',' << full_precision(p_true[i]) << ','
            << full_precision(p_false[i]) << ',' << full_precision(p_latent[i]) << '\n';
    }
}

std::string ProbabilitySeries::to_csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
}

nlohmann::json ProbabilitySeries::to_json() const {
    return {{"sentence", sentence}, {"times", times}, {"p_true", p_true}, {"p_false", p_false}, {"p_latent", p_latent}};
}

ProbabilitySeries probability_series(const StateVector &state, const LiarModel &model, std::size_t sentence,
                                     double t0, double t1, std::size_t steps, double origin) {
    if (steps < 2) {
        throw ArgumentError("probability_series: steps must be at least 2");
    }
    if (!(t0 < t1) || !std::isfinite(t0) || !std::isfinite(t1) || !std::isfinite(origin)) {
        throw ArgumentError("probability_series: need finite t0 < t1");
    }
    if (sentence < 1 || sentence > model.sentences()) {
        throw ArgumentError("probability_series: sentence " + std::to_string(sentence) + " out of range");
    }
    ProbabilitySeries s;
    s.sentence = sentence;
    const double h = (t1 - t0) / static_cast<double>(steps - 1);
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = i + 1 == steps ? t1 : t0 + h * static_cast<double>(i);
        const BornWeights w = born_weights(evolve_state(state, model, t - origin), model.frame(), sentence);
        s.times.push_back(t);
        s.p_true.push_back(w.p_true);
        s.p_false.push_back(w.p_false);
        s.p_latent.push_back(w.p_latent);
    }
    return s;
}

const char *to_string(Action a) noexcept {
    switch (a) {
    case Action::Hypothesize:
        return "hypothesize";
    case Action::Sample:
        return "sample";
    case Action::Evolve:
        return "evolve";
    case Action::Reset:
        break;
    }
    return "reset";
}

namespace {

template <class T> T field(const nlohmann::json &j, const char *key, const char *what) {
    if (!j.contains(key)) {
        throw ArgumentError(std::string(what) + " needs \"" + key + "\"");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &) {
        throw ArgumentError(std::string(what) + ": \"" + key + "\" has the wrong type");
    }
}

std::size_t sentence_field(const nlohmann::json &j, const char *what) {
    if (!j.contains("sentence") || !j.at("sentence").is_number_integer() || j.at("sentence").get<long long>() < 1) {
        throw ArgumentError(std::string(what) + " needs a positive integer \"sentence\"");
    }
    return j.at("sentence").get<std::size_t>();
}

std::optional<TruthValue> value_from_string(const std::string &s) {
    if (s == "true") {
        return TruthValue::True;
    }
    if (s == "false") {
        return TruthValue::False;
    }
    if (s == "latent") {
        return TruthValue::Latent;
    }
    return std::nullopt;
}

} // namespace

ScheduleEvent schedule_event_from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw ArgumentError("schedule event must be an object");
    }
    const auto action = field<std::string>(j, "action", "schedule event");
    ScheduleEvent e;
    if (action == "hypothesize") {
        e.action = Action::Hypothesize;
        e.sentence = sentence_field(j, "hypothesize");
        e.value = field<bool>(j, "value", "hypothesize");
    } else if (action == "sample") {
        e.action = Action::Sample;
        e.sentence = sentence_field(j, "sample");
    } else if (action == "evolve") {
        e.action = Action::Evolve;
        const auto &dt = j.contains("dt") ? j.at("dt") : nlohmann::json();
        if (!dt.is_number()) {
            throw ArgumentError("evolve needs a numeric \"dt\"");
        }
        e.dt = dt.get<double>();
    } else if (action == "reset") {
        e.action = Action::Reset;
    } else {
        throw ArgumentError("unknown action \"" + action + "\"");
    }
    return e;
}

nlohmann::json to_json(const ScheduleEvent &e) {
    nlohmann::json j{{"action", to_string(e.action)}};
    switch (e.action) {
    case Action::Hypothesize:
        j["sentence"] = e.sentence;
        j["value"] = e.value;
        break;
    case Action::Sample:
        j["sentence"] = e.sentence;
        break;
    case Action::Evolve:
        j["dt"] = e.dt;
        break;
    case Action::Reset:
        break;
    }
    return j;
}

std::vector<ScheduleEvent> parse_schedule(const nlohmann::json &j) {
    if (!j.is_array()) {
        throw ArgumentError("schedule must be a JSON array of events");
    }
    std::vector<ScheduleEvent> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        try {
            out.push_back(schedule_event_from_json(j[i]));
        } catch (const ArgumentError &e) {
            throw ArgumentError("schedule event " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

nlohmann::json to_json(const TrajectoryEvent &e) {
    nlohmann::json j = to_json(e.command);
    j["index"] = e.index;
    j["sim_time"] = e.sim_time;
    if (e.outcome) {
        j["outcome"] = {{"value", core::to_string(*e.outcome)}, {"probability", e.probability}};
    }
    return j;
}

TrajectoryEvent trajectory_event_from_json(const nlohmann::json &j) {
    TrajectoryEvent e;
    e.command = schedule_event_from_json(j);
    e.index = field<std::size_t>(j, "index", "trajectory event");
    e.sim_time = field<double>(j, "sim_time", "trajectory event");
    if (j.contains("outcome")) {
        const auto &o = j.at("outcome");
        const auto v = value_from_string(field<std::string>(o, "value", "outcome"));
        if (!v) {
            throw ArgumentError("outcome value must be true, false or latent");
        }
        e.outcome = *v;
        e.probability = field<double>(o, "probability", "outcome");
    }
    return e;
}

nlohmann::json Trajectory::to_json() const {
    nlohmann::json events_json = nlohmann::json::array();
    for (const auto &e : events) {
        events_json.push_back(sim::to_json(e));
    }
    return {{"rng", {{"algorithm", rng_algorithm}, {"seed", seed}}},
            {"orbit", orbit},
            {"sim_time", sim_time},
            {"events", std::move(events_json)}};
}

TrajectoryRunner::TrajectoryRunner(const LiarModel &model, std::uint64_t seed, std::size_t orbit)
    : model_(&model), orbit_(orbit), rng_(seed), state_(model.initial_state(orbit)) {}

const TrajectoryEvent &TrajectoryRunner::apply(const ScheduleEvent &command) {
    TrajectoryEvent ev;
    ev.index = events_.size();
    ev.command = command;
    StateVector next;
    double time = sim_time_;
    std::optional<MeasurementOutcome> outcome;

    auto check_sentence = [&] {
        if (command.sentence < 1 || command.sentence > model_->sentences()) {
            throw ArgumentError("event " + std::to_string(ev.index) + ": sentence " +
                                std::to_string(command.sentence) + " out of range 1.." +
                                std::to_string(model_->sentences()));
        }
    };

    switch (command.action) {
    case Action::Hypothesize:
        check_sentence();
        try {
            outcome = hypothesize(state_, *model_, command.sentence, command.value);
        } catch (const ImpossibleHypothesisError &e) {
            throw ImpossibleHypothesisError("event " + std::to_string(ev.index) + ": " + e.what(), ev.index);
        }
        break;
    case Action::Sample: {
        check_sentence();
        Rng trial = rng_;
        outcome = sample_measure(state_, *model_, command.sentence, trial);
        rng_ = trial;
        break;
    }
    case Action::Evolve:
        if (!std::isfinite(command.dt) || command.dt < 0.0) {
            throw ArgumentError("event " + std::to_string(ev.index) + ": dt must be finite and non-negative");
        }
        next = evolve_state(state_, *model_, command.dt);
        time += command.dt;
        break;
    case Action::Reset:
        next = model_->initial_state(orbit_);
        break;
    }

    if (outcome) {
        ev.outcome = outcome->value;
        ev.probability = outcome->probability;
        next = outcome->post_state;
        last_ = std::move(outcome);
    }
    state_ = std::move(next);
    sim_time_ = time;
    ev.sim_time = time;
    events_.push_back(ev);
    return events_.back();
}

Trajectory TrajectoryRunner::trajectory() const {
    Trajectory t;
    t.seed = rng_.seed();
    t.orbit = orbit_;
    t.events = events_;
    t.final_state = state_;
    t.sim_time = sim_time_;
    return t;
}

Trajectory run_schedule(const LiarModel &model, const std::vector<ScheduleEvent> &schedule, std::uint64_t seed,
                        std::size_t orbit) {
    TrajectoryRunner runner(model, seed, orbit);
    for (const auto &e : schedule) {
        runner.apply(e);
    }
    return runner.trajectory();
}

StateVector replay(const LiarModel &model, const std::vector<TrajectoryEvent> &events, std::size_t orbit) {
    StateVector state = model.initial_state(orbit);
    for (const auto &e : events) {
        switch (e.command.action) {
        case Action::Hypothesize:
        case Action::Sample:
            if (!e.outcome) {
                throw ArgumentError("replay: event " + std::to_string(e.index) + " has no recorded outcome");
            }
            state = collapse(state, model.frame(), e.command.sentence, *e.outcome).post_state;
            break;
        case Action::Evolve:
            state = evolve_state(state, model, e.command.dt);
            break;
        case Action::Reset:
            state = model.initial_state(orbit);
            break;
        }
    }
    return state;
}

} // namespace qliar::sim
