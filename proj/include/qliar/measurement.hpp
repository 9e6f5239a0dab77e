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
 * Measurement semantics on compiled models: Born weights, deterministic
 * hypothesis collapse, seeded sampling, Schrödinger evolution between
 * measurements, probability time series and scheduled trajectories.
 *
 * Time is simulation time in radians of phase; one reading step is π/2.
 */

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "qliar/reference_graph.hpp"
#include "qliar/truth_frame.hpp"

namespace qliar::sim {

using core::TruthFrame;
using core::TruthValue;
using graph::LiarModel;
using linalg::StateVector;

/// Weights below this are treated as zero when collapsing.
inline constexpr double kImpossibleWeight = 1e-12;

struct BornWeights {
    double p_true = 0.0;
    double p_false = 0.0;
    double p_latent = 0.0;

    [[nodiscard]] double of(TruthValue v) const noexcept;
    [[nodiscard]] double total() const noexcept { return p_true + p_false + p_latent; }
};

BornWeights born_weights(const StateVector &state, const TruthFrame &frame, std::size_t sentence);

struct MeasurementOutcome {
    std::size_t sentence = 0;
    TruthValue value = TruthValue::Latent;
    /// ‖P·state‖² of the pre-measurement state.
    double probability = 0.0;
    StateVector post_state;
};

/// Collapse onto (sentence, value). Throws ImpossibleHypothesisError when
/// the weight is at most kImpossibleWeight.
MeasurementOutcome hypothesize(const StateVector &state, const TruthFrame &frame, std::size_t sentence,
                               bool value);
MeasurementOutcome hypothesize(const StateVector &state, const LiarModel &model, std::size_t sentence,
                               bool value);

/// Seedable 64-bit source. Draws are counted so a stream position can be
/// reported and restored.
class Rng {
  public:
    static constexpr const char *kAlgorithm = "mt19937_64";

    explicit Rng(std::uint64_t seed = 0, std::uint64_t skip = 0);

    /// Uniform in [0, 1) from the top 53 bits of one engine output.
    double uniform();

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t draws() const noexcept { return draws_; }

  private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    std::uint64_t draws_ = 0;
};

/// One Born draw among true, false, latent (in that order of the cumulative
/// distribution), then collapse onto the drawn outcome.
MeasurementOutcome sample_measure(const StateVector &state, const TruthFrame &frame, std::size_t sentence, Rng &rng);
MeasurementOutcome sample_measure(const StateVector &state, const LiarModel &model, std::size_t sentence, Rng &rng);

/// e^{-iH·dt}·state. Throws ArgumentError for a non-finite dt.
StateVector evolve_state(const StateVector &state, const LiarModel &model, double dt);

struct ProbabilitySeries {
    std::size_t sentence = 0;
    std::vector<double> times;
    std::vector<double> p_true;
    std::vector<double> p_false;
    std::vector<double> p_latent;

    /// Header `t,sentence,p_true,p_false,p_latent`, one row per time.
    void write_csv(std::ostream &out) const;
    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Born weights of `sentence` along e^{-iH(t - origin)}·state on `steps`
/// evenly spaced times from t0 to t1 inclusive; `state` is taken to be the
/// state at time `origin`. Requires steps ≥ 2 and t0 < t1.
ProbabilitySeries probability_series(const StateVector &state, const LiarModel &model, std::size_t sentence,
                                     double t0, double t1, std::size_t steps, double origin = 0.0);

enum class Action { Hypothesize, Sample, Evolve, Reset };

const char *to_string(Action a) noexcept;

struct ScheduleEvent {
    Action action = Action::Evolve;
    std::size_t sentence = 0;
    bool value = true;
    double dt = 0.0;

    friend bool operator==(const ScheduleEvent &, const ScheduleEvent &) = default;
};

/// {"action": "hypothesize"|"sample"|"evolve"|"reset", "sentence"?, "value"?, "dt"?}
ScheduleEvent schedule_event_from_json(const nlohmann::json &j);
nlohmann::json to_json(const ScheduleEvent &e);

/// Parses a JSON array of events. Throws ArgumentError with the event index.
std::vector<ScheduleEvent> parse_schedule(const nlohmann::json &j);

struct TrajectoryEvent {
    std::size_t index = 0;
    ScheduleEvent command;
    /// Simulation time after the event.
    double sim_time = 0.0;
    /// Set for hypothesize and sample.
    std::optional<TruthValue> outcome;
    double probability = 0.0;

    friend bool operator==(const TrajectoryEvent &, const TrajectoryEvent &) = default;
};

nlohmann::json to_json(const TrajectoryEvent &e);
TrajectoryEvent trajectory_event_from_json(const nlohmann::json &j);

struct Trajectory {
    std::uint64_t seed = 0;
    std::string rng_algorithm = Rng::kAlgorithm;
    std::size_t orbit = 0;
    std::vector<TrajectoryEvent> events;
    StateVector final_state;
    double sim_time = 0.0;

    /// {rng: {algorithm, seed}, orbit, sim_time, events}
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Single-writer trajectory in progress. Starts from model.initial_state(orbit).
///
/// Reset returns the state to the initial state without rewinding sim_time
/// or the random stream; the initial state is stationary so this is
/// consistent with the evolution.
class TrajectoryRunner {
  public:
    TrajectoryRunner(const LiarModel &model, std::uint64_t seed, std::size_t orbit = 0);

    /// Applies one command and records it. Failed commands leave the
    /// runner unchanged and throw; ImpossibleHypothesisError carries the
    /// index the event would have had.
    const TrajectoryEvent &apply(const ScheduleEvent &command);

    [[nodiscard]] const StateVector &state() const noexcept { return state_; }
    [[nodiscard]] double sim_time() const noexcept { return sim_time_; }
    [[nodiscard]] const std::vector<TrajectoryEvent> &events() const noexcept { return events_; }
    [[nodiscard]] const Rng &rng() const noexcept { return rng_; }
    [[nodiscard]] std::size_t orbit() const noexcept { return orbit_; }
    [[nodiscard]] const LiarModel &model() const noexcept { return *model_; }
    /// Post-state of the last measurement, if any.
    [[nodiscard]] const std::optional<MeasurementOutcome> &last_outcome() const noexcept { return last_; }

    [[nodiscard]] Trajectory trajectory() const;

  private:
    const LiarModel *model_;
    std::size_t orbit_;
    Rng rng_;
    StateVector state_;
    double sim_time_ = 0.0;
    std::vector<TrajectoryEvent> events_;
    std::optional<MeasurementOutcome> last_;
};

/// Runs the schedule from the model's initial state.
Trajectory run_schedule(const LiarModel &model, const std::vector<ScheduleEvent> &schedule, std::uint64_t seed,
                        std::size_t orbit = 0);

/// Rebuilds the state from recorded outcomes alone (no random draws).
StateVector replay(const LiarModel &model, const std::vector<TrajectoryEvent> &events, std::size_t orbit = 0);

} // namespace qliar::sim
