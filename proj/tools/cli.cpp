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

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qliar/measurement.hpp"
#include "qliar/reference_tables.hpp"
#include "qliar/service.hpp"

namespace qliar::cli {

namespace {

using nlohmann::json;

/// Dense export is refused beyond this dimension (five sentences).
constexpr std::size_t kMaxExportDim = 1024;

struct Config {
    std::string data_dir = "data";
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string cors_origin = "*";
    std::uint64_t seed = 1;
    std::string out;
    std::size_t steps = 128;
    std::optional<double> from;
    std::optional<double> to;
    double tolerance = linalg::kDefaultTolerances.fixture;
    bool verbose = false;
    std::vector<std::size_t> sentences;
    std::string system_file;
    std::string schedule_file;
};

/// Input the user supplied is unusable; exit 1.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string stem(const std::string &path) {
    const std::string s = std::filesystem::path(path).stem().string();
    return s.empty() ? "system" : s;
}

graph::LiarModel load_model(const std::string &path) {
    return graph::compile(graph::parse_system(read_text(path), stem(path)));
}

void echo_config(const Config &c, const std::string &command, std::ostream &err) {
    json j{{"command", command},  {"data_dir", c.data_dir}, {"host", c.host},   {"port", c.port},
           {"seed", c.seed},      {"out", c.out},           {"steps", c.steps}, {"tolerance", c.tolerance},
           {"cors_origin", c.cors_origin}};
    j["from"] = c.from ? json(*c.from) : json();
    j["to"] = c.to ? json(*c.to) : json();
    j["sentences"] = c.sentences;
    err << "effective config: " << j.dump() << "\n";
}

void write_output(const Config &c, const std::string &text, std::ostream &out) {
    if (c.out.empty() || c.out == "-") {
        out << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) {
        throw InputError("cannot write " + c.out);
    }
}

int cmd_compile(const Config &c, std::ostream &out) {
    write_output(c, load_model(c.system_file).summary().dump(2) + "\n", out);
    return kExitOk;
}

int cmd_verify(const Config &c, std::ostream &out) {
    linalg::Tolerances tol;
    tol.fixture = c.tolerance;
    const auto report = core::verify_reference_tables(tol);
    out << report.to_text();
    if (!c.out.empty()) {
        std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
        f << report.to_json().dump(2) << "\n";
        if (!f) {
            throw InputError("cannot write " + c.out);
        }
    }
    return report.ok() ? kExitOk : kExitFailure;
}

int cmd_simulate(const Config &c, std::ostream &out, std::ostream &err) {
    const auto model = load_model(c.system_file);
    std::vector<sim::ScheduleEvent> schedule;
    if (!c.schedule_file.empty()) {
        json j;
        try {
            j = json::parse(read_text(c.schedule_file));
        } catch (const json::parse_error &e) {
            throw InputError("schedule " + c.schedule_file + ": " + e.what());
        }
        schedule = sim::parse_schedule(j);
    }
    const auto trajectory = sim::run_schedule(model, schedule, c.seed);

    const double origin = trajectory.sim_time;
    const double t0 = c.from.value_or(origin);
    const double t1 = c.to.value_or(t0 + 2.0 * std::numbers::pi);
    std::vector<std::size_t> sentences = c.sentences;
    if (sentences.empty()) {
        sentences.push_back(1);
    }
    std::ostringstream csv;
    bool header = true;
    for (std::size_t k : sentences) {
        const auto series = sim::probability_series(trajectory.final_state, model, k, t0, t1, c.steps, origin);
        std::string text = series.to_csv();
        if (!header) {
            text.erase(0, text.find('\n') + 1);
        }
        header = false;
        csv << text;
    }

    json summary = trajectory.to_json();
    summary["system"] = model.summary()["name"];
    summary["final_state"] = service::state_summary(trajectory.final_state, model, trajectory.sim_time);
    if (c.out.empty() || c.out == "-") {
        out << csv.str();
        err << summary.dump() << "\n";
    } else {
        write_output(c, csv.str(), out);
        out << summary.dump(2) << "\n";
    }
    return kExitOk;
}

json state_json(const linalg::StateVector &s) {
    json a = json::array();
    for (std::size_t i = 0; i < s.dim(); ++i) {
        a.push_back(core::to_json(s[i]));
    }
    return a;
}

int cmd_export(const Config &c, std::ostream &out) {
    if (c.system_file.empty()) {
        const auto report = core::verify_reference_tables();
        write_output(c, report.to_json().dump(2) + "\n", out);
        return kExitOk;
    }
    const auto model = load_model(c.system_file);
    if (model.dim() > kMaxExportDim) {
        throw InputError("dimension " + std::to_string(model.dim()) + " is too large to export densely (limit " +
                         std::to_string(kMaxExportDim) + ")");
    }
    json j{{"summary", model.summary()}, {"basis_labels", model.frame().basis_labels()}};
    j["psi0"] = model.psi0() ? state_json(*model.psi0()) : json();
    j["u_step"] = core::to_json(model.u_step());
    j["hamiltonian"] = core::to_json(model.hamiltonian().dense(kMaxExportDim));
    json projectors = json::array();
    for (const auto &[key, op] : model.projectors()) {
        projectors.push_back({{"sentence", key.first}, {"value", key.second}, {"matrix", core::to_json(op)}});
    }
    j["projectors"] = std::move(projectors);
    write_output(c, j.dump(2) + "\n", out);
    return kExitOk;
}

int cmd_serve(const Config &c, std::ostream &out) {
    service::HttpServer server(service::ServiceConfig{c.data_dir, c.cors_origin});
    out << "serving on http://" << c.host << ":" << c.port << " (data in " << c.data_dir << ")" << std::endl;
    if (!server.listen(c.host, c.port)) {
        throw std::runtime_error("cannot listen on " + c.host + ":" + std::to_string(c.port));
    }
    return kExitOk;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    Config c;
    CLI::App app{"Liar-paradox systems as finite-dimensional quantum models", "qliar"};
    app.require_subcommand(1);
    app.add_flag("-v,--verbose", c.verbose, "Echo the effective configuration to standard error");

    auto *compile = app.add_subcommand("compile", "Compile a sentence system and print its summary JSON");
    compile->add_option("system", c.system_file, "Sentence source file")->required();
    compile->add_option("--out", c.out, "Write the summary here instead of standard output");

    auto *verify = app.add_subcommand("verify", "Compare derived double-liar matrices with the printed tables");
    verify->add_option("--tolerance", c.tolerance, "Fixture tolerance")->capture_default_str();
    verify->add_option("--out", c.out, "Also write the report as JSON");

    auto *simulate = app.add_subcommand("simulate", "Run a measurement schedule and write the probability series CSV");
    simulate->add_option("system", c.system_file, "Sentence source file")->required();
    simulate->add_option("schedule", c.schedule_file, "Schedule JSON file (omit for an empty schedule)");
    simulate->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    simulate->add_option("--out", c.out, "CSV output path ('-' for standard output)");
    simulate->add_option("--steps", c.steps, "Grid points")->capture_default_str()->check(CLI::Range(2, 10000000));
    simulate->add_option("--from", c.from, "Series start time (default: end of schedule)");
    simulate->add_option("--to", c.to, "Series end time (default: start + 2π)");
    simulate->add_option("--sentence", c.sentences, "Sentence(s) to report (default 1)")->check(CLI::PositiveNumber);

    auto *serve = app.add_subcommand("serve", "Run the HTTP session service");
    serve->add_option("--data-dir", c.data_dir, "Persistence directory")->capture_default_str();
    serve->add_option("--port", c.port, "TCP port")->capture_default_str()->check(CLI::Range(1, 65535));
    serve->add_option("--host", c.host, "Bind address")->capture_default_str();
    serve->add_option("--cors-origin", c.cors_origin, "Access-Control-Allow-Origin value")->capture_default_str();

    auto *exp = app.add_subcommand("export", "Write dense model matrices (or the verify report) as JSON");
    exp->add_option("system", c.system_file, "Sentence source file (omit for the verify report)");
    exp->add_option("--out", c.out, "Output path (default standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
        return kExitInternal;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    if (c.verbose) {
        echo_config(c, name, err);
    }
    try {
        if (name == "compile") {
            return cmd_compile(c, out);
        }
        if (name == "verify") {
            return cmd_verify(c, out);
        }
        if (name == "simulate") {
            return cmd_simulate(c, out, err);
        }
        if (name == "serve") {
            return cmd_serve(c, out);
        }
        return cmd_export(c, out);
    } catch (const InputError &e) {
        err << "error: " << e.what() << "\n";
    } catch (const ParseError &e) {
        err << "error: " << e.what() << "\n";
    } catch (const TopologyError &e) {
        err << "error: unsupported topology: " << e.what() << "\n";
    } catch (const CapacityError &e) {
        err << "error: " << e.what() << "\n";
    } catch (const ImpossibleHypothesisError &e) {
        err << "error: impossible hypothesis: " << e.what() << "\n";
    } catch (const ArgumentError &e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitFailure;
}

} // namespace qliar::cli
