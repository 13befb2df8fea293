#pragma once

#include <atomic>
#include <charconv>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "plgc/circuit.hpp"
#include "plgc/ed.hpp"
#include "plgc/lattice.hpp"
#include "plgc/observables.hpp"
#include "plgc/pauli.hpp"
#include "plgc/random.hpp"
#include "plgc/spsa.hpp"
#include "plgc/statevector.hpp"
#include "plgc/version.hpp"
#include "plgc/vqe.hpp"

namespace plgc {

struct SweepConfig {
    std::vector<std::pair<int, int>> clusters;
    std::vector<double> x_values;
    SpsaConfig spsa;
    int n_restarts = 10;
    std::optional<std::string> tripartition_override;
    std::string output_path = "results.csv";
    bool run_ed = true;
    std::optional<std::string> export_qasm_dir;

    void validate() const {
        if (clusters.empty()) {
            throw std::invalid_argument("sweep needs at least one cluster");
        }
        for (auto [lx, ly] : clusters) {
            if (lx < 2 || ly < 2) {
                throw std::invalid_argument("cluster " + std::to_string(lx) + "x" +
                                            std::to_string(ly) + " is below the 2x2 minimum");
            }
            // Every sweep row carries S_topo, which needs three entropy
            // regions plus a complement: six bonds minimum (rules out 2x2).
            if (ly * (lx - 1) + lx * (ly - 1) < 6) {
                throw std::invalid_argument("cluster " + std::to_string(lx) + "x" +
                                            std::to_string(ly) +
                                            " has too few bonds for the entropy tripartition");
            }
        }
        if (x_values.empty()) {
            throw std::invalid_argument("sweep needs at least one x value");
        }
        for (std::size_t i = 0; i < x_values.size(); ++i) {
            if (!(x_values[i] >= 0.0 && x_values[i] <= 1.0)) {
                throw std::invalid_argument("x values must lie in [0, 1]");
            }
            if (i > 0 && x_values[i] <= x_values[i - 1]) {
                throw std::invalid_argument("x values must be strictly ascending");
            }
        }
        if (n_restarts < 1) {
            throw std::invalid_argument("need at least one restart");
        }
        spsa.validate();
    }
};

// Default grid 0.0, 0.1, ..., 1.0; values snapped to 12 decimals so grid
// arithmetic does not leak float noise into outputs.
inline std::vector<double> x_grid(double start, double stop, double step) {
    if (!(step > 0.0)) {
        throw std::invalid_argument("x grid step must be positive");
    }
    std::vector<double> xs;
    for (int i = 0;; ++i) {
        double x = start + i * step;
        if (x > stop + 1e-9) break;
        x = std::round(x * 1e12) / 1e12;
        xs.push_back(x);
    }
    if (xs.empty()) {
        throw std::invalid_argument("empty x grid");
    }
    return xs;
}

inline SweepConfig default_sweep_config() {
    SweepConfig cfg;
    cfg.clusters = {{3, 3}, {4, 3}};
    cfg.x_values = x_grid(0.0, 1.0, 0.1);
    cfg.spsa.seed = 42;
    return cfg;
}

namespace detail {

inline void apply_config_json(SweepConfig& cfg, const nlohmann::json& j) {
    if (j.contains("clusters")) {
        cfg.clusters.clear();
        for (const auto& c : j.at("clusters")) {
            if (!c.is_array() || c.size() != 2) {
                throw std::runtime_error("config clusters must be [lx, ly] pairs");
            }
            cfg.clusters.emplace_back(c[0].get<int>(), c[1].get<int>());
        }
    }
    if (j.contains("x_values")) {
        cfg.x_values = j.at("x_values").get<std::vector<double>>();
    }
    if (j.contains("n_restarts")) cfg.n_restarts = j.at("n_restarts").get<int>();
    if (j.contains("run_ed")) cfg.run_ed = j.at("run_ed").get<bool>();
    if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();
    if (j.contains("tripartition_override")) {
        cfg.tripartition_override = j.at("tripartition_override").get<std::string>();
    }
    if (j.contains("export_qasm_dir")) {
        cfg.export_qasm_dir = j.at("export_qasm_dir").get<std::string>();
    }
    if (j.contains("spsa")) {
        const auto& s = j.at("spsa");
        if (s.contains("max_iterations")) cfg.spsa.max_iterations = s.at("max_iterations").get<int>();
        if (s.contains("a0")) cfg.spsa.a0 = s.at("a0").get<double>();
        if (s.contains("c0")) cfg.spsa.c0 = s.at("c0").get<double>();
        if (s.contains("alpha")) cfg.spsa.alpha = s.at("alpha").get<double>();
        if (s.contains("gamma")) cfg.spsa.gamma = s.at("gamma").get<double>();
        if (s.contains("stability_offset")) {
            cfg.spsa.stability_offset = s.at("stability_offset").get<double>();
        }
        if (s.contains("seed")) cfg.spsa.seed = s.at("seed").get<uint64_t>();
    }
}

}  // namespace detail

// Reads a JSON config, with defaults for anything omitted.
inline SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("cannot parse config file " + path + ": " + e.what());
    }
    SweepConfig cfg = default_sweep_config();
    detail::apply_config_json(cfg, j);
    return cfg;
}

struct SweepRow {
    int lx = 0;
    int ly = 0;
    int n_qubits = 0;
    double x = 0.0;
    double energy_vqe = 0.0;
    std::optional<double> energy_ed;
    double mz_vqe = 0.0;
    std::optional<double> mz_ed;
    double stopo_vqe = 0.0;
    std::optional<double> stopo_ed;
    int best_restart = 0;
    int n_restarts = 0;
    int spsa_iterations = 0;
    uint64_t seed = 0;
    std::vector<double> restart_energies;
    std::vector<double> restart_fidelities;
    ParamVector best_thetas;
};

namespace detail {

// Shortest round-tripping decimal form, so 0.3 prints as "0.3" and reruns are
// byte-identical.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, ptr);
}

inline std::string csv_header() {
    return "lx,ly,n_qubits,x,energy_vqe,energy_ed,mz_vqe,mz_ed,stopo_vqe,stopo_ed,"
           "best_restart,n_restarts,spsa_iterations,seed";
}

inline std::string csv_line(const SweepRow& row) {
    auto opt = [](const std::optional<double>& v) {
        return v.has_value() ? format_double(*v) : std::string();
    };
    std::string line;
    line += std::to_string(row.lx);
    line += ',' + std::to_string(row.ly);
    line += ',' + std::to_string(row.n_qubits);
    line += ',' + format_double(row.x);
    line += ',' + format_double(row.energy_vqe);
    line += ',' + opt(row.energy_ed);
    line += ',' + format_double(row.mz_vqe);
    line += ',' + opt(row.mz_ed);
    line += ',' + format_double(row.stopo_vqe);
    line += ',' + opt(row.stopo_ed);
    line += ',' + std::to_string(row.best_restart);
    line += ',' + std::to_string(row.n_restarts);
    line += ',' + std::to_string(row.spsa_iterations);
    line += ',' + std::to_string(row.seed);
    return line;
}

// Fixed pool executing submitted tasks; the first task exception is rethrown
// from wait_all on the caller's thread.
class WorkerPool {
  public:
    explicit WorkerPool(int n_threads) {
        for (int i = 0; i < n_threads; ++i) {
            threads_.emplace_back([this] { worker_loop(); });
        }
    }

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    ~WorkerPool() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            stopping_ = true;
        }
        cv_.notify_all();
        for (std::thread& t : threads_) t.join();
    }

    void submit(std::function<void()> task) {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            queue_.push(std::move(task));
            ++pending_;
        }
        cv_.notify_one();
    }

    void wait_all() {
        std::unique_lock<std::mutex> lock(mutex_);
        done_cv_.wait(lock, [this] { return pending_ == 0; });
        if (first_error_) {
            std::exception_ptr err = first_error_;
            first_error_ = nullptr;
            std::rethrow_exception(err);
        }
    }

  private:
    void worker_loop() {
        for (;;) {
            std::function<void()> task;
            {
                std::unique_lock<std::mutex> lock(mutex_);
                cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
                if (queue_.empty()) return;  // stopping
                task = std::move(queue_.front());
                queue_.pop();
            }
            try {
                task();
            } catch (...) {
                std::lock_guard<std::mutex> lock(mutex_);
                if (!first_error_) first_error_ = std::current_exception();
            }
            {
                std::lock_guard<std::mutex> lock(mutex_);
                --pending_;
            }
            done_cv_.notify_all();
        }
    }

    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::condition_variable done_cv_;
    std::queue<std::function<void()>> queue_;
    int pending_ = 0;
    bool stopping_ = false;
    std::exception_ptr first_error_ = nullptr;
};

}  // namespace detail

// Least-squares fit de0(1/N) = a + b/N + c/N^2; returns the N -> infinity
// intercept a.
inline double extrapolate_delta_e(const std::vector<std::pair<double, double>>& points) {
    std::set<double> distinct;
    for (const auto& [n, de] : points) {
        (void)de;
        distinct.insert(n);
    }
    if (distinct.size() < 3) {
        throw std::invalid_argument("extrapolation needs at least 3 distinct system sizes, got " +
                                    std::to_string(distinct.size()));
    }
    Eigen::MatrixXd a(points.size(), 3);
    Eigen::VectorXd y(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double u = 1.0 / points[i].first;
        a(static_cast<Eigen::Index>(i), 0) = 1.0;
        a(static_cast<Eigen::Index>(i), 1) = u;
        a(static_cast<Eigen::Index>(i), 2) = u * u;
        y(static_cast<Eigen::Index>(i)) = points[i].second;
    }
    const Eigen::VectorXd coeffs = a.colPivHouseholderQr().solve(y);
    return coeffs(0);
}

// One (cluster, x) point: restarts run as pool tasks, results are assembled
// deterministically, observables evaluated on the best VQE state and (when
// requested) the ED ground state.
inline SweepRow run_sweep_point(const LatticeGeometry& geom, double x, const SweepConfig& cfg,
                                const Tripartition& tri, detail::WorkerPool& pool) {
    SpsaConfig point_cfg = cfg.spsa;
    point_cfg.seed = mix_seed(cfg.spsa.seed ^ mix_seed((static_cast<uint64_t>(geom.lx) << 32) ^
                                                       static_cast<uint64_t>(geom.ly)) ^
                              static_cast<uint64_t>(std::llround(x * 1e12)));

    const EnergyObjective objective(geom, x);
    std::vector<RestartOutcome> outcomes(cfg.n_restarts);
    for (int r = 0; r < cfg.n_restarts; ++r) {
        pool.submit([&objective, &point_cfg, &outcomes, r] {
            outcomes[r] = vqe_restart(objective, point_cfg, r);
        });
    }
    pool.wait_all();
    VqeResult vqe = assemble_vqe_result(objective, std::move(outcomes));

    const Statevector best_state = objective.state(vqe.best_thetas);

    SweepRow row;
    row.lx = geom.lx;
    row.ly = geom.ly;
    row.n_qubits = geom.n_qubits;
    row.x = x;
    row.energy_vqe = vqe.best_energy;
    row.mz_vqe = magnetization(best_state, geom);
    row.stopo_vqe = tee(best_state, tri);
    row.best_restart = vqe.best_restart;
    row.n_restarts = cfg.n_restarts;
    row.spsa_iterations = cfg.spsa.max_iterations;
    row.seed = point_cfg.seed;
    row.restart_energies = std::move(vqe.restart_energies);
    row.restart_fidelities = std::move(vqe.restart_fidelities);
    row.best_thetas = vqe.best_thetas;

    if (cfg.run_ed) {
        const EdResult ed = ed_ground_state(geom, x);
        row.energy_ed = ed.energy;
        row.mz_ed = magnetization(ed.ground_vector, geom);
        row.stopo_ed = tee(ed.ground_vector, tri);
    }
    return row;
}

// Full sweep: points execute in (cluster, x) order, each flushed to the CSV as
// soon as it completes so an interrupted run keeps its finished rows. A JSON
// sidecar with the config and per-restart detail is written at the end.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg,
                                       const std::function<void(const SweepRow&)>& on_row = {}) {
    cfg.validate();

    std::ofstream csv(cfg.output_path);
    if (!csv) {
        throw std::runtime_error("cannot open output file: " + cfg.output_path);
    }
    csv << detail::csv_header() << '\n';
    csv.flush();

    const int n_workers =
        std::max(1u, std::thread::hardware_concurrency());
    detail::WorkerPool pool(n_workers);

    std::vector<SweepRow> rows;
    rows.reserve(cfg.clusters.size() * cfg.x_values.size());
    for (auto [lx, ly] : cfg.clusters) {
        const LatticeGeometry geom = build_lattice(lx, ly);
        const Tripartition tri = cfg.tripartition_override
                                     ? load_tripartition(*cfg.tripartition_override, geom)
                                     : default_tripartition(geom);
        for (double x : cfg.x_values) {
            SweepRow row = run_sweep_point(geom, x, cfg, tri, pool);
            csv << detail::csv_line(row) << '\n';
            csv.flush();
            if (cfg.export_qasm_dir) {
                const GateCircuit best_circuit = build_plgc(geom, row.best_thetas);
                const std::string name = *cfg.export_qasm_dir + "/plgc_" + std::to_string(lx) +
                                         "x" + std::to_string(ly) + "_x" +
                                         detail::format_double(x) + ".qasm";
                std::ofstream qasm(name);
                if (!qasm) {
                    throw std::runtime_error("cannot open qasm output file: " + name);
                }
                qasm << export_qasm(best_circuit);
            }
            if (on_row) on_row(row);
            rows.push_back(std::move(row));
        }
    }

    nlohmann::json sidecar;
    sidecar["version"] = version;
    nlohmann::json jcfg;
    jcfg["clusters"] = nlohmann::json::array();
    for (auto [lx, ly] : cfg.clusters) jcfg["clusters"].push_back({lx, ly});
    jcfg["x_values"] = cfg.x_values;
    jcfg["n_restarts"] = cfg.n_restarts;
    jcfg["run_ed"] = cfg.run_ed;
    jcfg["output_path"] = cfg.output_path;
    if (cfg.tripartition_override) jcfg["tripartition_override"] = *cfg.tripartition_override;
    if (cfg.export_qasm_dir) jcfg["export_qasm_dir"] = *cfg.export_qasm_dir;
    jcfg["spsa"] = {{"max_iterations", cfg.spsa.max_iterations},
                    {"a0", cfg.spsa.a0},
                    {"c0", cfg.spsa.c0},
                    {"alpha", cfg.spsa.alpha},
                    {"gamma", cfg.spsa.gamma},
                    {"stability_offset", cfg.spsa.stability_offset},
                    {"seed", cfg.spsa.seed}};
    sidecar["config"] = jcfg;
    sidecar["rows"] = nlohmann::json::array();
    for (const SweepRow& row : rows) {
        nlohmann::json jrow;
        jrow["lx"] = row.lx;
        jrow["ly"] = row.ly;
        jrow["x"] = row.x;
        jrow["seed"] = row.seed;
        jrow["best_restart"] = row.best_restart;
        jrow["restart_energies"] = row.restart_energies;
        jrow["restart_fidelities"] = row.restart_fidelities;
        sidecar["rows"].push_back(std::move(jrow));
    }
    const std::string sidecar_path = cfg.output_path + ".json";
    std::ofstream side(sidecar_path);
    if (!side) {
        throw std::runtime_error("cannot open sidecar file: " + sidecar_path);
    }
    side << sidecar.dump(2) << '\n';

    return rows;
}

}  // namespace plgc
