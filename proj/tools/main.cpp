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

// zzopt command line front end. Subcommands:
//   evaluate  - bound table (ZZB, CRLB) plus an ACF trace for a fixed allocation
//   optimize  - sweep of optimized allocations across an SNR grid
//   simulate  - Monte Carlo ranging campaign, optionally against an
//               allocation library produced by `optimize`
//   acf       - autocorrelation trace of one allocation
//
// Configuration comes from a JSON file (--config); individual flags override
// file values. Every output CSV gets a sidecar <out>.meta.json with the
// fully resolved configuration so runs are self-describing.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zzopt/zzopt.h"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitIo = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int K = 64;
    double delta_f = 15625.0;
    double na = 16.0;
    int quad_points = 4096;
    std::string scheme = "coherent";           // coherent | noncoherent
    std::string snr_convention = "integrated"; // integrated | per_subcarrier
    std::vector<double> snr_grid_db;           // default filled in finalize()
    std::string constraint = "convex";         // convex | integer
    int L = 8;
    double delta_tol = 0.01;
    int n_iter = 2000;
    std::string pin_anchor = "auto";           // auto | none | <index>
    int max_iter = 200;
    double tol = 1e-7;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out = "out.csv";

    // Simulation settings.
    int trials = 10000;
    int discard = 50;
    double z0 = 0.0;
    bool draw_z0 = true;
    bool random_pilot_phase = false;
    int oversample = 64;
    int snr_symbols = 250;

    // Allocation inputs.
    std::string allocation_file;   // K plain values (evaluate, acf)
    std::vector<double> allocation_inline;
    std::string allocation_library; // optimize CSV (simulate)

    // ACF trace grid.
    double acf_start = 0.0;
    double acf_stop = -1.0;        // default: prior window
    int acf_points = 1024;         // subintervals; points + 1 rows
    bool acf_db = false;
};

json config_to_json(const RunConfig& c) {
    json j;
    j["version"] = ZZOPT_VERSION;
    j["K"] = c.K;
    j["delta_f"] = c.delta_f;
    j["na"] = c.na;
    j["quad_points"] = c.quad_points;
    j["scheme"] = c.scheme;
    j["snr_convention"] = c.snr_convention;
    j["snr_db"] = c.snr_grid_db;
    j["constraint"] = c.constraint;
    j["L"] = c.L;
    j["delta_tol"] = c.delta_tol;
    j["n_iter"] = c.n_iter;
    j["pin_anchor"] = c.pin_anchor;
    j["solver"] = {{"max_iter", c.max_iter}, {"tol", c.tol}};
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["sim"] = {{"trials", c.trials},
                {"discard", c.discard},
                {"z0", c.z0},
                {"draw_z0", c.draw_z0},
                {"random_pilot_phase", c.random_pilot_phase},
                {"oversample", c.oversample},
                {"snr_symbols", c.snr_symbols}};
    if (!c.allocation_file.empty()) j["allocation_file"] = c.allocation_file;
    if (!c.allocation_inline.empty()) j["allocation"] = c.allocation_inline;
    if (!c.allocation_library.empty()) j["allocation_library"] = c.allocation_library;
    j["acf"] = {{"start", c.acf_start},
                {"stop", c.acf_stop},
                {"points", c.acf_points},
                {"db", c.acf_db}};
    j["out"] = c.out;
    return j;
}

template <typename T>
void read_key(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) {
        try {
            out = it->get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config key '") + key + "': " + e.what());
        }
    }
}

std::vector<double> grid_from_json(const json& v) {
    std::vector<double> grid;
    if (v.is_array()) {
        grid = v.get<std::vector<double>>();
    } else if (v.is_object()) {
        const double start = v.at("start").get<double>();
        const double stop = v.at("stop").get<double>();
        const double step = v.value("step", 1.0);
        if (step <= 0.0) throw ConfigError("snr_db.step must be positive");
        for (double s = start; s <= stop + 1e-9; s += step) grid.push_back(s);
    } else {
        throw ConfigError("snr_db must be an array or {start, stop, step}");
    }
    return grid;
}

void load_config_file(const std::string& path, RunConfig& c) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse failure in " + path + ": " + e.what());
    }
    read_key(j, "K", c.K);
    read_key(j, "delta_f", c.delta_f);
    read_key(j, "na", c.na);
    read_key(j, "quad_points", c.quad_points);
    read_key(j, "scheme", c.scheme);
    read_key(j, "snr_convention", c.snr_convention);
    if (j.contains("snr_db")) c.snr_grid_db = grid_from_json(j["snr_db"]);
    read_key(j, "constraint", c.constraint);
    read_key(j, "L", c.L);
    read_key(j, "delta_tol", c.delta_tol);
    read_key(j, "n_iter", c.n_iter);
    if (j.contains("pin_anchor")) {
        const auto& v = j["pin_anchor"];
        c.pin_anchor = v.is_number_integer() ? std::to_string(v.get<int>())
                                             : v.get<std::string>();
    }
    if (j.contains("solver")) {
        read_key(j["solver"], "max_iter", c.max_iter);
        read_key(j["solver"], "tol", c.tol);
    }
    read_key(j, "seed", c.seed);
    read_key(j, "threads", c.threads);
    if (j.contains("sim")) {
        const json& s = j["sim"];
        read_key(s, "trials", c.trials);
        read_key(s, "discard", c.discard);
        read_key(s, "z0", c.z0);
        read_key(s, "draw_z0", c.draw_z0);
        read_key(s, "random_pilot_phase", c.random_pilot_phase);
        read_key(s, "oversample", c.oversample);
        read_key(s, "snr_symbols", c.snr_symbols);
    }
    read_key(j, "allocation_file", c.allocation_file);
    read_key(j, "allocation", c.allocation_inline);
    read_key(j, "allocation_library", c.allocation_library);
    if (j.contains("acf")) {
        const json& a = j["acf"];
        read_key(a, "start", c.acf_start);
        read_key(a, "stop", c.acf_stop);
        read_key(a, "points", c.acf_points);
        read_key(a, "db", c.acf_db);
    }
    read_key(j, "out", c.out);
}

void finalize_config(RunConfig& c) {
    if (c.snr_grid_db.empty())
        for (int db = -12; db <= 30; ++db) c.snr_grid_db.push_back(db);
    for (size_t i = 1; i < c.snr_grid_db.size(); ++i)
        if (c.snr_grid_db[i] <= c.snr_grid_db[i - 1])
            throw ConfigError("snr_db grid must be strictly increasing");
    if (c.scheme != "coherent" && c.scheme != "noncoherent")
        throw ConfigError("scheme must be 'coherent' or 'noncoherent'");
    if (c.snr_convention != "integrated" && c.snr_convention != "per_subcarrier")
        throw ConfigError("snr_convention must be 'integrated' or 'per_subcarrier'");
    if (c.constraint != "convex" && c.constraint != "integer")
        throw ConfigError("constraint must be 'convex' or 'integer'");
    if (c.acf_stop < 0.0) c.acf_stop = c.na;
    if (c.threads == 0)
        if (const char* env = std::getenv("ZZOPT_THREADS"))
            c.threads = std::atoi(env);
}

int scheme_id(const RunConfig& c) {
    return c.scheme == "coherent" ? ZZOPT_SCHEME_COHERENT : ZZOPT_SCHEME_NONCOHERENT;
}

// SNR in the configured dB convention -> integrated linear gamma.
double to_gamma(const RunConfig& c, double snr_db) {
    const double lin = std::pow(10.0, snr_db / 10.0);
    return c.snr_convention == "integrated" ? lin : lin * c.K;
}

double from_gamma(const RunConfig& c, double gamma) {
    const double lin = c.snr_convention == "integrated" ? gamma : gamma / c.K;
    return 10.0 * std::log10(lin);
}

int parse_anchor(const RunConfig& c) {
    if (c.pin_anchor == "auto") return ZZOPT_ANCHOR_AUTO;
    if (c.pin_anchor == "none") return ZZOPT_ANCHOR_NONE;
    try {
        size_t pos = 0;
        const int k = std::stoi(c.pin_anchor, &pos);
        if (pos != c.pin_anchor.size()) throw std::invalid_argument(c.pin_anchor);
        return k;
    } catch (const std::exception&) {
        throw ConfigError("pin_anchor must be 'auto', 'none', or a subcarrier index");
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct ModelHandle {
    zzopt_model* m = nullptr;
    ~ModelHandle() { zzopt_model_destroy(m); }
};

ModelHandle make_model(const RunConfig& c) {
    ModelHandle h;
    if (zzopt_model_create(c.K, c.delta_f, c.na, c.quad_points, &h.m) != ZZOPT_OK)
        throw ConfigError(std::string("model creation failed: ") + zzopt_last_error());
    return h;
}

std::vector<double> uniform_allocation(int K) {
    return std::vector<double>(K, 1.0 / K);
}

// Plain allocation file: K numbers separated by whitespace, commas, or
// newlines; '#' starts a comment.
std::vector<double> read_allocation_file(const std::string& path, int K) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open allocation file: " + path);
    std::vector<double> rho;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            try {
                size_t used = 0;
                const double v = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                rho.push_back(v);
            } catch (const std::exception&) {
                throw ConfigError(path + ":" + std::to_string(line_no) +
                                  ": not a number: '" + tok + "'");
            }
        }
    }
    if (static_cast<int>(rho.size()) != K)
        throw ConfigError(path + ": expected " + std::to_string(K) + " values, found " +
                          std::to_string(rho.size()));
    return rho;
}

std::vector<double> resolve_allocation(const RunConfig& c) {
    if (!c.allocation_inline.empty()) {
        if (static_cast<int>(c.allocation_inline.size()) != c.K)
            throw ConfigError("inline allocation length does not match K");
        return c.allocation_inline;
    }
    if (!c.allocation_file.empty()) return read_allocation_file(c.allocation_file, c.K);
    return uniform_allocation(c.K);
}

// Allocation library: the CSV written by `optimize` (snr_db, zzb_s2,
// crlb_s2, gap, iterations, rho_0..rho_{K-1}).
struct AllocationLibrary {
    std::vector<double> snr_db;
    std::vector<std::vector<double>> rho;

    const std::vector<double>& nearest(double db) const {
        size_t best = 0;
        for (size_t i = 1; i < snr_db.size(); ++i)
            if (std::abs(snr_db[i] - db) < std::abs(snr_db[best] - db)) best = i;
        return rho[best];
    }
};

AllocationLibrary read_allocation_library(const std::string& path, int K) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open allocation library: " + path);
    AllocationLibrary lib;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        if (toks.empty()) continue;
        if (line_no == 1 && toks[0] == "snr_db") continue;  // header
        if (static_cast<int>(toks.size()) != 5 + K)
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": expected " + std::to_string(5 + K) + " columns");
        try {
            lib.snr_db.push_back(std::stod(toks[0]));
            std::vector<double> r(K);
            for (int k = 0; k < K; ++k) r[k] = std::stod(toks[5 + k]);
            lib.rho.push_back(std::move(r));
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed row");
        }
    }
    if (lib.snr_db.empty()) throw ConfigError(path + ": no allocation rows");
    return lib;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << body;
    if (!out) throw IoError("write failure: " + path);
}

void write_metadata(const RunConfig& c, const std::string& command) {
    json j = config_to_json(c);
    j["command"] = command;
    write_file(c.out + ".meta.json", j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

std::string acf_trace_csv(const RunConfig& c, zzopt_model* m,
                          const std::vector<double>& rho) {
    std::ostringstream csv;
    if (c.acf_db) csv << "z,acf_coherent_db,acf_noncoherent_db\n";
    else csv << "z,acf_coherent,acf_noncoherent\n";
    const int n = c.acf_points;
    if (n < 1) throw ConfigError("acf points must be positive");
    for (int i = 0; i <= n; ++i) {
        const double z = c.acf_start + (c.acf_stop - c.acf_start) * i / n;
        double ac = 0.0, an = 0.0;
        if (zzopt_acf(m, rho.data(), z, &ac, &an) != ZZOPT_OK)
            throw ConfigError(std::string("acf evaluation failed: ") + zzopt_last_error());
        if (c.acf_db) {
            // Negative coherent values are rounded up to the -20 dB floor.
            const double acdb = ac <= 0.0 ? -20.0
                                          : std::max(10.0 * std::log10(ac), -20.0);
            const double andb = 10.0 * std::log10(std::max(an, 1e-30));
            csv << format_double(z) << ',' << format_double(acdb) << ','
                << format_double(andb) << '\n';
        } else {
            csv << format_double(z) << ',' << format_double(ac) << ','
                << format_double(an) << '\n';
        }
    }
    return csv.str();
}

int cmd_acf(const RunConfig& c) {
    ModelHandle h = make_model(c);
    const std::vector<double> rho = resolve_allocation(c);
    write_file(c.out, acf_trace_csv(c, h.m, rho));
    write_metadata(c, "acf");
    return 0;
}

int cmd_evaluate(const RunConfig& c) {
    ModelHandle h = make_model(c);
    const std::vector<double> rho = resolve_allocation(c);

    std::ostringstream csv;
    csv << "snr_db,zzb_s2,crlb_s2\n";
    for (double db : c.snr_grid_db) {
        const double gamma = to_gamma(c, db);
        double z = 0.0;
        if (zzopt_zzb(h.m, scheme_id(c), gamma, rho.data(), &z) != ZZOPT_OK)
            throw ConfigError(std::string("bound evaluation failed: ") + zzopt_last_error());
        double cr = std::numeric_limits<double>::quiet_NaN();
        zzopt_crlb(h.m, gamma, rho.data(), &cr);  // NaN row when singular
        csv << format_double(db) << ',' << format_double(z) << ','
            << format_double(cr) << '\n';
    }
    write_file(c.out, csv.str());

    // Companion ACF trace for the same allocation.
    std::string acf_path = c.out;
    if (auto pos = acf_path.rfind(".csv"); pos != std::string::npos && pos == acf_path.size() - 4)
        acf_path.erase(pos);
    acf_path += "_acf.csv";
    write_file(acf_path, acf_trace_csv(c, h.m, rho));
    write_metadata(c, "evaluate");
    return 0;
}

struct OptimizePoint {
    double snr_db = 0.0;
    double zzb = 0.0;
    double crlb = 0.0;
    double gap = 0.0;
    int iterations = 0;
    std::vector<double> rho;
    bool converged = false;
    std::string error;
};

int cmd_optimize(const RunConfig& c) {
    ModelHandle h = make_model(c);
    const int anchor = parse_anchor(c);
    const int n = static_cast<int>(c.snr_grid_db.size());
    std::vector<OptimizePoint> pts(n);

    std::atomic<int> next{0};
    const auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            OptimizePoint& pt = pts[i];
            pt.snr_db = c.snr_grid_db[i];
            const double gamma = to_gamma(c, pt.snr_db);
            pt.rho.assign(c.K, 0.0);
            if (c.constraint == "convex") {
                zzopt_convex_result res{};
                if (zzopt_solve_convex(h.m, scheme_id(c), gamma, c.max_iter, c.tol,
                                       pt.rho.data(), &res) != ZZOPT_OK) {
                    pt.error = zzopt_last_error();
                    continue;
                }
                pt.zzb = res.objective;
                pt.iterations = res.iterations;
                pt.gap = res.first_order_residual;
                pt.converged = res.converged != 0;
            } else {
                zzopt_integer_result res{};
                if (zzopt_solve_integer(h.m, scheme_id(c), gamma, c.L, c.delta_tol,
                                        c.n_iter, anchor, pt.rho.data(), &res) != ZZOPT_OK) {
                    pt.error = zzopt_last_error();
                    continue;
                }
                pt.zzb = res.upper_bound;
                pt.iterations = res.iterations;
                pt.gap = res.gap;
                pt.converged = res.gap <= c.delta_tol;
            }
            double cr = std::numeric_limits<double>::quiet_NaN();
            zzopt_crlb(h.m, gamma, pt.rho.data(), &cr);
            pt.crlb = cr;
        }
    };

    int n_threads = c.threads > 0 ? c.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::clamp(n_threads, 1, n);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::ostringstream csv;
    csv << "snr_db,zzb_s2,crlb_s2,gap,iterations";
    for (int k = 0; k < c.K; ++k) csv << ",rho_" << k;
    csv << '\n';
    bool all_ok = true;
    for (const OptimizePoint& pt : pts) {
        if (!pt.error.empty()) {
            all_ok = false;
            std::fprintf(stderr, "optimize: %.17g dB failed: %s\n", pt.snr_db,
                         pt.error.c_str());
            continue;
        }
        if (!pt.converged) all_ok = false;
        csv << format_double(pt.snr_db) << ',' << format_double(pt.zzb) << ','
            << format_double(pt.crlb) << ',' << format_double(pt.gap) << ','
            << pt.iterations;
        for (double r : pt.rho) csv << ',' << format_double(r);
        csv << '\n';
    }
    write_file(c.out, csv.str());
    write_metadata(c, "optimize");
    return all_ok ? 0 : kExitNoConvergence;
}

int cmd_simulate(const RunConfig& c) {
    ModelHandle h = make_model(c);
    std::optional<AllocationLibrary> lib;
    if (!c.allocation_library.empty())
        lib = read_allocation_library(c.allocation_library, c.K);
    const std::vector<double> fixed_rho =
        lib ? std::vector<double>() : resolve_allocation(c);
    const std::vector<double> uniform = uniform_allocation(c.K);

    std::ostringstream csv;
    csv << "snr_db_requested,snr_db_estimated,rmse_s,rmse_m,trials,mean_z\n";
    for (size_t i = 0; i < c.snr_grid_db.size(); ++i) {
        const double db = c.snr_grid_db[i];
        const double gamma = to_gamma(c, db);

        zzopt_sim_params p{};
        p.scheme = scheme_id(c);
        p.gamma = gamma;
        p.seed = c.seed + i;
        p.z0 = c.z0;
        p.draw_z0 = c.draw_z0 ? 1 : 0;
        p.random_pilot_phase = c.random_pilot_phase ? 1 : 0;
        p.oversample = c.oversample;
        p.threads = c.threads;

        double est_db = db;
        if (c.snr_symbols > 0) {
            // SNR measurement stage: short uniform-pilot run just for the
            // estimate; the TOA stage below uses the selected allocation.
            zzopt_sim_params ps = p;
            ps.trials = 2;
            ps.discard = 0;
            ps.snr_symbols = c.snr_symbols;
            zzopt_sim_result rs{};
            if (zzopt_simulate(h.m, uniform.data(), &ps, &rs) != ZZOPT_OK)
                throw ConfigError(std::string("simulation failed: ") + zzopt_last_error());
            if (rs.estimated_gamma > 0.0) est_db = from_gamma(c, rs.estimated_gamma);
        }

        const std::vector<double>& rho = lib ? lib->nearest(est_db) : fixed_rho;
        p.trials = c.trials;
        p.discard = c.discard;
        p.snr_symbols = 0;
        zzopt_sim_result res{};
        if (zzopt_simulate(h.m, rho.data(), &p, &res) != ZZOPT_OK)
            throw ConfigError(std::string("simulation failed: ") + zzopt_last_error());

        csv << format_double(db) << ',' << format_double(est_db) << ','
            << format_double(res.rmse_seconds) << ',' << format_double(res.rmse_meters)
            << ',' << res.trials_used << ',' << format_double(res.mean_estimate) << '\n';
    }
    write_file(c.out, csv.str());
    write_metadata(c, "simulate");
    return 0;
}

void add_common_options(CLI::App* sub, std::string& config_path, RunConfig& /*c*/,
                        std::map<std::string, std::string>& overrides) {
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--snr-db", overrides["snr_db"],
                    "comma-separated SNR grid in dB (overrides config)");
    sub->add_option("--scheme", overrides["scheme"], "coherent or noncoherent");
    sub->add_option("--constraint", overrides["constraint"], "convex or integer");
    sub->add_option("--L", overrides["L"], "pilot subcarrier count (integer constraint)");
    sub->add_option("--seed", overrides["seed"], "RNG seed");
    sub->add_option("--threads", overrides["threads"], "worker thread count (0 = auto)");
    sub->add_option("--out", overrides["out"], "output CSV path");
    sub->add_option("--allocation", overrides["allocation_file"],
                    "allocation file (K plain values)");
    sub->add_option("--allocations", overrides["allocation_library"],
                    "allocation library CSV from a prior optimize run");
    sub->add_flag("--db", overrides["acf_db"], "emit the ACF trace in dB");
}

void apply_overrides(const std::map<std::string, std::string>& ov, RunConfig& c) {
    const auto get = [&](const char* key) -> const std::string* {
        auto it = ov.find(key);
        return (it != ov.end() && !it->second.empty()) ? &it->second : nullptr;
    };
    try {
        if (const auto* v = get("snr_db")) {
            c.snr_grid_db.clear();
            std::string s = *v;
            std::replace(s.begin(), s.end(), ',', ' ');
            std::istringstream ls(s);
            double x;
            while (ls >> x) c.snr_grid_db.push_back(x);
        }
        if (const auto* v = get("scheme")) c.scheme = *v;
        if (const auto* v = get("constraint")) c.constraint = *v;
        if (const auto* v = get("L")) c.L = std::stoi(*v);
        if (const auto* v = get("seed")) c.seed = std::stoull(*v);
        if (const auto* v = get("threads")) c.threads = std::stoi(*v);
        if (const auto* v = get("out")) c.out = *v;
        if (const auto* v = get("allocation_file")) c.allocation_file = *v;
        if (const auto* v = get("allocation_library")) c.allocation_library = *v;
        if (const auto* v = get("acf_db"))
            if (*v != "0" && !v->empty()) c.acf_db = true;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad override value: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ziv-Zakai-optimal OFDM pilot power allocation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ZZOPT_VERSION);

    struct SubState {
        std::string config_path;
        std::map<std::string, std::string> overrides;
    };
    RunConfig cfg;
    std::map<std::string, SubState> states;
    for (const char* name : {"evaluate", "optimize", "simulate", "acf"}) {
        CLI::App* sub = app.add_subcommand(name);
        add_common_options(sub, states[name].config_path, cfg, states[name].overrides);
    }

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    const SubState& st = states[name];
    try {
        if (!st.config_path.empty()) load_config_file(st.config_path, cfg);
        apply_overrides(st.overrides, cfg);
        finalize_config(cfg);
        if (name == "evaluate") return cmd_evaluate(cfg);
        if (name == "optimize") return cmd_optimize(cfg);
        if (name == "simulate") return cmd_simulate(cfg);
        return cmd_acf(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
}
