// Command-line front end: free-running simulation, wall-layer optimization,
// PMV evaluation, synthetic weather generation and result reporting.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "comfortopt/bridge.hpp"
#include "comfortopt/building.hpp"
#include "comfortopt/comfort.hpp"
#include "comfortopt/config.hpp"
#include "comfortopt/materials.hpp"
#include "comfortopt/objective.hpp"
#include "comfortopt/optimizer.hpp"
#include "comfortopt/thermal.hpp"
#include "comfortopt/weather.hpp"

namespace fs = std::filesystem;
using namespace comfortopt;

namespace {

// Collects everything written into the output directory; on failure the
// written files (and the directory, if this run created it) are removed so a
// nonzero exit never leaves partial results behind.
class OutputDir {
public:
    explicit OutputDir(const fs::path& path) : path_(path), created_(!fs::exists(path)) {
        fs::create_directories(path_);
    }

    ~OutputDir() {
        if (committed_) return;
        std::error_code ec;
        for (const fs::path& f : written_) fs::remove(f, ec);
        if (created_) fs::remove(path_, ec);
    }

    fs::path file(const std::string& name) {
        written_.push_back(path_ / name);
        return written_.back();
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path p = file(name);
        std::ofstream out(p, std::ios::binary);
        out << content;
        if (!out) throw Error("cannot write " + p.string());
    }

    void commit() { committed_ = true; }

private:
    fs::path path_;
    bool created_ = false;
    bool committed_ = false;
    std::vector<fs::path> written_;
};

struct BuildingOptions {
    std::string building_file;
    bool default_house = false;
};

struct WeatherOptions {
    std::string weather_file;
    int synthetic_days = 0;
    std::uint64_t seed = 1;
};

struct ComfortOptions {
    double met = 1.2;
    double clo = 0.5;
    double work_met = 0.0;
};

struct SimOptions {
    double timestep_s = 3600.0;
    int nodes_per_layer = 4;
    int warmup_days = 7;
    double velocity_ms = 0.15;
};

void add_building_options(CLI::App* cmd, BuildingOptions& opts) {
    auto* file = cmd->add_option("--building", opts.building_file, "building configuration file");
    auto* def = cmd->add_flag("--default-house", opts.default_house, "use the built-in five-zone Reunion house");
    file->excludes(def);
}

void add_weather_options(CLI::App* cmd, WeatherOptions& opts) {
    auto* file = cmd->add_option("--weather", opts.weather_file, "hourly weather CSV");
    auto* days = cmd->add_option("--synthetic-days", opts.synthetic_days, "generate synthetic tropical weather");
    cmd->add_option("--seed", opts.seed, "seed for the synthetic generator");
    file->excludes(days);
}

void add_comfort_options(CLI::App* cmd, ComfortOptions& opts) {
    cmd->add_option("--met", opts.met, "metabolic rate, met");
    cmd->add_option("--clo", opts.clo, "clothing insulation, clo");
    cmd->add_option("--work", opts.work_met, "external work, met");
}

void add_sim_options(CLI::App* cmd, SimOptions& opts) {
    cmd->add_option("--timestep", opts.timestep_s, "simulation timestep, s (<= 3600)");
    cmd->add_option("--nodes-per-layer", opts.nodes_per_layer, "conduction nodes per wall layer");
    cmd->add_option("--warmup-days", opts.warmup_days, "discarded warmup period, days");
    cmd->add_option("--velocity", opts.velocity_ms, "indoor air velocity, m/s");
}

Building resolve_building(const BuildingOptions& opts) {
    const bool have_file = !opts.building_file.empty();
    if (opts.default_house == have_file)
        throw Error("choose exactly one building source: --building <path> or --default-house");
    return opts.default_house ? default_reunion_house() : load_building_config_file(opts.building_file);
}

WeatherSeries resolve_weather(const WeatherOptions& opts) {
    if (opts.weather_file.empty() == (opts.synthetic_days == 0))
        throw Error("choose exactly one weather source: --weather <path> or --synthetic-days N");
    return opts.weather_file.empty() ? synthetic_tropical(opts.synthetic_days, opts.seed)
                                     : parse_weather_csv(opts.weather_file);
}

ComfortParams resolve_comfort(const ComfortOptions& opts) {
    ComfortParams p;
    p.metabolic_rate_w_m2 = opts.met * kMetToWPerM2;
    p.external_work_w_m2 = opts.work_met * kMetToWPerM2;
    p.clothing_clo = opts.clo;
    p.validate();
    return p;
}

SimConfig resolve_sim(const SimOptions& opts) {
    SimConfig c;
    c.timestep_s = opts.timestep_s;
    c.nodes_per_layer = opts.nodes_per_layer;
    c.warmup_days = opts.warmup_days;
    c.indoor_air_velocity_ms = opts.velocity_ms;
    c.validate();
    return c;
}

ObjectiveMode resolve_mode(const std::string& name) {
    if (name == "signed") return ObjectiveMode::Signed;
    if (name == "absolute") return ObjectiveMode::Absolute;
    throw Error("objective mode must be 'signed' or 'absolute'");
}

std::string zone_pmv_csv(const ZoneConditionSeries& series, const OccupancySchedule& schedule,
                         const ComfortParams& params) {
    std::ostringstream out;
    out << "hour,zone,pmv,ppd,occupied\n";
    for (std::size_t h = 0; h < series.hours(); ++h) {
        const int how = static_cast<int>((series.start_hour_of_week + h) % OccupancySchedule::kHoursPerWeek);
        for (std::size_t z = 0; z < series.zones.size(); ++z) {
            const ZoneHourly& zh = series.data[z];
            const PMVResult r = pmv({zh.air_c[h], zh.mrt_c[h], zh.rh_pct[h], zh.vel_ms[h]}, params);
            out << h << ',' << series.zones[z] << ',' << format_full(r.pmv) << ',' << format_full(r.ppd) << ','
                << (schedule.count(series.zones[z], how) > 0 ? 1 : 0) << '\n';
        }
    }
    return out.str();
}

std::string objective_txt(double total) { return "PMV_total = " + format_full(total) + "\n"; }

int cmd_simulate(const BuildingOptions& b_opts, const WeatherOptions& w_opts, const ComfortOptions& c_opts,
                 const SimOptions& s_opts, const std::string& mode_name, bool all_hours, const std::string& out_dir) {
    const Building building = resolve_building(b_opts);
    const WeatherSeries weather = resolve_weather(w_opts);
    const ComfortParams comfort = resolve_comfort(c_opts);
    const SimConfig sim_cfg = resolve_sim(s_opts);
    const ObjectiveMode mode = resolve_mode(mode_name);
    const HourFilter filter = all_hours ? HourFilter::AllHours : HourFilter::OccupiedOnly;

    OutputDir out(out_dir);
    const ZoneConditionSeries series = simulate(building, weather, sim_cfg);

    std::ostringstream cond;
    series.write_csv(cond);
    out.write("conditions.csv", cond.str());
    out.write("zone_pmv.csv", zone_pmv_csv(series, building.schedule, comfort));

    const ObjectiveReport report = evaluate_objective(series, building.schedule, paper_weights(), comfort, mode, filter);
    std::ostringstream obj;
    report.write_csv(obj);
    out.write("objective.csv", obj.str());
    out.write("objective.txt", objective_txt(report.total));
    out.commit();

    std::printf("total %s PMV: %s\n", to_string(mode), format_fixed(report.total, 4).c_str());
    return 0;
}

struct LayerSelection {
    std::vector<std::size_t> indices;
    std::vector<std::string> names;
};

LayerSelection select_layers(const WallAssembly& assembly, const std::vector<std::string>& layer_names,
                             const std::vector<int>& layer_indices) {
    static const std::map<std::string, std::string> kAliases = {
        {"wood", "wood"}, {"insulation", "glass_wool"}, {"concrete", "concrete_block"}};
    LayerSelection sel;
    for (const std::string& name : layer_names) {
        auto alias = kAliases.find(name);
        const std::string material = alias != kAliases.end() ? alias->second : name;
        bool found = false;
        for (std::size_t i = 0; i < assembly.layers.size(); ++i) {
            if (assembly.layers[i].material.name == material) {
                sel.indices.push_back(i);
                sel.names.push_back(material);
                found = true;
                break;
            }
        }
        if (!found) throw Error("no layer with material '" + material + "' in the assembly");
    }
    for (int idx : layer_indices) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= assembly.layers.size())
            throw Error("--layer-index " + std::to_string(idx) + " out of range");
        sel.indices.push_back(static_cast<std::size_t>(idx));
        sel.names.push_back(assembly.layers[idx].material.name);
    }
    if (sel.indices.empty()) throw Error("select at least one layer (--layer or --layer-index)");
    std::set<std::size_t> unique(sel.indices.begin(), sel.indices.end());
    if (unique.size() != sel.indices.size()) throw Error("the same layer was selected twice");
    return sel;
}

std::string comparison_csv(const std::vector<std::pair<std::string, double>>& baseline_pmv,
                           const std::vector<std::pair<std::string, double>>& optimized_pmv, double baseline_total,
                           double optimized_total, const WallAssembly& baseline, const WallAssembly& optimized) {
    std::ostringstream out;
    out << "kind,name,baseline,optimized\n";
    for (std::size_t i = 0; i < baseline_pmv.size(); ++i)
        out << "pmv," << baseline_pmv[i].first << ',' << format_full(baseline_pmv[i].second) << ','
            << format_full(optimized_pmv[i].second) << '\n';
    out << "pmv,TOTAL," << format_full(baseline_total) << ',' << format_full(optimized_total) << '\n';
    for (std::size_t i = 0; i < baseline.layers.size(); ++i)
        out << "thickness_mm," << baseline.layers[i].material.name << ','
            << format_full(baseline.layers[i].thickness_m * 1000.0) << ','
            << format_full(optimized.layers[i].thickness_m * 1000.0) << '\n';
    out << "thickness_mm,TOTAL," << format_full(total_thickness(baseline) * 1000.0) << ','
        << format_full(total_thickness(optimized) * 1000.0) << '\n';
    return out.str();
}

std::string summary_csv(double baseline_total, double optimized_total, const LayerSelection& sel,
                        const WallAssembly& baseline, const WallAssembly& optimized, const OptimizeResult& result) {
    auto pct = [](double from, double to) {
        return from != 0.0 ? (to - from) / std::abs(from) * 100.0 : 0.0;
    };
    std::ostringstream out;
    out << "quantity,baseline,optimized,change_pct\n";
    out << "total_pmv," << format_full(baseline_total) << ',' << format_full(optimized_total) << ','
        << format_full(pct(baseline_total, optimized_total)) << '\n';
    for (std::size_t i = 0; i < sel.indices.size(); ++i) {
        const double from = baseline.layers[sel.indices[i]].thickness_m;
        const double to = optimized.layers[sel.indices[i]].thickness_m;
        out << "thickness_m:" << sel.names[i] << ',' << format_full(from) << ',' << format_full(to) << ','
            << format_full(pct(from, to)) << '\n';
    }
    out << "wall_thickness_m," << format_full(total_thickness(baseline)) << ',' << format_full(total_thickness(optimized))
        << ',' << format_full(pct(total_thickness(baseline), total_thickness(optimized))) << '\n';
    out << "evaluations," << result.evaluations << ',' << result.evaluations << ",0\n";
    return out.str();
}

int cmd_optimize(const BuildingOptions& b_opts, const WeatherOptions& w_opts, const ComfortOptions& c_opts,
                 const SimOptions& s_opts, const std::string& mode_name, bool all_hours,
                 const std::vector<std::string>& layer_names, const std::vector<int>& layer_indices,
                 const std::string& assembly_name, const OptimizerConfig& opt_cfg, double initial_step,
                 const std::string& bridge_path, const std::string& out_dir) {
    const Building building = resolve_building(b_opts);
    const ComfortParams comfort = resolve_comfort(c_opts);
    const ObjectiveMode mode = resolve_mode(mode_name);
    const HourFilter filter = all_hours ? HourFilter::AllHours : HourFilter::OccupiedOnly;

    auto it = building.assemblies.find(assembly_name);
    if (it == building.assemblies.end()) throw Error("building has no assembly '" + assembly_name + "'");
    const WallAssembly baseline_assembly = it->second;
    const LayerSelection sel = select_layers(baseline_assembly, layer_names, layer_indices);

    std::vector<ParamSpec> specs;
    for (std::size_t i = 0; i < sel.indices.size(); ++i) {
        ParamSpec s;
        s.name = sel.names[i];
        s.lower = kThicknessLower;
        s.upper = kThicknessUpper;
        s.initial = baseline_assembly.layers[sel.indices[i]].thickness_m;
        s.initial_step = initial_step;
        specs.push_back(std::move(s));
    }

    OutputDir out(out_dir);
    OptimizeResult result;
    double baseline_total = 0.0, optimized_total = 0.0;
    std::vector<std::pair<std::string, double>> baseline_pmv, optimized_pmv;
    WallAssembly optimized_assembly = baseline_assembly;

    if (!bridge_path.empty()) {
        const CouplingSpec coupling = load_coupling_spec(bridge_path);
        result = optimize(make_bridge_cost(coupling, sel.names), specs, opt_cfg);
        baseline_total = result.trace.records.front().cost;
        optimized_total = result.best_cost;
        optimized_assembly = map_params(baseline_assembly, sel.indices, result.best);
    } else {
        const WeatherSeries weather = resolve_weather(w_opts);
        const SimConfig sim_cfg = resolve_sim(s_opts);
        const ZoneWeights weights = paper_weights();

        auto evaluate_point = [&](const std::vector<double>& v) {
            Building candidate = building;
            candidate.assemblies[assembly_name] = map_params(baseline_assembly, sel.indices, v);
            const ZoneConditionSeries series = simulate(candidate, weather, sim_cfg);
            return evaluate_objective(series, candidate.schedule, weights, comfort, mode, filter);
        };

        result = optimize([&](const std::vector<double>& v) { return evaluate_point(v).total; }, specs, opt_cfg);

        const ObjectiveReport base_report = evaluate_point(result.trace.records.front().params);
        const ObjectiveReport best_report = evaluate_point(result.best);
        baseline_total = base_report.total;
        optimized_total = best_report.total;
        for (const auto& row : base_report.rows) baseline_pmv.emplace_back(row.zone, row.mean_pmv);
        for (const auto& row : best_report.rows) optimized_pmv.emplace_back(row.zone, row.mean_pmv);
        optimized_assembly = map_params(baseline_assembly, sel.indices, result.best);
    }

    std::ostringstream trace;
    result.trace.write_csv(trace, sel.names);
    out.write("trace.csv", trace.str());
    out.write("summary.csv",
              summary_csv(baseline_total, optimized_total, sel, baseline_assembly, optimized_assembly, result));
    out.write("comparison.csv", comparison_csv(baseline_pmv, optimized_pmv, baseline_total, optimized_total,
                                               baseline_assembly, optimized_assembly));
    out.commit();

    std::printf("%s: best cost %s after %d evaluations (", result.stop == StopReason::Converged ? "converged" : "budget exhausted",
                format_fixed(result.best_cost, 6).c_str(), result.evaluations);
    for (std::size_t i = 0; i < sel.names.size(); ++i)
        std::printf("%s%s = %s m", i ? ", " : "", sel.names[i].c_str(), format_fixed(result.best[i], 4).c_str());
    std::printf(")\n");
    return 0;
}

int cmd_pmv(double ta, double tr, double rh, double vel, const ComfortOptions& c_opts) {
    const ComfortParams params = resolve_comfort(c_opts);
    const PMVResult r = pmv({ta, tr, rh, vel}, params);
    std::printf("%s,%s,%s\n", format_fixed(r.pmv, 4).c_str(), format_fixed(r.ppd, 2).c_str(), to_string(r.sensation));
    return 0;
}

int cmd_weather_gen(int days, std::uint64_t seed, const std::string& out_file) {
    const WeatherSeries series = synthetic_tropical(days, seed);
    std::ostringstream buf;
    write_weather_csv(series, buf);
    std::ofstream out(out_file, std::ios::binary);
    out << buf.str();
    if (!out) throw Error("cannot write " + out_file);
    return 0;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                cols.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        cols.push_back(cur);
        rows.push_back(std::move(cols));
    }
    return rows;
}

int cmd_report(const std::string& trace_path, const std::string& comparison_path) {
    const auto trace_rows = read_csv(trace_path);
    if (trace_rows.size() < 2) throw Error("trace file " + trace_path + " has no evaluations");
    const std::size_t cost_col = trace_rows.front().size() - 3; // eval,params...,cost,move,accepted
    double baseline = 0.0, best = 0.0;
    for (std::size_t i = 1; i < trace_rows.size(); ++i) {
        if (trace_rows[i].size() != trace_rows.front().size())
            throw Error("malformed trace row " + std::to_string(i + 1) + " in " + trace_path);
        const double cost = std::stod(trace_rows[i][cost_col]);
        if (i == 1) baseline = best = cost;
        best = std::min(best, cost);
    }
    const double rel = baseline != 0.0 ? (best - baseline) / std::abs(baseline) * 100.0 : 0.0;

    std::printf("evaluations: %zu\n", trace_rows.size() - 1);
    std::printf("objective:   %.4f -> %.4f (%+.1f%%)\n", baseline, best, rel);
    std::printf("sensation:   %s -> %s\n\n", to_string(sensation(baseline)), to_string(sensation(best)));

    const auto comp_rows = read_csv(comparison_path);
    std::printf("%-16s %14s %14s %16s %16s\n", "zone", "baseline PMV", "optimized PMV", "baseline", "optimized");
    for (std::size_t i = 1; i < comp_rows.size(); ++i) {
        const auto& r = comp_rows[i];
        if (r.size() != 4) throw Error("malformed comparison row " + std::to_string(i + 1));
        if (r[0] != "pmv") continue;
        const double b = std::stod(r[2]), o = std::stod(r[3]);
        std::printf("%-16s %14.4f %14.4f %16s %16s\n", r[1].c_str(), b, o, to_string(sensation(b)),
                    to_string(sensation(o)));
    }
    std::printf("\n%-16s %14s %14s %10s\n", "layer", "baseline mm", "optimized mm", "change");
    for (std::size_t i = 1; i < comp_rows.size(); ++i) {
        const auto& r = comp_rows[i];
        if (r[0] != "thickness_mm") continue;
        const double b = std::stod(r[2]), o = std::stod(r[3]);
        const double pct = b != 0.0 ? (o - b) / std::abs(b) * 100.0 : 0.0;
        std::printf("%-16s %14.1f %14.1f %+9.1f%%\n", r[1].c_str(), b, o, pct);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Free-running building thermal comfort simulation and wall-layer optimization"};
    app.require_subcommand(1);

    BuildingOptions b_opts;
    WeatherOptions w_opts;
    ComfortOptions c_opts;
    SimOptions s_opts;
    std::string mode_name = "signed";
    bool all_hours = false;
    std::string out_dir;

    auto* sim = app.add_subcommand("simulate", "simulate and report zone conditions, PMV and the weighted objective");
    add_building_options(sim, b_opts);
    add_weather_options(sim, w_opts);
    add_comfort_options(sim, c_opts);
    add_sim_options(sim, s_opts);
    sim->add_option("--objective", mode_name, "objective mode: signed|absolute");
    sim->add_flag("--all-hours", all_hours, "average PMV over all hours, not just occupied ones");
    sim->add_option("--out", out_dir, "output directory")->required();

    std::vector<std::string> layer_names;
    std::vector<int> layer_indices;
    std::string assembly_name = "exterior_wall";
    std::string bridge_path;
    OptimizerConfig opt_cfg;
    double initial_step = 0.0;

    auto* opt = app.add_subcommand("optimize", "optimize wall layer thickness for the weighted PMV objective");
    add_building_options(opt, b_opts);
    add_weather_options(opt, w_opts);
    add_comfort_options(opt, c_opts);
    add_sim_options(opt, s_opts);
    opt->add_option("--objective", mode_name, "objective mode: signed|absolute");
    opt->add_flag("--all-hours", all_hours, "average PMV over all hours, not just occupied ones");
    opt->add_option("--layer", layer_names, "layer to optimize: wood|insulation|concrete (repeatable)");
    opt->add_option("--layer-index", layer_indices, "layer index to optimize, outside -> inside (repeatable)");
    opt->add_option("--assembly", assembly_name, "assembly holding the optimized layers");
    opt->add_option("--max-evals", opt_cfg.max_evaluations, "evaluation budget");
    opt->add_option("--min-step", opt_cfg.min_step, "convergence step threshold, m");
    opt->add_option("--step-reduction", opt_cfg.step_reduction, "step reduction factor in (0,1)");
    opt->add_option("--initial-step", initial_step, "initial exploratory step, m (default (upper-lower)/8)");
    opt->add_option("--bridge", bridge_path, "coupling spec: evaluate the objective through an external program");
    opt->add_option("--out", out_dir, "output directory")->required();

    double ta = 25.0, tr = 25.0, rh = 50.0, vel = 0.1;
    auto* pmv_cmd = app.add_subcommand("pmv", "evaluate PMV/PPD/sensation for one indoor condition");
    pmv_cmd->add_option("--ta", ta, "air temperature, degC")->required();
    pmv_cmd->add_option("--tr", tr, "mean radiant temperature, degC")->required();
    pmv_cmd->add_option("--rh", rh, "relative humidity, %")->required();
    pmv_cmd->add_option("--vel", vel, "air velocity, m/s")->required();
    add_comfort_options(pmv_cmd, c_opts);

    int gen_days = 365;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto* gen = app.add_subcommand("weather-gen", "generate a synthetic tropical weather CSV");
    gen->add_option("--days", gen_days, "number of days");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output CSV path")->required();

    std::string trace_path, comparison_path;
    auto* rep = app.add_subcommand("report", "print a comparison table from optimization outputs");
    rep->add_option("--trace", trace_path, "trace.csv from optimize")->required();
    rep->add_option("--comparison", comparison_path, "comparison.csv from optimize")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(b_opts, w_opts, c_opts, s_opts, mode_name, all_hours, out_dir);
        if (opt->parsed())
            return cmd_optimize(b_opts, w_opts, c_opts, s_opts, mode_name, all_hours, layer_names, layer_indices,
                                assembly_name, opt_cfg, initial_step, bridge_path, out_dir);
        if (pmv_cmd->parsed()) return cmd_pmv(ta, tr, rh, vel, c_opts);
        if (gen->parsed()) return cmd_weather_gen(gen_days, gen_seed, gen_out);
        if (rep->parsed()) return cmd_report(trace_path, comparison_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
