#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "comfortopt/common.hpp"
#include "comfortopt/materials.hpp"

namespace comfortopt {

struct ParamSpec {
    std::string name;
    double lower = kThicknessLower;
    double upper = kThicknessUpper;
    double initial = 0.0;
    double initial_step = 0.0; // 0 -> (upper - lower) / 8

    void validate() const {
        if (!(lower < upper)) throw Error("parameter '" + name + "': lower must be < upper");
        if (initial < lower || initial > upper)
            throw Error("parameter '" + name + "': initial " + format_full(initial) + " outside bounds");
        if (initial_step < 0.0) throw Error("parameter '" + name + "': initial step must be > 0");
    }

    double effective_step() const { return initial_step > 0.0 ? initial_step : (upper - lower) / 8.0; }
};

struct OptimizerConfig {
    double step_reduction = 0.5;
    double min_step = 1e-4;
    int max_evaluations = 500;

    void validate() const {
        if (!(step_reduction > 0.0 && step_reduction < 1.0)) throw Error("step reduction must be in (0, 1)");
        if (!(min_step > 0.0)) throw Error("min step must be > 0");
        if (max_evaluations < 1) throw Error("evaluation budget must be >= 1");
    }
};

enum class MoveKind { Initial, Exploratory, Pattern };

inline const char* to_string(MoveKind m) {
    switch (m) {
        case MoveKind::Initial: return "initial";
        case MoveKind::Exploratory: return "exploratory";
        case MoveKind::Pattern: return "pattern";
    }
    return "?";
}

struct TraceRecord {
    int eval = 0;
    std::vector<double> params;
    double cost = 0.0;
    MoveKind move = MoveKind::Initial;
    bool accepted = false; // became the new incumbent best
};

struct Trace {
    std::vector<TraceRecord> records;

    void write_csv(std::ostream& out, const std::vector<std::string>& names) const {
        out << "eval";
        for (const std::string& n : names) out << ',' << n;
        out << ",cost,move,accepted\n";
        for (const TraceRecord& r : records) {
            out << r.eval;
            for (double p : r.params) out << ',' << format_full(p);
            out << ',' << format_full(r.cost) << ',' << to_string(r.move) << ',' << (r.accepted ? 1 : 0) << '\n';
        }
    }
};

enum class StopReason { Converged, BudgetExhausted };

struct OptimizeResult {
    std::vector<double> best;
    double best_cost = 0.0;
    Trace trace;
    StopReason stop = StopReason::Converged;
    int evaluations = 0;
};

using CostFunction = std::function<double(const std::vector<double>&)>;

// Classic Hooke-Jeeves pattern search on a box.
//
// Exploratory moves perturb one coordinate at a time in fixed order, + then
// -, clamped to the bounds, and accept strict improvements greedily. A
// successful sweep triggers pattern moves that extrapolate base -> new and
// explore around the extrapolated point; a failed sweep shrinks every step
// by the reduction factor. Terminates when all steps fall below min_step or
// the evaluation budget runs out. Costs are memoized on the exact vector, so
// revisited points (including trials clamped back onto the current point)
// never re-invoke the cost function.
inline OptimizeResult optimize(const CostFunction& cost, const std::vector<ParamSpec>& specs,
                               const OptimizerConfig& config = {}) {
    if (specs.empty()) throw Error("optimize needs at least one parameter");
    for (const ParamSpec& s : specs) s.validate();
    config.validate();

    const std::size_t n = specs.size();
    OptimizeResult result;
    std::map<std::vector<double>, double> memo;
    bool budget_hit = false;

    auto clamp = [&](double v, std::size_t i) {
        if (v < specs[i].lower) return specs[i].lower;
        if (v > specs[i].upper) return specs[i].upper;
        return v;
    };

    // Returns false once the budget is exhausted; memo hits are free and do
    // not appear in the trace again.
    auto evaluate = [&](const std::vector<double>& x, MoveKind kind, double& out) -> bool {
        if (auto it = memo.find(x); it != memo.end()) {
            out = it->second;
            return true;
        }
        if (result.evaluations >= config.max_evaluations) {
            budget_hit = true;
            return false;
        }
        const double fx = cost(x);
        if (!std::isfinite(fx)) {
            std::string at;
            for (double v : x) at += ' ' + format_full(v);
            throw Error("cost function returned a non-finite value at" + at);
        }
        memo.emplace(x, fx);
        TraceRecord rec;
        rec.eval = result.evaluations++;
        rec.params = x;
        rec.cost = fx;
        rec.move = kind;
        rec.accepted = result.trace.records.empty() || fx < result.best_cost;
        if (rec.accepted) {
            result.best = x;
            result.best_cost = fx;
        }
        result.trace.records.push_back(std::move(rec));
        out = fx;
        return true;
    };

    std::vector<double> steps(n);
    for (std::size_t i = 0; i < n; ++i) steps[i] = specs[i].effective_step();

    // Greedy coordinate sweep around (point, value); stops early on budget.
    auto exploratory = [&](std::vector<double> point, double value, MoveKind kind) {
        for (std::size_t i = 0; i < n; ++i) {
            for (double sign : {1.0, -1.0}) {
                std::vector<double> trial = point;
                trial[i] = clamp(point[i] + sign * steps[i], i);
                if (trial[i] == point[i]) continue; // clamped onto the point: failed trial, no evaluation
                double f = 0.0;
                if (!evaluate(trial, kind, f)) return std::make_pair(point, value);
                if (f < value) {
                    point = std::move(trial);
                    value = f;
                    break; // next coordinate
                }
            }
        }
        return std::make_pair(point, value);
    };

    std::vector<double> base(n);
    for (std::size_t i = 0; i < n; ++i) base[i] = specs[i].initial;
    double f_base = 0.0;
    evaluate(base, MoveKind::Initial, f_base); // budget >= 1 guarantees this runs

    while (!budget_hit) {
        auto [cand, f_cand] = exploratory(base, f_base, MoveKind::Exploratory);
        if (f_cand < f_base) {
            std::vector<double> prev = base;
            base = cand;
            f_base = f_cand;
            while (!budget_hit) {
                std::vector<double> pattern(n);
                bool moved = false;
                for (std::size_t i = 0; i < n; ++i) {
                    pattern[i] = clamp(base[i] + (base[i] - prev[i]), i);
                    moved |= pattern[i] != base[i];
                }
                if (!moved) break;
                double f_pattern = 0.0;
                if (!evaluate(pattern, MoveKind::Pattern, f_pattern)) break;
                auto [next, f_next] = exploratory(pattern, f_pattern, MoveKind::Pattern);
                if (f_next < f_base) {
                    prev = base;
                    base = std::move(next);
                    f_base = f_next;
                } else {
                    break;
                }
            }
        } else {
            bool all_below = true;
            for (std::size_t i = 0; i < n; ++i) {
                steps[i] *= config.step_reduction;
                all_below &= steps[i] < config.min_step;
            }
            if (all_below) break;
        }
    }

    result.stop = budget_hit ? StopReason::BudgetExhausted : StopReason::Converged;
    return result;
}

// The paper's runs are one thickness at a time; a multi-layer vector maps
// one entry per active layer, order preserved.
inline WallAssembly map_params(const WallAssembly& assembly, const std::vector<std::size_t>& active_layers,
                               const std::vector<double>& vector) {
    if (active_layers.size() != vector.size())
        throw Error("parameter vector length " + std::to_string(vector.size()) + " does not match " +
                    std::to_string(active_layers.size()) + " active layers");
    WallAssembly out = assembly;
    for (std::size_t i = 0; i < active_layers.size(); ++i)
        out = with_layer_thickness(out, active_layers[i], vector[i]);
    return out;
}

inline WallAssembly map_params(const WallAssembly& assembly, std::size_t active_layer,
                               const std::vector<double>& vector) {
    return map_params(assembly, std::vector<std::size_t>{active_layer}, vector);
}

} // namespace comfortopt
