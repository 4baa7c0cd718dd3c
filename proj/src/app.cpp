#include "iddmp/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "iddmp/parallel.hpp"

namespace iddmp {

namespace {

constexpr double kMinWeight = 1e-9;
constexpr double kMaxWeight = 1e12;
constexpr int kMaxDepth = 40;
constexpr double kImprovement = 1e-9;

SolutionPoint evaluate_point(const CtmdpModel& model, const Design& design,
                             const SolveResult& solved, Provenance provenance) {
    const GainPair g = evaluate_policy(model, solved.policy, model.all_healthy_state());
    SolutionPoint pt;
    pt.g_o = g.g_o;
    pt.ln_g_f = g.log_g_f();
    pt.design = design;
    pt.policy = solved.policy;
    pt.provenance = provenance;
    pt.penalty = solved.penalty;
    pt.flagged = !solved.converged;
    return pt;
}

SolutionPoint fully_active_point(const CtmdpModel& model, const Design& design) {
    const GainPair g = evaluate_policy(model, fully_active_policy(model), model.all_healthy_state());
    SolutionPoint pt;
    pt.g_o = g.g_o;
    pt.ln_g_f = g.log_g_f();
    pt.design = design;
    pt.provenance = Provenance::Dynamic;
    return pt;
}

double weighted(const SolutionPoint& pt, double p) { return pt.g_o + p * std::exp(pt.ln_g_f); }

std::string penalty_note(const SolveResult& r) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "solve at p=" << r.penalty << " stopped after " << r.iterations
        << " iterations with span " << r.span;
    return msg.str();
}

bool same_point(const SolutionPoint& a, const SolutionPoint& b, double tol) {
    const bool lf_same = (std::isinf(a.ln_g_f) && std::isinf(b.ln_g_f))
                             ? true
                             : std::abs(a.ln_g_f - b.ln_g_f) <= tol;
    return std::abs(a.g_o - b.g_o) <= tol && lf_same;
}

bool order_key(const SolutionPoint& a, const SolutionPoint& b) {
    if (a.provenance != b.provenance) return a.provenance < b.provenance;
    if (a.design != b.design) return a.design < b.design;
    const double pa = a.penalty.value_or(std::numeric_limits<double>::infinity());
    const double pb = b.penalty.value_or(std::numeric_limits<double>::infinity());
    return pa < pb;
}

}  // namespace

int default_thread_count() {
    if (const char* env = std::getenv("IDDMP_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string provenance_name(Provenance p) {
    switch (p) {
    case Provenance::Static: return "static";
    case Provenance::Dynamic: return "dynamic";
    case Provenance::Exact: return "exact";
    }
    return "?";
}

Provenance parse_provenance(const std::string& text) {
    if (text == "static") return Provenance::Static;
    if (text == "dynamic") return Provenance::Dynamic;
    if (text == "exact") return Provenance::Exact;
    throw Error("unknown provenance '" + text + "'");
}

bool dominates(const SolutionPoint& a, const SolutionPoint& b, double tolerance) {
    const bool no_worse = a.g_o <= b.g_o + tolerance && a.ln_g_f <= b.ln_g_f + tolerance;
    const bool better = a.g_o < b.g_o - tolerance || a.ln_g_f < b.ln_g_f - tolerance;
    return no_worse && better;
}

std::vector<StaticSolution> non_nested_designs(const std::vector<StaticSolution>& solutions) {
    std::vector<StaticSolution> out;
    for (const auto& s : solutions) {
        const bool nested = std::any_of(solutions.begin(), solutions.end(), [&](const auto& other) {
            return s.design.nested_in(other.design);
        });
        const bool duplicate = std::any_of(out.begin(), out.end(),
                                           [&](const auto& o) { return o.design == s.design; });
        if (!nested && !duplicate) out.push_back(s);
    }
    return out;
}

Sp2Result dichotomic_points(const Instance& instance, const CtmdpModel& model, const Design& design,
                            const SolveOptions& options, Provenance provenance) {
    (void)instance;
    Sp2Result result;
    auto solve = [&](double p) {
        const SolveResult r = solve_average_cost(model, p, options);
        if (!r.converged) {
            result.complete = false;
            result.diagnostics.push_back(design.to_string() + ": " + penalty_note(r));
        }
        return evaluate_point(model, design, r, provenance);
    };
    const SolutionPoint lo = solve(kMinWeight);
    const SolutionPoint hi = solve(kMaxWeight);
    result.points.push_back(lo);
    if (same_point(lo, hi, kDominanceTolerance)) return result;

    std::function<void(const SolutionPoint&, const SolutionPoint&, int)> split =
        [&](const SolutionPoint& a, const SolutionPoint& b, int depth) {
            const double fa = std::exp(a.ln_g_f), fb = std::exp(b.ln_g_f);
            if (depth >= kMaxDepth || !(fa > fb) || !(b.g_o > a.g_o)) return;
            const double p = std::clamp((b.g_o - a.g_o) / (fa - fb), kMinWeight, kMaxWeight);
            const SolutionPoint c = solve(p);
            const double base = weighted(a, p);
            if (!(weighted(c, p) < base - kImprovement * std::max(1.0, std::abs(base)))) return;
            split(a, c, depth + 1);
            result.points.push_back(c);
            split(c, b, depth + 1);
        };
    split(lo, hi, 0);
    result.points.push_back(hi);
    return result;
}

Sp2Result sp2(const Instance& instance, const Design& design, double ln_g_f_static,
              const Sp2Parameters& params) {
    if (!(params.p_min > 0.0)) throw Error("p_min must be > 0");
    if (!(params.delta_p > 1.0)) throw Error("delta_p must be > 1");
    const CtmdpModel model = CtmdpModel::for_design(instance, design, params.model);
    Sp2Result result;
    if (design.is_empty()) {
        result.points.push_back(fully_active_point(model, design));
        return result;
    }
    if (params.mode == Sp2Mode::Dichotomic) {
        result = dichotomic_points(instance, model, design, params.solve, Provenance::Dynamic);
    } else {
        double p = params.p_min;
        bool matched = false;
        for (int level = 0; level < params.max_levels; ++level, p *= params.delta_p) {
            if (!std::isfinite(p)) break;
            const SolveResult r = solve_average_cost(model, p, params.solve);
            if (!r.converged) {
                result.complete = false;
                result.diagnostics.push_back(design.to_string() + ": " + penalty_note(r));
            }
            result.points.push_back(evaluate_point(model, design, r, Provenance::Dynamic));
            if (std::abs(result.points.back().ln_g_f - ln_g_f_static) <= params.lfr_tolerance) {
                matched = true;
                break;
            }
        }
        if (!matched) {
            result.complete = false;
            result.diagnostics.push_back(design.to_string() +
                                         ": penalty sweep cap reached before the static LFR");
        }
    }
    result.points.push_back(fully_active_point(model, design));
    return result;
}

ParetoFront non_dom_filter(std::vector<SolutionPoint> points, double tolerance) {
    std::stable_sort(points.begin(), points.end(), order_key);
    std::vector<SolutionPoint> unique;
    for (auto& pt : points) {
        const bool dup = std::any_of(unique.begin(), unique.end(),
                                     [&](const auto& u) { return same_point(u, pt, tolerance); });
        if (!dup) unique.push_back(std::move(pt));
    }
    ParetoFront front;
    for (const auto& pt : unique) {
        const bool dominated = std::any_of(unique.begin(), unique.end(),
                                           [&](const auto& o) { return dominates(o, pt, tolerance); });
        if (!dominated) front.points.push_back(pt);
    }
    std::stable_sort(front.points.begin(), front.points.end(),
                     [](const auto& a, const auto& b) { return a.g_o < b.g_o; });
    return front;
}

MaintenancePolicy emulating_policy(const CtmdpModel& superset_model, const Design& subset) {
    const auto& bounds = superset_model.bounds();
    if (subset.size() != bounds.size()) throw Error("subset design has the wrong length");
    for (std::size_t i = 0; i < bounds.size(); ++i)
        if (subset[i] > bounds[i]) throw Error("design is not nested in the model's design");
    MaintenancePolicy policy;
    policy.post.resize(superset_model.num_states());
    for (std::size_t s = 0; s < policy.size(); ++s) {
        const int id = static_cast<int>(s);
        const auto& st = superset_model.state(id);
        Action a(st.size());
        for (std::size_t i = 0; i < st.size(); ++i) {
            const int working = bounds[i] - st[i].damaged;  // healthy + repairing
            a[i] = std::max(0, std::min(st[i].damaged, subset[i] - working));
        }
        policy.post[s] = superset_model.find(apply_action(st, a));
    }
    check_policy(superset_model, policy);
    return policy;
}

SolutionPoint static_point(const StaticSolution& solution) {
    SolutionPoint pt;
    pt.g_o = solution.g_o;
    pt.ln_g_f = solution.ln_g_f;
    pt.design = solution.design;
    pt.provenance = Provenance::Static;
    return pt;
}

AppResult run_app(const Instance& instance, const AppParameters& params) {
    AppResult result;
    result.static_solutions = sp1_sweep(instance, params.sweep);
    result.selected = non_nested_designs(result.static_solutions);

    for (const auto& s : result.static_solutions) {
        const bool chosen = std::any_of(result.selected.begin(), result.selected.end(),
                                        [&](const auto& c) { return c.design == s.design; });
        if (!chosen) result.population.push_back(static_point(s));
    }

    std::vector<Sp2Result> runs(result.selected.size());
    std::vector<std::string> failures(result.selected.size());
    parallel_for(result.selected.size(), params.threads, [&](std::size_t k) {
        try {
            runs[k] = sp2(instance, result.selected[k].design, result.selected[k].ln_g_f, params.sp2);
        } catch (const Error& e) {
            failures[k] = result.selected[k].design.to_string() + ": " + e.what();
        }
    });
    for (std::size_t k = 0; k < runs.size(); ++k) {
        if (!failures[k].empty()) {
            result.front.partial = true;
            result.front.diagnostics.push_back(failures[k]);
            result.population.push_back(static_point(result.selected[k]));
            continue;
        }
        if (!runs[k].complete) result.front.partial = true;
        for (auto& d : runs[k].diagnostics) result.front.diagnostics.push_back(d);
        for (auto& pt : runs[k].points) result.population.push_back(pt);
    }

    ParetoFront filtered = non_dom_filter(result.population, params.tolerance);
    result.front.points = std::move(filtered.points);
    return result;
}

}  // namespace iddmp
