#include "iddmp/dop.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace iddmp {

namespace {

constexpr double kFeasibilitySlack = 1e-9;
constexpr double kEpsilonSlack = 1e-12;

void enumerate(const Instance& instance, const std::vector<int>& bounds, std::size_t type,
               std::vector<int>& x, std::vector<double>& used,
               const std::function<void(const Design&)>& visit) {
    if (type == x.size()) {
        visit(Design(x));
        return;
    }
    const auto& rows = instance.constraints();
    for (int k = 0; k <= bounds[type]; ++k) {
        bool ok = true;
        for (std::size_t j = 0; j < rows.size(); ++j)
            if (used[j] + rows[j].coefficients[type] * k > rows[j].bound + kFeasibilitySlack) ok = false;
        // coefficients are non-negative, so larger k only uses more
        if (!ok) break;
        for (std::size_t j = 0; j < rows.size(); ++j) used[j] += rows[j].coefficients[type] * k;
        x[type] = k;
        enumerate(instance, bounds, type + 1, x, used, visit);
        for (std::size_t j = 0; j < rows.size(); ++j) used[j] -= rows[j].coefficients[type] * k;
    }
    x[type] = 0;
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * (std::abs(a) + std::abs(b) + 1.0); }

}  // namespace

void for_each_feasible_design(const Instance& instance, const std::vector<int>& bounds,
                              const std::function<void(const Design&)>& visit) {
    if (bounds.size() != instance.num_types()) throw Error("bounds have the wrong length");
    for (int b : bounds)
        if (b < 0 || b == kUnboundedCopies) throw Error("design enumeration needs finite bounds");
    std::vector<int> x(bounds.size(), 0);
    std::vector<double> used(instance.num_constraints(), 0.0);
    enumerate(instance, bounds, 0, x, used, visit);
}

DopObjectives dop_objectives(const Instance& instance, const Design& design) {
    if (design.size() != instance.num_types()) throw Error("design has the wrong length");
    DopObjectives out;
    double log_fall_through = 0.0;  // ln prod_{k<i} q_k^x_k
    for (std::size_t i = 0; i < design.size(); ++i) {
        const auto& c = instance.component(i);
        const double lq = c.log_q();
        out.g_o += c.repair_cost * c.q() * design[i];
        out.g_o += c.usage_cost * -std::expm1(design[i] * lq) * std::exp(log_fall_through);
        log_fall_through += design[i] * lq;
    }
    out.ln_g_f = log_fall_through;
    return out;
}

ProbabilityChain probability_chain_values(const Instance& instance, const Design& design) {
    if (design.size() != instance.num_types()) throw Error("design has the wrong length");
    ProbabilityChain chain;
    double z_prev = 1.0;
    for (std::size_t i = 0; i < design.size(); ++i) {
        const auto& c = instance.component(i);
        const int slots = std::max(instance.copy_bound(i), design[i]);
        std::vector<double> y(slots), z(slots);
        for (int j = 1; j <= slots; ++j) {
            const double use = j <= design[i] ? z_prev * c.p() : 0.0;
            y[j - 1] = use;
            z[j - 1] = z_prev - use;
            chain.usage_cost += c.usage_cost * use;
            z_prev = z[j - 1];
        }
        chain.y.push_back(std::move(y));
        chain.z.push_back(std::move(z));
    }
    chain.failure = z_prev;
    return chain;
}

double penalty_reference_cost(const Instance& instance, PenaltyReference reference) {
    return reference == PenaltyReference::LastType ? instance.last_type_usage_cost()
                                                   : instance.max_usage_cost();
}

double augmented_objective(const Instance& instance, const Design& design, double delta,
                           PenaltyReference reference) {
    const auto obj = dop_objectives(instance, design);
    return obj.g_o +
           (1.0 + delta) * penalty_reference_cost(instance, reference) * std::exp(obj.ln_g_f);
}

Design solve_fdop(const Instance& instance) {
    Design best = Design::empty(instance.num_types());
    double best_value = 0.0;
    for_each_feasible_design(instance, instance.copy_bounds(), [&](const Design& x) {
        double value = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) value += x[i] * instance.component(i).log_q();
        if (value < best_value && !near(value, best_value)) {
            best_value = value;
            best = x;
        }
    });
    return best;
}

std::optional<StaticSolution> solve_eps_delta_dop(const Instance& instance, double epsilon,
                                                  double delta, PenaltyReference reference) {
    if (epsilon > 0.0) throw Error("epsilon must be <= 0");
    if (delta < 0.0) throw Error("delta must be >= 0");
    const double c_n = penalty_reference_cost(instance, reference);

    auto search = [&](const std::vector<int>& bounds) {
        std::optional<StaticSolution> best;
        double best_value = 0.0;
        for_each_feasible_design(instance, bounds, [&](const Design& x) {
            const auto obj = dop_objectives(instance, x);
            if (obj.ln_g_f > epsilon + kEpsilonSlack) return;
            const double value = obj.g_o + (1.0 + delta) * c_n * std::exp(obj.ln_g_f);
            bool take = !best;
            if (best) {
                if (near(value, best_value))
                    take = obj.ln_g_f < best->ln_g_f && !near(obj.ln_g_f, best->ln_g_f);
                else
                    take = value < best_value;
            }
            if (take) {
                best = StaticSolution{x, obj.g_o, obj.ln_g_f, ""};
                best_value = value;
            }
        });
        return best;
    };

    std::vector<int> bounds(instance.num_types());
    for (std::size_t i = 0; i < bounds.size(); ++i)
        bounds[i] = tightened_copy_bound(instance, i, epsilon, delta, c_n).bound;
    auto best = search(bounds);
    // the epsilon term of the bound is per type; mixed designs may need the full range
    if (!best && bounds != instance.copy_bounds()) best = search(instance.copy_bounds());
    if (best) best->tag = best->design.is_empty() ? "trivial" : "sweep";
    return best;
}

std::vector<StaticSolution> sp1_sweep(const Instance& instance, const SweepParameters& params) {
    if (!(params.delta_eps < 0.0)) throw Error("delta_eps must be < 0");
    if (params.eps_min > 0.0) throw Error("eps_min must be <= 0");
    if (params.delta < 0.0) throw Error("delta must be >= 0");
    const Design fdop = solve_fdop(instance);
    const auto fdop_obj = dop_objectives(instance, fdop);

    std::vector<StaticSolution> out;
    auto seen = [&](const Design& d) {
        return std::any_of(out.begin(), out.end(), [&](const auto& s) { return s.design == d; });
    };
    double eps = params.eps_min;
    while (eps >= fdop_obj.ln_g_f - kEpsilonSlack) {
        auto sol = solve_eps_delta_dop(instance, std::min(eps, 0.0), params.delta, params.reference);
        if (!sol) break;
        if (!seen(sol->design)) out.push_back(*sol);
        eps = sol->ln_g_f + params.delta_eps;
    }
    if (!seen(fdop)) {
        if (out.empty() || fdop_obj.ln_g_f < out.back().ln_g_f - kEpsilonSlack)
            out.push_back(StaticSolution{fdop, fdop_obj.g_o, fdop_obj.ln_g_f,
                                         fdop.is_empty() ? "trivial" : "fdop"});
    } else {
        for (auto& s : out)
            if (s.design == fdop && !fdop.is_empty()) s.tag = "fdop";
    }
    return out;
}

double set_objective(const Instance& instance, std::vector<std::pair<std::size_t, int>> elements,
                     double delta, PenaltyReference reference) {
    std::sort(elements.begin(), elements.end());
    double value = 0.0;
    double fall_through = 1.0;
    for (const auto& [type, copy] : elements) {
        const auto& c = instance.component(type);
        value += c.q() * c.repair_cost;
        value += c.usage_cost * c.p() * fall_through;
        fall_through *= c.q();
    }
    return value + (1.0 + delta) * penalty_reference_cost(instance, reference) * fall_through;
}

void write_static_solutions(std::ostream& out, const Instance& instance,
                            const std::vector<StaticSolution>& solutions) {
    const auto old = out.precision(12);
    out << "# design g_o ln_g_f tag\n";
    for (const auto& s : solutions)
        out << instance.to_catalog_order(s.design).to_string() << ' ' << s.g_o << ' ' << s.ln_g_f
            << ' ' << s.tag << '\n';
    out.precision(old);
}

}  // namespace iddmp
