#include "iddmp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace iddmp {

namespace {

constexpr double kFeasibilitySlack = 1e-9;

void validate_component(const ComponentType& c) {
    const std::string who = "component '" + c.label + "': ";
    if (!(c.tau > 0.0) || !std::isfinite(c.tau)) throw Error(who + "repair rate tau must be > 0");
    if (!(c.alpha > 0.0) || !std::isfinite(c.alpha))
        throw Error(who + "failure rate alpha must be > 0");
    if (c.usage_cost < 0.0 || c.repair_cost < 0.0 || c.install_cost < 0.0)
        throw Error(who + "costs must be non-negative");
    if (c.weight < 0.0) throw Error(who + "weight must be non-negative");
}

// Analytic copy bound with the knapsack term left out; nullopt when infinite.
std::optional<long long> analytic_copy_bound(const ComponentType& c, double c_max, double epsilon,
                                             double delta, bool& fell_back) {
    const double lq = c.log_q();
    const double eps_term = std::ceil(epsilon / lq);
    const double gap = (1.0 + delta) * c_max - c.usage_cost;
    if (gap <= 0.0) {
        fell_back = true;
        return std::nullopt;
    }
    if (c.repair_cost <= 0.0) return std::nullopt;  // objective keeps decreasing in x
    const double arg = -c.q() * c.repair_cost / (gap * lq);
    const double convex_term = std::ceil(std::log(arg) / lq);
    const double bound = std::max({convex_term, eps_term, 0.0});
    if (!std::isfinite(bound) || bound > 1e9) return std::nullopt;
    return static_cast<long long>(bound);
}

}  // namespace

double ComponentType::log_q() const { return std::log(alpha) - std::log(tau + alpha); }

int Design::total() const { return std::accumulate(counts_.begin(), counts_.end(), 0); }

bool Design::covered_by(const Design& other) const {
    if (other.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
        if (counts_[i] > other.counts_[i]) return false;
    return true;
}

bool Design::nested_in(const Design& other) const {
    return covered_by(other) && counts_ != other.counts_;
}

std::string Design::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(counts_[i]);
    }
    return out;
}

Design Design::parse(const std::string& text) {
    std::vector<int> counts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size() || v < 0) throw Error("bad count");
            counts.push_back(v);
        } catch (const std::exception&) {
            throw Error("invalid design '" + text + "'");
        }
    }
    return Design(std::move(counts));
}

double derive_failure_rate(double p, double tau) {
    if (!(p > 0.0 && p < 1.0)) throw Error("reliability must lie in (0,1)");
    if (!(tau > 0.0)) throw Error("repair rate tau must be > 0");
    return tau * (1.0 - p) / p;
}

int knapsack_copy_bound(const std::vector<Constraint>& constraints, std::size_t type) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& row : constraints) {
        const double a = row.coefficients.at(type);
        if (a > 0.0) best = std::min(best, std::floor(row.bound / a + kFeasibilitySlack));
    }
    if (!std::isfinite(best) || best >= static_cast<double>(kUnboundedCopies))
        return kUnboundedCopies;
    return static_cast<int>(best);
}

Instance Instance::create(Catalog catalog, double delta) {
    if (catalog.components.empty()) throw Error("instance has an empty component catalog");
    if (delta < 0.0) throw Error("delta must be >= 0");
    const std::size_t n = catalog.components.size();
    for (const auto& c : catalog.components) validate_component(c);
    for (const auto& row : catalog.constraints) {
        if (row.coefficients.size() != n)
            throw Error("constraint '" + row.name + "' has " +
                        std::to_string(row.coefficients.size()) + " coefficients, expected " +
                        std::to_string(n));
        if (!(row.bound >= 0.0)) throw Error("constraint '" + row.name + "' has a negative bound");
        for (double a : row.coefficients)
            if (!(a >= 0.0) || !std::isfinite(a))
                throw Error("constraint '" + row.name + "' has a negative coefficient");
    }

    Instance inst;
    inst.catalog_ = catalog;
    inst.delta_ = delta;
    inst.catalog_index_.resize(n);
    std::iota(inst.catalog_index_.begin(), inst.catalog_index_.end(), std::size_t{0});
    std::stable_sort(inst.catalog_index_.begin(), inst.catalog_index_.end(),
                     [&](std::size_t a, std::size_t b) {
                         return catalog.components[a].usage_cost < catalog.components[b].usage_cost;
                     });
    for (std::size_t i : inst.catalog_index_) inst.components_.push_back(catalog.components[i]);
    for (const auto& row : catalog.constraints) {
        Constraint permuted{row.name, {}, row.bound};
        for (std::size_t i : inst.catalog_index_) permuted.coefficients.push_back(row.coefficients[i]);
        inst.constraints_.push_back(std::move(permuted));
    }

    const double c_ref = inst.last_type_usage_cost();
    for (std::size_t i = 0; i < n; ++i) {
        const int knap = knapsack_copy_bound(inst.constraints_, i);
        inst.knapsack_bounds_.push_back(knap);
        if (knap != kUnboundedCopies) {
            inst.copy_bounds_.push_back(knap);
            continue;
        }
        bool fell_back = false;
        auto analytic = analytic_copy_bound(inst.components_[i], c_ref, 0.0, delta, fell_back);
        if (!analytic)
            throw Error("component '" + inst.components_[i].label +
                        "' is not constrained by any knapsack row and has no finite copy bound");
        inst.copy_bounds_.push_back(static_cast<int>(*analytic));
    }
    return inst;
}

std::vector<double> Instance::usage(const Design& design) const {
    std::vector<double> used(constraints_.size(), 0.0);
    for (std::size_t j = 0; j < constraints_.size(); ++j)
        for (std::size_t i = 0; i < design.size(); ++i)
            used[j] += constraints_[j].coefficients[i] * design[i];
    return used;
}

bool Instance::feasible(const Design& design) const {
    if (design.size() != num_types()) return false;
    for (std::size_t i = 0; i < design.size(); ++i)
        if (design[i] < 0 || design[i] > copy_bounds_[i]) return false;
    const auto used = usage(design);
    for (std::size_t j = 0; j < constraints_.size(); ++j)
        if (used[j] > constraints_[j].bound + kFeasibilitySlack) return false;
    return true;
}

Design Instance::to_catalog_order(const Design& canonical) const {
    std::vector<int> out(num_types(), 0);
    for (std::size_t i = 0; i < num_types(); ++i) out[catalog_index_[i]] = canonical[i];
    return Design(std::move(out));
}

Design Instance::from_catalog_order(const Design& catalog_design) const {
    if (catalog_design.size() != num_types())
        throw Error("design has " + std::to_string(catalog_design.size()) + " entries, expected " +
                    std::to_string(num_types()));
    std::vector<int> out(num_types(), 0);
    for (std::size_t i = 0; i < num_types(); ++i) out[i] = catalog_design[catalog_index_[i]];
    return Design(std::move(out));
}

Instance Instance::with_rate_multipliers(const std::vector<double>& multipliers) const {
    if (multipliers.size() != num_types())
        throw Error("expected " + std::to_string(num_types()) + " rate multipliers");
    Catalog scaled = catalog_;
    for (std::size_t k = 0; k < multipliers.size(); ++k) {
        if (!(multipliers[k] > 0.0)) throw Error("rate multipliers must be > 0");
        scaled.components[k].alpha *= multipliers[k];
        scaled.components[k].tau *= multipliers[k];
    }
    return create(std::move(scaled), delta_);
}

TightBound tightened_copy_bound(const Instance& instance, std::size_t i, double epsilon,
                                double delta, std::optional<double> reference_cost) {
    if (delta < 0.0) throw Error("delta must be >= 0");
    if (epsilon > 0.0) throw Error("epsilon must be <= 0");
    TightBound out;
    const int knap = instance.knapsack_bound(i);
    auto analytic = analytic_copy_bound(instance.component(i),
                                        reference_cost.value_or(instance.last_type_usage_cost()), epsilon,
                                        delta, out.fell_back);
    if (!analytic) {
        if (knap == kUnboundedCopies)
            throw Error("copy bound for component '" + instance.component(i).label +
                        "' is unbounded");
        out.bound = knap;
        return out;
    }
    out.bound = static_cast<int>(std::min<long long>(*analytic, knap));
    return out;
}

}  // namespace iddmp
