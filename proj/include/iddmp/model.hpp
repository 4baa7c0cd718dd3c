#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace iddmp {

/// Raised for malformed instances, infeasible parameters and other caller errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One catalog row: a component type that may be installed any number of times.
struct ComponentType {
    std::string label;
    double alpha = 0.0;        ///< failure rate of a healthy copy
    double tau = 0.0;          ///< repair completion rate of a repairing copy
    double usage_cost = 0.0;   ///< cost per unit time while it is the copy in use
    double repair_cost = 0.0;  ///< cost per unit time per copy under repair
    double install_cost = 0.0;
    double weight = 0.0;

    /// Long-run fraction of time a continuously maintained copy is healthy.
    double p() const { return tau / (tau + alpha); }
    /// Long-run fraction of time a continuously maintained copy is under repair.
    double q() const { return alpha / (tau + alpha); }
    double log_q() const;
};

/// A knapsack row: sum_i coefficients[i] * x_i <= bound.
struct Constraint {
    std::string name;
    std::vector<double> coefficients;
    double bound = 0.0;
};

/// Integer copy counts, one entry per component type (in the owning instance's order).
class Design {
public:
    Design() = default;
    explicit Design(std::vector<int> counts) : counts_(std::move(counts)) {}
    static Design empty(std::size_t n) { return Design(std::vector<int>(n, 0)); }

    std::size_t size() const { return counts_.size(); }
    int operator[](std::size_t i) const { return counts_[i]; }
    int& operator[](std::size_t i) { return counts_[i]; }
    const std::vector<int>& counts() const { return counts_; }
    int total() const;
    bool is_empty() const { return total() == 0; }

    /// Componentwise <= other with at least one strict inequality.
    bool nested_in(const Design& other) const;
    /// Componentwise <= other.
    bool covered_by(const Design& other) const;

    std::string to_string() const;  ///< "1,0,2,0"
    static Design parse(const std::string& text);

    auto operator<=>(const Design&) const = default;
    bool operator==(const Design&) const = default;

private:
    std::vector<int> counts_;
};

/// Unbounded copy count marker for types that no knapsack row touches.
inline constexpr int kUnboundedCopies = std::numeric_limits<int>::max();

/// Raw catalog data, in the order the user supplied it.
struct Catalog {
    std::vector<ComponentType> components;
    std::vector<Constraint> constraints;
};

/// A validated problem instance. Component types are stored sorted by usage
/// cost (stable), so index order is priority order for usage.
class Instance {
public:
    /// Validates and canonicalizes `catalog`. Types no knapsack row constrains
    /// are bounded by the analytic copy bound at epsilon = 0 and `delta` (with
    /// the last catalog type's usage cost as penalty reference);
    /// the instance is rejected if that bound is infinite.
    static Instance create(Catalog catalog, double delta = 0.1);

    std::size_t num_types() const { return components_.size(); }
    std::size_t num_constraints() const { return constraints_.size(); }
    const std::vector<ComponentType>& components() const { return components_; }
    const ComponentType& component(std::size_t i) const { return components_[i]; }
    /// Constraint rows with coefficients permuted into canonical order.
    const std::vector<Constraint>& constraints() const { return constraints_; }
    double coefficient(std::size_t row, std::size_t type) const {
        return constraints_[row].coefficients[type];
    }
    const std::vector<int>& copy_bounds() const { return copy_bounds_; }
    int copy_bound(std::size_t i) const { return copy_bounds_[i]; }
    /// Knapsack-only bound, kUnboundedCopies when no row constrains the type.
    int knapsack_bound(std::size_t i) const { return knapsack_bounds_[i]; }
    /// Position of canonical type i in the original catalog.
    std::size_t catalog_index(std::size_t i) const { return catalog_index_[i]; }
    /// Largest usage cost (that of the last canonical type).
    double max_usage_cost() const { return components_.back().usage_cost; }
    /// Usage cost of the last type in catalog order, the reference cost of the
    /// failure penalty (1 + delta) c_N in the static problem.
    double last_type_usage_cost() const { return catalog_.components.back().usage_cost; }

    bool feasible(const Design& design) const;
    /// Resource usage per constraint row.
    std::vector<double> usage(const Design& design) const;

    Design to_catalog_order(const Design& canonical) const;
    Design from_catalog_order(const Design& catalog_design) const;

    /// The catalog this instance was built from (original order).
    const Catalog& catalog() const { return catalog_; }

    /// Builds a new instance with alpha and tau of catalog type k multiplied by
    /// multipliers[k]. Reliabilities are unchanged.
    Instance with_rate_multipliers(const std::vector<double>& multipliers) const;

private:
    Catalog catalog_;
    double delta_ = 0.1;
    std::vector<ComponentType> components_;
    std::vector<Constraint> constraints_;
    std::vector<std::size_t> catalog_index_;
    std::vector<int> knapsack_bounds_;
    std::vector<int> copy_bounds_;
};

/// Failure rate giving steady healthy probability p at repair rate tau.
double derive_failure_rate(double p, double tau);

/// floor(min_j b_j / A_ji) over rows with A_ji > 0; kUnboundedCopies if none.
int knapsack_copy_bound(const std::vector<Constraint>& constraints, std::size_t type);

struct TightBound {
    int bound = 0;
    /// The analytic term was undefined ((1+delta)c_N <= c_i) and the knapsack
    /// bound was used on its own.
    bool fell_back = false;
};

/// Upper bound on the copies of type i in any optimal epsilon-delta design:
/// min{ max{ ceil(ln(-q r / ([(1+d)c_N - c] ln q)) / ln q), ceil(eps / ln q) }, knapsack }.
/// With r_i = 0 the analytic term is unbounded and the knapsack bound applies.
/// c_N defaults to Instance::last_type_usage_cost(). Throws if the result is
/// unbounded.
TightBound tightened_copy_bound(const Instance& instance, std::size_t i, double epsilon,
                                double delta, std::optional<double> reference_cost = std::nullopt);

}  // namespace iddmp
