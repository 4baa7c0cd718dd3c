#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "iddmp/instance_io.hpp"
#include "iddmp/model.hpp"

#ifndef IDDMP_INSTANCE_DIR
#define IDDMP_INSTANCE_DIR "instances"
#endif

namespace testing {

inline std::string instance_path(const std::string& name) {
    return std::string(IDDMP_INSTANCE_DIR) + "/" + name;
}

inline iddmp::Catalog base_catalog() {
    return iddmp::parse_catalog(iddmp::read_text_file(instance_path("base-6-20")));
}

/// Base 6-20 instance with `label.field=value` overrides applied.
inline iddmp::Instance base_instance(const std::vector<std::string>& overrides = {},
                                     double delta = 0.1) {
    auto catalog = base_catalog();
    for (const auto& o : overrides) iddmp::apply_override(catalog, o);
    return iddmp::Instance::create(std::move(catalog), delta);
}

inline iddmp::ComponentType random_component(std::mt19937_64& rng, const std::string& label) {
    std::uniform_real_distribution<double> pr(0.5, 0.99), tau(0.5, 2.0), cost(0.5, 20.0),
        repair(1.0, 50.0);
    iddmp::ComponentType c;
    c.label = label;
    c.tau = tau(rng);
    c.alpha = iddmp::derive_failure_rate(pr(rng), c.tau);
    c.usage_cost = cost(rng);
    c.repair_cost = repair(rng);
    c.install_cost = 1.0;
    c.weight = 1.0;
    return c;
}

/// Random catalog capping type i at `caps[i]` copies. Types come out sorted by
/// usage cost, so catalog order and canonical order coincide.
inline iddmp::Instance random_instance(std::mt19937_64& rng, const std::vector<int>& caps,
                                       double delta = 0.1) {
    iddmp::Catalog catalog;
    iddmp::Constraint row{"budget", {}, 0.0};
    int total = 0;
    for (std::size_t i = 0; i < caps.size(); ++i) {
        catalog.components.push_back(random_component(rng, ""));
        total += caps[i];
    }
    std::sort(catalog.components.begin(), catalog.components.end(),
              [](const auto& a, const auto& b) { return a.usage_cost < b.usage_cost; });
    for (std::size_t i = 0; i < caps.size(); ++i) catalog.components[i].label = std::to_string(i + 1);
    // one row per type keeps each cap exact, a shared row couples them
    for (std::size_t i = 0; i < caps.size(); ++i) {
        iddmp::Constraint own{"cap" + std::to_string(i + 1), std::vector<double>(caps.size(), 0.0),
                              static_cast<double>(caps[i])};
        own.coefficients[i] = 1.0;
        catalog.constraints.push_back(own);
        row.coefficients.push_back(1.0);
    }
    row.bound = total;
    catalog.constraints.push_back(row);
    return iddmp::Instance::create(std::move(catalog), delta);
}

inline bool close(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= tol;
}

}  // namespace testing
