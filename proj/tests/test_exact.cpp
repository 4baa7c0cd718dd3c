#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "iddmp/exact.hpp"
#include "support.hpp"

using namespace iddmp;

TEST_SUITE("exact") {

TEST_CASE("design enumeration matches a grid scan") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 5; ++trial) {
        auto catalog = testing::random_instance(rng, {3, 2, 3}).catalog();
        catalog.constraints.back().bound = 4;
        const auto inst = Instance::create(catalog);
        std::vector<Design> grid;
        for (int a = 0; a <= 3; ++a)
            for (int b = 0; b <= 2; ++b)
                for (int c = 0; c <= 3; ++c)
                    if (inst.feasible(Design({a, b, c}))) grid.push_back(Design({a, b, c}));
        CHECK(enumerate_feasible_designs(inst) == grid);

        std::vector<Design> maximal;
        for (const auto& d : grid) {
            bool grows = false;
            for (const auto& e : grid) grows = grows || d.nested_in(e);
            if (!grows) maximal.push_back(d);
        }
        CHECK(enumerate_feasible_designs(inst, true) == maximal);
    }
    CHECK_THROWS_AS(enumerate_feasible_designs(testing::base_instance(), false, 10), Error);
}

TEST_CASE("maximal designs alone give the same supported front") {
    std::mt19937_64 rng(52);
    auto catalog = testing::random_instance(rng, {2, 2}).catalog();
    catalog.constraints.back().bound = 3;
    const auto inst = Instance::create(catalog);
    ExactParameters all, maximal;
    maximal.maximal_only = true;
    const auto a = exact_front(inst, all), b = exact_front(inst, maximal);
    CHECK_FALSE(a.partial);
    // emulation makes every weighted-sum optimum reachable on a maximal design;
    // points supported only within a smaller design may drop out
    auto best = [](const ParetoFront& f, double p) {
        double v = std::numeric_limits<double>::infinity();
        for (const auto& pt : f.points) v = std::min(v, pt.g_o + p * std::exp(pt.ln_g_f));
        return v;
    };
    for (double p = 1e-3; p < 1e9; p *= 3.0)
        CHECK(best(a, p) == doctest::Approx(best(b, p)).epsilon(1e-8));
    CHECK(compare_fronts(b.points, a.points, 1e-7).dominated_count == 0);
}

TEST_CASE("comparison statuses") {
    auto pt = [](double a, double b) {
        SolutionPoint p;
        p.g_o = a;
        p.ln_g_f = b;
        return p;
    };
    const std::vector<SolutionPoint> ref{pt(1, -1), pt(2, -3), pt(5, -9)};
    const auto r = compare_fronts({pt(1, -1), pt(3, -3), pt(4, -8), pt(2.01, -3.0)}, ref, 1e-9);
    REQUIRE(r.rows.size() == 4);
    CHECK_FALSE(r.rows[0].dominated);
    CHECK_FALSE(r.rows[0].absent);
    CHECK(r.rows[0].distance == 0.0);
    CHECK(r.rows[1].dominated);
    CHECK(r.rows[1].dominated_by == 1);
    CHECK(r.rows[2].absent);
    CHECK(r.rows[2].nearest == 2);
    CHECK_FALSE(r.rows[3].absent);  // inside the 2% band, dominated
    CHECK(r.dominated_count == 2);
    CHECK(r.absent_count == 1);
}

}
