#include "doctest.h"

#include <random>

#include "iddmp/app.hpp"
#include "iddmp/parallel.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace iddmp;

namespace {

StaticSolution sol(std::vector<int> x) { return StaticSolution{Design(std::move(x)), 0.0, 0.0, ""}; }

SolutionPoint pt(double a, double b) {
    SolutionPoint p;
    p.g_o = a;
    p.ln_g_f = b;
    return p;
}

}  // namespace

TEST_SUITE("app") {

TEST_CASE("nested designs are dropped") {
    const auto out = non_nested_designs(
        {sol({0, 0}), sol({1, 0}), sol({2, 0}), sol({1, 1}), sol({0, 3}), sol({2, 0})});
    std::vector<Design> designs;
    for (const auto& s : out) designs.push_back(s.design);
    CHECK(designs == std::vector<Design>{Design({2, 0}), Design({1, 1}), Design({0, 3})});
}

TEST_CASE("dominance uses the tolerance on both sides") {
    CHECK(dominates(pt(1, 1), pt(2, 1), 1e-9));
    CHECK_FALSE(dominates(pt(1, 1), pt(1, 1), 1e-9));
    CHECK_FALSE(dominates(pt(1, 1), pt(1 + 1e-12, 1), 1e-9));
    CHECK_FALSE(dominates(pt(1, 2), pt(2, 1), 1e-9));
}

TEST_CASE("non-dominated filter matches the quadratic oracle") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> coord(0, 12);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<SolutionPoint> pts;
        std::vector<oracle::Point> raw;
        const int n = 1 + trial % 25;
        for (int k = 0; k < n; ++k) {
            const double a = coord(rng), b = -coord(rng);
            pts.push_back(pt(a, b));
            raw.push_back({a, b});
        }
        const auto front = non_dom_filter(pts);
        std::vector<oracle::Point> got;
        for (const auto& p : front.points) got.push_back({p.g_o, p.ln_g_f});
        CHECK(std::is_sorted(got.begin(), got.end()));
        std::sort(got.begin(), got.end());
        CHECK(got == oracle::nondominated(raw));
    }
}

TEST_CASE("filter keeps the earliest of near-equal points by provenance") {
    auto a = pt(1.0, -2.0), b = pt(1.0 + 1e-12, -2.0);
    a.provenance = Provenance::Dynamic;
    b.provenance = Provenance::Static;
    const auto front = non_dom_filter({a, b});
    REQUIRE(front.points.size() == 1);
    CHECK(front.points[0].provenance == Provenance::Static);
}

TEST_CASE("penalty sweep on one copy gives neglect and full repair") {
    Catalog catalog;
    ComponentType c;
    c.label = "a";
    c.tau = 1.0;
    c.alpha = derive_failure_rate(0.99, 1.0);
    c.usage_cost = 1.0;
    c.repair_cost = 100.0;
    catalog.components.push_back(c);
    catalog.constraints.push_back({"cap", {1.0}, 1.0});
    const auto inst = Instance::create(catalog);
    const auto r = sp2(inst, Design({1}), std::log(0.01));
    CHECK(r.complete);
    const auto front = non_dom_filter(r.points);
    REQUIRE(front.points.size() == 2);
    CHECK(front.points[0].g_o == doctest::Approx(0.0));
    CHECK(front.points[0].ln_g_f == doctest::Approx(0.0));
    CHECK(front.points[1].g_o == doctest::Approx(1.99));
    CHECK(front.points[1].ln_g_f == doctest::Approx(std::log(0.01)));
}

TEST_CASE("dichotomic mode agrees with the sweep on the base instance design") {
    const auto inst = testing::base_instance();
    const auto d = inst.from_catalog_order(Design({4, 0, 0, 0}));
    Sp2Parameters sweep, dich;
    dich.mode = Sp2Mode::Dichotomic;
    const auto a = non_dom_filter(sp2(inst, d, -18.420680744, sweep).points);
    const auto b = non_dom_filter(sp2(inst, d, -18.420680744, dich).points);
    // every dichotomic point is supported, so no sweep point can dominate it
    for (const auto& p : b.points)
        for (const auto& q : a.points) CHECK_FALSE(dominates(q, p, 1e-7));
}

TEST_CASE("emulating policy reproduces the subset design") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 6; ++trial) {
        const auto inst = testing::random_instance(rng, {3, 2});
        const Design big({3, 2});
        std::uniform_int_distribution<int> a(0, 3), b(0, 2);
        const Design small({a(rng), b(rng)});
        const auto model = CtmdpModel::for_design(inst, big);
        const auto policy = emulating_policy(model, small);
        const auto g = evaluate_policy(model, policy, model.all_healthy_state());
        const auto [g_o, g_f] = oracle::product_form(inst, small);
        CHECK(g.g_o == doctest::Approx(g_o).epsilon(1e-9));
        CHECK(g.g_f == doctest::Approx(g_f).epsilon(1e-9));
    }
    const auto inst = testing::random_instance(rng, {2, 2});
    const auto model = CtmdpModel::for_design(inst, Design({1, 1}));
    CHECK_THROWS_AS(emulating_policy(model, Design({2, 0})), Error);
}

TEST_CASE("population and front on the base instance") {
    const auto inst = testing::base_instance();
    const auto r = run_app(inst);
    CHECK_FALSE(r.front.partial);
    std::vector<Design> selected;
    for (const auto& s : r.selected) selected.push_back(inst.to_catalog_order(s.design));
    CHECK(selected == std::vector<Design>{Design({4, 0, 0, 0}), Design({0, 5, 0, 0})});
    CHECK(r.front.points.size() >= r.static_solutions.size());
    for (std::size_t k = 1; k < r.front.points.size(); ++k) {
        CHECK(r.front.points[k].g_o >= r.front.points[k - 1].g_o);
        CHECK(r.front.points[k].ln_g_f < r.front.points[k - 1].ln_g_f);
    }
}

TEST_CASE("thread count does not change the front") {
    const auto inst = testing::base_instance({"1.repair_cost=300"});
    AppParameters one, four;
    four.threads = 4;
    const auto a = run_app(inst, one).front, b = run_app(inst, four).front;
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t k = 0; k < a.points.size(); ++k) {
        CHECK(a.points[k].g_o == b.points[k].g_o);
        CHECK(a.points[k].design == b.points[k].design);
    }
}

TEST_CASE("parallel_for visits every index once and forwards errors") {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 3, [&](std::size_t k) { hits[k]++; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t k) { if (k == 7) throw Error("x"); }), Error);
}

TEST_CASE("provenance names round-trip") {
    for (auto p : {Provenance::Static, Provenance::Dynamic, Provenance::Exact})
        CHECK(parse_provenance(provenance_name(p)) == p);
    CHECK_THROWS_AS(parse_provenance("other"), Error);
}

}
