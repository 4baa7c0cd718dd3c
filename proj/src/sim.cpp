#include "iddmp/sim.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <vector>

namespace iddmp {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

// uniform in (0, 1], built from the top 53 bits so the stream is portable
double uniform(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

SimReport simulate_policy(const CtmdpModel& model, const MaintenancePolicy& policy,
                          const SimOptions& options) {
    if (!(options.horizon > 0.0)) throw Error("horizon must be > 0");
    if (options.batches < 2) throw Error("at least 2 batches are required");
    check_policy(model, policy);
    const int start = options.initial_state < 0 ? model.all_healthy_state() : options.initial_state;
    if (start < 0 || static_cast<std::size_t>(start) >= model.num_states())
        throw Error("initial state is not part of the model");

    SimReport report;
    report.horizon = options.horizon;
    report.batches = options.batches;
    report.seed = options.seed;
    const double length = options.horizon / options.batches;
    std::vector<double> batch_o(options.batches), batch_f(options.batches);
    std::size_t traced = 0;

    int post = policy.post[start];
    for (int b = 0; b < options.batches; ++b) {
        std::mt19937_64 rng(splitmix64(options.seed + static_cast<std::uint64_t>(b)));
        double t = 0.0, acc_o = 0.0, acc_f = 0.0;
        while (true) {
            const auto& cost = model.cost(post);
            const double out = model.total_outflow(post);
            const double hold = out > 0.0 ? -std::log(uniform(rng)) / out
                                          : std::numeric_limits<double>::infinity();
            if (t + hold >= length) {
                acc_o += cost.operational * (length - t);
                acc_f += cost.failure * (length - t);
                break;
            }
            t += hold;
            acc_o += cost.operational * hold;
            acc_f += cost.failure * hold;
            double pick = uniform(rng) * out;
            const auto edges = model.transitions(post);
            int target = edges.back().target;
            for (const auto& e : edges) {
                if (pick <= e.rate) {
                    target = e.target;
                    break;
                }
                pick -= e.rate;
            }
            const int next = policy.post[target];
            ++report.events;
            if (model.cost(next).failure > 0.0 && cost.failure == 0.0) ++report.failure_events;
            if (options.trace && traced < options.trace_limit) {
                *options.trace << (b * length + t) << ' ' << model.state(target).to_string() << " -> "
                               << model.state(next).to_string() << '\n';
                ++traced;
            }
            post = next;
        }
        batch_o[b] = acc_o / length;
        batch_f[b] = acc_f / length;
    }

    auto mean_se = [&](const std::vector<double>& v, double& mean, double& se) {
        mean = 0.0;
        for (double x : v) mean += x;
        mean /= v.size();
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        se = std::sqrt(ss / (v.size() - 1) / v.size());
    };
    mean_se(batch_o, report.g_o, report.se_o);
    mean_se(batch_f, report.g_f, report.se_f);
    report.few_failures = report.failure_events < 100;
    return report;
}

}  // namespace iddmp
