#include "datalin/zsolve.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

namespace datalin {

unsigned thread_count() {
    unsigned n = 0;
    if (const char* env = std::getenv("DATALIN_THREADS")) n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

WeightColumns weight_columns(const std::vector<Hypergraph>& gens, int m) {
    WeightColumns wc;
    std::map<IntVector, std::size_t> seen;
    for (std::size_t j = 0; j < gens.size(); ++j) {
        for (auto& [x, w] : weights_of_size(gens[j], m)) {
            if (seen.emplace(w, wc.columns.size()).second) {
                wc.columns.push_back(w);
                wc.sources.emplace_back(j, x);
            }
        }
    }
    return wc;
}

LocalReport local_check(const Instance& inst) {
    inst.validate();
    const Hypergraph target = encode_hypergraph(inst.target);
    std::vector<Hypergraph> gens;
    for (const auto& g : inst.generators) gens.push_back(encode_hypergraph(g));

    // Zero target weights are trivially in every span, so only nonzero ones are checked.
    struct Job {
        const ZLattice* lattice;
        std::size_t columns;
        KSet x;
        IntVector y;
    };
    std::vector<ZLattice> lattices;
    std::vector<std::size_t> counts;
    lattices.reserve(static_cast<std::size_t>(inst.arity) + 1);
    for (int m = 0; m <= inst.arity; ++m) {
        WeightColumns wc = weight_columns(gens, m);
        counts.push_back(wc.columns.size());
        lattices.emplace_back(static_cast<std::size_t>(inst.dim), std::move(wc.columns));
    }
    std::vector<Job> jobs;
    for (int m = 0; m <= inst.arity; ++m)
        for (auto& [x, w] : weights_of_size(target, m)) jobs.push_back(Job{&lattices[m], counts[m], x, w});

    std::vector<char> ok(jobs.size(), 1);
    const unsigned workers = std::min<unsigned>(thread_count(), static_cast<unsigned>(std::max<std::size_t>(1, jobs.size() / 64)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) ok[i] = jobs[i].lattice->contains(jobs[i].y);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) ok[i] = jobs[i].lattice->contains(jobs[i].y);
            });
        for (auto& th : pool) th.join();
    }

    LocalReport report;
    for (std::size_t i = 0; i < jobs.size(); ++i)
        if (!ok[i]) report.failures.push_back(LocalFailure{jobs[i].x, jobs[i].y, jobs[i].columns});
    std::sort(report.failures.begin(), report.failures.end(), [](const LocalFailure& a, const LocalFailure& b) {
        if (a.subset.size() != b.subset.size()) return a.subset.size() < b.subset.size();
        return a.subset < b.subset;
    });
    report.decision = report.failures.empty();
    return report;
}

bool z_solvable(const Instance& inst) { return local_check(inst).decision; }

}  // namespace datalin
