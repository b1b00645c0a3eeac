#include "lpt/swarm.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "lpt/power.hpp"

namespace lpt {

namespace {

// uniform double strictly inside (0,1)
double unit_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

void SwarmConfig::validate(bool for_pbest) const {
    if (population_size < 1) throw std::invalid_argument("population_size must be >= 1");
    if (mutation_limit < 0) throw std::invalid_argument("mutation_limit must be >= 0");
    if (mutation_rate < 0.0 || mutation_rate > 1.0)
        throw std::invalid_argument("mutation_rate must be in [0,1]");
    if (for_pbest && stagnation_limit < 1)
        throw std::invalid_argument("stagnation_limit must be >= 1");
}

double SwarmConfig::effective_mutation_rate(int width) const {
    if (mutation_rate > 0.0) return mutation_rate;
    return std::min(1.0, 2.0 / std::max(1, width));
}

double PbestMemory::coverage() const {
    if (total_faults == 0) throw std::invalid_argument("zero-fault memory");
    size_t det = 0;
    for (const PbestEntry& e : entries) det += e.new_faults.size();
    return static_cast<double>(det) / total_faults;
}

std::vector<TestVector> PbestMemory::vectors() const {
    std::vector<TestVector> v;
    v.reserve(entries.size());
    for (const PbestEntry& e : entries) v.push_back(e.vector);
    return v;
}

std::vector<TestVector> init_population(int width, int size, uint64_t seed) {
    if (width < 1 || size < 1) throw std::invalid_argument("width and size must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<TestVector> pop(size);
    for (TestVector& v : pop) {
        v.bits.resize(width);
        for (int i = 0; i < width; ++i) v.bits[i] = (rng() & 1) ? '1' : '0';
    }
    return pop;
}

int ff_activity_fitness(const Circuit& c, const TestVector& v,
                        std::span<const uint8_t> prev_state) {
    const int npi = static_cast<int>(c.inputs.size());
    const int ndff = static_cast<int>(c.dffs.size());
    if (v.width() != npi + ndff) throw std::invalid_argument("vector width mismatch");
    if (static_cast<int>(prev_state.size()) != ndff)
        throw std::invalid_argument("state width mismatch");

    // apply v's PI bits with the state nets held at prev_state
    TestVector applied = v;
    for (int d = 0; d < ndff; ++d) applied.bits[npi + d] = prev_state[d] ? '1' : '0';
    StepResult r = simulate_step(c, applied, SimMode::Scan);

    int changed = 0;
    for (int d = 0; d < ndff; ++d) changed += r.next_state[d] != prev_state[d];
    return changed;
}

TestVector mutate(const TestVector& v, double rate, uint64_t seed) {
    if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("rate must be in [0,1]");
    std::mt19937_64 rng(seed);
    TestVector out = v;
    for (char& b : out.bits) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
        if (u < rate) b = b == '0' ? '1' : '0';
    }
    return out;
}

std::vector<TestVector> rank_population(const Circuit& c, std::span<const TestVector> population,
                                        std::span<const Fault> faults, const SwarmConfig& cfg) {
    const int ndff = static_cast<int>(c.dffs.size());
    std::vector<uint8_t> zero_state(ndff, 0);

    struct Ranked {
        size_t idx;
        size_t detects;
        int ff_activity;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(population.size());
    for (size_t i = 0; i < population.size(); ++i) {
        TestVector one[1] = {population[i]};
        DetectionReport r = fault_simulate_parallel(c, one, faults, cfg.mode, cfg.observe);
        int act = ndff ? ff_activity_fitness(c, population[i], zero_state) : 0;
        ranked.push_back({i, r.detected.size(), act});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
        if (a.detects != b.detects) return a.detects > b.detects;
        if (a.ff_activity != b.ff_activity) return a.ff_activity > b.ff_activity;
        return a.idx < b.idx;
    });

    std::vector<TestVector> out;
    out.reserve(population.size());
    for (const Ranked& r : ranked) out.push_back(population[r.idx]);
    return out;
}

PbestMemory pbest_phase(const Circuit& c, std::span<const TestVector> population,
                        std::span<const Fault> faults, const SwarmConfig& cfg) {
    cfg.validate();
    if (population.empty()) throw std::invalid_argument("empty population");
    if (faults.empty()) throw std::invalid_argument("empty fault list");

    const int total = static_cast<int>(faults.size());
    const double rate = cfg.effective_mutation_rate(population[0].width());
    const bool mutation_disabled = cfg.mutation_limit == 0 || rate == 0.0;
    std::mt19937_64 rng(cfg.seed);

    std::vector<bool> hit(total, false);
    int hit_count = 0;

    // simulate one vector against the still-undetected universe; returns the
    // original indices of newly detected faults
    auto new_detections = [&](const TestVector& v) {
        std::vector<Fault> remaining;
        std::vector<int> remap;
        for (int i = 0; i < total; ++i)
            if (!hit[i]) {
                remaining.push_back(faults[i]);
                remap.push_back(i);
            }
        std::vector<int> out;
        if (remaining.empty()) return out;
        TestVector one[1] = {v};
        DetectionReport r =
            fault_simulate_parallel(c, one, remaining, cfg.mode, cfg.observe);
        for (int idx : r.detected) out.push_back(remap[idx]);
        return out;
    };
    auto individual_coverage = [&](const TestVector& v) {
        TestVector one[1] = {v};
        DetectionReport r = fault_simulate_parallel(c, one, faults, cfg.mode, cfg.observe);
        return static_cast<double>(r.detected.size()) / total;
    };

    PbestMemory mem;
    mem.total_faults = total;

    const size_t pop = population.size();
    size_t next = 0;
    int stagnation = 0;
    size_t since_contribution = 0;

    while (hit_count < total && stagnation < cfg.stagnation_limit) {
        if (mutation_disabled && since_contribution >= pop) break;  // exhausted

        const TestVector& candidate = population[next % pop];
        ++next;

        TestVector chosen = candidate;
        std::vector<int> contrib = new_detections(candidate);
        if (contrib.empty() && !mutation_disabled) {
            // keep the best of up to mutation_limit independent mutants
            for (int m = 0; m < cfg.mutation_limit; ++m) {
                TestVector mut = mutate(candidate, rate, rng());
                std::vector<int> got = new_detections(mut);
                if (got.size() > contrib.size()) {
                    contrib = std::move(got);
                    chosen = mut;
                }
            }
        }

        if (contrib.empty()) {
            ++stagnation;
            ++since_contribution;
            continue;
        }
        stagnation = 0;
        since_contribution = 0;
        for (int i : contrib) hit[i] = true;
        hit_count += static_cast<int>(contrib.size());

        PbestEntry e;
        e.vector = chosen;
        e.new_faults = std::move(contrib);
        e.cumulative_coverage = static_cast<double>(hit_count) / total;
        e.individual_coverage = individual_coverage(chosen);
        mem.entries.push_back(std::move(e));
    }
    return mem;
}

Frame gbest_framing(const Circuit& c, const PbestMemory& mem, const SwarmConfig& cfg,
                    std::span<const double> per_gate_cap) {
    if (mem.entries.empty()) throw std::invalid_argument("empty pbest memory");

    const size_t n = mem.entries.size();
    auto weighted = [&](std::span<const TestVector> seq) {
        return simulate_sequence(c, seq, cfg.mode, per_gate_cap).total_weighted;
    };

    size_t start = 0;
    for (size_t i = 1; i < n; ++i)
        if (mem.entries[i].individual_coverage > mem.entries[start].individual_coverage)
            start = i;

    std::vector<TestVector> seq{mem.entries[start].vector};
    std::vector<size_t> remaining;
    for (size_t i = 0; i < n; ++i)
        if (i != start) remaining.push_back(i);

    double current = 0.0;  // weighted toggles of a 1-vector frame
    while (!remaining.empty()) {
        size_t best_pos = 0;
        double best_total = 0.0;
        bool have = false;
        for (size_t pos = 0; pos < remaining.size(); ++pos) {
            seq.push_back(mem.entries[remaining[pos]].vector);
            double t = weighted(seq);
            seq.pop_back();
            if (!have || t - current < best_total - current) {
                best_total = t;
                best_pos = pos;
                have = true;
            }
        }
        seq.push_back(mem.entries[remaining[best_pos]].vector);
        current = best_total;
        remaining.erase(remaining.begin() + best_pos);
    }

    // The memory order is itself one candidate construction; never return a
    // frame that toggles more than it.
    std::vector<TestVector> memory_order = mem.vectors();
    double greedy_w = current;
    double mem_w = weighted(memory_order);
    long greedy_h = adjacent_hamming(seq);
    long mem_h = adjacent_hamming(memory_order);

    Frame f;
    if (greedy_w > mem_w) {
        f.vectors = std::move(memory_order);
        f.total_weighted_toggles = mem_w;
        f.total_adjacent_hamming = mem_h;
    } else {
        f.vectors = std::move(seq);
        f.total_weighted_toggles = greedy_w;
        f.total_adjacent_hamming = greedy_h;
    }
    f.total_weighted_toggles += static_cast<double>(cfg.toggle_counter_init);
    return f;
}

Frame exact_min_order(std::span<const TestVector> vectors) {
    const size_t n = vectors.size();
    if (n < 1 || n > 8) throw std::invalid_argument("exact_min_order requires 1 <= n <= 8");

    std::vector<std::vector<long>> dist(n, std::vector<long>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t b = 0; b < vectors[i].bits.size(); ++b)
                dist[i][j] += vectors[i].bits[b] != vectors[j].bits[b];

    std::vector<size_t> perm(n), best(n);
    std::iota(perm.begin(), perm.end(), 0);
    best = perm;
    long best_total = 0;
    for (size_t i = 1; i < n; ++i) best_total += dist[perm[i - 1]][perm[i]];

    while (std::next_permutation(perm.begin(), perm.end())) {
        long total = 0;
        for (size_t i = 1; i < n && total < best_total; ++i) total += dist[perm[i - 1]][perm[i]];
        if (total < best_total) {
            best_total = total;
            best = perm;
        }
    }

    Frame f;
    for (size_t i : best) f.vectors.push_back(vectors[i]);
    f.total_adjacent_hamming = best_total;
    return f;
}

std::vector<double> velocity_update(std::span<const double> present,
                                    std::span<const double> velocity,
                                    std::span<const double> pbest,
                                    std::span<const double> gbest, double c1, double c2,
                                    uint64_t seed) {
    const size_t n = present.size();
    if (velocity.size() != n || pbest.size() != n || gbest.size() != n)
        throw std::invalid_argument("array length mismatch");
    std::mt19937_64 rng(seed);
    std::vector<double> out(n);
    for (size_t i = 0; i < n; ++i) {
        double r1 = unit_open(rng);
        double r2 = unit_open(rng);
        out[i] = velocity[i] + c1 * r1 * (pbest[i] - present[i]) +
                 c2 * r2 * (gbest[i] - present[i]);
    }
    return out;
}

std::vector<double> position_update(std::span<const double> present,
                                    std::span<const double> velocity) {
    if (velocity.size() != present.size())
        throw std::invalid_argument("array length mismatch");
    std::vector<double> out(present.begin(), present.end());
    for (size_t i = 0; i < out.size(); ++i) out[i] += velocity[i];
    return out;
}

}  // namespace lpt
