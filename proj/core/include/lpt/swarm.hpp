// Two-phase swarm search for low-power test sets: a pbest phase that keeps
// mutating random vectors until they stop contributing fault coverage, and a
// gbest framing phase that orders the kept set for minimum toggling. The
// canonical continuous velocity/position kernel is included as a reference.

#ifndef LPT_SWARM_HPP
#define LPT_SWARM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "lpt/netlist.hpp"
#include "lpt/simcore.hpp"

namespace lpt {

struct SwarmConfig {
    int population_size = 32;
    int mutation_limit = 5;      // max mutants tried per non-contributing candidate
    double mutation_rate = 0.0;  // per-bit flip probability; 0 means default 2/width
    int stagnation_limit = 20;   // consecutive non-contributing candidates before stop
    uint64_t seed = 1;
    double c1 = 2.0, c2 = 2.0;   // learning factors for the continuous kernel
    long toggle_counter_init = 0;  // initial value of the framing toggle counter
    SimMode mode = SimMode::Scan;
    Observability observe = Observability::Scan;

    void validate(bool for_pbest = true) const;
    double effective_mutation_rate(int width) const;
};

struct Particle {
    TestVector vector;
    double fitness = 0.0;  // fault-coverage contribution, in [0,1]
    int ff_activity = 0;   // flip-flops changed by this vector
};

struct PbestEntry {
    TestVector vector;
    std::vector<int> new_faults;  // fault indices first detected by this entry
    double cumulative_coverage = 0.0;
    double individual_coverage = 0.0;  // against the full fault universe
};

struct PbestMemory {
    std::vector<PbestEntry> entries;
    int total_faults = 0;

    double coverage() const;
    std::vector<TestVector> vectors() const;
};

struct Frame {
    std::vector<TestVector> vectors;  // application order, t1 first
    double total_weighted_toggles = 0.0;
    long total_adjacent_hamming = 0;
};

// Uniform random population, deterministic per seed.
std::vector<TestVector> init_population(int width, int size, uint64_t seed);

// Number of DFFs whose next state after applying v differs from prev_state.
int ff_activity_fitness(const Circuit& c, const TestVector& v,
                        std::span<const uint8_t> prev_state);

// Independent per-bit flips with the given probability, deterministic per seed.
TestVector mutate(const TestVector& v, double rate, uint64_t seed);

// Orders a population by decreasing individual fault coverage (ties: higher
// flip-flop activity from the all-zero state, then original index). Feeding
// the ranked population to pbest_phase makes the kept set compact.
std::vector<TestVector> rank_population(const Circuit& c, std::span<const TestVector> population,
                                        std::span<const Fault> faults, const SwarmConfig& cfg);

// Coverage-driven selection: round-robin over the population, keeping every
// vector (or best mutant) that detects at least one still-undetected fault.
// Stops at full coverage, at stagnation_limit consecutive non-contributors,
// or when the population is exhausted with mutation disabled.
PbestMemory pbest_phase(const Circuit& c, std::span<const TestVector> population,
                        std::span<const Fault> faults, const SwarmConfig& cfg);

// Greedy toggle-minimizing ordering of the kept set. Starts from the entry of
// highest individual coverage and repeatedly appends the candidate with the
// smallest incremental weighted toggle count; falls back to memory order if
// the greedy result is worse on either metric.
Frame gbest_framing(const Circuit& c, const PbestMemory& mem, const SwarmConfig& cfg,
                    std::span<const double> per_gate_cap);

// Exhaustive minimum-adjacent-Hamming ordering, n <= 8. Verification oracle
// for the framing machinery; ties resolved to the lexicographically smallest
// index sequence.
Frame exact_min_order(std::span<const TestVector> vectors);

// Canonical continuous PSO update:
//   v' = v + c1*rand()*(pbest - present) + c2*rand()*(gbest - present)
//   present' = present + v'
// One rand() in (0,1) is drawn per term per element, c1 terms first.
std::vector<double> velocity_update(std::span<const double> present,
                                    std::span<const double> velocity,
                                    std::span<const double> pbest,
                                    std::span<const double> gbest, double c1, double c2,
                                    uint64_t seed);
std::vector<double> position_update(std::span<const double> present,
                                    std::span<const double> velocity);

}  // namespace lpt

#endif
