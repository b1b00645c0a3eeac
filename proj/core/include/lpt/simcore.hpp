// Two-valued logic simulation with toggle accounting and single-stuck-at
// fault simulation (serial reference path and fault-parallel fast path).

#ifndef LPT_SIMCORE_HPP
#define LPT_SIMCORE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpt/netlist.hpp"

namespace lpt {

// Fixed-width bit string over PIs + pseudo-PIs. Textual form is MSB-first
// binary; bit 0 is the leftmost character.
struct TestVector {
    std::string bits;

    TestVector() = default;
    explicit TestVector(std::string b) : bits(std::move(b)) {}

    int width() const { return static_cast<int>(bits.size()); }
    int bit(int i) const { return bits[i] - '0'; }

    bool operator==(const TestVector& o) const { return bits == o.bits; }
};

// Single stuck-at fault. sink < 0 is a stem fault on the net; sink >= 0 is a
// branch fault on sinks[net][sink].
struct Fault {
    NetId net = -1;
    int sink = -1;
    bool stuck_at_one = false;

    bool operator==(const Fault& o) const {
        return net == o.net && sink == o.sink && stuck_at_one == o.stuck_at_one;
    }
};

std::string fault_name(const Circuit& c, const Fault& f);

enum class SimMode { Scan, Functional };
enum class Observability { Scan, PoOnly };

struct StepResult {
    std::vector<uint8_t> net_values;  // per net
    std::vector<uint8_t> po_values;   // per primary output
    std::vector<uint8_t> next_state;  // per DFF (value on its data input)
    std::vector<uint8_t> toggles;     // per gate, 1 iff output changed vs prev step
};

// Evaluates one clock period. Scan mode forces DFF state nets from the
// vector's pseudo-input bits; functional mode takes them from prev.next_state
// (first step falls back to the vector's pseudo-input bits). Toggles are
// relative to prev.net_values; the first step of a sequence has no toggles.
StepResult simulate_step(const Circuit& c, const TestVector& v, SimMode mode,
                         const StepResult* prev = nullptr);

struct SequenceResult {
    std::vector<long> per_gate_toggles;
    double total_weighted = 0.0;  // sum over gates of toggles * cap
};

// Applies the vectors at consecutive periods and accumulates per-gate
// toggles. per_gate_cap supplies C(g); pass unit caps to count raw toggles.
SequenceResult simulate_sequence(const Circuit& c, std::span<const TestVector> frame,
                                 SimMode mode, std::span<const double> per_gate_cap);

// Stuck-at-0/1 on every stem and every branch; with collapse, structurally
// equivalent faults are merged gate-locally and the lowest-index site is kept.
std::vector<Fault> enumerate_faults(const Circuit& c, bool collapse);

struct DetectionReport {
    int total_faults = 0;
    std::vector<int> detected;                 // fault indices, ascending
    std::vector<std::vector<int>> per_vector;  // first detections per applied vector

    double coverage() const;
};

// Serial reference: one fault at a time, full re-simulation per vector.
// Detected faults are dropped from further simulation unless drop is false
// (the detected set is the same either way).
DetectionReport fault_simulate_serial(const Circuit& c, std::span<const TestVector> vectors,
                                      std::span<const Fault> faults, SimMode mode,
                                      Observability obs = Observability::Scan,
                                      bool drop = true);

// Fast path: packs 64 faults per machine word, one bit lane per fault.
// Contract-identical to fault_simulate_serial.
DetectionReport fault_simulate_parallel(const Circuit& c, std::span<const TestVector> vectors,
                                        std::span<const Fault> faults, SimMode mode,
                                        Observability obs = Observability::Scan);

double coverage(const DetectionReport& r);

}  // namespace lpt

#endif
