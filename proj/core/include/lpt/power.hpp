// Switching-activity metrics and the toggle-weighted dynamic power estimate
//   p = (Vdd^2 / (2 * clock_period)) * sum_g toggle(g) * C(g)

#ifndef LPT_POWER_HPP
#define LPT_POWER_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "lpt/netlist.hpp"
#include "lpt/simcore.hpp"

namespace lpt {

enum class CapModel { Unit, Fanout, Table };

struct PowerModel {
    double vdd = 1.0;           // volts
    double clock_period = 1.0;  // seconds
    CapModel cap_model = CapModel::Fanout;
    std::map<std::string, double> cap_table;  // gate output label -> farads

    void validate() const;
};

struct ActivitySummary {
    std::vector<long> per_gate_toggles;
    double total_weighted = 0.0;  // sum toggle(g) * C(g)
    long adjacent_hamming = 0;
};

// unit -> 1.0; fanout -> 1.0 + load_count; table -> lookup by output label.
double capacitance(const Circuit& c, int gate_idx, const PowerModel& m);
std::vector<double> gate_capacitances(const Circuit& c, const PowerModel& m);

double estimate_power(double total_weighted, const PowerModel& m);
double estimate_power(const ActivitySummary& a, const PowerModel& m);

// Sum of differing-bit counts over consecutive vector pairs.
long adjacent_hamming(std::span<const TestVector> frame);

// CSV cap_table loader, rows of `gate_label,farads`.
std::map<std::string, double> load_cap_table(const std::string& path);

}  // namespace lpt

#endif
