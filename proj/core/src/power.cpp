#include "lpt/power.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lpt {

void PowerModel::validate() const {
    if (vdd <= 0) throw std::invalid_argument("vdd must be positive");
    if (clock_period <= 0) throw std::invalid_argument("clock period must be positive");
}

double capacitance(const Circuit& c, int gate_idx, const PowerModel& m) {
    const Gate& g = c.gates[gate_idx];
    switch (m.cap_model) {
        case CapModel::Unit:
            return 1.0;
        case CapModel::Fanout:
            return 1.0 + g.load_count;
        case CapModel::Table: {
            auto it = m.cap_table.find(c.net_names[g.output]);
            if (it == m.cap_table.end())
                throw std::invalid_argument("cap_table has no entry for gate '" +
                                            c.net_names[g.output] + "'");
            return it->second;
        }
    }
    return 1.0;
}

std::vector<double> gate_capacitances(const Circuit& c, const PowerModel& m) {
    std::vector<double> caps(c.num_gates());
    for (int g = 0; g < c.num_gates(); ++g) caps[g] = capacitance(c, g, m);
    return caps;
}

double estimate_power(double total_weighted, const PowerModel& m) {
    m.validate();
    return (m.vdd * m.vdd / (2.0 * m.clock_period)) * total_weighted;
}

double estimate_power(const ActivitySummary& a, const PowerModel& m) {
    return estimate_power(a.total_weighted, m);
}

long adjacent_hamming(std::span<const TestVector> frame) {
    if (frame.empty()) throw std::invalid_argument("empty frame");
    long total = 0;
    for (size_t i = 1; i < frame.size(); ++i) {
        const std::string& a = frame[i - 1].bits;
        const std::string& b = frame[i].bits;
        if (a.size() != b.size()) throw std::invalid_argument("vector width mismatch in frame");
        for (size_t j = 0; j < a.size(); ++j) total += a[j] != b[j];
    }
    return total;
}

std::map<std::string, double> load_cap_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open cap table '" + path + "'");
    std::map<std::string, double> table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("cap table line " + std::to_string(lineno) +
                                        ": expected label,farads");
        std::string label = line.substr(0, comma);
        if (label == "gate_label") continue;  // header row
        table[label] = std::stod(line.substr(comma + 1));
    }
    return table;
}

}  // namespace lpt
