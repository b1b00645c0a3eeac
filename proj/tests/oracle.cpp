#include "oracle.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>

namespace oracle {

namespace {

int eval_net(const lpt::Circuit& c, lpt::NetId net, const lpt::TestVector& v,
             const std::vector<uint8_t>* state, std::vector<int>& memo) {
    if (memo[net] >= 0) return memo[net];
    const int npi = static_cast<int>(c.inputs.size());
    for (int i = 0; i < npi; ++i)
        if (c.inputs[i] == net) return memo[net] = v.bit(i);
    for (size_t d = 0; d < c.dffs.size(); ++d)
        if (c.dffs[d].state == net)
            return memo[net] = state ? (*state)[d] : v.bit(npi + static_cast<int>(d));

    int gi = c.driver_gate[net];
    if (gi < 0) throw std::logic_error("oracle: undriven net");
    const lpt::Gate& g = c.gates[gi];
    int ones = 0;
    for (lpt::NetId in : g.inputs) ones += eval_net(c, in, v, state, memo);
    const int n = static_cast<int>(g.inputs.size());
    int out = 0;
    switch (g.kind) {
        case lpt::GateKind::And: out = ones == n; break;
        case lpt::GateKind::Nand: out = ones != n; break;
        case lpt::GateKind::Or: out = ones > 0; break;
        case lpt::GateKind::Nor: out = ones == 0; break;
        case lpt::GateKind::Not: out = ones == 0; break;
        case lpt::GateKind::Buf: out = ones > 0; break;
        case lpt::GateKind::Xor: out = ones % 2; break;
        case lpt::GateKind::Xnor: out = (ones % 2) == 0; break;
    }
    return memo[net] = out;
}

}  // namespace

StepValues step(const lpt::Circuit& c, const lpt::TestVector& v,
                const std::vector<uint8_t>* state) {
    std::vector<int> memo(c.num_nets(), -1);
    StepValues r;
    r.net_values.resize(c.num_nets());
    for (lpt::NetId n = 0; n < c.num_nets(); ++n)
        r.net_values[n] = static_cast<uint8_t>(eval_net(c, n, v, state, memo));
    for (lpt::NetId po : c.outputs) r.po_values.push_back(r.net_values[po]);
    for (const lpt::Dff& d : c.dffs) r.next_state.push_back(r.net_values[d.data]);
    return r;
}

std::vector<long> sequence_toggles_scan(const lpt::Circuit& c,
                                        const std::vector<lpt::TestVector>& frame) {
    std::vector<long> toggles(c.num_gates(), 0);
    StepValues prev;
    for (size_t t = 0; t < frame.size(); ++t) {
        StepValues cur = step(c, frame[t]);
        if (t)
            for (int g = 0; g < c.num_gates(); ++g)
                toggles[g] += cur.net_values[c.gates[g].output] !=
                              prev.net_values[c.gates[g].output];
        prev = std::move(cur);
    }
    return toggles;
}

long best_permutation_hamming(const std::vector<lpt::TestVector>& vectors) {
    const size_t n = vectors.size();
    auto dist = [&](size_t a, size_t b) {
        long d = 0;
        for (size_t i = 0; i < vectors[a].bits.size(); ++i)
            d += vectors[a].bits[i] != vectors[b].bits[i];
        return d;
    };
    long best = -1;
    std::vector<bool> used(n, false);
    std::function<void(size_t, size_t, long)> rec = [&](size_t placed, size_t last, long total) {
        if (placed == n) {
            if (best < 0 || total < best) best = total;
            return;
        }
        for (size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            used[i] = true;
            rec(placed + 1, i, placed ? total + dist(last, i) : 0);
            used[i] = false;
        }
    };
    rec(0, 0, 0);
    return best;
}

std::string random_bench(std::mt19937_64& rng, int max_gates) {
    auto pick = [&](int n) { return static_cast<int>(rng() % n); };
    const int npi = 1 + pick(4);
    const int ndff = pick(4);
    const int ngates = 1 + pick(max_gates);

    std::vector<std::string> nets;
    std::ostringstream out;
    for (int i = 0; i < npi; ++i) {
        out << "INPUT(I" << i << ")\n";
        nets.push_back("I" + std::to_string(i));
    }
    for (int d = 0; d < ndff; ++d) nets.push_back("S" + std::to_string(d));

    static const char* kinds[] = {"AND", "NAND", "OR", "NOR", "NOT", "BUF", "XOR", "XNOR"};
    std::vector<std::string> gate_lines;
    for (int g = 0; g < ngates; ++g) {
        int k = pick(8);
        int arity = (k == 4 || k == 5) ? 1 : 2 + pick(2);
        std::string name = "G" + std::to_string(g);
        std::string line = name + " = " + kinds[k] + "(";
        for (int a = 0; a < arity; ++a) {
            if (a) line += ", ";
            line += nets[pick(static_cast<int>(nets.size()))];
        }
        line += ")";
        gate_lines.push_back(line);
        nets.push_back(name);
    }
    for (int d = 0; d < ndff; ++d)
        out << "S" << d << " = DFF(" << nets[pick(static_cast<int>(nets.size()))] << ")\n";
    for (const std::string& l : gate_lines) out << l << "\n";

    const int npo = 1 + pick(2);
    for (int o = 0; o < npo; ++o)
        out << "OUTPUT(" << nets[pick(static_cast<int>(nets.size()))] << ")\n";
    return out.str();
}

std::vector<lpt::TestVector> exhaustive_vectors(int width) {
    std::vector<lpt::TestVector> out;
    for (uint32_t x = 0; x < (1u << width); ++x) {
        std::string bits(width, '0');
        for (int b = 0; b < width; ++b)
            if (x & (1u << (width - 1 - b))) bits[b] = '1';
        out.emplace_back(bits);
    }
    return out;
}

}  // namespace oracle
