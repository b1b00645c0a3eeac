#include "lpt/simcore.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace lpt {

namespace {

template <typename W>
W eval_gate(GateKind kind, const W* in, size_t n) {
    W acc = in[0];
    switch (kind) {
        case GateKind::And:
        case GateKind::Nand:
            for (size_t i = 1; i < n; ++i) acc &= in[i];
            break;
        case GateKind::Or:
        case GateKind::Nor:
            for (size_t i = 1; i < n; ++i) acc |= in[i];
            break;
        case GateKind::Xor:
        case GateKind::Xnor:
            for (size_t i = 1; i < n; ++i) acc ^= in[i];
            break;
        case GateKind::Not:
        case GateKind::Buf:
            break;
    }
    switch (kind) {
        case GateKind::Nand:
        case GateKind::Nor:
        case GateKind::Not:
        case GateKind::Xnor:
            return static_cast<W>(~acc);
        default:
            return acc;
    }
}

inline uint8_t norm1(uint8_t v) { return v & 1u; }

void check_width(const Circuit& c, const TestVector& v) {
    int want = static_cast<int>(c.inputs.size() + c.dffs.size());
    if (v.width() != want)
        throw std::invalid_argument("vector width " + std::to_string(v.width()) +
                                    " does not match interface width " + std::to_string(want));
}

// One combinational evaluation with optional single-fault injection.
// prev_state overrides the vector's pseudo-input bits (functional mode).
void eval_step_scalar(const Circuit& c, const std::vector<int>& order, const TestVector& v,
                      SimMode mode, const uint8_t* prev_state, const Fault* fault,
                      std::vector<uint8_t>& net_values, std::vector<uint8_t>& po_values,
                      std::vector<uint8_t>& next_state) {
    const int npi = static_cast<int>(c.inputs.size());
    net_values.assign(c.num_nets(), 0);

    auto force_stem = [&](NetId net) {
        if (fault && fault->sink < 0 && fault->net == net)
            net_values[net] = fault->stuck_at_one ? 1 : 0;
    };
    auto read = [&](NetId net, int sink_idx) -> uint8_t {
        if (fault && fault->sink == sink_idx && fault->sink >= 0 && fault->net == net)
            return fault->stuck_at_one ? 1 : 0;
        return net_values[net];
    };

    for (int i = 0; i < npi; ++i) {
        net_values[c.inputs[i]] = static_cast<uint8_t>(v.bit(i));
        force_stem(c.inputs[i]);
    }
    for (size_t d = 0; d < c.dffs.size(); ++d) {
        uint8_t s = (mode == SimMode::Functional && prev_state)
                        ? prev_state[d]
                        : static_cast<uint8_t>(v.bit(npi + static_cast<int>(d)));
        net_values[c.dffs[d].state] = s;
        force_stem(c.dffs[d].state);
    }

    uint8_t ins[64];
    for (int g : order) {
        const Gate& gate = c.gates[g];
        size_t n = gate.inputs.size();
        for (size_t p = 0; p < n; ++p)
            ins[p] = read(gate.inputs[p], c.gate_pin_sink[g][p]);
        net_values[gate.output] = norm1(eval_gate<uint8_t>(gate.kind, ins, n));
        force_stem(gate.output);
    }

    po_values.resize(c.outputs.size());
    for (size_t o = 0; o < c.outputs.size(); ++o)
        po_values[o] = read(c.outputs[o], c.po_sink[o]);
    next_state.resize(c.dffs.size());
    for (size_t d = 0; d < c.dffs.size(); ++d)
        next_state[d] = read(c.dffs[d].data, c.dff_data_sink[d]);
}

}  // namespace

std::string fault_name(const Circuit& c, const Fault& f) {
    std::string s = c.net_names[f.net];
    if (f.sink >= 0) {
        const Sink& sk = c.sinks[f.net][f.sink];
        switch (sk.kind) {
            case Sink::GateInput:
                s += "->" + c.net_names[c.gates[sk.owner].output] + ".in" + std::to_string(sk.pin);
                break;
            case Sink::DffData:
                s += "->" + c.net_names[c.dffs[sk.owner].state] + ".D";
                break;
            case Sink::PrimaryOutput:
                s += "->PO" + std::to_string(sk.owner);
                break;
        }
    }
    return s + (f.stuck_at_one ? "/1" : "/0");
}

StepResult simulate_step(const Circuit& c, const TestVector& v, SimMode mode,
                         const StepResult* prev) {
    check_width(c, v);
    std::vector<int> order = levelize(c);

    StepResult r;
    eval_step_scalar(c, order, v, mode, prev ? prev->next_state.data() : nullptr, nullptr,
                     r.net_values, r.po_values, r.next_state);

    r.toggles.assign(c.num_gates(), 0);
    if (prev) {
        for (int g = 0; g < c.num_gates(); ++g) {
            NetId o = c.gates[g].output;
            r.toggles[g] = r.net_values[o] != prev->net_values[o];
        }
    }
    return r;
}

SequenceResult simulate_sequence(const Circuit& c, std::span<const TestVector> frame,
                                 SimMode mode, std::span<const double> per_gate_cap) {
    if (frame.empty()) throw std::invalid_argument("empty frame");
    if (static_cast<int>(per_gate_cap.size()) != c.num_gates())
        throw std::invalid_argument("capacitance vector size mismatch");

    SequenceResult r;
    r.per_gate_toggles.assign(c.num_gates(), 0);
    StepResult prev;
    for (size_t t = 0; t < frame.size(); ++t) {
        StepResult step = simulate_step(c, frame[t], mode, t ? &prev : nullptr);
        for (int g = 0; g < c.num_gates(); ++g) r.per_gate_toggles[g] += step.toggles[g];
        prev = std::move(step);
    }
    for (int g = 0; g < c.num_gates(); ++g)
        r.total_weighted += static_cast<double>(r.per_gate_toggles[g]) * per_gate_cap[g];
    return r;
}

std::vector<Fault> enumerate_faults(const Circuit& c, bool collapse) {
    // Branch faults exist only at fanout points; on a single-sink net the stem
    // and its one branch are the same site.
    std::vector<Fault> all;
    for (NetId net = 0; net < c.num_nets(); ++net) {
        all.push_back({net, -1, false});
        all.push_back({net, -1, true});
        if (c.sinks[net].size() < 2) continue;
        for (int s = 0; s < static_cast<int>(c.sinks[net].size()); ++s) {
            all.push_back({net, s, false});
            all.push_back({net, s, true});
        }
    }
    if (!collapse) return all;

    auto key = [](const Fault& f) {
        return (static_cast<uint64_t>(f.net) << 32) |
               (static_cast<uint32_t>(f.sink + 1) << 1) | (f.stuck_at_one ? 1u : 0u);
    };
    std::unordered_map<uint64_t, int> index;
    for (size_t i = 0; i < all.size(); ++i) index[key(all[i])] = static_cast<int>(i);

    std::vector<int> parent(all.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](const Fault& a, const Fault& b) {
        int ra = find(index.at(key(a))), rb = find(index.at(key(b)));
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    };

    // gate-local equivalences between input-pin faults and the output stem
    for (int g = 0; g < c.num_gates(); ++g) {
        const Gate& gate = c.gates[g];
        NetId out = gate.output;
        for (size_t p = 0; p < gate.inputs.size(); ++p) {
            NetId in = gate.inputs[p];
            int sink = c.sinks[in].size() < 2 ? -1 : c.gate_pin_sink[g][p];
            Fault pin0{in, sink, false};
            Fault pin1{in, sink, true};
            switch (gate.kind) {
                case GateKind::And: unite(pin0, {out, -1, false}); break;
                case GateKind::Nand: unite(pin0, {out, -1, true}); break;
                case GateKind::Or: unite(pin1, {out, -1, true}); break;
                case GateKind::Nor: unite(pin1, {out, -1, false}); break;
                case GateKind::Not:
                    unite(pin0, {out, -1, true});
                    unite(pin1, {out, -1, false});
                    break;
                case GateKind::Buf:
                    unite(pin0, {out, -1, false});
                    unite(pin1, {out, -1, true});
                    break;
                case GateKind::Xor:
                case GateKind::Xnor:
                    break;
            }
        }
    }

    std::vector<Fault> kept;
    for (size_t i = 0; i < all.size(); ++i)
        if (find(static_cast<int>(i)) == static_cast<int>(i)) kept.push_back(all[i]);
    return kept;
}

double DetectionReport::coverage() const {
    if (total_faults == 0) throw std::invalid_argument("zero-fault report");
    return static_cast<double>(detected.size()) / total_faults;
}

double coverage(const DetectionReport& r) { return r.coverage(); }

DetectionReport fault_simulate_serial(const Circuit& c, std::span<const TestVector> vectors,
                                      std::span<const Fault> faults, SimMode mode,
                                      Observability obs, bool drop) {
    if (faults.empty()) throw std::invalid_argument("empty fault list");
    if (vectors.empty()) throw std::invalid_argument("empty vector list");
    for (const TestVector& v : vectors) check_width(c, v);

    std::vector<int> order = levelize(c);
    const size_t nt = vectors.size();

    // fault-free reference run
    std::vector<std::vector<uint8_t>> good_po(nt), good_ns(nt);
    {
        std::vector<uint8_t> nets, state;
        for (size_t t = 0; t < nt; ++t) {
            eval_step_scalar(c, order, vectors[t], mode, t ? state.data() : nullptr, nullptr,
                             nets, good_po[t], good_ns[t]);
            state = good_ns[t];
        }
    }

    DetectionReport rep;
    rep.total_faults = static_cast<int>(faults.size());
    rep.per_vector.assign(nt, {});

    std::vector<uint8_t> nets, po, ns, state;
    for (size_t fi = 0; fi < faults.size(); ++fi) {
        const Fault& f = faults[fi];
        bool found = false;
        state.clear();
        for (size_t t = 0; t < nt; ++t) {
            eval_step_scalar(c, order, vectors[t], mode, t ? state.data() : nullptr, &f,
                             nets, po, ns);
            state = ns;
            if (found) continue;
            bool diff = !std::equal(po.begin(), po.end(), good_po[t].begin());
            if (!diff && obs == Observability::Scan)
                diff = !std::equal(ns.begin(), ns.end(), good_ns[t].begin());
            if (diff) {
                found = true;
                rep.detected.push_back(static_cast<int>(fi));
                rep.per_vector[t].push_back(static_cast<int>(fi));
                if (drop) break;
            }
        }
    }
    return rep;
}

DetectionReport fault_simulate_parallel(const Circuit& c, std::span<const TestVector> vectors,
                                        std::span<const Fault> faults, SimMode mode,
                                        Observability obs) {
    if (faults.empty()) throw std::invalid_argument("empty fault list");
    if (vectors.empty()) throw std::invalid_argument("empty vector list");
    for (const TestVector& v : vectors) check_width(c, v);

    std::vector<int> order = levelize(c);
    const size_t nt = vectors.size();
    const int npi = static_cast<int>(c.inputs.size());

    std::vector<std::vector<uint8_t>> good_po(nt), good_ns(nt);
    {
        std::vector<uint8_t> nets, state;
        for (size_t t = 0; t < nt; ++t) {
            eval_step_scalar(c, order, vectors[t], mode, t ? state.data() : nullptr, nullptr,
                             nets, good_po[t], good_ns[t]);
            state = good_ns[t];
        }
    }

    DetectionReport rep;
    rep.total_faults = static_cast<int>(faults.size());
    rep.per_vector.assign(nt, {});
    std::vector<std::pair<int, int>> first_hit;  // (vector index, fault index)

    std::vector<uint64_t> stem_and(c.num_nets()), stem_or(c.num_nets());
    std::unordered_map<uint64_t, std::pair<uint64_t, uint64_t>> branch;  // (net,sink) -> masks
    auto branch_key = [](NetId net, int sink) {
        return (static_cast<uint64_t>(net) << 32) | static_cast<uint32_t>(sink);
    };

    std::vector<uint64_t> words(c.num_nets());
    std::vector<uint64_t> state_words(c.dffs.size()), ns_words(c.dffs.size());

    for (size_t base = 0; base < faults.size(); base += 64) {
        const size_t lanes = std::min<size_t>(64, faults.size() - base);

        std::fill(stem_and.begin(), stem_and.end(), ~0ull);
        std::fill(stem_or.begin(), stem_or.end(), 0ull);
        branch.clear();
        for (size_t b = 0; b < lanes; ++b) {
            const Fault& f = faults[base + b];
            uint64_t bit = 1ull << b;
            if (f.sink < 0) {
                if (f.stuck_at_one)
                    stem_or[f.net] |= bit;
                else
                    stem_and[f.net] &= ~bit;
            } else {
                auto& m = branch.try_emplace(branch_key(f.net, f.sink), ~0ull, 0ull).first->second;
                if (f.stuck_at_one)
                    m.second |= bit;
                else
                    m.first &= ~bit;
            }
        }

        auto read = [&](NetId net, int sink) -> uint64_t {
            uint64_t w = words[net];
            if (!branch.empty()) {
                auto it = branch.find(branch_key(net, sink));
                if (it != branch.end()) w = (w & it->second.first) | it->second.second;
            }
            return w;
        };

        uint64_t active = lanes == 64 ? ~0ull : ((1ull << lanes) - 1);
        uint64_t undetected = active;

        for (size_t t = 0; t < nt && undetected; ++t) {
            const TestVector& v = vectors[t];
            for (int i = 0; i < npi; ++i) {
                NetId net = c.inputs[i];
                words[net] = ((v.bit(i) ? ~0ull : 0ull) & stem_and[net]) | stem_or[net];
            }
            for (size_t d = 0; d < c.dffs.size(); ++d) {
                NetId net = c.dffs[d].state;
                uint64_t s = (mode == SimMode::Functional && t)
                                 ? state_words[d]
                                 : (v.bit(npi + static_cast<int>(d)) ? ~0ull : 0ull);
                words[net] = (s & stem_and[net]) | stem_or[net];
            }
            uint64_t ins[64];
            for (int g : order) {
                const Gate& gate = c.gates[g];
                size_t n = gate.inputs.size();
                for (size_t p = 0; p < n; ++p)
                    ins[p] = read(gate.inputs[p], c.gate_pin_sink[g][p]);
                NetId out = gate.output;
                words[out] = (eval_gate<uint64_t>(gate.kind, ins, n) & stem_and[out]) |
                             stem_or[out];
            }

            uint64_t det = 0;
            for (size_t o = 0; o < c.outputs.size(); ++o) {
                uint64_t pow = read(c.outputs[o], c.po_sink[o]);
                det |= pow ^ (good_po[t][o] ? ~0ull : 0ull);
            }
            for (size_t d = 0; d < c.dffs.size(); ++d) {
                ns_words[d] = read(c.dffs[d].data, c.dff_data_sink[d]);
                if (obs == Observability::Scan)
                    det |= ns_words[d] ^ (good_ns[t][d] ? ~0ull : 0ull);
            }
            state_words = ns_words;

            uint64_t newly = det & undetected;
            while (newly) {
                int b = std::countr_zero(newly);
                newly &= newly - 1;
                first_hit.emplace_back(static_cast<int>(t), static_cast<int>(base + b));
            }
            undetected &= ~det;
        }
    }

    std::sort(first_hit.begin(), first_hit.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    for (const auto& [t, fi] : first_hit) {
        rep.detected.push_back(fi);
        rep.per_vector[t].push_back(fi);
    }
    return rep;
}

}  // namespace lpt
