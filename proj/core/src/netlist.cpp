#include "lpt/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <queue>
#include <sstream>

namespace lpt {

const char* gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::And: return "AND";
        case GateKind::Nand: return "NAND";
        case GateKind::Or: return "OR";
        case GateKind::Nor: return "NOR";
        case GateKind::Not: return "NOT";
        case GateKind::Buf: return "BUF";
        case GateKind::Xor: return "XOR";
        case GateKind::Xnor: return "XNOR";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_kind(const std::string& s, GateKind& out) {
    static const std::unordered_map<std::string, GateKind> kinds = {
        {"AND", GateKind::And},   {"NAND", GateKind::Nand}, {"OR", GateKind::Or},
        {"NOR", GateKind::Nor},   {"NOT", GateKind::Not},   {"BUF", GateKind::Buf},
        {"BUFF", GateKind::Buf},  {"XOR", GateKind::Xor},   {"XNOR", GateKind::Xnor}};
    auto it = kinds.find(s);
    if (it == kinds.end()) return false;
    out = it->second;
    return true;
}

struct LineStmt {
    int line;
    enum { Input, Output, Dff, Gate } kind;
    std::string lhs;
    GateKind gate_kind;
    std::vector<std::string> args;
};

}  // namespace

void Circuit::finalize() {
    const int n = num_nets();
    sinks.assign(n, {});
    driver_gate.assign(n, -1);
    gate_pin_sink.assign(gates.size(), {});
    dff_data_sink.assign(dffs.size(), -1);
    po_sink.assign(outputs.size(), -1);

    std::vector<int> drivers(n, 0);
    for (NetId id : inputs) drivers[id]++;
    for (const Dff& d : dffs) drivers[d.state]++;
    for (size_t g = 0; g < gates.size(); ++g) {
        if (drivers[gates[g].output]++)
            throw ParseError("duplicate driver for net '" + net_names[gates[g].output] + "'");
        driver_gate[gates[g].output] = static_cast<int>(g);
    }
    for (NetId id = 0; id < n; ++id)
        if (drivers[id] == 0)
            throw ParseError("net '" + net_names[id] + "' referenced but never driven");

    for (size_t g = 0; g < gates.size(); ++g) {
        gate_pin_sink[g].resize(gates[g].inputs.size());
        for (size_t p = 0; p < gates[g].inputs.size(); ++p) {
            NetId in = gates[g].inputs[p];
            gate_pin_sink[g][p] = static_cast<int>(sinks[in].size());
            sinks[in].push_back({Sink::GateInput, static_cast<int>(g), static_cast<int>(p)});
        }
    }
    for (size_t d = 0; d < dffs.size(); ++d) {
        NetId in = dffs[d].data;
        dff_data_sink[d] = static_cast<int>(sinks[in].size());
        sinks[in].push_back({Sink::DffData, static_cast<int>(d), 0});
    }
    for (size_t o = 0; o < outputs.size(); ++o) {
        NetId in = outputs[o];
        po_sink[o] = static_cast<int>(sinks[in].size());
        sinks[in].push_back({Sink::PrimaryOutput, static_cast<int>(o), 0});
    }

    for (Gate& g : gates) g.load_count = static_cast<int>(sinks[g.output].size());
}

Circuit parse_bench(const std::string& text, const std::string& name) {
    Circuit c;
    c.name = name;

    auto net_of = [&c](const std::string& label) {
        auto it = c.net_ids.find(label);
        if (it != c.net_ids.end()) return it->second;
        NetId id = static_cast<NetId>(c.net_names.size());
        c.net_ids.emplace(label, id);
        c.net_names.push_back(label);
        return id;
    };

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::vector<LineStmt> stmts;
    while (std::getline(in, raw)) {
        ++lineno;
        size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string line = trim(raw);
        if (line.empty()) continue;

        size_t eq = line.find('=');
        std::string head = trim(eq == std::string::npos ? line : line.substr(0, eq));
        std::string body = eq == std::string::npos ? head : trim(line.substr(eq + 1));

        size_t lp = body.find('(');
        size_t rp = body.rfind(')');
        if (lp == std::string::npos || rp == std::string::npos || rp < lp)
            throw ParseError(lineno, "expected '" + body + "' to be of form KIND(a, b, ...)");
        std::string fn = trim(body.substr(0, lp));
        std::string arglist = body.substr(lp + 1, rp - lp - 1);

        std::vector<std::string> args;
        std::string tok;
        std::istringstream as(arglist);
        while (std::getline(as, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) throw ParseError(lineno, "empty argument in '" + body + "'");
            args.push_back(tok);
        }

        LineStmt st;
        st.line = lineno;
        if (eq == std::string::npos) {
            if (fn != "INPUT" && fn != "OUTPUT")
                throw ParseError(lineno, "unknown directive '" + fn + "'");
            if (args.size() != 1)
                throw ParseError(lineno, fn + " takes exactly one net");
            st.kind = fn == "INPUT" ? LineStmt::Input : LineStmt::Output;
            st.lhs = args[0];
            stmts.push_back(st);
            continue;
        }
        if (head.empty()) throw ParseError(lineno, "missing output net before '='");
        st.lhs = head;
        if (fn == "DFF") {
            if (args.size() != 1) throw ParseError(lineno, "DFF takes exactly one input");
            st.kind = LineStmt::Dff;
            st.args = args;
        } else {
            GateKind k;
            if (!parse_kind(fn, k))
                throw ParseError(lineno, "unknown gate kind '" + fn + "'");
            if (args.empty()) throw ParseError(lineno, "gate has no inputs");
            if ((k == GateKind::Not || k == GateKind::Buf) && args.size() != 1)
                throw ParseError(lineno, std::string(gate_kind_name(k)) + " takes exactly one input");
            if (k != GateKind::Not && k != GateKind::Buf && args.size() < 2)
                throw ParseError(lineno, std::string(gate_kind_name(k)) + " needs at least two inputs");
            st.kind = LineStmt::Gate;
            st.gate_kind = k;
            st.args = args;
        }
        stmts.push_back(st);
    }

    if (stmts.empty()) throw ParseError("empty netlist");

    for (const LineStmt& st : stmts) {
        switch (st.kind) {
            case LineStmt::Input:
                c.inputs.push_back(net_of(st.lhs));
                break;
            case LineStmt::Output:
                c.outputs.push_back(net_of(st.lhs));
                break;
            case LineStmt::Dff:
                c.dffs.push_back({net_of(st.lhs), net_of(st.args[0])});
                break;
            case LineStmt::Gate: {
                Gate g;
                g.output = net_of(st.lhs);
                g.kind = st.gate_kind;
                for (const std::string& a : st.args) g.inputs.push_back(net_of(a));
                c.gates.push_back(std::move(g));
                break;
            }
        }
    }

    c.finalize();
    levelize(c);  // rejects combinational cycles early
    return c;
}

Circuit parse_bench_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string name = path;
    size_t slash = name.find_last_of("/\\");
    if (slash != std::string::npos) name = name.substr(slash + 1);
    size_t dot = name.rfind('.');
    if (dot != std::string::npos) name = name.substr(0, dot);
    return parse_bench(ss.str(), name);
}

std::string to_bench(const Circuit& c) {
    std::ostringstream out;
    out << "# " << c.name << "\n";
    for (NetId id : c.inputs) out << "INPUT(" << c.net_names[id] << ")\n";
    for (NetId id : c.outputs) out << "OUTPUT(" << c.net_names[id] << ")\n";
    for (const Dff& d : c.dffs)
        out << c.net_names[d.state] << " = DFF(" << c.net_names[d.data] << ")\n";
    for (const Gate& g : c.gates) {
        out << c.net_names[g.output] << " = " << gate_kind_name(g.kind) << "(";
        for (size_t i = 0; i < g.inputs.size(); ++i) {
            if (i) out << ", ";
            out << c.net_names[g.inputs[i]];
        }
        out << ")\n";
    }
    return out.str();
}

std::vector<int> levelize(const Circuit& c) {
    const int ng = c.num_gates();
    std::vector<int> pending(ng, 0);
    std::vector<std::vector<int>> consumers(ng);  // gate -> downstream gates

    for (int g = 0; g < ng; ++g) {
        for (NetId in : c.gates[g].inputs) {
            int drv = c.driver_gate[in];
            if (drv >= 0) {
                pending[g]++;
                consumers[drv].push_back(g);
            }
        }
    }

    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int g = 0; g < ng; ++g)
        if (pending[g] == 0) ready.push(g);

    std::vector<int> order;
    order.reserve(ng);
    while (!ready.empty()) {
        int g = ready.top();
        ready.pop();
        order.push_back(g);
        for (int h : consumers[g])
            if (--pending[h] == 0) ready.push(h);
    }
    if (static_cast<int>(order.size()) != ng)
        throw ParseError("combinational cycle detected");
    return order;
}

TestInterface test_interface(const Circuit& c) {
    TestInterface ti;
    ti.num_inputs = static_cast<int>(c.inputs.size());
    ti.num_dffs = static_cast<int>(c.dffs.size());
    ti.width = ti.num_inputs + ti.num_dffs;
    ti.bit_nets.reserve(ti.width);
    for (NetId id : c.inputs) ti.bit_nets.push_back(id);
    for (const Dff& d : c.dffs) ti.bit_nets.push_back(d.state);
    return ti;
}

}  // namespace lpt
