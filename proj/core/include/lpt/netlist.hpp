// ISCAS-89 .bench netlist parsing and the immutable circuit graph.

#ifndef LPT_NETLIST_HPP
#define LPT_NETLIST_HPP

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lpt {

using NetId = int;

enum class GateKind { And, Nand, Or, Nor, Not, Buf, Xor, Xnor };

const char* gate_kind_name(GateKind k);

struct Gate {
    NetId output = -1;
    GateKind kind = GateKind::Buf;
    std::vector<NetId> inputs;
    // number of sinks fed by this gate's output (gate pins + DFF data pins + POs)
    int load_count = 0;
};

struct Dff {
    NetId state = -1;  // Q net, acts as a pseudo-primary input
    NetId data = -1;   // D net
};

// One reader of a net. Sink order is fixed: all gate input pins (gate order,
// then pin order), then DFF data pins, then primary-output pins.
struct Sink {
    enum Kind { GateInput, DffData, PrimaryOutput } kind;
    int owner;  // gate index / dff index / output index
    int pin;    // input pin for GateInput, 0 otherwise
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    explicit ParseError(const std::string& what) : std::runtime_error(what), line_(0) {}
    int line() const { return line_; }

private:
    int line_;
};

class Circuit {
public:
    std::string name;
    std::vector<NetId> inputs;
    std::vector<NetId> outputs;
    std::vector<Dff> dffs;
    std::vector<Gate> gates;
    std::vector<std::string> net_names;            // net id -> label
    std::unordered_map<std::string, NetId> net_ids;  // label -> net id

    // derived structure, filled by finalize()
    std::vector<std::vector<Sink>> sinks;  // per net
    std::vector<int> driver_gate;          // net -> gate index, -1 if PI/state net
    std::vector<std::vector<int>> gate_pin_sink;  // gate -> pin -> index into sinks[net]
    std::vector<int> dff_data_sink;               // dff -> index into sinks[data net]
    std::vector<int> po_sink;                     // output -> index into sinks[net]

    int num_nets() const { return static_cast<int>(net_names.size()); }
    int num_gates() const { return static_cast<int>(gates.size()); }

    // Builds sink lists, load counts and validates single-driver / defined-net
    // invariants. Throws ParseError on violation.
    void finalize();
};

// Parses bench-format text. Net ids are assigned densely in first-appearance
// order; labels are case-sensitive. Throws ParseError with a line number on
// malformed input.
Circuit parse_bench(const std::string& text, const std::string& name = "circuit");
Circuit parse_bench_file(const std::string& path);

// Emits the circuit back as bench text (round-trips through parse_bench).
std::string to_bench(const Circuit& c);

// Topological order over the combinational subgraph (DFF state nets are
// sources, DFF data pins are sinks). Stable: among ready gates the lowest
// gate index goes first. Throws ParseError if a combinational cycle exists.
std::vector<int> levelize(const Circuit& c);

// Fixed mapping from test-vector bit positions to nets: all primary inputs in
// declaration order, then DFF state nets in declaration order.
struct TestInterface {
    int width = 0;
    std::vector<NetId> bit_nets;
    int num_inputs = 0;
    int num_dffs = 0;
};

TestInterface test_interface(const Circuit& c);

}  // namespace lpt

#endif
