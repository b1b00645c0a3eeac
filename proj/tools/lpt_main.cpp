// Batch front-end: parse -> fault list -> pbest -> gbest frame -> power report.
//
//   lpt fsim   <netlist> --vectors v.txt | --random N
//   lpt frame  <netlist> [swarm/power flags] --out-report report.json
//   lpt report <report.json>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpt/netlist.hpp"
#include "lpt/power.hpp"
#include "lpt/simcore.hpp"
#include "lpt/swarm.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitSim = 3;
constexpr int kExitCoverage = 4;

std::string pct(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", fraction * 100.0);
    return buf;
}

std::vector<lpt::TestVector> load_vectors(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lpt::ParseError("cannot open vector file '" + path + "'");
    std::vector<lpt::TestVector> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string bits;
        for (char ch : line) {
            if (ch == '0' || ch == '1')
                bits += ch;
            else if (!std::isspace(static_cast<unsigned char>(ch)))
                throw lpt::ParseError(lineno, std::string("bad character '") + ch +
                                                  "' in vector file");
        }
        if (!bits.empty()) out.emplace_back(bits);
    }
    return out;
}

struct ModeFlags {
    std::string mode = "scan";
    std::string observe = "scan";

    lpt::SimMode sim_mode() const {
        return mode == "functional" ? lpt::SimMode::Functional : lpt::SimMode::Scan;
    }
    lpt::Observability observability() const {
        return observe == "po-only" ? lpt::Observability::PoOnly : lpt::Observability::Scan;
    }
};

void write_or_stdout(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << content;
}

std::string coverage_csv(std::span<const lpt::TestVector> vectors,
                         const lpt::DetectionReport& rep) {
    std::ostringstream csv;
    csv << "vector,coverage_percent\n";
    size_t cumulative = 0;
    for (size_t t = 0; t < vectors.size(); ++t) {
        cumulative += rep.per_vector[t].size();
        csv << vectors[t].bits << ","
            << pct(static_cast<double>(cumulative) / rep.total_faults) << "\n";
    }
    return csv.str();
}

int run_fsim(const std::string& netlist, const std::string& vec_path, int random_n,
             uint64_t seed, bool collapse, const ModeFlags& mf, const std::string& csv_path) {
    lpt::Circuit c = lpt::parse_bench_file(netlist);
    lpt::TestInterface ti = lpt::test_interface(c);

    std::vector<lpt::TestVector> vectors;
    if (random_n > 0)
        vectors = lpt::init_population(ti.width, random_n, seed);
    else
        vectors = load_vectors(vec_path);
    if (vectors.empty()) throw std::invalid_argument("no test vectors supplied");

    std::vector<lpt::Fault> faults = lpt::enumerate_faults(c, collapse);
    lpt::DetectionReport rep =
        lpt::fault_simulate_parallel(c, vectors, faults, mf.sim_mode(), mf.observability());

    std::ostringstream out;
    out << "# circuit=" << c.name << " faults=" << rep.total_faults
        << " collapsed=" << (collapse ? 1 : 0) << " detected=" << rep.detected.size()
        << " coverage=" << pct(rep.coverage()) << "\n";
    out << coverage_csv(vectors, rep);
    write_or_stdout(csv_path, out.str());
    return 0;
}

struct FrameOptions {
    lpt::SwarmConfig cfg;
    lpt::PowerModel power;
    std::string cap_table_path;
    bool collapse = true;
    int baseline_seeds = 100;
    bool exact_check = false;
    bool timestamp = false;
    double require_coverage = 0.0;  // percent; 0 disables the gate
    std::string out_report = "-";
    std::string out_csv;
    std::string out_frame;
};

int run_frame(const std::string& netlist, const FrameOptions& opt, const ModeFlags& mf) {
    lpt::SwarmConfig cfg = opt.cfg;
    cfg.mode = mf.sim_mode();
    cfg.observe = mf.observability();
    cfg.validate();

    lpt::PowerModel pm = opt.power;
    if (!opt.cap_table_path.empty()) pm.cap_table = lpt::load_cap_table(opt.cap_table_path);
    pm.validate();

    lpt::Circuit c = lpt::parse_bench_file(netlist);
    lpt::TestInterface ti = lpt::test_interface(c);
    std::vector<lpt::Fault> faults = lpt::enumerate_faults(c, opt.collapse);
    std::vector<double> caps = lpt::gate_capacitances(c, pm);

    std::vector<lpt::TestVector> population =
        lpt::init_population(ti.width, cfg.population_size, cfg.seed);
    population = lpt::rank_population(c, population, faults, cfg);
    lpt::PbestMemory mem = lpt::pbest_phase(c, population, faults, cfg);
    if (mem.entries.empty())
        throw std::invalid_argument("pbest phase kept no vectors (nothing detectable?)");
    lpt::Frame frame = lpt::gbest_framing(c, mem, cfg, caps);

    std::vector<lpt::TestVector> memory_order = mem.vectors();
    double mem_w = lpt::simulate_sequence(c, memory_order, cfg.mode, caps).total_weighted;
    long mem_h = lpt::adjacent_hamming(memory_order);

    // mean weighted toggles over random orderings of the same set
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    double random_sum = 0.0;
    for (int k = 0; k < opt.baseline_seeds; ++k) {
        std::vector<lpt::TestVector> shuffled = memory_order;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        random_sum += lpt::simulate_sequence(c, shuffled, cfg.mode, caps).total_weighted;
    }
    double random_mean = opt.baseline_seeds > 0 ? random_sum / opt.baseline_seeds : mem_w;

    json rep;
    rep["tool"] = "lpt frame";
    rep["circuit"] = {{"name", c.name},
                      {"inputs", c.inputs.size()},
                      {"outputs", c.outputs.size()},
                      {"dffs", c.dffs.size()},
                      {"gates", c.gates.size()},
                      {"interface_width", ti.width}};
    rep["fault_universe"] = {{"count", faults.size()}, {"collapsed", opt.collapse}};
    rep["config"] = {{"seed", cfg.seed},
                     {"population_size", cfg.population_size},
                     {"mutation_limit", cfg.mutation_limit},
                     {"mutation_rate", cfg.effective_mutation_rate(ti.width)},
                     {"stagnation_limit", cfg.stagnation_limit},
                     {"toggle_counter_init", cfg.toggle_counter_init},
                     {"c1", cfg.c1},
                     {"c2", cfg.c2},
                     {"mode", mf.mode},
                     {"observe", mf.observe},
                     {"cap_model", pm.cap_model == lpt::CapModel::Unit     ? "unit"
                                   : pm.cap_model == lpt::CapModel::Fanout ? "fanout"
                                                                           : "table"},
                     {"vdd", pm.vdd},
                     {"clock_period", pm.clock_period},
                     {"baseline_seeds", opt.baseline_seeds}};

    json pbest = json::array();
    for (size_t i = 0; i < mem.entries.size(); ++i) {
        const lpt::PbestEntry& e = mem.entries[i];
        pbest.push_back({{"index", i},
                         {"vector", e.vector.bits},
                         {"new_faults", e.new_faults.size()},
                         {"cumulative_coverage_percent", pct(e.cumulative_coverage)},
                         {"individual_coverage_percent", pct(e.individual_coverage)}});
    }
    rep["pbest"] = pbest;
    rep["coverage_percent"] = pct(mem.coverage());

    json order = json::array();
    for (const lpt::TestVector& v : frame.vectors) order.push_back(v.bits);
    rep["frame"] = {{"order", order},
                    {"adjacent_hamming", frame.total_adjacent_hamming},
                    {"weighted_toggles", frame.total_weighted_toggles}};
    rep["baseline"] = {{"memory_order_weighted_toggles", mem_w},
                       {"memory_order_adjacent_hamming", mem_h},
                       {"random_orderings", opt.baseline_seeds},
                       {"random_mean_weighted_toggles", random_mean}};
    rep["ratios"] = {
        {"frame_vs_random_mean",
         random_mean > 0 ? frame.total_weighted_toggles / random_mean : 1.0},
        {"frame_vs_memory_order", mem_w > 0 ? frame.total_weighted_toggles / mem_w : 1.0}};
    rep["power"] = {{"frame_watts", lpt::estimate_power(frame.total_weighted_toggles, pm)},
                    {"random_mean_watts", lpt::estimate_power(random_mean, pm)},
                    {"memory_order_watts", lpt::estimate_power(mem_w, pm)}};

    if (opt.exact_check && mem.entries.size() <= 8) {
        lpt::Frame exact = lpt::exact_min_order(memory_order);
        rep["exact_check"] = {
            {"exact_min_adjacent_hamming", exact.total_adjacent_hamming},
            {"frame_adjacent_hamming", frame.total_adjacent_hamming},
            {"gap", frame.total_adjacent_hamming - exact.total_adjacent_hamming}};
    }
    if (opt.timestamp) {
        auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[64];
        std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
        rep["timestamp"] = buf;
    }

    write_or_stdout(opt.out_report, rep.dump(2) + "\n");

    if (!opt.out_csv.empty()) {
        std::ostringstream csv;
        csv << "vector,coverage_percent\n";
        for (const lpt::PbestEntry& e : mem.entries)
            csv << e.vector.bits << "," << pct(e.cumulative_coverage) << "\n";
        write_or_stdout(opt.out_csv, csv.str());
    }
    if (!opt.out_frame.empty()) {
        std::ostringstream ft;
        for (const lpt::TestVector& v : frame.vectors) ft << v.bits << "\n";
        write_or_stdout(opt.out_frame, ft.str());
    }

    if (opt.require_coverage > 0.0 && mem.coverage() * 100.0 < opt.require_coverage)
        return kExitCoverage;
    return 0;
}

int run_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open '" << path << "'\n";
        return kExitParse;
    }
    json rep;
    try {
        in >> rep;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed report: " << e.what() << "\n";
        return kExitParse;
    }
    if (!rep.contains("pbest") || !rep.contains("frame")) {
        std::cerr << "error: report is missing pbest/frame sections\n";
        return kExitParse;
    }

    std::cout << "Circuit: " << rep["circuit"]["name"].get<std::string>() << "  ("
              << rep["circuit"]["gates"] << " gates, " << rep["circuit"]["dffs"]
              << " DFFs)\n";
    std::cout << "Faults: " << rep["fault_universe"]["count"]
              << (rep["fault_universe"]["collapsed"].get<bool>() ? " (collapsed)" : "")
              << "   Coverage: " << rep["coverage_percent"].get<std::string>() << "%\n\n";

    std::cout << "Selected vectors (pbest)\n";
    std::cout << "S.No.  Vector     Fault coverage\n";
    for (const auto& e : rep["pbest"])
        std::printf("%-6d %-10s %s\n", e["index"].get<int>() + 1,
                    e["vector"].get<std::string>().c_str(),
                    e["cumulative_coverage_percent"].get<std::string>().c_str());

    std::cout << "\nFrame (least toggling order)\n";
    int t = 1;
    for (const auto& v : rep["frame"]["order"])
        std::printf("T%-4d %s\n", t++, v.get<std::string>().c_str());
    std::cout << "\nAdjacent Hamming: " << rep["frame"]["adjacent_hamming"]
              << "   Weighted toggles: " << rep["frame"]["weighted_toggles"] << "\n";
    if (rep.contains("ratios"))
        std::cout << "Toggle ratio vs random order mean: "
                  << rep["ratios"]["frame_vs_random_mean"].get<double>() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Low-power test framing for gate-level sequential netlists"};
    app.require_subcommand(1);
    // config keys live in a [frame] section; command-line flags take precedence
    app.set_config("--config");

    ModeFlags mf;

    // fsim
    auto* fsim = app.add_subcommand("fsim", "Fault-simulate a vector set");
    std::string fs_netlist, fs_vectors, fs_csv = "-";
    int fs_random = 0;
    uint64_t fs_seed = 1;
    bool fs_collapse = false;
    fsim->add_option("netlist", fs_netlist, "ISCAS-89 .bench file")->required();
    fsim->add_option("--vectors", fs_vectors, "vector file, one bit string per line");
    fsim->add_option("--random", fs_random, "generate N random vectors instead");
    fsim->add_option("--seed", fs_seed, "RNG seed");
    fsim->add_flag("--collapse", fs_collapse, "collapse equivalent faults");
    fsim->add_option("--mode", mf.mode, "scan|functional")
        ->check(CLI::IsMember({"scan", "functional"}));
    fsim->add_option("--observe", mf.observe, "scan|po-only")
        ->check(CLI::IsMember({"scan", "po-only"}));
    fsim->add_option("--csv", fs_csv, "coverage CSV output path ('-' = stdout)");

    // frame
    auto* frame = app.add_subcommand("frame", "Run the full low-power framing pipeline");
    std::string fr_netlist, fr_cap_model = "fanout";
    FrameOptions opt;
    bool no_collapse = false;
    frame->add_option("netlist", fr_netlist, "ISCAS-89 .bench file")->required();
    frame->add_option("--seed", opt.cfg.seed, "RNG seed");
    frame->add_option("--pop-size", opt.cfg.population_size, "population size")
        ->check(CLI::PositiveNumber);
    frame->add_option("--mutation-limit", opt.cfg.mutation_limit,
                      "mutants tried per non-contributing vector");
    frame->add_option("--mutation-rate", opt.cfg.mutation_rate,
                      "per-bit flip probability (default 2/width)");
    frame->add_option("--stagnation", opt.cfg.stagnation_limit,
                      "non-contributing vectors before stopping");
    frame->add_option("--toggle-init", opt.cfg.toggle_counter_init,
                      "initial value of the framing toggle counter");
    frame->add_option("--mode", mf.mode, "scan|functional")
        ->check(CLI::IsMember({"scan", "functional"}));
    frame->add_option("--observe", mf.observe, "scan|po-only")
        ->check(CLI::IsMember({"scan", "po-only"}));
    frame->add_flag("--no-collapse", no_collapse, "use the uncollapsed fault universe");
    frame->add_option("--vdd", opt.power.vdd, "supply voltage, volts");
    frame->add_option("--period", opt.power.clock_period, "clock period, seconds");
    frame->add_option("--cap-model", fr_cap_model, "unit|fanout|table")
        ->check(CLI::IsMember({"unit", "fanout", "table"}));
    frame->add_option("--cap-table", opt.cap_table_path, "CSV gate_label,farads");
    frame->add_option("--baseline-seeds", opt.baseline_seeds,
                      "random orderings for the baseline mean");
    frame->add_flag("--exact-check", opt.exact_check,
                    "compare against the exhaustive ordering oracle (n <= 8)");
    frame->add_flag("--timestamp", opt.timestamp, "include a timestamp in the report");
    frame->add_option("--require-coverage", opt.require_coverage,
                      "exit 4 if final coverage (percent) is below this");
    frame->add_option("--out-report", opt.out_report, "report JSON path ('-' = stdout)");
    frame->add_option("--out-csv", opt.out_csv, "cumulative coverage CSV path");
    frame->add_option("--out-frame", opt.out_frame, "frame text file path");

    // report
    auto* report = app.add_subcommand("report", "Render a report as text tables");
    std::string rp_path;
    report->add_option("report", rp_path, "report JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (fsim->parsed()) {
            if (fs_random <= 0 && fs_vectors.empty()) {
                std::cerr << "error: need --vectors or --random\n";
                return kExitUsage;
            }
            return run_fsim(fs_netlist, fs_vectors, fs_random, fs_seed, fs_collapse, mf,
                            fs_csv);
        }
        if (frame->parsed()) {
            opt.collapse = !no_collapse;
            opt.power.cap_model = fr_cap_model == "unit"     ? lpt::CapModel::Unit
                                  : fr_cap_model == "fanout" ? lpt::CapModel::Fanout
                                                             : lpt::CapModel::Table;
            return run_frame(fr_netlist, opt, mf);
        }
        return run_report(rp_path);
    } catch (const lpt::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSim;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSim;
    }
}
