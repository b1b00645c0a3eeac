#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "lpt/netlist.hpp"
#include "lpt/power.hpp"

using namespace lpt;

namespace {

Circuit s27() { return parse_bench_file(std::string(LPT_FIXTURES_DIR) + "/s27.bench"); }

std::vector<TestVector> table3_frame() {
    std::vector<TestVector> v;
    for (const char* s : {"0010000", "0010011", "0110110", "0000100", "1001000", "1101010"})
        v.emplace_back(s);
    return v;
}

}  // namespace

TEST_CASE("capacitance models") {
    Circuit c = s27();
    PowerModel m;

    m.cap_model = CapModel::Unit;
    for (int g = 0; g < c.num_gates(); ++g) CHECK(capacitance(c, g, m) == 1.0);

    m.cap_model = CapModel::Fanout;
    for (int g = 0; g < c.num_gates(); ++g)
        CHECK(capacitance(c, g, m) == 1.0 + c.gates[g].load_count);
    // G11 feeds G17, G10 and a DFF data pin
    int g11 = c.driver_gate[c.net_ids.at("G11")];
    CHECK(capacitance(c, g11, m) == 4.0);

    m.cap_model = CapModel::Table;
    m.cap_table["G10"] = 2.5e-15;
    int g10 = c.driver_gate[c.net_ids.at("G10")];
    CHECK(capacitance(c, g10, m) == 2.5e-15);
    CHECK_THROWS_AS(capacitance(c, g11, m), std::invalid_argument);
}

TEST_CASE("power formula") {
    PowerModel m;

    SUBCASE("zero toggles") { CHECK(estimate_power(0.0, m) == 0.0); }
    SUBCASE("direct evaluation") {
        m.vdd = 1.0;
        m.clock_period = 0.5;
        CHECK(estimate_power(1.0, m) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("vdd squared scaling") {
        m.vdd = 2.0;
        double p1 = estimate_power(3.0, m);
        m.vdd = 4.0;
        CHECK(estimate_power(3.0, m) == doctest::Approx(4.0 * p1).epsilon(1e-12));
    }
    SUBCASE("period halves power doubles") {
        m.clock_period = 2.0;
        double p1 = estimate_power(3.0, m);
        m.clock_period = 4.0;
        CHECK(estimate_power(3.0, m) == doctest::Approx(p1 / 2.0).epsilon(1e-12));
    }
    SUBCASE("linear in activity") {
        CHECK(estimate_power(6.0, m) == doctest::Approx(2.0 * estimate_power(3.0, m)));
    }
    SUBCASE("invalid models rejected") {
        m.vdd = 0.0;
        CHECK_THROWS_AS(estimate_power(1.0, m), std::invalid_argument);
        m.vdd = 1.0;
        m.clock_period = -1.0;
        CHECK_THROWS_AS(estimate_power(1.0, m), std::invalid_argument);
    }
}

TEST_CASE("adjacent hamming") {
    SUBCASE("paper frame totals 13") {
        auto f = table3_frame();
        CHECK(adjacent_hamming(f) == 13);
        std::reverse(f.begin(), f.end());
        CHECK(adjacent_hamming(f) == 13);
    }
    SUBCASE("identical vectors") {
        std::vector<TestVector> f(3, TestVector("10101"));
        CHECK(adjacent_hamming(f) == 0);
    }
    SUBCASE("full complement") {
        std::vector<TestVector> f{TestVector("0000000"), TestVector("1111111")};
        CHECK(adjacent_hamming(f) == 7);
    }
    SUBCASE("empty frame rejected") {
        std::vector<TestVector> f;
        CHECK_THROWS_AS(adjacent_hamming(f), std::invalid_argument);
    }
}

TEST_CASE("cap table file round trip") {
    std::string path = "cap_table_test.csv";
    {
        std::ofstream out(path);
        out << "gate_label,farads\nG10,2.5e-15\nG11,1e-14\n";
    }
    auto table = load_cap_table(path);
    CHECK(table.size() == 2);
    CHECK(table.at("G10") == 2.5e-15);
    CHECK(table.at("G11") == 1e-14);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_cap_table("does_not_exist.csv"), std::invalid_argument);
}
