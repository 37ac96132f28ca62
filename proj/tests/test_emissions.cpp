#include <doctest.h>

#include <random>
#include <sstream>

#include "fedsust/emissions.hpp"
#include "fedsust/errors.hpp"
#include "fedsust/fedsim.hpp"
#include "support.hpp"

using namespace fedsust;
using nlohmann::json;

namespace {

json base_config() {
    return json::parse(R"({
        "num_clients": 20, "total_rounds": 8, "selection_rate": 0.25, "local_rounds": 3,
        "dataset_size": 500, "model_size": 200000,
        "client_hardware": [{"share": 0.5, "model": "Intel Core i7-8650U"},
                            {"share": 0.5, "model": "AMD Ryzen 7 5800X"}],
        "client_locations": [{"share": 0.5, "location": "DE"}, {"share": 0.5, "location": "ZA"}],
        "server_hardware": "Intel Xeon W-2104", "server_location": "FR", "seed": 9,
        "energy_model": {"comm_energy_per_byte": 1e-12, "idle_fraction": 0.2}})");
}

double total_co2(const json& j) {
    const auto c = parse_federation_config(j);
    return simulate_federation(c, testing::reference()).state.emissions.total().co2eq_g;
}

}  // namespace

TEST_SUITE("emissions") {

TEST_CASE("energy and carbon arithmetic") {
    CHECK(energy_to_co2(500, 11) == 5500.0);
    CHECK(energy_to_co2(500, 820) == 410000.0);
    CHECK(estimate_energy(100, 1.0, 3600) == doctest::Approx(0.1));
    CHECK(estimate_energy(15, 0.5, 7200) == doctest::Approx(0.015));
    CHECK(estimate_energy(15, 0.5, 0) == 0.0);
    CHECK_THROWS_AS(estimate_energy(-1, 1, 1), ValidationError);
    CHECK_THROWS_AS(estimate_energy(10, 1.5, 1), ValidationError);
    CHECK_THROWS_AS(energy_to_co2(1, -3), ValidationError);
}

TEST_CASE("track_phase") {
    HardwareProfile hw{"x", ProcessorKind::cpu, 1000, 50, 20};
    EnergyModel m;
    m.cpu_utilization = 0.5;
    const auto r = track_phase({"c1", Role::client, 400}, Phase::training, 3, m, hw, 7200);
    CHECK(r.energy_kwh == doctest::Approx(0.05));
    CHECK(r.co2eq_g == doctest::Approx(20));
    CHECK(r.round == 3);
    CHECK(r.intensity == 400);
}

TEST_CASE("log totals are additive") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    EmissionsLog all, left, right;
    for (int i = 0; i < 500; ++i) {
        NodeRef n{"n" + std::to_string(i % 7), i % 3 ? Role::client : Role::server,
                  20 + 700 * u(rng)};
        const auto phase = static_cast<Phase>(i % 3);
        const auto rec = record_energy(n, phase, i / 10, u(rng) * 10, u(rng));
        all.append(rec);
        (i % 2 ? left : right).append(rec);
    }
    auto merged = left;
    merged.merge(right);
    CHECK(merged.total().records == all.total().records);
    CHECK(merged.total().co2eq_g == doctest::Approx(all.total().co2eq_g).epsilon(1e-12));

    const auto t = all.total();
    double by_phase = 0, by_role = 0;
    for (auto p : {Phase::training, Phase::aggregation, Phase::communication})
        by_phase += all.total_for(p).co2eq_g;
    for (auto r : {Role::client, Role::server}) by_role += all.total_for(r).co2eq_g;
    CHECK(by_phase == doctest::Approx(t.co2eq_g).epsilon(1e-12));
    CHECK(by_role == doctest::Approx(t.co2eq_g).epsilon(1e-12));
    double sum = 0;
    for (const auto& r : all.records()) sum += r.energy_kwh * r.intensity;
    CHECK(sum == doctest::Approx(t.co2eq_g).epsilon(1e-12));
}

TEST_CASE("csv is canonically ordered") {
    EmissionsLog log;
    log.append(record_energy({"b", Role::client, 100}, Phase::training, 1, 1, 0.5));
    log.append(record_energy({"server", Role::server, 100}, Phase::aggregation, 0, 1, 0.25));
    log.append(record_energy({"a", Role::client, 100}, Phase::communication, 1, 1, 0.125));
    log.append(record_energy({"a", Role::client, 100}, Phase::training, 1, 1, 0.125));
    log.append(record_energy({"z", Role::client, 100}, Phase::training, 0, 1, 1.0 / 3));
    const auto csv = log.to_csv();
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "round,role,node_id,phase,duration_s,energy_kwh,intensity_gco2_kwh,co2eq_g");
    CHECK(lines[1] == "0,client,z,training,1,0.333333,100,33.3333");
    CHECK(lines[2].rfind("0,server,server,aggregation", 0) == 0);
    CHECK(lines[3].rfind("1,client,a,training", 0) == 0);
    CHECK(lines[4].rfind("1,client,a,communication", 0) == 0);
    CHECK(lines[5].rfind("1,client,b,training", 0) == 0);
}

TEST_CASE("total emissions are monotone in each complexity driver") {
    const double base = total_co2(base_config());
    CHECK(base > 0.0);
    struct Driver {
        const char* key;
        std::vector<double> values;
    };
    const std::vector<Driver> drivers = {
        {"total_rounds", {8, 9, 16, 40}},
        {"num_clients", {20, 24, 40, 100}},
        {"selection_rate", {0.25, 0.3, 0.5, 1.0}},
        {"local_rounds", {3, 4, 10, 50}},
        {"dataset_size", {500, 501, 5000, 1e6}},
        {"model_size", {200000, 200001, 1e6, 1e9}},
    };
    for (const auto& d : drivers) {
        CAPTURE(d.key);
        double prev = -1.0;
        for (double v : d.values) {
            auto j = base_config();
            if (std::string(d.key) == "total_rounds" || std::string(d.key) == "num_clients") {
                j[d.key] = static_cast<std::int64_t>(v);
            } else {
                j[d.key] = v;
            }
            const double co2 = total_co2(j);
            CHECK(co2 >= prev);
            prev = co2;
        }
        CHECK(prev > base);
    }
}

TEST_CASE("energy model toggles") {
    auto j = base_config();
    j["energy_model"] = json::object();
    const auto plain = parse_federation_config(j);
    const auto log = simulate_federation(plain, testing::reference()).state.emissions;
    CHECK(log.total_for(Phase::communication).records == 0);
    // m clients train each round, the server aggregates once
    CHECK(log.total().records == static_cast<std::size_t>((plain.sample_size + 1) * plain.total_rounds));

    const auto with = parse_federation_config(base_config());
    const auto log2 = simulate_federation(with, testing::reference()).state.emissions;
    CHECK(log2.total_for(Phase::communication).records > 0);
    CHECK(log2.total().co2eq_g > log.total().co2eq_g);

    j["energy_model"] = {{"cpu_utilization", 2.0}};
    CHECK_THROWS_AS(parse_federation_config(j), ValidationError);
}

}  // TEST_SUITE
