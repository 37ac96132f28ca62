#include <doctest.h>

#include <sstream>

#include "fedsust/csv.hpp"
#include "fedsust/errors.hpp"
#include "fedsust/reference_data.hpp"
#include "support.hpp"

using namespace fedsust;

TEST_SUITE("reference_data") {

TEST_CASE("bundled grid table") {
    const auto& ref = testing::reference();
    CHECK(lookup_intensity(ref.grid, "ZA") == 709);
    CHECK(lookup_intensity(ref.grid, "CH") == 32);
    CHECK(lookup_intensity(ref.grid, "BW") == kCountryMaxIntensity);
    CHECK(lookup_intensity(ref.grid, "LS") == kCountryMinIntensity);
    for (const auto& [code, v] : ref.grid.entries) {
        CHECK(code.size() == 2);
        CHECK(v >= kTheoreticalMinIntensity);
        CHECK(v <= kTheoreticalMaxIntensity);
    }
    try {
        lookup_intensity(ref.grid, "QQ");
        FAIL("expected ReferenceDataError");
    } catch (const ReferenceDataError& e) {
        CHECK(std::string(e.what()).find("unknown grid: QQ") != std::string::npos);
    }
}

TEST_CASE("bundled hardware table") {
    const auto& hw = testing::reference().hardware;
    CHECK(hw.lookup("Intel Core i7-1250U").power_performance == doctest::Approx(1447).epsilon(1e-3));
    CHECK(hw.lookup("  intel   core I5-1335U ").power_performance ==
          doctest::Approx(1268).epsilon(1e-3));
    CHECK(hw.lookup("AMD FX-9590").power_performance == doctest::Approx(30.76).epsilon(1e-3));
    CHECK(hw.lookup("NVIDIA GeForce RTX 3080").kind == ProcessorKind::gpu);
    for (const auto& [key, p] : hw.entries) {
        CHECK(key == normalize_model_name(p.model));
        CHECK(p.power_performance == doctest::Approx(power_performance(p.benchmark, p.tdp)).epsilon(1e-3));
    }
    CHECK_THROWS_AS(hw.lookup("Pentium II"), ReferenceDataError);
}

TEST_CASE("locations resolve by longest prefix") {
    const auto& loc = testing::reference().locations;
    CHECK(resolve_location("ZA", loc) == "ZA");
    CHECK(resolve_location("192.0.2.17", loc) == "CH");
    CHECK(resolve_location("203.0.113.5", loc) == "XK");
    CHECK(resolve_location("203.0.113.200", loc) == "GM");
    CHECK(resolve_location("10.20.1.1", loc) == "AL");
    CHECK(resolve_location("10.9.1.1", loc) == "LU");
    CHECK_THROWS_AS(resolve_location("8.8.8.8", loc), ReferenceDataError);
    CHECK_THROWS_AS(resolve_location("za", loc), ReferenceDataError);
    CHECK_THROWS_AS(resolve_location("300.1.1.1", loc), ReferenceDataError);
    CHECK(testing::reference().intensity_for("192.0.2.1") == 32);
}

TEST_CASE("csv parsing") {
    std::istringstream in("\xEF\xBB\xBFname,value\n\n\"a, b\",1.5\n\"say \"\"hi\"\"\",2\n");
    const auto t = csv::read(in, "mem");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.header[0] == "name");
    CHECK(t.rows[0].fields[0] == "a, b");
    CHECK(t.rows[1].fields[0] == "say \"hi\"");
    CHECK(t.rows[1].line == 4);
    CHECK(t.column("value") == 1);
    CHECK_THROWS_AS(t.column("nope"), ValidationError);
    CHECK(csv::parse_number("1e3", "mem", 1, "v") == 1000);
    CHECK_THROWS_AS(csv::parse_number("12x", "mem", 1, "v"), ValidationError);
}

TEST_CASE("malformed reference files are reference-data errors") {
    const auto dir = testing::scratch("bad_ref");
    for (const char* f : {"grid_intensity.csv", "hardware.csv", "locations.csv"}) {
        std::filesystem::copy_file(default_data_dir() / f, dir / f);
    }
    CHECK_NOTHROW(load_reference_data(dir));

    testing::spit(dir / "grid_intensity.csv", "country_code,intensity_gco2_per_kwh,source,comment\nZA,709,x,\nZA,700,x,\n");
    CHECK_THROWS_AS(load_reference_data(dir), ReferenceDataError);
    testing::spit(dir / "grid_intensity.csv", "country_code,intensity_gco2_per_kwh,source,comment\nZA,900,x,\n");
    CHECK_THROWS_AS(load_reference_data(dir), ReferenceDataError);
    testing::spit(dir / "grid_intensity.csv", "country_code,intensity_gco2_per_kwh,source,comment\nZA,abc,x,\n");
    CHECK_THROWS_AS(load_reference_data(dir), ReferenceDataError);
    std::filesystem::remove(dir / "grid_intensity.csv");
    CHECK_THROWS_AS(load_reference_data(dir), ReferenceDataError);
}

}  // TEST_SUITE
