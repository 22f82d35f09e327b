#include <doctest.h>

#include <stdexcept>

#include <random>
#include <set>

#include "pestscout/field.hpp"
#include "test_support.hpp"

using namespace pestscout;

namespace {
FieldGrid grid_for_count(int count) {
    FieldSpec spec;
    spec.plant_spacing_m = 2.0;
    spec.row_width_m = 3.5;
    spec.plant_count = count;
    return build_grid(spec);
}
}  // namespace

TEST_CASE("build_grid derives the reference scenario A layout") {
    // 2000 m2 / (100 m x 3.5 m) = 5.71 -> 6 planting rows.
    FieldGrid grid = build_grid({100.0, 3.5, 2.0, 2.0, std::nullopt, true});
    CHECK(grid.plants_per_row() == 50);
    CHECK(grid.num_planting_rows() == 6);
    CHECK(grid.num_plant_lines() == 10);
    CHECK(grid.total_plants() == 500);
}

TEST_CASE("build_grid minimal legal field") {
    FieldGrid grid = build_grid({10.0, 5.0, 10.0, 0.1, std::nullopt, true});
    CHECK(grid.plants_per_row() == 1);
    CHECK(grid.num_planting_rows() == 2);
    CHECK(grid.num_plant_lines() == 2);
}

TEST_CASE("build_grid x4 area scales the layout") {
    FieldGrid a = build_grid({100.0, 3.5, 2.0, 2.0, std::nullopt, true});
    FieldGrid c = build_grid({100.0, 3.5, 2.0, 8.0, std::nullopt, true});
    CHECK(c.plants_per_row() == 50);
    CHECK(c.num_planting_rows() == 23);  // round(8000/350)
    CHECK(c.num_plant_lines() == 44);
    CHECK(c.total_plants() > 3.5 * a.total_plants());
    CHECK(c.total_plants() < 4.8 * a.total_plants());
}

TEST_CASE("build_grid rejects bad dimensions") {
    CHECK_THROWS_AS(build_grid({-1.0, 3.5, 2.0, 2.0, std::nullopt, true}), std::invalid_argument);
    CHECK_THROWS_AS(build_grid({100.0, 0.0, 2.0, 2.0, std::nullopt, true}), std::invalid_argument);
    // Area too small for two planting rows.
    CHECK_THROWS_AS(build_grid({100.0, 3.5, 2.0, 0.1, std::nullopt, true}), std::invalid_argument);
}

TEST_CASE("plant_count override picks the squarest even-line layout") {
    CHECK(grid_for_count(784).num_plant_lines() == 28);
    CHECK(grid_for_count(784).plants_per_row() == 28);
    CHECK(grid_for_count(4096).num_plant_lines() == 64);
    CHECK(grid_for_count(4096).plants_per_row() == 64);
    // 8281 is odd; the smallest achievable count is 8282 = 82 x 101.
    FieldGrid c = grid_for_count(8281);
    CHECK(c.total_plants() == 8282);
    CHECK(c.num_plant_lines() == 82);
    CHECK(c.plants_per_row() == 101);
    FieldGrid six_ha = grid_for_count(5000);
    CHECK(six_ha.num_plant_lines() == 50);
    CHECK(six_ha.plants_per_row() == 100);
}

TEST_CASE("linear index round-trips") {
    FieldGrid grid = grid_for_count(36);
    for (int id = 0; id < grid.total_plants(); ++id) {
        PlantIndex p = grid.from_linear(id);
        CHECK(grid.to_linear(p) == id);
        CHECK(grid.contains(p));
    }
}

TEST_CASE("adjacency matches the reference spread topology") {
    FieldGrid grid = build_grid({100.0, 3.5, 2.0, 2.0, std::nullopt, true});

    SUBCASE("corner plant has a single neighbor") {
        auto nbrs = grid.adjacency({0, 0});
        REQUIRE(nbrs.size() == 1);
        CHECK(nbrs[0] == PlantIndex{0, 1});
    }
    SUBCASE("interior paired-line plant has three neighbors") {
        auto nbrs = grid.adjacency({1, 10});
        REQUIRE(nbrs.size() == 3);
        CHECK(nbrs[0] == PlantIndex{1, 9});
        CHECK(nbrs[1] == PlantIndex{1, 11});
        CHECK(nbrs[2] == PlantIndex{2, 10});
    }
    SUBCASE("last line end slot has one neighbor") {
        auto nbrs = grid.adjacency({grid.num_plant_lines() - 1, grid.plants_per_row() - 1});
        REQUIRE(nbrs.size() == 1);
    }
    SUBCASE("facing pairs are (1,2),(3,4),... with unpaired edges") {
        CHECK(!grid.facing_line(0).has_value());
        CHECK(!grid.facing_line(grid.num_plant_lines() - 1).has_value());
        CHECK(grid.facing_line(1) == 2);
        CHECK(grid.facing_line(2) == 1);
        CHECK(grid.facing_line(3) == 4);
    }
}

TEST_CASE("adjacency symmetry and degree bounds by enumeration") {
    for (int count : {6, 36, 60}) {
        FieldGrid grid = grid_for_count(count);
        for (int a = 0; a < grid.total_plants(); ++a) {
            auto nbrs = grid.adjacency(grid.from_linear(a));
            CHECK(nbrs.size() >= 1);
            CHECK(nbrs.size() <= 3);
            for (const auto& nb : nbrs) {
                auto back = grid.adjacency(nb);
                bool found = false;
                for (const auto& b : back) {
                    if (grid.to_linear(b) == a) found = true;
                }
                CHECK(found);
            }
        }
    }
}

TEST_CASE("travel time basics") {
    FieldGrid grid = build_grid({100.0, 3.5, 2.0, 2.0, std::nullopt, true});
    const double speed = 2.5 * 1000.0 / 3600.0;

    CHECK(travel_time_s(grid, speed, {3, 7}, {3, 7}) == 0.0);
    // 2 m at 2.5 km/h.
    CHECK(travel_time_s(grid, speed, {0, 0}, {0, 1}) == doctest::Approx(2.88).epsilon(1e-9));

    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        PlantIndex a = grid.from_linear(static_cast<int>(rng() % grid.total_plants()));
        PlantIndex b = grid.from_linear(static_cast<int>(rng() % grid.total_plants()));
        CHECK(travel_time_s(grid, speed, a, b) ==
              doctest::Approx(travel_time_s(grid, speed, b, a)));
        CHECK(travel_time_s(grid, speed, a, b) >=
              std::abs(a.slot - b.slot) * 2.0 / speed - 1e-9);
    }
}

TEST_CASE("travel distance equals the road-graph shortest path") {
    for (int count : {6, 20, 36}) {
        FieldGrid grid = grid_for_count(count);
        for (int a = 0; a < grid.total_plants(); ++a) {
            auto dist = pestscout::testing::travel_oracle_from(grid, a);
            for (int b = 0; b < grid.total_plants(); ++b) {
                CHECK(grid.travel_distance_m(grid.from_linear(a), grid.from_linear(b)) ==
                      doctest::Approx(dist[b]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("travel time is a metric on small grids") {
    FieldGrid grid = grid_for_count(36);  // 6 lines x 6 slots
    const double speed = 2.5 * 1000.0 / 3600.0;
    const int total = grid.total_plants();
    for (int a = 0; a < total; ++a) {
        for (int b = 0; b < total; ++b) {
            double dab = travel_time_s(grid, speed, grid.from_linear(a), grid.from_linear(b));
            CHECK(dab >= 0.0);
            if (a == b) CHECK(dab == 0.0);
            else CHECK(dab > 0.0);
            double dba = travel_time_s(grid, speed, grid.from_linear(b), grid.from_linear(a));
            CHECK(dab == doctest::Approx(dba).epsilon(1e-12));
            for (int c = 0; c < total; ++c) {
                double dac = travel_time_s(grid, speed, grid.from_linear(a), grid.from_linear(c));
                double dcb = travel_time_s(grid, speed, grid.from_linear(c), grid.from_linear(b));
                CHECK(dab <= dac + dcb + 1e-9);
            }
        }
    }
}

TEST_CASE("boundary mask marks the perimeter") {
    FieldGrid grid = grid_for_count(36);
    auto mask = boundary_mask(grid);
    int count = 0;
    for (auto v : mask) count += v;
    // 2 full edge lines plus the two end slots of the 4 interior lines.
    CHECK(count == 2 * 6 + 4 * 2);
    CHECK(mask[grid.to_linear({0, 3})] == 1);
    CHECK(mask[grid.to_linear({2, 0})] == 1);
    CHECK(mask[grid.to_linear({2, 3})] == 0);
}
