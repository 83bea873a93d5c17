#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pcx/generators.hpp"
#include "pcx/grid.hpp"
#include "support.hpp"

using namespace pcx;
using namespace pcx::testing;

namespace {

// Cantor ternary set times {0}.
SpecPtr cantor_line() {
    return make_spec_from("cantor_line", {0, 0, 1, 0}, 3, [](const Box& b) {
        bool row = b.y0 <= 0 && 0 <= b.y1;
        return row && ternary::cantor_meets_open(b.x0, b.x1) ? Hit::intersects : Hit::disjoint;
    });
}

double brute_hausdorff(const std::vector<Cell>& a, const std::vector<Cell>& b, double cs) {
    auto directed = [&](const std::vector<Cell>& x, const std::vector<Cell>& y) {
        double worst = 0;
        for (const Cell& p : x) {
            double best = 1e300;
            for (const Cell& q : y) best = std::min(best, std::hypot(double(p.i - q.i), double(p.j - q.j)));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a)) * cs;
}

std::vector<Cell> random_cells(std::mt19937_64& rng, int n, int span) {
    CellSet s;
    while (static_cast<int>(s.size()) < n)
        s.insert({static_cast<std::int64_t>(rng() % span), static_cast<std::int64_t>(rng() % span)});
    return as_cells(s);
}

}  // namespace

TEST(Rasterize, UnitSquareIsFull) {
    GridCompactum K = rasterize(unit_square(), {3, 2});
    EXPECT_EQ(K.window.w, 8);
    EXPECT_EQ(K.window.h, 8);
    EXPECT_EQ(K.count(), 64u);
    EXPECT_EQ(K.window.box(K.level).x1, 1.0);
}

TEST(Rasterize, CantorLineMatchesTernaryIntervals) {
    GridCompactum K = rasterize(cantor_line(), {2, 3});
    auto cols = cantor_columns(2);
    std::vector<Cell> want;
    for (auto i : cols) want.push_back({i, 0});
    EXPECT_EQ(K.cells(), want);
    EXPECT_EQ(label_components(K).count(), 4u);
}

TEST(Rasterize, EmptySpecGivesEmptyRaster) {
    for (int n : {0, 3, 7}) {
        GridCompactum K = rasterize(empty_spec(), {n, 2});
        EXPECT_TRUE(K.empty());
        EXPECT_TRUE(K.cells().empty());
    }
}

TEST(Rasterize, RejectsExcessDepth) {
    EXPECT_THROW(rasterize(unit_square(), {max_level() + 1, 2}), Error);
}

TEST(Rasterize, CellBoundariesAreExactAtBase3) {
    Level lv{6, 3};
    EXPECT_EQ(cell_box({728, 728}, lv).x1, 1.0);
    EXPECT_EQ(cell_box({728, 728}, lv).y1, 1.0);
}

TEST(Coarsen, SingleCellHasOneParent) {
    Level lv{3, 2};
    GridCompactum K = from_cells({{5, 6}}, lv);
    GridCompactum C = coarsen(K);
    EXPECT_EQ(C.level.n, 2);
    EXPECT_EQ(C.cells(), (std::vector<Cell>{{2, 3}}));
}

TEST(Coarsen, EmptyStaysEmpty) {
    EXPECT_TRUE(coarsen(rasterize(empty_spec(), {4, 2})).empty());
}

TEST(Coarsen, RejectsLevelZero) {
    EXPECT_THROW(coarsen(rasterize(unit_square(), {0, 2})), Error);
}

TEST(Coarsen, CompatibleWithRasterizeForAllGenerators) {
    for (const std::string& name : generator_names()) {
        SpecPtr spec = make_spec(GeneratorParams{name, {}, 42});
        for (int n = 0; n <= 5; ++n) {
            GridCompactum fine = rasterize(spec, {n + 1, spec->base});
            GridCompactum direct = rasterize(spec, {n, spec->base});
            EXPECT_EQ(coarsen(fine).cells(), direct.cells()) << name << " level " << n;
        }
    }
}

TEST(Labeling, DiagonalCellsDependOnConnectivity) {
    GridCompactum K = from_cells({{0, 0}, {1, 1}}, {2, 2});
    EXPECT_EQ(label_components(K, 8).count(), 1u);
    EXPECT_EQ(label_components(K, 4).count(), 2u);
}

TEST(Labeling, CombIsOneComponent) {
    EXPECT_EQ(label_components(rasterize(cantor_comb(), {2, 3})).count(), 1u);
}

TEST(Labeling, IdsFollowScanOrder) {
    GridCompactum K = from_cells({{5, 0}, {0, 2}, {0, 0}}, {3, 2});
    ComponentLabeling L = label_components(K, 8);
    EXPECT_EQ(L.at(0, 0), 0);
    EXPECT_EQ(L.at(5, 0), 1);
    EXPECT_EQ(L.at(0, 2), 2);
}

TEST(Labeling, PartitionsIntoMaximalConnectedClasses) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 60; ++t) {
        auto cells = random_cells(rng, 40 + static_cast<int>(rng() % 200), 24);
        GridCompactum K = from_cells(cells, {5, 2});
        for (int conn : {4, 8}) {
            ComponentLabeling L = label_components(K, conn);
            CellSet all = as_set(cells);
            std::size_t total = 0;
            for (const auto& m : L.members()) {
                total += m.size();
                CellSet s = as_set(m);
                // Each class is exactly the flood of one of its cells.
                EXPECT_EQ(flood(all, {*s.begin()}, conn), s);
            }
            EXPECT_EQ(total, cells.size());
            EXPECT_EQ(static_cast<int>(L.count()), pieces(all, conn));
        }
    }
}

TEST(Labeling, AddingCellsOnlyMergesExistingComponents) {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 60; ++t) {
        auto a = random_cells(rng, 60, 20);
        auto extra = random_cells(rng, 30, 20);
        CellSet sa = as_set(a), sb = sa;
        for (const Cell& c : extra) sb.insert({c.i, c.j});
        // Components of the larger set that contain an original cell.
        GridCompactum KB = from_cells(as_cells(sb), {5, 2});
        ComponentLabeling LB = label_components(KB, 8);
        std::set<int> touched;
        for (auto [i, j] : sa) touched.insert(LB.at(i, j));
        EXPECT_LE(static_cast<int>(touched.size()), pieces(sa, 8));
    }
}

TEST(Labeling, MetaTracksSizeAndBoundaryTouches) {
    GridCompactum K = rasterize(unit_square(), {2, 2});
    ComponentLabeling L = label_components(K);
    ASSERT_EQ(L.count(), 1u);
    EXPECT_EQ(L.meta[0].size, 16);
    EXPECT_TRUE(L.meta[0].touches_left && L.meta[0].touches_right && L.meta[0].touches_bottom && L.meta[0].touches_top);
    EXPECT_NEAR(L.meta[0].diameter, std::sqrt(2.0), 1e-12);
}

TEST(Complement, HollowRingHasInsideAndOutside) {
    std::vector<Cell> ring;
    for (const Cell& c : rect_cells(0, 0, 6, 6))
        if (c.i == 0 || c.j == 0 || c.i == 5 || c.j == 5) ring.push_back(c);
    GridCompactum K = from_cells(ring, {3, 2});
    ComponentLabeling L = complement_components(K, K.window.expanded(1, 1));
    ASSERT_EQ(L.count(), 2u);
    int unbounded = 0;
    for (const auto& m : L.meta) unbounded += m.unbounded;
    EXPECT_EQ(unbounded, 1);
}

TEST(Complement, EmptyCompactumIsOneUnboundedComponent) {
    GridCompactum K = rasterize(empty_spec(), {3, 2});
    ComponentLabeling L = complement_components(K, K.window);
    ASSERT_EQ(L.count(), 1u);
    EXPECT_TRUE(L.meta[0].unbounded);
}

TEST(Complement, CarpetLevel3Has74Components) {
    GridCompactum K = rasterize(sierpinski_carpet(), {3, 3});
    ComponentLabeling L = complement_components(K, K.window.expanded(1, 1));
    EXPECT_EQ(L.count(), 1u + 1u + 8u + 64u);
}

TEST(Complement, WindowSmallerThanCompactumIsAnError) {
    GridCompactum K = rasterize(unit_square(), {3, 2});
    EXPECT_THROW(complement_components(K, CellWindow{0, 0, 4, 4}), Error);
    EXPECT_THROW(complement_components(K, Box{0.25, 0.25, 0.75, 0.75}), Error);
}

TEST(Hausdorff, Examples) {
    Level lv{4, 2};
    std::vector<Cell> a{{3, 3}, {4, 3}};
    EXPECT_EQ(hausdorff_distance(a, a, lv), 0.0);
    for (std::int64_t k : {1, 5, 9})
        EXPECT_DOUBLE_EQ(hausdorff_distance({{0, 0}}, {{k, 0}}, lv), static_cast<double>(k) * lv.cell_size());
}

TEST(Hausdorff, CantorIntervalsAreTwoNinthsApart) {
    Level lv{4, 3};
    GridCompactum K = rasterize(cantor_line(), lv);
    std::vector<Cell> first, second;
    for (const Cell& c : K.cells()) {
        if (c.i < 9) first.push_back(c);
        if (c.i >= 18 && c.i < 27) second.push_back(c);
    }
    EXPECT_NEAR(hausdorff_distance(first, second, lv), 2.0 / 9.0, lv.cell_size());
}

TEST(Hausdorff, EmptyInputIsAnError) {
    EXPECT_THROW(hausdorff_distance({}, {{0, 0}}, {2, 2}), Error);
}

TEST(Hausdorff, MetricAxiomsOnRandomSets) {
    std::mt19937_64 rng(13);
    Level lv{5, 2};
    for (int t = 0; t < 40; ++t) {
        auto a = random_cells(rng, 1 + static_cast<int>(rng() % 20), 30);
        auto b = random_cells(rng, 1 + static_cast<int>(rng() % 20), 30);
        auto c = random_cells(rng, 1 + static_cast<int>(rng() % 20), 30);
        double ab = hausdorff_distance(a, b, lv), ba = hausdorff_distance(b, a, lv);
        double bc = hausdorff_distance(b, c, lv), ac = hausdorff_distance(a, c, lv);
        EXPECT_DOUBLE_EQ(ab, ba);
        EXPECT_NEAR(ab, brute_hausdorff(a, b, lv.cell_size()), 1e-12);
        EXPECT_LE(ac, ab + bc + 1e-12);
        EXPECT_EQ(hausdorff_distance(a, a, lv), 0.0);
        if (as_set(a) != as_set(b)) { EXPECT_GT(ab, 0.0); }
    }
}

TEST(Diameter, Examples) {
    Level lv{4, 2};
    double cs = lv.cell_size();
    EXPECT_NEAR(diameter({{7, 2}}, lv), cs * std::sqrt(2.0), 1e-15);
    GridCompactum square = rasterize(unit_square(), lv);
    EXPECT_DOUBLE_EQ(diameter(square.cells(), lv), std::sqrt(2.0));
    Level l3{4, 3};
    std::vector<Cell> tooth;
    for (std::int64_t j = 0; j < 81; ++j) tooth.push_back({0, j});
    EXPECT_NEAR(diameter(tooth, l3), 1.0, 2 * l3.cell_size());
    EXPECT_THROW(diameter({}, lv), Error);
}

TEST(Diameter, MatchesBruteForceOverCorners) {
    std::mt19937_64 rng(14);
    Level lv{5, 2};
    for (int t = 0; t < 40; ++t) {
        auto a = random_cells(rng, 1 + static_cast<int>(rng() % 30), 32);
        double far = 0;
        for (const Cell& p : a)
            for (const Cell& q : a)
                for (int px : {0, 1})
                    for (int py : {0, 1})
                        for (int qx : {0, 1})
                            for (int qy : {0, 1})
                                far = std::max(far, std::hypot(double(q.i + qx - p.i - px), double(q.j + qy - p.j - py)));
        EXPECT_NEAR(diameter(a, lv), far * lv.cell_size(), 1e-12);
    }
}
