#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pcx/decomposition.hpp"
#include "pcx/generators.hpp"
#include "support.hpp"

using namespace pcx;
using namespace pcx::testing;

namespace {

Decomposition from_labels(const GridCompactum& K, const std::vector<std::int64_t>& lab) {
    return make_decomposition(K.level, K.cells(), lab);
}

Decomposition random_partition(const GridCompactum& K, int classes, std::mt19937_64& rng) {
    std::vector<std::int64_t> lab(K.count());
    for (auto& l : lab) l = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(classes));
    return from_labels(K, lab);
}

Decomposition one_class(const GridCompactum& K) { return from_labels(K, std::vector<std::int64_t>(K.count(), 0)); }

// Unordered pairs of 8-adjacent cells.
std::size_t adjacent_pairs(const std::vector<Cell>& cells) {
    CellSet s = as_set(cells);
    std::size_t n = 0;
    for (auto [i, j] : s)
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di)
                if ((di || dj) && s.count({i + di, j + dj})) ++n;
    return n / 2;
}

}  // namespace

TEST(Relation, SquareHasNothingToMerge) {
    GridCompactum K = rasterize(unit_square(), {4, 2});
    RelationSeed seed = schoenflies_relation(K, RelationParams{});
    EXPECT_TRUE(seed.merge_sets.empty());
    EXPECT_GT(seed.regions, 0u);
    Decomposition D = close_equivalence(K, seed);
    EXPECT_EQ(D.classes.size(), K.count());
}

TEST(Relation, CombMergeSetsCoverTheTeeth) {
    GridCompactum K = rasterize(cantor_comb(), {4, 3});
    RelationSeed seed = schoenflies_relation(K, RelationParams{});
    ASSERT_FALSE(seed.merge_sets.empty());
    EXPECT_EQ(seed.merge_sets.size(), seed.sources.size());
    CellSet merged;
    for (const auto& m : seed.merge_sets) {
        EXPECT_GE(m.size(), 2u);
        for (const Cell& c : m) {
            EXPECT_TRUE(K.has(c.i, c.j));
            merged.insert({c.i, c.j});
        }
    }
    std::int64_t N = 81;
    for (std::int64_t col : cantor_columns(4))
        for (std::int64_t j = 0; j < N - 1; ++j) EXPECT_TRUE(merged.count({col, j})) << col << "," << j;
}

TEST(Relation, JobsDoNotChangeTheSeed) {
    GridCompactum K = rasterize(topologist_sine(), {5, 2});
    RelationParams one, many;
    many.jobs = 8;
    Decomposition a = close_equivalence(K, schoenflies_relation(K, one));
    Decomposition b = close_equivalence(K, schoenflies_relation(K, many));
    EXPECT_TRUE(same_partition(a, b));
}

TEST(Relation, NoRegionsOnEmptySet) {
    GridCompactum K = rasterize(empty_spec(), {3, 2});
    Decomposition D = decompose(empty_spec(), {3, 2}, RelationParams{});
    EXPECT_TRUE(D.cells.empty());
    EXPECT_TRUE(D.classes.empty());
    EXPECT_TRUE(schoenflies_relation(K, RelationParams{}).merge_sets.empty());
}

TEST(Closure, ChainsMerge) {
    GridCompactum K = from_cells({{0, 0}, {1, 0}, {2, 0}, {3, 0}}, {2, 2});
    RelationSeed seed;
    seed.merge_sets = {{{0, 0}, {1, 0}}, {{1, 0}, {2, 0}}};
    Decomposition D = close_equivalence(K, seed);
    ASSERT_EQ(D.classes.size(), 2u);
    EXPECT_EQ(D.class_of({0, 0}), D.class_of({2, 0}));
    EXPECT_NE(D.class_of({0, 0}), D.class_of({3, 0}));
    EXPECT_EQ(D.info(D.class_of({1, 0})).size, 3);
    EXPECT_EQ(D.info(D.class_of({3, 0})).size, 1);
    EXPECT_DOUBLE_EQ(D.info(D.class_of({0, 0})).diameter, std::hypot(0.75, 0.25));
}

TEST(Closure, SeedOutsideKIsRejected) {
    GridCompactum K = from_cells({{0, 0}, {1, 0}}, {2, 2});
    RelationSeed seed;
    seed.merge_sets = {{{0, 0}, {3, 3}}};
    EXPECT_THROW(close_equivalence(K, seed), Error);
}

TEST(Closure, ClassIdsAreSmallestMemberRanks) {
    GridCompactum K = from_cells({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {1, 2});
    Decomposition D = from_labels(K, {7, 3, 3, 7});
    ASSERT_EQ(D.classes.size(), 2u);
    EXPECT_EQ(D.classes[0].id, 0);
    EXPECT_EQ(D.classes[1].id, 1);
    EXPECT_EQ(D.class_of({1, 1}), 0);
    EXPECT_EQ(D.class_of({0, 1}), 1);
    EXPECT_THROW(D.class_of({5, 5}), Error);
    EXPECT_THROW(make_decomposition(K.level, {{0, 0}, {0, 0}}, {1, 2}), Error);
    EXPECT_THROW(make_decomposition(K.level, {{0, 0}}, {1, 2}), Error);
}

TEST(Closure, IsIdempotent) {
    for (std::string name : {"cantor_comb", "topologist_sine"}) {
        SpecPtr spec = make_spec(GeneratorParams{name, {}, 0});
        GridCompactum K = rasterize(spec, {4, spec->base});
        Decomposition D = close_equivalence(K, schoenflies_relation(K, RelationParams{}));
        EXPECT_TRUE(same_partition(close_equivalence(K, seed_from(D)), D)) << name;
    }
}

TEST(Decompose, SquareIsAllSingletons) {
    Decomposition D = decompose(unit_square(), {5, 2}, RelationParams{});
    EXPECT_EQ(D.classes.size(), D.cells.size());
    EXPECT_EQ(D.cells.size(), 32u * 32u);
}

TEST(Decompose, SineCollapsesTheBar) {
    Level lv{6, 2};
    Decomposition D = decompose(topologist_sine(), lv, RelationParams{});
    GridCompactum K = rasterize(topologist_sine(), lv);
    std::set<std::int64_t> bar;
    for (const Cell& c : K.cells())
        if (c.i == 0) bar.insert(D.class_of(c));
    EXPECT_EQ(bar.size(), 1u);
    // Far from the bar the curve is locally connected.
    for (const auto& ci : D.classes)
        if (ci.bbox.i0 > 16) { EXPECT_EQ(ci.size, 1); }
}

TEST(Decompose, SpiralRimIsOneClass) {
    Level lv{6, 2};
    SpecPtr spec = spiral_disk();
    Decomposition D = decompose(spec, lv, RelationParams{});
    std::int64_t biggest = 0;
    for (const auto& ci : D.classes) biggest = std::max(biggest, ci.size);
    const ClassInfo* big = nullptr;
    for (const auto& ci : D.classes)
        if (ci.size == biggest) big = &ci;
    ASSERT_NE(big, nullptr);
    double cs = lv.cell_size();
    EXPECT_GE(big->diameter, 2 - 4 * cs);
    // Away from the unit circle every class is a singleton.
    for (std::size_t k = 0; k < D.cells.size(); ++k) {
        Box b = cell_box(D.cells[k], lv);
        double r = std::hypot((b.x0 + b.x1) / 2, (b.y0 + b.y1) / 2);
        if (r - 1 > 4 * cs) { EXPECT_EQ(D.info(D.cls[k]).size, 1); }
    }
}

TEST(Quotient, SingletonsGiveTheAdjacencyGraph) {
    for (std::string name : {"unit_square", "cantor_comb", "bars"}) {
        SpecPtr spec = make_spec(GeneratorParams{name, {}, 0});
        GridCompactum K = rasterize(spec, {3, spec->base});
        QuotientGraph G = quotient_graph(K, singletons(K));
        EXPECT_EQ(G.nodes.size(), K.count());
        EXPECT_EQ(G.edges.size(), adjacent_pairs(K.cells())) << name;
        EXPECT_EQ(G.components, pieces(as_set(K.cells()), 8)) << name;
    }
}

TEST(Quotient, MismatchedCellsAreRejected) {
    GridCompactum K = rasterize(unit_square(), {2, 2});
    GridCompactum L = rasterize(unit_square(), {3, 2});
    EXPECT_THROW(quotient_graph(K, singletons(L)), Error);
}

TEST(Quotient, ShapesOfSmallGraphs) {
    Level lv{4, 2};
    auto shape = [&](const std::vector<Cell>& cells) {
        GridCompactum K = from_cells(cells, lv);
        return reduce_quotient(quotient_graph(K, singletons(K)));
    };
    std::vector<Cell> seg;
    for (std::int64_t i = 0; i < 10; ++i) seg.push_back({i, 3});
    EXPECT_TRUE(shape(seg).is_path);

    EXPECT_TRUE(shape(rect_cells(0, 0, 12, 3)).is_path);

    std::vector<Cell> ring;
    for (const Cell& c : rect_cells(0, 0, 8, 8))
        if (c.i == 0 || c.j == 0 || c.i == 7 || c.j == 7) ring.push_back(c);
    EXPECT_FALSE(shape(ring).is_path);

    std::vector<Cell> plus;
    for (std::int64_t t = 0; t < 9; ++t) plus.push_back({t, 4}), plus.push_back({4, t});
    std::sort(plus.begin(), plus.end(), row_major_less);
    plus.erase(std::unique(plus.begin(), plus.end()), plus.end());
    // Trees collapse onto the path between their two far ends.
    EXPECT_TRUE(shape(plus).is_path);

    std::vector<Cell> theta = ring;
    for (std::int64_t i = 1; i < 7; ++i) theta.push_back({i, 4});
    EXPECT_FALSE(shape(theta).is_path);

    EXPECT_FALSE(shape({{0, 0}, {5, 5}}).is_path);
    EXPECT_TRUE(shape({{0, 0}}).is_path);
}

TEST(Quotient, SineQuotientIsAnArc) {
    Level lv{6, 2};
    GridCompactum K = rasterize(topologist_sine(), lv);
    Decomposition D = close_equivalence(K, schoenflies_relation(K, RelationParams{}));
    EXPECT_TRUE(reduce_quotient(quotient_graph(K, D)).is_path);
}

TEST(Monotone, CoreDecompositionsHaveConnectedClasses) {
    for (const std::string& name : generator_names()) {
        SpecPtr spec = make_spec(GeneratorParams{name, {}, 3});
        GridCompactum K = rasterize(spec, {spec->base == 3 ? 3 : 5, spec->base});
        Decomposition D = close_equivalence(K, schoenflies_relation(K, RelationParams{}));
        MonotoneReport r = monotone_check(K, D);
        EXPECT_TRUE(r.all_connected) << name;
        EXPECT_TRUE(r.components_match) << name;
        EXPECT_EQ(r.compactum_components, pieces(as_set(K.cells()), 8)) << name;
    }
}

TEST(Monotone, DisconnectedClassIsReported) {
    std::vector<Cell> cells;
    for (std::int64_t i = 0; i < 8; ++i) cells.push_back({i, 0});
    GridCompactum K = from_cells(cells, {3, 2});
    std::vector<std::int64_t> lab{0, 1, 1, 1, 1, 1, 1, 0};
    Decomposition D = from_labels(K, lab);
    MonotoneReport r = monotone_check(K, D);
    EXPECT_FALSE(r.all_connected);
    EXPECT_EQ(r.disconnected, (std::vector<std::int64_t>{0}));
    EXPECT_TRUE(r.components_match);
}

TEST(Monotone, QuotientComponentsCanMerge) {
    GridCompactum K = from_cells({{0, 0}, {4, 0}}, {3, 2});
    MonotoneReport r = monotone_check(K, one_class(K));
    EXPECT_FALSE(r.all_connected);
    EXPECT_EQ(r.quotient_components, 1);
    EXPECT_EQ(r.compactum_components, 2);
    EXPECT_FALSE(r.components_match);
}

TEST(Peano, SquaresCountByThreshold) {
    std::vector<Decomposition> per;
    for (int n = 4; n <= 5; ++n) {
        Level lv{n, 2};
        std::int64_t s = std::int64_t{1} << (n - 2);
        std::vector<Cell> cells;
        // Three squares of side 1/4 and one of side 1/16.
        for (auto [i0, j0] : {std::pair{0L, 0L}, {2 * s, 0L}, {0L, 2 * s}}) {
            auto sq = rect_cells(i0, j0, s, s);
            cells.insert(cells.end(), sq.begin(), sq.end());
        }
        auto small = rect_cells(3 * s, 3 * s, std::max<std::int64_t>(1, s / 4), std::max<std::int64_t>(1, s / 4));
        cells.insert(cells.end(), small.begin(), small.end());
        per.push_back(singletons(from_cells(cells, lv)));
    }
    PeanoReport r = peano_check(per, {0.3, 0.05});
    ASSERT_EQ(r.levels.size(), 2u);
    for (const auto& pl : r.levels) {
        EXPECT_EQ(pl.big_components[0], 3);
        EXPECT_EQ(pl.big_components[1], 4);
    }
    EXPECT_TRUE(r.consistent);
}

TEST(Peano, CombQuotientIsConsistentButTheCombIsNot) {
    std::vector<Decomposition> core, trivial;
    for (int n = 3; n <= 6; ++n) {
        GridCompactum K = rasterize(cantor_comb(), {n, 3});
        core.push_back(close_equivalence(K, schoenflies_relation(K, RelationParams{})));
        trivial.push_back(singletons(K));
    }
    PeanoReport a = peano_check(core, {0.1, 0.5});
    for (const auto& pl : a.levels) EXPECT_EQ(pl.big_components, (std::vector<std::int64_t>{1, 1}));
    EXPECT_TRUE(a.consistent);
    PeanoReport b = peano_check(trivial, {0.1, 0.5});
    EXPECT_FALSE(b.divergent_strips.empty());
    EXPECT_FALSE(b.consistent);
}

TEST(Peano, CarpetSingletonsAreConsistent) {
    std::vector<Decomposition> per;
    for (int n = 2; n <= 4; ++n) per.push_back(singletons(rasterize(sierpinski_carpet(), {n, 3})));
    EXPECT_TRUE(peano_check(per, {0.5}).consistent);
}

TEST(Order, SingletonsAndOneClassBoundEverything) {
    std::mt19937_64 rng(5);
    GridCompactum K = rasterize(bars(), {4, 2});
    Decomposition lo = singletons(K), hi = one_class(K);
    for (int t = 0; t < 20; ++t) {
        Decomposition D = random_partition(K, 1 + static_cast<int>(rng() % 6), rng);
        EXPECT_TRUE(refines(lo, D));
        EXPECT_TRUE(refines(D, hi));
        EXPECT_TRUE(refines(D, D));
    }
}

TEST(Order, IsAPartialOrder) {
    std::mt19937_64 rng(9);
    GridCompactum K = from_cells(rect_cells(0, 0, 4, 3), {2, 2});
    for (int t = 0; t < 300; ++t) {
        Decomposition a = random_partition(K, 3, rng), b = random_partition(K, 2, rng), c = random_partition(K, 2, rng);
        if (refines(a, b) && refines(b, a)) { EXPECT_TRUE(same_partition(a, b)); }
        if (refines(a, b) && refines(b, c)) { EXPECT_TRUE(refines(a, c)); }
        Decomposition m = common_refinement(a, b);
        EXPECT_TRUE(refines(m, a));
        EXPECT_TRUE(refines(m, b));
        // Coarsest such: anything refining both refines m.
        if (refines(c, a) && refines(c, b)) { EXPECT_TRUE(refines(c, m)); }
        EXPECT_EQ(refines(a, b), refines_within(a, b, 0));
    }
}

TEST(Order, MismatchedCellSetsAreRejected) {
    GridCompactum K = from_cells({{0, 0}, {1, 0}}, {2, 2}), L = from_cells({{0, 0}}, {2, 2});
    EXPECT_THROW(refines(singletons(K), singletons(L)), Error);
    EXPECT_THROW(common_refinement(singletons(K), singletons(L)), Error);
    EXPECT_FALSE(same_partition(singletons(K), singletons(L)));
}

TEST(Fibers, SquareRowsAndColumnsMeetInSingletons) {
    GridCompactum K = rasterize(unit_square(), {3, 2});
    Decomposition v = fiber_decomposition(K, Axis::vertical), h = fiber_decomposition(K, Axis::horizontal);
    EXPECT_EQ(v.classes.size(), 8u);
    EXPECT_EQ(h.classes.size(), 8u);
    EXPECT_FALSE(refines(v, h));
    EXPECT_FALSE(refines(h, v));
    EXPECT_TRUE(same_partition(common_refinement(v, h), singletons(K)));
}

TEST(Fibers, CombCoreFollowsTheTeeth) {
    GridCompactum K = rasterize(cantor_comb(), {4, 3});
    Decomposition D = close_equivalence(K, schoenflies_relation(K, RelationParams{}));
    Decomposition F = fiber_decomposition(K, Axis::vertical);
    EXPECT_LT(D.classes.size(), K.count());
    EXPECT_TRUE(refines_within(D, F, 2));
}

TEST(Fibers, SpiralCoreStaysInACircleBand) {
    Level lv{6, 2};
    SpecPtr spec = spiral_disk();
    GridCompactum K = rasterize(spec, lv);
    Decomposition D = close_equivalence(K, schoenflies_relation(K, RelationParams{}));
    double cs = lv.cell_size();
    auto cells = K.cells();
    std::vector<std::int64_t> lab(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
        Box b = cell_box(cells[k], lv);
        double r = std::hypot((b.x0 + b.x1) / 2, (b.y0 + b.y1) / 2);
        lab[k] = std::abs(r - 1) <= 4 * cs ? -1 : static_cast<std::int64_t>(k);
    }
    Decomposition band = make_decomposition(lv, cells, lab);
    EXPECT_TRUE(refines_within(D, band, 2));
}

TEST(Equivariance, SineDecompositionCommutesWithIsometries) {
    Level lv{5, 2};
    Decomposition D = decompose(topologist_sine(), lv, RelationParams{});
    for (Isometry g : all_isometries) {
        Decomposition E = decompose(transform_spec(topologist_sine(), g), lv, RelationParams{});
        EXPECT_TRUE(same_partition(transform(D, g), E)) << to_string(g);
    }
}
