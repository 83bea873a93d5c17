#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>

#include "pcx/generators.hpp"
#include "pcx/grid.hpp"
#include "support.hpp"

using namespace pcx;
using namespace pcx::testing;

namespace {

using Point = std::pair<double, double>;

// Random point of the Cantor set from 30 random digits in {0, 2}.
double cantor_point(std::mt19937_64& rng) {
    double x = 0, p = 1;
    for (int k = 0; k < 30; ++k) {
        p /= 3;
        x += (rng() % 2 ? 2 : 0) * p;
    }
    return x;
}

// Random point of the carpet: digit pairs avoid (1, 1).
Point carpet_point(std::mt19937_64& rng) {
    double x = 0, y = 0, p = 1;
    for (int k = 0; k < 30; ++k) {
        p /= 3;
        int dx, dy;
        do {
            dx = static_cast<int>(rng() % 3), dy = static_cast<int>(rng() % 3);
        } while (dx == 1 && dy == 1);
        x += dx * p, y += dy * p;
    }
    return {x, y};
}

bool in_carpet(double x, double y) {
    if (x < 0 || x > 1 || y < 0 || y > 1) return false;
    for (int k = 0; k < 30; ++k) {
        x *= 3, y *= 3;
        int dx = static_cast<int>(std::floor(x)), dy = static_cast<int>(std::floor(y));
        // Points on a hole's boundary belong to the carpet.
        if (dx == 1 && dy == 1 && x > 1 && x < 2 && y > 1 && y < 2) return false;
        x -= dx, y -= dy;
    }
    return true;
}

// Some cell whose closed box holds p is in K.
bool covered(const GridCompactum& K, Point p) {
    double s = static_cast<double>(K.level.cells_per_unit());
    double fx = p.first * s, fy = p.second * s;
    for (std::int64_t i : {static_cast<std::int64_t>(std::floor(fx)), static_cast<std::int64_t>(std::ceil(fx)) - 1})
        for (std::int64_t j : {static_cast<std::int64_t>(std::floor(fy)), static_cast<std::int64_t>(std::ceil(fy)) - 1})
            if (K.has(i, j)) return true;
    return false;
}

struct Sampler {
    std::string name;
    SpecPtr spec;
    std::function<Point(std::mt19937_64&)> on_set;
};

std::vector<Sampler> samplers() {
    auto u = [](std::mt19937_64& r) { return unit_double(r); };
    return {
        {"unit_square", unit_square(), [u](auto& r) { return Point{u(r), u(r)}; }},
        {"cantor_comb", cantor_comb(),
         [u](auto& r) { return r() % 4 ? Point{cantor_point(r), u(r)} : Point{u(r), 1.0}; }},
        {"cantor_dust", cantor_dust(), [](auto& r) { return Point{cantor_point(r), cantor_point(r)}; }},
        {"sierpinski_carpet", sierpinski_carpet(), [](auto& r) { return carpet_point(r); }},
        {"topologist_sine", topologist_sine(),
         [u](auto& r) {
             if (r() % 4 == 0) return Point{0.0, 2 * u(r) - 1};
             double x = std::pow(u(r), 3.0);  // dense near the bar
             x = std::max(x, 1e-9);
             return Point{x, std::sin(1 / x)};
         }},
        {"spiral_disk", spiral_disk(),
         [u](auto& r) {
             if (r() % 3 == 0) {
                 double a = 2 * std::numbers::pi * u(r), rad = std::sqrt(u(r));
                 return Point{rad * std::cos(a), rad * std::sin(a)};
             }
             double t = 40 * u(r), rad = 1 + std::exp(-t);
             return Point{rad * std::cos(2 * std::numbers::pi * t), rad * std::sin(2 * std::numbers::pi * t)};
         }},
        {"bars", bars(),
         [u](auto& r) {
             int k = static_cast<int>(r() % 3);
             double c = (k + 0.5) / 3;
             return Point{c - 0.05 + 0.1 * u(r), u(r)};
         }},
    };
}

}  // namespace

TEST(Generators, NamesAreRecognisedWithForcedBase) {
    for (const std::string& name : generator_names()) {
        SpecPtr s = make_spec(name);
        EXPECT_EQ(s->name, name);
        bool ternary_set = name == "cantor_comb" || name == "cantor_dust" || name == "sierpinski_carpet";
        EXPECT_EQ(s->base, ternary_set ? 3 : 2) << name;
    }
    EXPECT_THROW(make_spec("julia"), Error);
}

TEST(Generators, InvalidParametersAreRejected) {
    EXPECT_THROW(make_spec(GeneratorParams{"bars", {{"count", -1}}, 0}), Error);
    EXPECT_THROW(make_spec(GeneratorParams{"bars", {{"width", 0.6}}, 0}), Error);
    EXPECT_THROW(make_spec(GeneratorParams{"spiral_disk", {{"step", 0}}, 0}), Error);
    EXPECT_THROW(make_spec(GeneratorParams{"random_blobs", {{"max_size", 2}}, 0}), Error);
}

TEST(Generators, CombTeethAreTheCantorIntervals) {
    SpecPtr comb = cantor_comb();
    for (int n = 1; n <= 6; ++n) {
        GridCompactum K = rasterize(comb, {n, 3});
        std::int64_t N = ipow(3, n);
        auto cols = cantor_columns(n);
        std::set<std::int64_t> teeth(cols.begin(), cols.end());
        ASSERT_EQ(K.window.w, N);
        ASSERT_EQ(K.window.h, N);
        for (std::int64_t j = 0; j < N; ++j)
            for (std::int64_t i = 0; i < N; ++i) {
                bool want = j == N - 1 || teeth.count(i);
                ASSERT_EQ(K.has(i, j), want) << "level " << n << " cell " << i << "," << j;
            }
    }
}

TEST(Generators, SineContainsItsLimitBar) {
    GridCompactum K = rasterize(topologist_sine(), {6, 2});
    for (std::int64_t j = -64; j < 64; ++j) EXPECT_TRUE(K.has(0, j)) << j;
    EXPECT_EQ(label_components(K).count(), 1u);
}

TEST(Generators, OraclesNeverMissPointsOfTheSet) {
    std::mt19937_64 rng(21);
    for (const Sampler& s : samplers()) {
        for (int n : {3, 5}) {
            GridCompactum K = rasterize(s.spec, {n, s.spec->base});
            for (int k = 0; k < 4000; ++k) {
                Point p = s.on_set(rng);
                ASSERT_TRUE(covered(K, p)) << s.name << " level " << n << " misses (" << p.first << ", " << p.second << ")";
            }
        }
    }
}

TEST(Generators, DisjointCellsHoldNoPointOfAreaSets) {
    // Dense sampling inside every cell left out of the raster.
    struct Member {
        SpecPtr spec;
        std::function<bool(double, double)> in;
    };
    std::vector<Member> sets = {
        {unit_square(), [](double x, double y) { return x >= 0 && x <= 1 && y >= 0 && y <= 1; }},
        {spiral_disk(), [](double x, double y) { return x * x + y * y <= 1; }},
        {bars(),
         [](double x, double y) {
             if (y < 0 || y > 1) return false;
             for (int k = 0; k < 3; ++k)
                 if (std::fabs(x - (k + 0.5) / 3) <= 0.05) return true;
             return false;
         }},
        {sierpinski_carpet(), in_carpet},
    };
    for (const Member& m : sets) {
        Level lv{m.spec->base == 3 ? 3 : 5, m.spec->base};
        GridCompactum K = rasterize(m.spec, lv);
        CellWindow w = K.window;
        for (std::int64_t j = w.j0; j < w.j0 + w.h; ++j)
            for (std::int64_t i = w.i0; i < w.i0 + w.w; ++i) {
                if (K.has(i, j)) continue;
                Box b = cell_box({i, j}, lv);
                for (int sy = 0; sy <= 8; ++sy)
                    for (int sx = 0; sx <= 8; ++sx) {
                        double x = b.x0 + (b.x1 - b.x0) * (0.01 + 0.98 * sx / 8.0);
                        double y = b.y0 + (b.y1 - b.y0) * (0.01 + 0.98 * sy / 8.0);
                        ASSERT_FALSE(m.in(x, y)) << m.spec->name << " cell " << i << "," << j;
                    }
            }
    }
}

TEST(Generators, SpiralTruncationTailStaysNearTheCircle) {
    Level lv{7, 2};
    double cs = lv.cell_size();
    CellSet a = as_set(rasterize(spiral_disk(40), lv).cells());
    CellSet b = as_set(rasterize(spiral_disk(60, 2e-4), lv).cells());
    for (auto [i, j] : b)
        if (!a.count({i, j})) {
            double r = std::hypot((static_cast<double>(i) + 0.5) * cs, (static_cast<double>(j) + 0.5) * cs);
            EXPECT_LE(r - 1, cs) << i << "," << j;
        }
}

TEST(Generators, TransformCommutesWithRasterize) {
    for (const std::string& name : generator_names()) {
        SpecPtr s = make_spec(GeneratorParams{name, {}, 42});
        Level lv{s->base == 3 ? 3 : 4, s->base};
        GridCompactum K = rasterize(s, lv);
        for (Isometry g : all_isometries) {
            std::vector<Cell> want;
            for (const Cell& c : K.cells()) want.push_back(apply(g, c));
            std::sort(want.begin(), want.end(), row_major_less);
            EXPECT_EQ(rasterize(transform_spec(s, g), lv).cells(), want) << name << " " << to_string(g);
        }
    }
}

TEST(Random, ZeroBlobsIsEmpty) {
    RandomParams p;
    p.blobs = 0;
    SpecPtr s = random_compactum(0, p);
    EXPECT_TRUE(s->empty);
    EXPECT_TRUE(rasterize(s, {6, 2}).empty());
}

TEST(Random, SameSeedSameCells) {
    GridCompactum a = rasterize(random_compactum(42), {8, 2});
    GridCompactum b = rasterize(random_compactum(42), {8, 2});
    EXPECT_EQ(a.cells(), b.cells());
    EXPECT_FALSE(a.empty());
    EXPECT_NE(rasterize(random_compactum(43), {8, 2}).cells(), a.cells());
}

TEST(Random, SpanningBarRunsFullHeight) {
    RandomParams p;
    p.blobs = 0;
    p.spanning_bars = 1;
    GridCompactum K = rasterize(random_compactum(1, p), {6, 2});
    ComponentLabeling L = label_components(K);
    ASSERT_EQ(L.count(), 1u);
    EXPECT_TRUE(L.meta[0].touches_bottom && L.meta[0].touches_top);
}

TEST(Pbm, AllBlackIsTheUnitSquare) {
    std::string img = "P1\n8 8\n";
    for (int k = 0; k < 64; ++k) img += "1 ";
    Bitmap bm = parse_pbm(img);
    EXPECT_EQ(bitmap_level(bm), 3);
    GridCompactum K = rasterize(from_bitmap(bm), {3, 2});
    EXPECT_EQ(K.cells(), rasterize(unit_square(), {3, 2}).cells());
}

TEST(Pbm, AllWhiteIsEmpty) {
    std::string img = "P1\n# blank\n5 3\n";
    for (int k = 0; k < 15; ++k) img += "0";
    SpecPtr s = from_bitmap(parse_pbm(img));
    EXPECT_TRUE(s->empty);
    EXPECT_TRUE(rasterize(s, {3, 2}).empty());
}

TEST(Pbm, CheckerboardComponents) {
    SpecPtr s = from_pbm(std::string(PCX_SAMPLES_DIR) + "/checker4.pbm");
    GridCompactum K = rasterize(s, {2, 2});
    EXPECT_EQ(K.count(), 8u);
    EXPECT_EQ(label_components(K, 4).count(), 8u);
    // All black cells chain through corners.
    EXPECT_EQ(label_components(K, 8).count(), 1u);
}

TEST(Pbm, TopImageRowIsTopCellRow) {
    SpecPtr s = from_bitmap(parse_pbm("P1 2 2 1 0 0 0"));
    EXPECT_EQ(rasterize(s, {1, 2}).cells(), (std::vector<Cell>{{0, 1}}));
}

TEST(Pbm, BinaryMatchesAscii) {
    std::ifstream in(std::string(PCX_SAMPLES_DIR) + "/comb12x8.pbm", std::ios::binary);
    std::string bin((std::istreambuf_iterator<char>(in)), {});
    Bitmap b = parse_pbm(bin);
    ASSERT_EQ(b.width, 12);
    ASSERT_EQ(b.height, 8);
    std::string ascii = "P1\n12 8\n";
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 12; ++c) ascii += (r == 0 || c % 2 == 0) ? "1 " : "0 ";
    EXPECT_EQ(parse_pbm(ascii).black, b.black);
    // Padded to 16 x 16, image in the bottom-left corner.
    GridCompactum K = rasterize(from_bitmap(b), {bitmap_level(b), 2});
    EXPECT_TRUE(K.has(0, 7));
    EXPECT_FALSE(K.has(0, 8));
    EXPECT_FALSE(K.has(12, 7));
}

TEST(Pbm, MalformedInputsRaiseParseErrors) {
    EXPECT_THROW(parse_pbm("P2\n1 1\n1"), ParseError);
    EXPECT_THROW(parse_pbm("P1\n2 2\n1 0 1"), ParseError);
    EXPECT_THROW(parse_pbm("P1\n1 1\n7"), ParseError);
    EXPECT_THROW(parse_pbm("P1\n-1 1\n"), ParseError);
    EXPECT_THROW(parse_pbm("P4\n9 1\n\x01"), ParseError);
    EXPECT_THROW(parse_pbm(""), ParseError);
    EXPECT_THROW(from_bitmap(parse_pbm("P1\n2 8\n1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1")), ParseError);
    EXPECT_THROW(from_pbm("/nonexistent/pcx.pbm"), ParseError);
}
