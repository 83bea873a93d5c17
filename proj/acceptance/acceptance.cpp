// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "pcx/cli.hpp"
#include "pcx/decomposition.hpp"
#include "pcx/generators.hpp"
#include "pcx/grid.hpp"
#include "pcx/schoenflies.hpp"

using namespace pcx;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Failures {
    int count = 0;
    std::string first;
    void add(const std::string& what) {
        if (count++ == 0) first = what;
    }
    bool any() const { return count > 0; }
    std::string summary() const { return std::to_string(count) + " failure(s), first: " + first; }
};

// ---------------------------------------------------------------------------
// Independent oracles

// Columns 0..3^n-1 whose n ternary digits avoid 1.
std::vector<std::int64_t> cantor_columns(int n) {
    std::vector<std::int64_t> cols{0};
    for (int d = 0; d < n; ++d) {
        std::vector<std::int64_t> next;
        for (std::int64_t c : cols) {
            next.push_back(3 * c);
            next.push_back(3 * c + 2);
        }
        cols = next;
    }
    return cols;
}

// Maximal runs of `flag` over [lo, hi).
std::int64_t runs(std::int64_t lo, std::int64_t hi, const std::function<bool(std::int64_t)>& flag) {
    std::int64_t n = 0;
    bool prev = false;
    for (std::int64_t x = lo; x < hi; ++x) {
        bool f = flag(x);
        if (f && !prev) ++n;
        prev = f;
    }
    return n;
}

using CellSet = std::set<std::pair<std::int64_t, std::int64_t>>;

CellSet as_set(const std::vector<Cell>& v) {
    CellSet s;
    for (const Cell& c : v) s.insert({c.i, c.j});
    return s;
}

// Cells of `from` reachable inside `free` by 4- or 8-steps.
CellSet flood(const CellSet& free, const CellSet& from, int conn) {
    CellSet seen;
    std::queue<std::pair<std::int64_t, std::int64_t>> q;
    for (auto c : from)
        if (free.count(c) && seen.insert(c).second) q.push(c);
    while (!q.empty()) {
        auto [i, j] = q.front();
        q.pop();
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
                if ((di == 0 && dj == 0) || (conn == 4 && di != 0 && dj != 0)) continue;
                std::pair<std::int64_t, std::int64_t> n{i + di, j + dj};
                if (free.count(n) && seen.insert(n).second) q.push(n);
            }
    }
    return seen;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Comb divergence law

Outcome comb_divergence() {
    Outcome o;
    auto spec = cantor_comb();
    ScanReport r = schoenflies_scan(spec, {Strip{Axis::horizontal, 0.25, 0.75, std::nullopt}}, level_range(2, 6));
    const StripScan& s = r.strips.at(0);
    std::vector<std::int64_t> want_int, want_diff;
    for (int n = 2; n <= 6; ++n) {
        auto cols = cantor_columns(n);
        std::set<std::int64_t> teeth(cols.begin(), cols.end());
        std::int64_t N = ipow(3, n);
        // Lateral window is the raster window plus one cell.
        want_int.push_back(runs(-1, N + 1, [&](std::int64_t x) { return teeth.count(x) > 0; }));
        want_diff.push_back(runs(-1, N + 1, [&](std::int64_t x) { return teeth.count(x) == 0; }));
        // The raster inside the strip must be exactly the tooth columns.
        GridCompactum K = rasterize(spec, {n, 3});
        auto [lo, hi] = s.lines[static_cast<std::size_t>(n - 2)];
        for (std::int64_t j = lo; j < hi; ++j)
            for (std::int64_t i = 0; i < N; ++i)
                if (K.has(i, j) != (teeth.count(i) > 0)) {
                    o.pass = false;
                    o.detail = "raster differs from ternary enumeration at level " + std::to_string(n);
                    return o;
                }
    }
    std::vector<std::int64_t> law_int = {4, 8, 16, 32, 64}, law_diff = {5, 9, 17, 33, 65};
    o.pass = s.m_int == want_int && s.m_diff == want_diff && s.m_int == law_int && s.m_diff == law_diff && s.divergent;
    std::ostringstream d;
    d << "int=(";
    for (std::size_t k = 0; k < s.m_int.size(); ++k) d << (k ? "," : "") << s.m_int[k];
    d << ") diff=(";
    for (std::size_t k = 0; k < s.m_diff.size(); ++k) d << (k ? "," : "") << s.m_diff[k];
    d << ") divergent=" << (s.divergent ? "true" : "false");
    o.detail = d.str();
    return o;
}

// ---------------------------------------------------------------------------
// 2. Duality bound

Outcome duality() {
    Outcome o;
    Failures f;
    std::mt19937_64 rng(20260101);
    std::int64_t worst = 0, cases = 0, nonzero = 0;
    for (int k = 0; k < 520; ++k) {
        RandomParams p;
        p.blobs = static_cast<int>(rng() % 14);
        p.spanning_bars = static_cast<int>(rng() % 5);
        p.min_size = 0.01;
        p.max_size = 0.2 + 0.3 * static_cast<double>(rng() % 100) / 100.0;
        auto spec = random_compactum(rng(), p);
        int n = 4 + static_cast<int>(rng() % 7);  // up to 1024 x 1024
        Level lv{n, 2};
        GridCompactum K = rasterize(spec, lv);
        std::int64_t N = lv.cells_per_unit();
        for (int t = 0; t < 3; ++t) {
            Axis ax = rng() % 2 ? Axis::horizontal : Axis::vertical;
            std::int64_t a = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(N));
            std::int64_t b = a + 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(N - a));
            Strip s{ax, lv.coord(a), lv.coord(b), std::nullopt};
            auto ri = crossing_components(K, s, Mode::intersection, lv.cell_size(), 4, false);
            auto rd = crossing_components(K, s, Mode::difference, lv.cell_size(), 4, false);
            auto gap = static_cast<std::int64_t>(ri.count()) - static_cast<std::int64_t>(rd.count());
            worst = std::max(worst, std::abs(gap));
            nonzero += ri.count() > 0 ? 1 : 0;
            ++cases;
            if (std::abs(gap) > 1)
                f.add("seed case " + std::to_string(k) + " level " + std::to_string(n) + ": " + ri.region + " int=" +
                      std::to_string(ri.count()) + " diff=" + std::to_string(rd.count()));
        }
    }
    o.pass = !f.any();
    o.detail = std::to_string(cases) + " strips over 520 compacta, " + std::to_string(nonzero) +
               " with crossings, max |m_int - m_diff| = " + std::to_string(worst);
    if (f.any()) o.detail += "; " + f.summary();
    return o;
}

// ---------------------------------------------------------------------------
// 3. Separating curves

// Thick random walk inside [lo, hi)^2.
std::vector<Cell> walk(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi, int steps) {
    std::int64_t span = hi - lo;
    std::int64_t x = lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span));
    std::int64_t y = lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span));
    std::int64_t brush = static_cast<std::int64_t>(rng() % 3);
    CellSet out;
    for (int s = 0; s < steps; ++s) {
        for (std::int64_t dy = 0; dy <= brush; ++dy)
            for (std::int64_t dx = 0; dx <= brush; ++dx)
                out.insert({std::clamp(x + dx, lo, hi - 1), std::clamp(y + dy, lo, hi - 1)});
        int d = static_cast<int>(rng() % 4);
        x = std::clamp(x + (d == 0) - (d == 1), lo, hi - 1);
        y = std::clamp(y + (d == 2) - (d == 3), lo, hi - 1);
    }
    std::vector<Cell> v;
    for (auto [i, j] : out) v.push_back({i, j});
    return v;
}

std::vector<Cell> ring(std::int64_t i0, std::int64_t j0, std::int64_t w, std::int64_t h, std::int64_t t) {
    std::vector<Cell> v;
    for (std::int64_t j = j0; j < j0 + h; ++j)
        for (std::int64_t i = i0; i < i0 + w; ++i)
            if (i < i0 + t || i >= i0 + w - t || j < j0 + t || j >= j0 + h - t) v.push_back({i, j});
    return v;
}

// Q must sit in the unbounded complement component of P dilated by `grow`.
bool separable(const std::vector<Cell>& P, const std::vector<Cell>& Q, std::int64_t grow, std::int64_t size) {
    std::int64_t lo = -grow - 2, hi = size + grow + 2;
    CellSet dil;
    for (const Cell& c : P)
        for (std::int64_t dj = -grow; dj <= grow; ++dj)
            for (std::int64_t di = -grow; di <= grow; ++di) dil.insert({c.i + di, c.j + dj});
    CellSet free, frame;
    for (std::int64_t j = lo; j < hi; ++j)
        for (std::int64_t i = lo; i < hi; ++i)
            if (!dil.count({i, j})) {
                free.insert({i, j});
                if (i == lo || j == lo || i == hi - 1 || j == hi - 1) frame.insert({i, j});
            }
    CellSet outside = flood(free, frame, 4);
    for (const Cell& c : Q)
        if (!outside.count({c.i, c.j})) return false;
    return true;
}

// Signed count of loop edges crossed by the ray from the cell centre towards +x.
int ray_winding(const SeparatingLoop& L, const Cell& c, int* parity) {
    int w = 0, cross = 0;
    std::size_t n = L.vertices.size();
    for (std::size_t k = 0; k < n; ++k) {
        auto a = L.vertices[k], b = L.vertices[(k + 1) % n];
        if (a[0] != b[0] || a[0] <= c.i) continue;  // vertical edges right of the centre
        std::int64_t y0 = std::min(a[1], b[1]), y1 = std::max(a[1], b[1]);
        if (y0 <= c.j && c.j + 1 <= y1) {
            w += b[1] > a[1] ? 1 : -1;
            ++cross;
        }
    }
    *parity = cross % 2;
    return w;
}

std::string check_loop(const SeparatingLoop& L, const GridCompactum& K, const std::vector<Cell>& P,
                       const std::vector<Cell>& Q) {
    std::size_t n = L.vertices.size();
    if (n < 4) return "loop has fewer than 4 vertices";
    std::set<std::array<std::int64_t, 2>> visited;
    for (std::size_t k = 0; k < n; ++k) {
        auto a = L.vertices[k], b = L.vertices[(k + 1) % n];
        if ((a[0] != b[0]) == (a[1] != b[1])) return "edge is not axis-parallel";
        std::int64_t dx = (b[0] > a[0]) - (b[0] < a[0]), dy = (b[1] > a[1]) - (b[1] < a[1]);
        for (auto p = a; p != b; p = {p[0] + dx, p[1] + dy}) {
            if (!visited.insert(p).second) return "loop revisits a vertex";
            for (std::int64_t cj = p[1] - 1; cj <= p[1]; ++cj)
                for (std::int64_t ci = p[0] - 1; ci <= p[0]; ++ci)
                    if (K.has(ci, cj)) return "loop touches a cell of K";
        }
    }
    for (const Cell& c : P) {
        int par = 0, w = ray_winding(L, c, &par);
        if (std::abs(w) != 1 || par != 1) return "winding around a P cell is " + std::to_string(w);
        if (winding(L, c) != w) return "library winding disagrees with ray casting";
    }
    for (const Cell& c : Q) {
        int par = 0, w = ray_winding(L, c, &par);
        if (w != 0 || par != 0) return "winding around a Q cell is " + std::to_string(w);
    }
    return {};
}

Outcome separating_curves() {
    Outcome o;
    Failures f;
    std::mt19937_64 rng(7);
    const std::int64_t size = 96;
    Level lv{7, 2};
    int accepted = 0, attempts = 0, rings = 0;
    while (accepted < 220 && attempts < 20000) {
        ++attempts;
        std::int64_t R = 2 * (1 + static_cast<std::int64_t>(rng() % 3));
        int kind = static_cast<int>(rng() % 4);
        std::vector<Cell> P, Q;
        if (kind == 0) {
            // Q is a ring around P.
            std::int64_t t = 1 + static_cast<std::int64_t>(rng() % 3);
            Q = ring(4, 4, size - 8, size - 8, t);
            P = walk(rng, 4 + t + R + 3, size - 4 - t - R - 3, 200 + static_cast<int>(rng() % 400));
        } else if (kind == 1) {
            // P is a ring, Q outside it.
            std::int64_t w = 20 + static_cast<std::int64_t>(rng() % 30), h = 20 + static_cast<std::int64_t>(rng() % 30);
            P = ring(2, 2, w, h, 1 + static_cast<std::int64_t>(rng() % 3));
            Q = walk(rng, 2, size - 2, 100 + static_cast<int>(rng() % 300));
        } else {
            P = walk(rng, 2, size - 2, 100 + static_cast<int>(rng() % 500));
            Q = walk(rng, 2, size - 2, 100 + static_cast<int>(rng() % 500));
        }
        if (!separable(P, Q, R + 1, size)) continue;
        std::vector<Cell> all = P;
        all.insert(all.end(), Q.begin(), Q.end());
        CellWindow win{-4, -4, size + 8, size + 8};
        GridCompactum K = from_cells(all, lv, &win);
        ComponentLabeling lab = label_components(K, 8);
        if (lab.count() != 2) continue;
        int pid = lab.at(P[0].i, P[0].j), qid = lab.at(Q[0].i, Q[0].j);
        ++accepted;
        rings += kind <= 1 ? 1 : 0;
        try {
            SeparatingLoop L = separating_curve(K, pid, qid, lv.coord(R));
            std::string err = check_loop(L, K, P, Q);
            if (!err.empty()) f.add("case " + std::to_string(accepted) + ": " + err);
        } catch (const Error& e) {
            f.add("case " + std::to_string(accepted) + ": " + e.what());
        }
    }
    o.pass = !f.any() && accepted >= 200;
    o.detail = std::to_string(accepted) + " compacta (" + std::to_string(rings) + " with rings) verified by ray casting";
    if (f.any()) o.detail += "; " + f.summary();
    return o;
}

// ---------------------------------------------------------------------------
// 4. cut_wire and crossing_path against exhaustive search

struct PathCase {
    CellWindow rect;
    std::vector<Cell> A, B;
};

std::string check_path_case(const PathCase& pc) {
    CellSet blocked = as_set(pc.A);
    for (const Cell& c : pc.B) blocked.insert({c.i, c.j});
    CellSet free, bottom;
    const CellWindow& r = pc.rect;
    for (std::int64_t j = r.j0; j < r.j0 + r.h; ++j)
        for (std::int64_t i = r.i0; i < r.i0 + r.w; ++i)
            if (!blocked.count({i, j})) {
                free.insert({i, j});
                if (j == r.j0) bottom.insert({i, j});
            }
    CellSet reach = flood(free, bottom, 4);
    bool exists = false;
    for (auto [i, j] : reach) exists = exists || j == r.j0 + r.h - 1;
    auto got = crossing_path(r, pc.A, pc.B);
    if (got.has_value() != exists) return exists ? "missed an existing path" : "returned a path where none exists";
    if (got) {
        const auto& p = *got;
        if (p.front().j != r.j0 || p.back().j != r.j0 + r.h - 1) return "path does not run bottom to top";
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (!free.count({p[k].i, p[k].j})) return "path leaves the free cells";
            if (k && std::abs(p[k].i - p[k - 1].i) + std::abs(p[k].j - p[k - 1].j) != 1) return "path is not 4-adjacent";
        }
    }
    // Duality with the blocking side.
    std::vector<Cell> X, left, right;
    for (auto [i, j] : blocked) {
        X.push_back({i, j});
        if (i == r.i0) left.push_back({i, j});
        if (i == r.i0 + r.w - 1) right.push_back({i, j});
    }
    bool spanning = false;
    if (!X.empty()) spanning = cut_wire(X, left, right).connected;
    if (spanning == got.has_value()) return "path existence disagrees with cut_wire";
    return {};
}

struct WireCase {
    std::vector<Cell> X, A, B;
};

std::string check_wire_case(const WireCase& wc) {
    CellSet X = as_set(wc.X), A = as_set(wc.A), B = as_set(wc.B);
    CutWireResult r = cut_wire(wc.X, wc.A, wc.B);
    // Oracle: components of X meeting A.
    CellSet fromA = flood(X, A, 8);
    bool joined = false;
    for (auto c : B) joined = joined || fromA.count(c);
    if (r.connected != joined) return joined ? "missed a connecting component" : "claimed a connecting component";
    if (joined) {
        CellSet comp = as_set(r.component);
        if (comp.empty()) return "empty component";
        if (flood(X, {*comp.begin()}, 8) != comp) return "returned set is not a component of X";
        bool hitA = false, hitB = false;
        for (auto c : comp) hitA = hitA || A.count(c), hitB = hitB || B.count(c);
        if (!hitA || !hitB) return "component misses A or B";
        return {};
    }
    CellSet x1 = as_set(r.x1), x2 = as_set(r.x2);
    if (x1 != fromA) return "X1 is not the union of components meeting A";
    if (x1.size() + x2.size() != X.size()) return "X1 and X2 do not partition X";
    for (auto c : x2)
        if (!X.count(c) || x1.count(c)) return "X2 is not the rest of X";
    for (auto c : B)
        if (!x2.count(c)) return "B is not inside X2";
    for (auto [i, j] : x1)
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di)
                if (x2.count({i + di, j + dj})) return "X1 and X2 touch";
    return {};
}

std::vector<PathCase> hand_path_cases() {
    std::vector<PathCase> v;
    CellWindow r8{0, 0, 8, 8};
    v.push_back({r8, {}, {}});
    v.push_back({{0, 0, 1, 1}, {}, {}});
    v.push_back({{3, -2, 5, 3}, {}, {}});
    // Horizontal wall split into a left part of A and a right part of B, gap at g.
    for (std::int64_t g = 1; g <= 6; ++g) {
        PathCase pc{r8, {}, {}};
        for (std::int64_t i = 0; i < g; ++i) pc.A.push_back({i, 4});
        for (std::int64_t i = g + 1; i < 8; ++i) pc.B.push_back({i, 4});
        v.push_back(pc);
    }
    // Same walls offset by one row: diagonal contact blocks 4-paths.
    for (std::int64_t g = 1; g <= 6; ++g) {
        PathCase pc{r8, {}, {}};
        for (std::int64_t i = 0; i < g; ++i) pc.A.push_back({i, 3});
        for (std::int64_t i = g; i < 8; ++i) pc.B.push_back({i, 4});
        v.push_back(pc);
    }
    // Staircase of A from the left edge meeting a B column at the right edge.
    for (std::int64_t s = 0; s < 4; ++s) {
        PathCase pc{r8, {}, {}};
        for (std::int64_t i = 0; i < 7; ++i) pc.A.push_back({i, std::min<std::int64_t>(7, i / (s + 1))});
        pc.B.push_back({7, std::min<std::int64_t>(7, 6 / (s + 1))});
        v.push_back(pc);
    }
    // Two interleaved combs leaving a zigzag corridor, with and without a plug.
    for (int plug = 0; plug < 2; ++plug)
        for (std::int64_t t = 1; t <= 3; ++t) {
            PathCase pc{r8, {}, {}};
            for (std::int64_t j = 1; j < 8; j += 2) {
                if ((j / 2) % 2 == 0)
                    for (std::int64_t i = 0; i < 8 - t; ++i) pc.A.push_back({i, j});
                else
                    for (std::int64_t i = t; i < 8; ++i) pc.B.push_back({i, j});
            }
            if (plug) pc.B.push_back({7, 2});
            v.push_back(pc);
        }
    // Checkerboards of A (B empty) on several rectangles.
    for (std::int64_t w : {2, 3, 5, 8})
        for (int phase = 0; phase < 2; ++phase) {
            PathCase pc{{0, 0, w, 6}, {}, {}};
            for (std::int64_t j = 0; j < 6; ++j)
                for (std::int64_t i = 0; i < w - 1; ++i)
                    if ((i + j + phase) % 2 == 0) pc.A.push_back({i, j});
            v.push_back(pc);
        }
    return v;  // 3 + 6 + 6 + 4 + 6 + 8 = 33
}

std::vector<WireCase> hand_wire_cases() {
    std::vector<WireCase> v;
    auto square = [](std::int64_t i0, std::int64_t j0, std::int64_t s) {
        std::vector<Cell> c;
        for (std::int64_t j = j0; j < j0 + s; ++j)
            for (std::int64_t i = i0; i < i0 + s; ++i) c.push_back({i, j});
        return c;
    };
    // Connected square, A and B at opposite corners.
    for (std::int64_t s = 1; s <= 4; ++s) {
        auto X = square(0, 0, s);
        v.push_back({X, {X.front()}, {X.back()}});
    }
    // Two squares at gap g: g = 0 touches, larger gaps separate.
    for (std::int64_t g = 0; g <= 3; ++g) {
        auto X = square(0, 0, 3), Y = square(3 + g, 0, 3);
        std::vector<Cell> both = X;
        both.insert(both.end(), Y.begin(), Y.end());
        v.push_back({both, {X.front()}, {Y.back()}});
    }
    // Diagonal chain of length k, optionally broken in the middle.
    for (std::int64_t k = 2; k <= 5; ++k)
        for (int broken = 0; broken < 2; ++broken) {
            std::vector<Cell> X;
            for (std::int64_t t = 0; t < k; ++t) X.push_back({t + (broken && t >= k / 2 ? 1 : 0), t});
            v.push_back({X, {X.front()}, {X.back()}});
        }
    // Ring with A inside the hole region's boundary and B outside the ring.
    for (std::int64_t t = 1; t <= 3; ++t) {
        auto R = ring(0, 0, 9, 9, t);
        std::vector<Cell> X = R;
        X.push_back({4, 4});  // isolated centre cell
        v.push_back({X, {{4, 4}}, {R.front()}});
    }
    // A or B empty.
    {
        auto X = square(0, 0, 2);
        v.push_back({X, {}, {X.back()}});
        v.push_back({X, {X.front()}, {}});
        v.push_back({X, {}, {}});
    }
    // A and B overlapping.
    {
        auto X = square(0, 0, 3);
        v.push_back({X, {X[4]}, {X[4]}});
    }
    // Many small islands with A on the first and B on the last.
    for (std::int64_t n = 2; n <= 5; ++n) {
        std::vector<Cell> X;
        for (std::int64_t k = 0; k < n; ++k) X.push_back({2 * k, 0});
        v.push_back({X, {X.front()}, {X.back()}});
    }
    return v;  // 4 + 4 + 8 + 3 + 3 + 1 + 4 = 27 ... padded below to 31
}

Outcome wire_and_path() {
    Outcome o;
    Failures f;
    auto pcs = hand_path_cases();
    auto wcs = hand_wire_cases();
    // Pad the wire cases with L- and T-shapes so the fixed suite has 64 entries.
    for (std::int64_t a = 1; (pcs.size() + wcs.size()) < 64; ++a) {
        std::vector<Cell> X;
        for (std::int64_t t = 0; t <= a; ++t) X.push_back({t, 0}), X.push_back({0, t + 1});
        wcs.push_back({X, {{a, 0}}, {{0, a + 1}}});
    }
    std::size_t fixed = pcs.size() + wcs.size();
    for (std::size_t k = 0; k < pcs.size(); ++k) {
        std::string e = check_path_case(pcs[k]);
        if (!e.empty()) f.add("path case " + std::to_string(k) + ": " + e);
    }
    for (std::size_t k = 0; k < wcs.size(); ++k) {
        std::string e = check_wire_case(wcs[k]);
        if (!e.empty()) f.add("wire case " + std::to_string(k) + ": " + e);
    }
    std::mt19937_64 rng(99);
    int with_path = 0;
    for (int k = 0; k < 500; ++k) {
        std::int64_t w = 1 + static_cast<std::int64_t>(rng() % 16), h = 1 + static_cast<std::int64_t>(rng() % 16);
        double density = 0.1 + 0.6 * static_cast<double>(rng() % 100) / 100.0;
        PathCase pc{{static_cast<std::int64_t>(rng() % 5) - 2, static_cast<std::int64_t>(rng() % 5) - 2, w, h}, {}, {}};
        WireCase wc;
        for (std::int64_t j = pc.rect.j0; j < pc.rect.j0 + h; ++j)
            for (std::int64_t i = pc.rect.i0; i < pc.rect.i0 + w; ++i) {
                if (static_cast<double>(rng() % 1000) / 1000.0 >= density) continue;
                bool toA = rng() % 2;
                if (toA && i == pc.rect.i0 + w - 1) toA = false;
                if (!toA && i == pc.rect.i0) toA = true;
                if (toA && i == pc.rect.i0 + w - 1) continue;
                (toA ? pc.A : pc.B).push_back({i, j});
                wc.X.push_back({i, j});
                if (rng() % 4 == 0) wc.A.push_back({i, j});
                if (rng() % 4 == 0) wc.B.push_back({i, j});
            }
        std::string e = check_path_case(pc);
        if (!e.empty()) f.add("random path case " + std::to_string(k) + ": " + e);
        if (crossing_path(pc.rect, pc.A, pc.B)) ++with_path;
        if (!wc.X.empty()) {
            e = check_wire_case(wc);
            if (!e.empty()) f.add("random wire case " + std::to_string(k) + ": " + e);
        }
    }
    o.pass = !f.any() && fixed == 64;
    o.detail = std::to_string(fixed) + " fixed cases + 500 random (" + std::to_string(with_path) + " with a path)";
    if (f.any()) o.detail += "; " + f.summary();
    return o;
}

// ---------------------------------------------------------------------------
// 5. Comb decomposition

Outcome comb_decomposition() {
    Outcome o;
    Failures f;
    const int n = 5;
    Level lv{n, 3};
    auto spec = cantor_comb();
    GridCompactum K = rasterize(spec, lv);
    Decomposition D = close_equivalence(K, schoenflies_relation(K, RelationParams{}));
    std::int64_t N = lv.cells_per_unit();
    double cs = lv.cell_size();
    // (a) vertical bands
    for (const ClassInfo& c : D.classes)
        if (c.bbox.w > 3) f.add("class " + std::to_string(c.id) + " spans " + std::to_string(c.bbox.w) + " columns");
    // (b) teeth; the top row is the bar
    auto cols = cantor_columns(n);
    std::int64_t top = N - 1;
    for (std::int64_t i : cols) {
        std::int64_t id = D.class_of({i, 0});
        for (std::int64_t j = 0; j < top; ++j)
            if (D.class_of({i, j}) != id) {
                f.add("tooth column " + std::to_string(i) + " split at row " + std::to_string(j));
                break;
            }
        if (D.info(id).diameter < 1 - 4 * cs) f.add("tooth column " + std::to_string(i) + " class too short");
    }
    // (c) bar cells far from the Cantor set. Endpoints of level-n intervals lie
    // in the Cantor set, so the gap to the nearest tooth column is exact.
    std::int64_t far = 0;
    for (std::int64_t i = 0; i < N; ++i) {
        auto it = std::lower_bound(cols.begin(), cols.end(), i);
        if (it != cols.end() && *it == i) continue;
        std::int64_t right = it == cols.end() ? N * 10 : *it - (i + 1);
        std::int64_t left = it == cols.begin() ? N * 10 : i - (*(it - 1) + 1);
        if (std::min(left, right) <= 4) continue;
        ++far;
        if (D.info(D.class_of({i, top})).size != 1) f.add("bar cell " + std::to_string(i) + " is not a singleton");
    }
    o.pass = !f.any();
    o.detail = std::to_string(D.classes.size()) + " classes, " + std::to_string(cols.size()) + " teeth checked, " +
               std::to_string(far) + " far bar cells";
    if (f.any()) o.detail += "; " + f.summary();
    return o;
}

// ---------------------------------------------------------------------------
// 6. Spiral and disk

Outcome spiral_disk_truth() {
    Outcome o;
    Failures f;
    Level lv{7, 2};
    double cs = lv.cell_size();
    GridCompactum K = rasterize(spiral_disk(), lv);
    Decomposition D = close_equivalence(K, schoenflies_relation(K, RelationParams{}));
    std::vector<std::int64_t> big;
    for (const ClassInfo& c : D.classes)
        if (c.diameter >= 2 - 4 * cs) big.push_back(c.id);
    if (big.size() != 1) f.add(std::to_string(big.size()) + " classes of diameter >= 2 - 4 cs");
    std::int64_t rim = 0, rim_in = 0, far = 0;
    for (std::size_t k = 0; k < D.cells.size(); ++k) {
        const Cell& c = D.cells[k];
        double x = (static_cast<double>(c.i) + 0.5) * cs, y = (static_cast<double>(c.j) + 0.5) * cs;
        double r = std::hypot(x, y);
        if (std::fabs(r - 1) <= cs) {
            ++rim;
            if (big.size() == 1 && D.cls[k] == big[0]) ++rim_in;
        }
        if (r - 1 > 4 * cs) {
            ++far;
            if (D.info(D.cls[k]).size != 1) f.add("cell (" + std::to_string(c.i) + "," + std::to_string(c.j) + ") at r=" + fmt(r) + " is not a singleton");
        }
    }
    double share = rim ? static_cast<double>(rim_in) / static_cast<double>(rim) : 0;
    if (share < 0.9) f.add("circle class holds " + fmt(100 * share) + "% of rim cells");
    o.pass = !f.any();
    o.detail = "circle class diameter " + (big.size() == 1 ? fmt(D.info(big[0]).diameter) : std::string("n/a")) +
               ", rim share " + fmt(100 * share) + "% of " + std::to_string(rim) + ", " + std::to_string(far) +
               " far cells";
    if (f.any()) o.detail += "; " + f.summary();
    return o;
}

// ---------------------------------------------------------------------------
// 7. Topologist's sine curve

Outcome sine_truth() {
    Outcome o;
    Failures f;
    std::string detail;
    for (int n : {6, 7}) {
        Level lv{n, 2};
        double cs = lv.cell_size();
        GridCompactum K = rasterize(topologist_sine(), lv);
        Decomposition D = close_equivalence(K, schoenflies_relation(K, RelationParams{}));
        std::int64_t N = lv.cells_per_unit();
        std::int64_t bar = D.class_of({0, -N});
        for (std::int64_t j = -N; j < N; ++j)
            if (D.class_of({0, j}) != bar) {
                f.add("level " + std::to_string(n) + ": bar split at row " + std::to_string(j));
                break;
            }
        if (D.info(bar).diameter < 2 - 4 * cs) f.add("level " + std::to_string(n) + ": bar class too short");
        auto members = D.members();
        std::int64_t checked = 0;
        for (std::size_t k = 0; k < members.size(); ++k) {
            double cx = 0;
            for (const Cell& c : members[k]) cx += (static_cast<double>(c.i) + 0.5) * cs;
            cx /= static_cast<double>(members[k].size());
            if (cx > 4 * cs) {
                ++checked;
                if (members[k].size() != 1)
                    f.add("level " + std::to_string(n) + ": class centred at x=" + fmt(cx) + " has " +
                          std::to_string(members[k].size()) + " cells");
            }
        }
        ReducedGraph R = reduce_quotient(quotient_graph(K, D));
        if (!R.is_path) f.add("level " + std::to_string(n) + ": reduced quotient is not a path");
        detail += (detail.empty() ? "" : "; ") + std::string("level ") + std::to_string(n) + ": bar diameter " +
                  fmt(D.info(bar).diameter) + ", " + std::to_string(checked) + " classes right of 4cs, reduced " +
                  std::to_string(R.nodes) + " nodes / " + std::to_string(R.edges) + " edges";
    }
    o.pass = !f.any();
    o.detail = detail;
    if (f.any()) o.detail += "; " + f.summary();
    return o;
}

// ---------------------------------------------------------------------------
// 8. Locally connected negatives

Outcome lc_negatives() {
    Outcome o;
    Failures f;
    std::int64_t strips_checked = 0;
    struct Run {
        SpecPtr spec;
        int lo, hi;
    };
    for (const Run& run : {Run{unit_square(), 2, 5}, Run{sierpinski_carpet(), 3, 5}}) {
        for (int n = 1; n <= run.hi; ++n) {
            Level lv{n, run.spec->base};
            GridCompactum K = rasterize(run.spec, lv);
            Decomposition D = close_equivalence(K, schoenflies_relation(K, RelationParams{}));
            if (D.classes.size() != D.cells.size())
                f.add(run.spec->name + " level " + std::to_string(n) + ": " +
                      std::to_string(D.cells.size() - D.classes.size()) + " merges");
        }
        auto levels = level_range(run.lo, run.hi);
        auto strips = auto_strips(*run.spec, {run.lo, run.spec->base});
        ScanReport r = schoenflies_scan(run.spec, strips, levels);
        for (const auto& s : r.strips) {
            ++strips_checked;
            if (s.divergent) f.add(run.spec->name + ": strip " + to_string(s.strip.axis) + ":" + fmt(s.strip.c1) + ":" +
                                   fmt(s.strip.c2) + " diverges");
        }
        if (r.verdict != "consistent with locally connected") f.add(run.spec->name + ": verdict " + r.verdict);
    }
    // Holes of the carpet: generation g contributes 8^(g-1) squares of side 3^-g.
    std::string holes;
    for (int n = 1; n <= 5; ++n) {
        Level lv{n, 3};
        double cs = lv.cell_size();
        GridCompactum K = rasterize(sierpinski_carpet(), lv);
        ComponentLabeling L = complement_components(K, K.window.expanded(1, 1));
        std::map<int, std::int64_t> per_gen;
        for (const auto& m : L.meta) {
            if (m.unbounded) continue;
            int gen = 0;
            for (int g = 1; g <= n; ++g)
                if (std::fabs(m.diameter - std::pow(3.0, -g) * std::sqrt(2.0)) <= cs) gen = g;
            if (!gen) f.add("level " + std::to_string(n) + ": hole of diameter " + fmt(m.diameter) + " fits no generation");
            ++per_gen[gen];
        }
        for (int g = 1; g <= n; ++g)
            if (per_gen[g] != ipow(8, g - 1))
                f.add("level " + std::to_string(n) + ": generation " + std::to_string(g) + " has " +
                      std::to_string(per_gen[g]) + " holes");
        if (n == 5)
            for (int g = 1; g <= n; ++g) holes += (g > 1 ? "," : "") + std::to_string(per_gen[g]);
    }
    o.pass = !f.any();
    o.detail = "square and carpet all-singleton, " + std::to_string(strips_checked) +
               " strips non-divergent, carpet holes per generation at level 5: " + holes;
    if (f.any()) o.detail += "; " + f.summary();
    return o;
}

// ---------------------------------------------------------------------------
// 9. Structural invariants

Decomposition random_partition(std::mt19937_64& rng, const std::vector<Cell>& cells, const Level& lv, int classes) {
    std::vector<std::int64_t> lab(cells.size());
    for (auto& l : lab) l = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(classes));
    return make_decomposition(lv, cells, lab);
}

// Coarsens d by merging random pairs of its classes.
Decomposition coarser(std::mt19937_64& rng, const Decomposition& d) {
    std::map<std::int64_t, std::int64_t> relabel;
    for (const auto& c : d.classes) relabel[c.id] = c.id;
    auto ids = d.classes;
    for (std::size_t k = 0; k + 1 < ids.size(); k += 2)
        if (rng() % 2) relabel[ids[k + 1].id] = ids[k].id;
    std::vector<std::int64_t> lab;
    for (auto l : d.cls) lab.push_back(relabel[l]);
    return make_decomposition(d.level, d.cells, lab);
}

// Generator at the level used for the structural checks.
std::vector<std::pair<SpecPtr, Level>> builtin_cases(int base2_level, int base3_level) {
    std::vector<std::pair<SpecPtr, Level>> out;
    for (const std::string& name : generator_names()) {
        GeneratorParams gp{name, {}, 42};
        SpecPtr s = make_spec(gp);
        out.push_back({s, {s->base == 3 ? base3_level : base2_level, s->base}});
    }
    return out;
}

Outcome structural(int jobs) {
    Outcome o;
    Failures f;
    // Partition, idempotence and the refinement order on random partitions.
    std::mt19937_64 rng(5);
    Level lv{4, 2};
    int partition_cases = 0;
    for (int t = 0; t < 200; ++t) {
        std::vector<Cell> cells;
        for (std::int64_t j = 0; j < 16; ++j)
            for (std::int64_t i = 0; i < 16; ++i)
                if (rng() % 3) cells.push_back({i, j});
        if (cells.empty()) continue;
        ++partition_cases;
        GridCompactum K = from_cells(cells, lv);
        Decomposition a = random_partition(rng, cells, lv, 1 + static_cast<int>(rng() % 20));
        Decomposition b = coarser(rng, a), c = coarser(rng, b);
        Decomposition x = random_partition(rng, cells, lv, 1 + static_cast<int>(rng() % 20));
        Decomposition s = singletons(K);
        std::vector<std::int64_t> seen(a.cells.size(), 0);
        for (const auto& m : a.members())
            for (const Cell& cell : m) ++seen[static_cast<std::size_t>(a.index_of(cell))];
        if (std::any_of(seen.begin(), seen.end(), [](std::int64_t v) { return v != 1; })) f.add("members is not a partition");
        if (!same_partition(close_equivalence(K, seed_from(a)), a)) f.add("closure is not idempotent");
        if (!refines(a, a)) f.add("refines is not reflexive");
        if (!refines(a, b) || !refines(b, c) || !refines(a, c)) f.add("refines is not transitive");
        if (refines(a, x) && refines(x, a) && !same_partition(a, x)) f.add("refines is not antisymmetric");
        if (refines(b, a) && !same_partition(a, b)) f.add("refines is not antisymmetric");
        if (!refines(s, a) || !same_partition(common_refinement(a, s), s)) f.add("singletons are not finest");
        if (!same_partition(common_refinement(a, a), a)) f.add("common refinement of D with itself");
        Decomposition m = common_refinement(a, x);
        if (!refines(m, a) || !refines(m, x)) f.add("common refinement does not refine both");
    }
    // Monotonicity and equivariance on every generator.
    auto cases = builtin_cases(5, 4);
    RelationParams p;
    p.jobs = jobs;
    std::int64_t equivariant = 0, nontrivial = 0;
    for (auto& [spec, level] : cases) {
        GridCompactum K = rasterize(spec, level);
        Decomposition D = close_equivalence(K, schoenflies_relation(K, p));
        MonotoneReport mr = monotone_check(K, D);
        if (!mr.all_connected) f.add(spec->name + ": " + std::to_string(mr.disconnected.size()) + " disconnected classes");
        if (!mr.components_match)
            f.add(spec->name + ": quotient has " + std::to_string(mr.quotient_components) + " components, K has " +
                  std::to_string(mr.compactum_components));
        for (const auto& c : D.classes) nontrivial += c.size > 1 ? 1 : 0;
        for (Isometry g : all_isometries) {
            Decomposition lhs = decompose(transform_spec(spec, g), level, p);
            Decomposition rhs = transform(D, g);
            if (lhs.cells != rhs.cells)
                f.add(spec->name + " " + to_string(g) + ": rasters differ");
            else if (!same_partition(lhs, rhs))
                f.add(spec->name + " " + to_string(g) + ": partitions differ");
            else
                ++equivariant;
        }
    }
    o.pass = !f.any();
    o.detail = std::to_string(partition_cases) + " random partition cases, " + std::to_string(cases.size()) +
               " generators monotone, " + std::to_string(equivariant) + "/" + std::to_string(cases.size() * 8) +
               " isometry checks equal (" + std::to_string(nontrivial) + " nontrivial classes)";
    if (f.any()) o.detail += "; " + f.summary();
    return o;
}

// ---------------------------------------------------------------------------
// 10. Reproducibility

std::string run_cli(const std::vector<std::string>& args, int* code) {
    std::vector<const char*> argv{"pcx"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    *code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return out.str();
}

Outcome reproducibility() {
    Outcome o;
    Failures f;
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("pcx_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    // Inputs for the commands that read files.
    {
        std::ofstream pbm(dir / "glyph.pbm");
        pbm << "P1\n8 8\n";
        const char* rows[] = {"11111111", "10000001", "10111101", "10100101",
                              "10100101", "10111101", "10000001", "11111111"};
        for (const char* r : rows) {
            for (int k = 0; k < 8; ++k) pbm << (k ? " " : "") << r[k];
            pbm << "\n";
        }
    }
    int code = 0;
    std::string fibers = run_cli({"decompose", "--gen", "cantor_comb", "--level", "4", "--fibers", "v"}, &code);
    std::ofstream(dir / "fibers.json") << fibers;
    std::string dec = run_cli({"decompose", "--gen", "cantor_comb", "--level", "4"}, &code);
    std::ofstream(dir / "dec.json") << dec;
    std::string fa = (dir / "fibers.json").string(), fb = (dir / "dec.json").string(),
                glyph = (dir / "glyph.pbm").string();

    std::vector<std::vector<std::string>> commands = {
        {"gen", "--gen", "cantor_comb", "--level", "3"},
        {"gen", "--gen", "spiral_disk", "--level", "6", "--binary"},
        {"gen", "--gen", "random_blobs", "--level", "6", "--seed", "42"},
        {"components", "--gen", "topologist_sine", "--level", "6"},
        {"components", "--gen", "sierpinski_carpet", "--level", "3", "--complement"},
        {"components", "--input", glyph, "--connectivity", "4"},
        {"scan", "--gen", "cantor_comb", "--levels", "2..6", "--strip", "h:0.25:0.75"},
        {"scan", "--gen", "sierpinski_carpet", "--levels", "2..4", "--strip", "auto"},
        {"scan", "--gen", "random_blobs", "--seed", "3", "--levels", "3..6"},
        {"decompose", "--gen", "cantor_comb", "--level", "4"},
        {"decompose", "--gen", "spiral_disk", "--level", "6", "--format", "svg"},
        {"decompose", "--gen", "topologist_sine", "--level", "6", "--format", "text"},
        {"decompose", "--gen", "bars", "--level", "5", "--family", "both"},
        {"decompose", "--input", glyph},
        {"quotient", "--gen", "cantor_comb", "--level", "4"},
        {"quotient", "--gen", "topologist_sine", "--level", "6"},
        {"compare", "--a", fa, "--b", fb, "--tolerance", "1"},
        {"render", "--gen", "cantor_comb", "--level", "3"},
        {"render", "--gen", "cantor_comb", "--level", "4", "--decomposition", fb},
        {"render", "--gen", "spiral_disk", "--level", "5", "--decompose"},
    };
    std::int64_t bytes = 0;
    for (const auto& cmd : commands) {
        std::string label;
        for (const auto& a : cmd) label += (label.empty() ? "" : " ") + a;
        int c1 = 0, c2 = 0, c3 = 0;
        std::string first = run_cli(cmd, &c1);
        std::string again = run_cli(cmd, &c2);
        std::vector<std::string> parallel = cmd;
        if (cmd[0] != "compare") parallel.insert(parallel.end(), {"--jobs", "8"});
        std::string wide = run_cli(parallel, &c3);
        if (c1 != 0 || c2 != 0 || c3 != 0) f.add(label + ": exit code " + std::to_string(c1));
        else if (first.empty()) f.add(label + ": empty output");
        else if (first != again) f.add(label + ": re-run differs");
        else if (first != wide) f.add(label + ": jobs=8 differs");
        bytes += static_cast<std::int64_t>(first.size());
    }
    fs::remove_all(dir);
    o.pass = !f.any();
    o.detail = std::to_string(commands.size()) + " commands x 3 runs identical (" + std::to_string(bytes) + " bytes each)";
    if (f.any()) o.detail += "; " + f.summary();
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        std::string name;
        double limit;  // seconds, 0 when unbounded
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all = {
        {1, "comb divergence law", 5, comb_divergence},
        {2, "duality bound", 60, duality},
        {3, "separating curves", 60, separating_curves},
        {4, "cut_wire / crossing_path exactness", 0, wire_and_path},
        {5, "comb decomposition", 30, comb_decomposition},
        {6, "spiral and disk", 60, spiral_disk_truth},
        {7, "topologist's sine", 0, sine_truth},
        {8, "locally connected negatives", 0, lc_negatives},
        {9, "structural invariants", 0, [] { return structural(8); }},
        {10, "reproducibility", 0, reproducibility},
    };
    int failed = 0;
    for (const Criterion& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double t = seconds_since(t0);
        if (c.limit > 0 && t >= c.limit) {
            o.pass = false;
            o.detail += "; runtime " + fmt(t) + " s exceeds " + fmt(c.limit) + " s";
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s [%2d] %-36s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), t, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed ? 1 : 0;
}
