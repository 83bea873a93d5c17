// SPDX-FileCopyrightText: 2026 pcx contributors
// SPDX-License-Identifier: Apache-2.0
//
// Strip and annulus crossing analysis, scans across levels, and the
// separation constructions: cut_wire, crossing_path and brick-wall loops.

#ifndef PCX_SCHOENFLIES_HPP
#define PCX_SCHOENFLIES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "pcx/generators.hpp"
#include "pcx/grid.hpp"

namespace pcx {

enum class Axis { horizontal, vertical };
enum class Mode { intersection, difference };

inline const char* to_string(Axis a) { return a == Axis::horizontal ? "h" : "v"; }
inline const char* to_string(Mode m) { return m == Mode::intersection ? "intersection" : "difference"; }

// Region between y = c1 and y = c2 (horizontal) or x = c1 and x = c2 (vertical).
struct Strip {
    Axis axis = Axis::horizontal;
    double c1 = 0, c2 = 0;
    std::optional<Box> window;  // lateral clip; defaults to K's window plus a margin
};

// Region between two nested rectangles.
struct RectAnnulus {
    Box outer, inner;
};

using Region = std::variant<Strip, RectAnnulus>;

// A region resolved to cells at one level.
//
// Strip: crossing coordinate t in [lo, hi), lateral s in [s0, s1). For a
// horizontal strip t = j and s = i. The first boundary is row lo, the second
// row hi - 1.
// Annulus: cells of `outer` not in `inner`; the first boundary is the ring
// around `inner`, the second the outermost ring of `outer`.
struct RegionCells {
    bool annulus = false;
    Axis axis = Axis::horizontal;
    std::int64_t lo = 0, hi = 0, s0 = 0, s1 = 0;
    CellWindow outer, inner;

    CellWindow rect() const {
        if (annulus) return outer;
        if (axis == Axis::horizontal) return {s0, lo, s1 - s0, hi - lo};
        return {lo, s0, hi - lo, s1 - s0};
    }
    std::int64_t thickness() const {
        if (!annulus) return hi - lo;
        return std::min({inner.i0 - outer.i0, inner.j0 - outer.j0,
                         outer.i0 + outer.w - inner.i0 - inner.w,
                         outer.j0 + outer.h - inner.j0 - inner.h});
    }
    bool inside(std::int64_t i, std::int64_t j) const {
        if (!rect().contains(i, j)) return false;
        return !annulus || !inner.contains(i, j);
    }
    // Bit 1: first boundary, bit 2: second boundary. Assumes inside(i, j).
    int side(std::int64_t i, std::int64_t j) const {
        if (!annulus) {
            std::int64_t t = axis == Axis::horizontal ? j : i;
            return (t == lo ? 1 : 0) | (t == hi - 1 ? 2 : 0);
        }
        int s = 0;
        if (i >= inner.i0 - 1 && i <= inner.i0 + inner.w && j >= inner.j0 - 1 && j <= inner.j0 + inner.h)
            s |= 1;
        if (i == outer.i0 || j == outer.j0 || i == outer.i0 + outer.w - 1 || j == outer.j0 + outer.h - 1)
            s |= 2;
        return s;
    }
    // Which boundary orders the crossing components, and the order key there.
    int key_side() const { return annulus ? 2 : 1; }
    std::int64_t key(std::int64_t i, std::int64_t j) const {
        if (!annulus) return axis == Axis::horizontal ? i : j;
        // Counter-clockwise perimeter position from the lower-left corner.
        std::int64_t w = outer.w - 1, h = outer.h - 1;
        std::int64_t x = i - outer.i0, y = j - outer.j0;
        if (y == 0) return x;
        if (x == w) return w + y;
        if (y == h) return w + h + (w - x);
        return 2 * w + h + (h - y);
    }
    RegionCells scaled(std::int64_t f) const {
        RegionCells r = *this;
        r.lo *= f, r.hi *= f, r.s0 *= f, r.s1 *= f;
        r.outer = outer.scaled(f);
        r.inner = inner.scaled(f);
        return r;
    }
    std::string describe() const {
        if (!annulus)
            return std::string(to_string(axis)) + ":" + std::to_string(lo) + ":" + std::to_string(hi);
        return "annulus:" + std::to_string(outer.i0) + "," + std::to_string(outer.j0) + "," +
               std::to_string(outer.w) + "x" + std::to_string(outer.h) + "/" +
               std::to_string(inner.i0) + "," + std::to_string(inner.j0) + "," +
               std::to_string(inner.w) + "x" + std::to_string(inner.h);
    }
};

// Crossing components of (region ∩ set) labeled over `sub`, a sub-rectangle of
// the region rect. `order` lists crossing labels by their order key.
struct LocalCrossing {
    CellWindow sub;
    std::vector<std::int32_t> label;
    std::vector<std::int32_t> order;
    int labels = 0;

    std::int32_t at(std::int64_t i, std::int64_t j) const {
        return label[static_cast<std::size_t>((j - sub.j0) * sub.w + (i - sub.i0))];
    }
};

template <class InSet>
LocalCrossing find_crossings(const RegionCells& R, const CellWindow& sub, InSet&& in_set,
                             int connectivity) {
    LocalCrossing out;
    out.sub = sub;
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(sub.size()), 0);
    for (std::int64_t y = 0; y < sub.h; ++y)
        for (std::int64_t x = 0; x < sub.w; ++x) {
            std::int64_t i = sub.i0 + x, j = sub.j0 + y;
            if (R.inside(i, j) && in_set(i, j)) mask[static_cast<std::size_t>(y * sub.w + x)] = 1;
        }
    out.label.resize(mask.size());
    out.labels = label_mask(sub.w, sub.h, mask.data(), connectivity, out.label.data());
    std::vector<int> touch(static_cast<std::size_t>(out.labels), 0);
    const std::int64_t none = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> key(static_cast<std::size_t>(out.labels), none);
    int ks = R.key_side();
    for (std::int64_t y = 0; y < sub.h; ++y)
        for (std::int64_t x = 0; x < sub.w; ++x) {
            std::int32_t l = out.label[static_cast<std::size_t>(y * sub.w + x)];
            if (l < 0) continue;
            int s = R.side(sub.i0 + x, sub.j0 + y);
            if (!s) continue;
            touch[static_cast<std::size_t>(l)] |= s;
            if (s & ks) key[static_cast<std::size_t>(l)] = std::min(key[static_cast<std::size_t>(l)], R.key(sub.i0 + x, sub.j0 + y));
        }
    for (int l = 0; l < out.labels; ++l)
        if (touch[static_cast<std::size_t>(l)] == 3) out.order.push_back(l);
    std::stable_sort(out.order.begin(), out.order.end(), [&](std::int32_t a, std::int32_t b) {
        return key[static_cast<std::size_t>(a)] < key[static_cast<std::size_t>(b)];
    });
    return out;
}

inline std::int64_t snap_line(double c, const Level& lv) {
    return static_cast<std::int64_t>(std::nearbyint(c * static_cast<double>(lv.cells_per_unit())));
}

// Resolves a scene-unit region at K's level. Strip lines snap to the nearest
// cell boundary; the lateral window defaults to K's window plus `margin` cells.
inline RegionCells resolve(const GridCompactum& K, const Region& region, std::int64_t margin = 1) {
    RegionCells R;
    if (const Strip* s = std::get_if<Strip>(&region)) {
        if (!(s->c1 < s->c2)) throw Error("strip needs c1 < c2");
        R.axis = s->axis;
        R.lo = snap_line(s->c1, K.level);
        R.hi = snap_line(s->c2, K.level);
        if (R.hi - R.lo < 1) throw Error("misaligned region: strip collapses at this level");
        CellWindow kw = K.window;
        CellWindow lw = s->window ? snap_window(*s->window, K.level) : kw.expanded(margin, margin);
        bool horizontal = s->axis == Axis::horizontal;
        R.s0 = horizontal ? lw.i0 : lw.j0;
        R.s1 = horizontal ? lw.i0 + lw.w : lw.j0 + lw.h;
        if (R.s1 <= R.s0) throw Error("window violation: empty lateral window");
        if (s->window) {
            // K's cells inside the strip must lie strictly within the lateral window.
            for (std::int64_t y = 0; y < kw.h; ++y)
                for (std::int64_t x = 0; x < kw.w; ++x) {
                    if (!K.bits[static_cast<std::size_t>(y * kw.w + x)]) continue;
                    std::int64_t i = kw.i0 + x, j = kw.j0 + y;
                    std::int64_t t = horizontal ? j : i, l = horizontal ? i : j;
                    if (t >= R.lo && t < R.hi && (l <= R.s0 || l >= R.s1 - 1))
                        throw Error("window violation: compactum reaches the strip's lateral window");
                }
        }
        return R;
    }
    const RectAnnulus& a = std::get<RectAnnulus>(region);
    R.annulus = true;
    auto snap_box = [&](const Box& b) {
        std::int64_t i0 = snap_line(b.x0, K.level), i1 = snap_line(b.x1, K.level);
        std::int64_t j0 = snap_line(b.y0, K.level), j1 = snap_line(b.y1, K.level);
        return CellWindow{i0, j0, i1 - i0, j1 - j0};
    };
    R.outer = snap_box(a.outer);
    R.inner = snap_box(a.inner);
    if (R.inner.w < 1 || R.inner.h < 1 || R.inner.i0 - R.outer.i0 < 1 || R.inner.j0 - R.outer.j0 < 1 ||
        R.outer.i0 + R.outer.w - R.inner.i0 - R.inner.w < 1 ||
        R.outer.j0 + R.outer.h - R.inner.j0 - R.inner.h < 1)
        throw Error("misaligned region: annulus nesting must be strict by one cell");
    return R;
}

struct CrossingReport {
    std::string region;  // snapped description
    Mode mode = Mode::intersection;
    Level level;
    std::vector<std::vector<Cell>> components;  // crossing components in boundary order
    std::vector<std::vector<int>> clusters;     // indices into components
    std::vector<std::vector<Cell>> limits;      // approximate limit per cluster

    std::size_t count() const { return components.size(); }
};

inline std::vector<std::vector<Cell>> collect(const LocalCrossing& lc) {
    std::vector<int> slot(static_cast<std::size_t>(lc.labels), -1);
    for (std::size_t k = 0; k < lc.order.size(); ++k) slot[static_cast<std::size_t>(lc.order[k])] = static_cast<int>(k);
    std::vector<std::vector<Cell>> out(lc.order.size());
    for (std::int64_t y = 0; y < lc.sub.h; ++y)
        for (std::int64_t x = 0; x < lc.sub.w; ++x) {
            std::int32_t l = lc.label[static_cast<std::size_t>(y * lc.sub.w + x)];
            if (l >= 0 && slot[static_cast<std::size_t>(l)] >= 0)
                out[static_cast<std::size_t>(slot[static_cast<std::size_t>(l)])].push_back({lc.sub.i0 + x, lc.sub.j0 + y});
        }
    return out;
}

inline std::int64_t count_crossings(const GridCompactum& K, const RegionCells& R, Mode mode) {
    if (mode == Mode::intersection)
        return static_cast<std::int64_t>(
            find_crossings(R, R.rect(), [&](std::int64_t i, std::int64_t j) { return K.has(i, j); }, 8).order.size());
    return static_cast<std::int64_t>(
        find_crossings(R, R.rect(), [&](std::int64_t i, std::int64_t j) { return !K.has(i, j); }, 4).order.size());
}

// Single-linkage clusters of crossing components at Hausdorff cut `delta`, and
// per cluster the region cells within delta of at least min(size, n_min) members.
inline void cluster_crossings(CrossingReport& rep, const RegionCells& R, double delta, int n_min) {
    std::size_t m = rep.components.size();
    rep.clusters.clear();
    rep.limits.clear();
    if (m == 0) return;
    CellWindow rect = R.rect();
    double cut = delta / rep.level.cell_size();
    double cut2 = cut * cut + 1e-9;
    std::vector<std::vector<double>> field(m);
    for (std::size_t a = 0; a < m; ++a) {
        std::vector<std::uint8_t> mask(static_cast<std::size_t>(rect.size()), 0);
        for (const Cell& c : rep.components[a])
            mask[static_cast<std::size_t>((c.j - rect.j0) * rect.w + c.i - rect.i0)] = 1;
        field[a] = squared_distance_field(rect.w, rect.h, mask);
    }
    auto directed = [&](std::size_t a, std::size_t b) {
        double best = 0;
        for (const Cell& c : rep.components[a])
            best = std::max(best, field[b][static_cast<std::size_t>((c.j - rect.j0) * rect.w + c.i - rect.i0)]);
        return best;
    };
    std::vector<std::size_t> parent(m);
    for (std::size_t a = 0; a < m; ++a) parent[a] = a;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            if (std::max(directed(a, b), directed(b, a)) <= cut2) {
                std::size_t ra = find(a), rb = find(b);
                if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
            }
    std::map<std::size_t, std::vector<int>> groups;
    for (std::size_t a = 0; a < m; ++a) groups[find(a)].push_back(static_cast<int>(a));
    for (auto& [root, members] : groups) {
        rep.clusters.push_back(members);
        std::size_t need = std::min<std::size_t>(members.size(), static_cast<std::size_t>(n_min));
        std::vector<Cell> lim;
        for (std::int64_t y = 0; y < rect.h; ++y)
            for (std::int64_t x = 0; x < rect.w; ++x) {
                if (!R.inside(rect.i0 + x, rect.j0 + y)) continue;
                std::size_t near = 0;
                for (int k : members)
                    if (field[static_cast<std::size_t>(k)][static_cast<std::size_t>(y * rect.w + x)] <= cut2) ++near;
                if (near >= need) lim.push_back({rect.i0 + x, rect.j0 + y});
            }
        rep.limits.push_back(std::move(lim));
    }
}

inline CrossingReport crossing_components(const GridCompactum& K, const Region& region, Mode mode,
                                          double delta, int n_min = 4, bool with_clusters = true,
                                          std::int64_t margin = 1) {
    if (delta < K.cell_size() * (1 - 1e-9)) throw Error("delta must be at least one cell");
    RegionCells R = resolve(K, region, margin);
    CrossingReport rep;
    rep.region = R.describe();
    rep.mode = mode;
    rep.level = K.level;
    LocalCrossing lc =
        mode == Mode::intersection
            ? find_crossings(R, R.rect(), [&](std::int64_t i, std::int64_t j) { return K.has(i, j); }, 8)
            : find_crossings(R, R.rect(), [&](std::int64_t i, std::int64_t j) { return !K.has(i, j); }, 4);
    rep.components = collect(lc);
    if (with_clusters) cluster_crossings(rep, R, delta, n_min);
    return rep;
}

// ---------------------------------------------------------------------------
// Scans

struct StripScan {
    Strip strip;
    std::vector<int> levels;
    std::vector<std::int64_t> m_int, m_diff;
    std::vector<std::pair<std::int64_t, std::int64_t>> lines;  // snapped per level
    bool divergent = false;
};

struct ComplementLevel {
    int level = 0;
    std::vector<double> diameters;  // bounded components, descending
};

struct ScanReport {
    std::string spec;
    int base = 2;
    std::vector<int> levels;
    int divergence_window = 3;
    std::vector<StripScan> strips;
    std::string verdict;
    std::vector<ComplementLevel> complement;
    int complement_rank = 10;
    bool complement_flag = false;
};

// Strictly increasing over the last k entries.
inline bool diverges(const std::vector<std::int64_t>& counts, int k) {
    if (k < 2 || counts.size() < static_cast<std::size_t>(k)) return false;
    for (std::size_t a = counts.size() - static_cast<std::size_t>(k) + 1; a < counts.size(); ++a)
        if (counts[a] <= counts[a - 1]) return false;
    return true;
}

struct ScanOptions {
    int divergence_window = 3;
    std::int64_t margin = 1;
    int jobs = 1;
};

inline std::vector<int> level_range(int lo, int hi) {
    if (lo < 0 || hi < lo) throw Error("bad level range");
    std::vector<int> v;
    for (int n = lo; n <= hi; ++n) v.push_back(n);
    return v;
}

// Strips of widths {2,4,8,16} cells at `level` over every offset within the
// spec's window, on both axes.
inline std::vector<Strip> auto_strips(const SetSpec& spec, const Level& level,
                                      const std::vector<int>& widths = {2, 4, 8, 16}) {
    CellWindow w = snap_window(spec.bbox, level);
    std::vector<Strip> out;
    for (Axis ax : {Axis::horizontal, Axis::vertical}) {
        std::int64_t t0 = ax == Axis::horizontal ? w.j0 : w.i0;
        std::int64_t n = ax == Axis::horizontal ? w.h : w.w;
        for (int width : widths)
            for (std::int64_t o = t0; o + width <= t0 + n; ++o)
                out.push_back({ax, level.coord(o), level.coord(o + width), std::nullopt});
    }
    return out;
}

inline ScanReport schoenflies_scan(const SpecPtr& spec, const std::vector<Strip>& strips,
                                   const std::vector<int>& levels, const ScanOptions& opt = {}) {
    if (levels.empty()) throw Error("no levels");
    ScanReport rep;
    rep.spec = spec->name;
    rep.base = spec->base;
    rep.levels = levels;
    rep.divergence_window = opt.divergence_window;
    std::vector<GridCompactum> rasters(levels.size());
    parallel_for(levels.size(), opt.jobs, [&](std::size_t k) {
        rasters[k] = rasterize(spec, {levels[k], spec->base});
    });
    std::size_t L = levels.size();
    std::vector<std::int64_t> mi(strips.size() * L), md(strips.size() * L);
    std::vector<std::pair<std::int64_t, std::int64_t>> ln(strips.size() * L);
    parallel_for(strips.size() * L, opt.jobs, [&](std::size_t k) {
        const Strip& s = strips[k / L];
        const GridCompactum& K = rasters[k % L];
        RegionCells R = resolve(K, s, opt.margin);
        mi[k] = count_crossings(K, R, Mode::intersection);
        md[k] = count_crossings(K, R, Mode::difference);
        ln[k] = {R.lo, R.hi};
    });
    bool any = false;
    for (std::size_t s = 0; s < strips.size(); ++s) {
        StripScan ss;
        ss.strip = strips[s];
        ss.levels = levels;
        for (std::size_t l = 0; l < L; ++l) {
            ss.m_int.push_back(mi[s * L + l]);
            ss.m_diff.push_back(md[s * L + l]);
            ss.lines.push_back(ln[s * L + l]);
        }
        ss.divergent = diverges(ss.m_int, opt.divergence_window);
        any = any || ss.divergent;
        rep.strips.push_back(std::move(ss));
    }
    bool continuum = !rasters.back().empty() && label_components(rasters.back()).count() == 1;
    if (!continuum)
        rep.verdict = "not a continuum at finest level";
    else
        rep.verdict = any ? "not locally connected" : "consistent with locally connected";
    return rep;
}

// Diameters of bounded complement components per level, and a flag raised when
// the rank-th largest fails to shrink between the last two levels that have one.
inline void complement_diameter_scan(const SpecPtr& spec, const std::vector<int>& levels,
                                     ScanReport& rep, int rank = 10, int jobs = 1) {
    rep.complement.assign(levels.size(), {});
    rep.complement_rank = rank;
    parallel_for(levels.size(), jobs, [&](std::size_t k) {
        GridCompactum K = rasterize(spec, {levels[k], spec->base});
        ComponentLabeling L = complement_components(K, K.window.expanded(1, 1));
        ComplementLevel cl;
        cl.level = levels[k];
        for (const auto& m : L.meta)
            if (!m.unbounded) cl.diameters.push_back(m.diameter);
        std::sort(cl.diameters.rbegin(), cl.diameters.rend());
        rep.complement[k] = std::move(cl);
    });
    std::vector<double> kth;
    for (const auto& cl : rep.complement)
        if (rank >= 1 && cl.diameters.size() >= static_cast<std::size_t>(rank))
            kth.push_back(cl.diameters[static_cast<std::size_t>(rank - 1)]);
    rep.complement_flag = kth.size() >= 2 && kth.back() >= kth[kth.size() - 2] * (1 - 1e-9);
}

// ---------------------------------------------------------------------------
// Separation

struct CutWireResult {
    bool connected = false;
    std::vector<Cell> component;  // when connected: an 8-component meeting A and B
    std::vector<Cell> x1, x2;     // otherwise: X1 ⊇ A, X2 ⊇ B
};

namespace detail {

struct CellIndex {
    CellWindow win;
    std::vector<std::int32_t> slot;

    explicit CellIndex(const std::vector<Cell>& cells) {
        win = bounding_window(cells);
        if (win.w == 0) win = {0, 0, 1, 1};
        slot.assign(static_cast<std::size_t>(win.size()), -1);
        for (std::size_t k = 0; k < cells.size(); ++k)
            slot[at(cells[k].i, cells[k].j)] = static_cast<std::int32_t>(k);
    }
    std::size_t at(std::int64_t i, std::int64_t j) const {
        return static_cast<std::size_t>((j - win.j0) * win.w + (i - win.i0));
    }
    std::int32_t find(std::int64_t i, std::int64_t j) const {
        return win.contains(i, j) ? slot[at(i, j)] : -1;
    }
};

}  // namespace detail

inline CutWireResult cut_wire(const std::vector<Cell>& X, const std::vector<Cell>& A,
                              const std::vector<Cell>& B) {
    detail::CellIndex idx(X);
    for (const auto* s : {&A, &B})
        for (const Cell& c : *s)
            if (idx.find(c.i, c.j) < 0) throw Error("cut_wire: subset not contained in X");
    std::vector<std::uint8_t> mask(idx.slot.size(), 0);
    for (const Cell& c : X) mask[idx.at(c.i, c.j)] = 1;
    std::vector<std::int32_t> lab(mask.size());
    int n = label_mask(idx.win.w, idx.win.h, mask.data(), 8, lab.data());
    std::vector<std::uint8_t> inA(static_cast<std::size_t>(n), 0), inB(static_cast<std::size_t>(n), 0);
    for (const Cell& c : A) inA[static_cast<std::size_t>(lab[idx.at(c.i, c.j)])] = 1;
    for (const Cell& c : B) inB[static_cast<std::size_t>(lab[idx.at(c.i, c.j)])] = 1;
    CutWireResult r;
    int hit = -1;
    for (int l = 0; l < n && hit < 0; ++l)
        if (inA[static_cast<std::size_t>(l)] && inB[static_cast<std::size_t>(l)]) hit = l;
    std::vector<Cell> sorted = X;
    std::sort(sorted.begin(), sorted.end(), row_major_less);
    for (const Cell& c : sorted) {
        std::int32_t l = lab[idx.at(c.i, c.j)];
        if (hit >= 0) {
            if (l == hit) r.component.push_back(c);
        } else {
            (inA[static_cast<std::size_t>(l)] ? r.x1 : r.x2).push_back(c);
        }
    }
    r.connected = hit >= 0;
    return r;
}

// 4-connected path of cells in rect \ (A ∪ B) from the bottom row to the top
// row, shortest and deterministic; empty when none exists.
inline std::optional<std::vector<Cell>> crossing_path(const CellWindow& rect, const std::vector<Cell>& A,
                                                      const std::vector<Cell>& B) {
    if (rect.w < 1 || rect.h < 1) throw Error("crossing_path: empty rectangle");
    std::vector<std::uint8_t> blocked(static_cast<std::size_t>(rect.size()), 0);
    auto at = [&](std::int64_t i, std::int64_t j) {
        return static_cast<std::size_t>((j - rect.j0) * rect.w + (i - rect.i0));
    };
    for (const Cell& c : A) {
        if (!rect.contains(c.i, c.j)) throw Error("crossing_path: A outside rectangle");
        if (c.i == rect.i0 + rect.w - 1) throw Error("crossing_path: A reaches the right edge");
        blocked[at(c.i, c.j)] = 1;
    }
    for (const Cell& c : B) {
        if (!rect.contains(c.i, c.j)) throw Error("crossing_path: B outside rectangle");
        if (c.i == rect.i0) throw Error("crossing_path: B reaches the left edge");
        if (blocked[at(c.i, c.j)]) throw Error("crossing_path: A and B intersect");
        blocked[at(c.i, c.j)] = 2;
    }
    std::vector<std::int64_t> prev(blocked.size(), -2);
    std::queue<std::int64_t> q;
    for (std::int64_t x = 0; x < rect.w; ++x)
        if (!blocked[static_cast<std::size_t>(x)]) {
            prev[static_cast<std::size_t>(x)] = -1;
            q.push(x);
        }
    while (!q.empty()) {
        std::int64_t p = q.front();
        q.pop();
        std::int64_t x = p % rect.w, y = p / rect.w;
        if (y == rect.h - 1) {
            std::vector<Cell> path;
            for (std::int64_t c = p; c >= 0; c = prev[static_cast<std::size_t>(c)])
                path.push_back({rect.i0 + c % rect.w, rect.j0 + c / rect.w});
            std::reverse(path.begin(), path.end());
            return path;
        }
        const std::int64_t dx[4] = {0, -1, 1, 0}, dy[4] = {1, 0, 0, -1};
        for (int d = 0; d < 4; ++d) {
            std::int64_t nx = x + dx[d], ny = y + dy[d];
            if (nx < 0 || nx >= rect.w || ny < 0 || ny >= rect.h) continue;
            std::int64_t np = ny * rect.w + nx;
            if (blocked[static_cast<std::size_t>(np)] || prev[static_cast<std::size_t>(np)] != -2) continue;
            prev[static_cast<std::size_t>(np)] = p;
            q.push(np);
        }
    }
    return std::nullopt;
}

// Closed polyline through lattice vertices (cell corners) at `level`,
// counter-clockwise, collinear vertices removed.
struct SeparatingLoop {
    Level level;
    std::vector<std::array<std::int64_t, 2>> vertices;
    std::int64_t brick = 0;  // brick side in cells
};

// Winding number of the loop around the center of cell c.
inline int winding(const SeparatingLoop& loop, const Cell& c) {
    // Doubled coordinates keep the center off every edge.
    std::int64_t px = 2 * c.i + 1, py = 2 * c.j + 1;
    int w = 0;
    std::size_t n = loop.vertices.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::int64_t ax = 2 * loop.vertices[k][0], ay = 2 * loop.vertices[k][1];
        std::int64_t bx = 2 * loop.vertices[(k + 1) % n][0], by = 2 * loop.vertices[(k + 1) % n][1];
        if (ay <= py) {
            if (by > py && (bx - ax) * (py - ay) - (px - ax) * (by - ay) > 0) ++w;
        } else if (by <= py && (bx - ax) * (py - ay) - (px - ax) * (by - ay) < 0) {
            --w;
        }
    }
    return w;
}

// Brick-wall loop around component P of K that leaves component Q outside.
// Bricks are R x R cells with R = floor(r / cell_size) rounded down to even;
// odd brick rows shift by R / 2.
inline SeparatingLoop separating_curve(const GridCompactum& K, int P, int Q, double r) {
    ComponentLabeling lab = label_components(K, 8);
    if (P < 0 || Q < 0 || static_cast<std::size_t>(P) >= lab.count() ||
        static_cast<std::size_t>(Q) >= lab.count() || P == Q)
        throw Error("separating_curve: P and Q must be distinct component ids");
    auto R = static_cast<std::int64_t>(std::floor(r / K.cell_size() + 1e-9));
    R -= R % 2;
    if (R < 2) throw Error("separating_curve: r must be at least two cells");
    const CellWindow& kw = K.window;
    // Brick lattice over K's window plus two bricks of margin.
    std::int64_t rows0 = floor_div(kw.j0, R) - 2, rows1 = floor_div(kw.j0 + kw.h - 1, R) + 3;
    std::int64_t cols0 = floor_div(kw.i0, R) - 3, cols1 = floor_div(kw.i0 + kw.w - 1, R) + 3;
    std::int64_t nr = rows1 - rows0, nc = cols1 - cols0;
    CellWindow frame{cols0 * R, rows0 * R, nc * R, nr * R};
    auto brick_of = [&](std::int64_t i, std::int64_t j) {
        std::int64_t row = floor_div(j, R);
        std::int64_t off = (row & 1) ? R / 2 : 0;
        std::int64_t col = floor_div(i - off, R);
        return std::array<std::int64_t, 2>{col, row};
    };
    auto bidx = [&](std::int64_t col, std::int64_t row) {
        return static_cast<std::size_t>((row - rows0) * (nc + 1) + (col - cols0));
    };
    std::size_t nb = static_cast<std::size_t>(nr * (nc + 1));
    // meets: bit 1 E (P's component), bit 2 F (the rest), bit 4 P itself.
    std::vector<std::uint8_t> meets(nb, 0);
    for (std::int64_t y = 0; y < kw.h; ++y)
        for (std::int64_t x = 0; x < kw.w; ++x) {
            std::int32_t l = lab.label[static_cast<std::size_t>(y * kw.w + x)];
            if (l < 0) continue;
            std::uint8_t bit = l == P ? 5 : 2;
            std::int64_t i = kw.i0 + x, j = kw.j0 + y;
            // A brick meets a cell when the cell or one of its neighbours lies in it.
            for (std::int64_t dj = -1; dj <= 1; ++dj)
                for (std::int64_t di = -1; di <= 1; ++di) {
                    auto b = brick_of(i + di, j + dj);
                    meets[bidx(b[0], b[1])] |= bit;
                }
        }
    for (std::uint8_t m : meets)
        if ((m & 3) == 3) throw Error("separating_curve: brick meets both sides (r too large)");
    // Edge-connected component of E-bricks containing P's bricks.
    std::vector<std::uint8_t> inA(nb, 0);
    std::vector<std::array<std::int64_t, 2>> stack;
    for (std::int64_t row = rows0; row < rows1; ++row)
        for (std::int64_t col = cols0; col <= cols1; ++col)
            if (meets[bidx(col, row)] & 4) {
                inA[bidx(col, row)] = 1;
                stack.push_back({col, row});
            }
    while (!stack.empty()) {
        auto [col, row] = stack.back();
        stack.pop_back();
        std::int64_t shift = (row & 1) ? 0 : -1;  // neighbours above/below start here
        std::vector<std::array<std::int64_t, 2>> nbrs = {
            {col - 1, row}, {col + 1, row}, {col + shift, row - 1}, {col + shift + 1, row - 1},
            {col + shift, row + 1}, {col + shift + 1, row + 1}};
        for (auto [c2, r2] : nbrs) {
            if (r2 < rows0 || r2 >= rows1 || c2 < cols0 || c2 > cols1) continue;
            std::size_t k = bidx(c2, r2);
            if (!inA[k] && (meets[k] & 1)) {
                inA[k] = 1;
                stack.push_back({c2, r2});
            }
        }
    }
    // Cell mask of A over the frame, holes filled.
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(frame.size()), 0);
    for (std::int64_t y = 0; y < frame.h; ++y)
        for (std::int64_t x = 0; x < frame.w; ++x) {
            auto b = brick_of(frame.i0 + x, frame.j0 + y);
            if (b[0] >= cols0 && b[0] <= cols1 && inA[bidx(b[0], b[1])])
                mask[static_cast<std::size_t>(y * frame.w + x)] = 1;
        }
    {
        std::vector<std::uint8_t> outside(mask.size());
        for (std::size_t k = 0; k < mask.size(); ++k) outside[k] = !mask[k];
        std::vector<std::int32_t> ol(mask.size());
        label_mask(frame.w, frame.h, outside.data(), 4, ol.data());
        std::vector<std::uint8_t> open_label(mask.size() + 1, 0);
        for (std::int64_t x = 0; x < frame.w; ++x) {
            for (std::int64_t y : {std::int64_t{0}, frame.h - 1}) {
                std::int32_t l = ol[static_cast<std::size_t>(y * frame.w + x)];
                if (l >= 0) open_label[static_cast<std::size_t>(l)] = 1;
            }
        }
        for (std::int64_t y = 0; y < frame.h; ++y)
            for (std::int64_t x : {std::int64_t{0}, frame.w - 1}) {
                std::int32_t l = ol[static_cast<std::size_t>(y * frame.w + x)];
                if (l >= 0) open_label[static_cast<std::size_t>(l)] = 1;
            }
        for (std::size_t k = 0; k < mask.size(); ++k)
            if (ol[k] >= 0 && !open_label[static_cast<std::size_t>(ol[k])]) mask[k] = 1;
    }
    auto filled = [&](std::int64_t i, std::int64_t j) {
        return frame.contains(i, j) && mask[static_cast<std::size_t>((j - frame.j0) * frame.w + (i - frame.i0))];
    };
    // Boundary edges with the region on the left; one outgoing edge per vertex
    // because bricks never meet four at a point.
    std::map<std::array<std::int64_t, 2>, std::array<std::int64_t, 2>> next;
    std::array<std::int64_t, 2> start{0, 0};
    bool have_start = false;
    for (std::int64_t j = frame.j0; j < frame.j0 + frame.h; ++j)
        for (std::int64_t i = frame.i0; i < frame.i0 + frame.w; ++i) {
            if (!filled(i, j)) continue;
            if (!filled(i, j - 1)) {
                next[{i, j}] = {i + 1, j};
                if (!have_start) start = {i, j}, have_start = true;
            }
            if (!filled(i + 1, j)) next[{i + 1, j}] = {i + 1, j + 1};
            if (!filled(i, j + 1)) next[{i + 1, j + 1}] = {i, j + 1};
            if (!filled(i - 1, j)) next[{i, j + 1}] = {i, j};
        }
    if (!have_start) throw Error("separating_curve: empty brick region");
    SeparatingLoop loop;
    loop.level = K.level;
    loop.brick = R;
    std::vector<std::array<std::int64_t, 2>> raw;
    auto v = start;
    do {
        raw.push_back(v);
        auto it = next.find(v);
        if (it == next.end() || raw.size() > next.size()) throw Error("separating_curve: boundary trace failed");
        v = it->second;
    } while (v != start);
    if (raw.size() != next.size()) throw Error("separating_curve: brick region boundary is not a single loop");
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const auto& a = raw[(k + raw.size() - 1) % raw.size()];
        const auto& b = raw[k];
        const auto& c = raw[(k + 1) % raw.size()];
        if ((b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]) != 0) loop.vertices.push_back(b);
    }
    for (std::int64_t y = 0; y < kw.h; ++y)
        for (std::int64_t x = 0; x < kw.w; ++x)
            if (lab.label[static_cast<std::size_t>(y * kw.w + x)] == Q &&
                winding(loop, {kw.i0 + x, kw.j0 + y}) != 0)
                throw Error("separating_curve: Q is not in the unbounded complement of P; swap roles");
    return loop;
}

}  // namespace pcx

#endif  // PCX_SCHOENFLIES_HPP
