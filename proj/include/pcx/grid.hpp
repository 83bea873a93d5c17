// SPDX-FileCopyrightText: 2026 pcx contributors
// SPDX-License-Identifier: Apache-2.0
//
// Rasterized planar compacta: box oracles, outer-cover rasterization,
// component labeling and the two metrics used across pcx.

#ifndef PCX_GRID_HPP
#define PCX_GRID_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pcx/core.hpp"

namespace pcx {

// `covered` means the set contains the whole box, so every sub-box intersects too.
enum class Hit { disjoint, intersects, unknown, covered };

struct SetSpec {
    std::string name;
    Box bbox;
    int base = 2;
    bool empty = false;
    // Must never answer `disjoint` for a box that meets the set.
    std::function<Hit(const Box&)> oracle;
};

using SpecPtr = std::shared_ptr<const SetSpec>;

inline SpecPtr empty_spec(std::string name = "empty", int base = 2) {
    auto s = std::make_shared<SetSpec>();
    s->name = std::move(name);
    s->bbox = {0, 0, 1, 1};
    s->base = base;
    s->empty = true;
    s->oracle = [](const Box&) { return Hit::disjoint; };
    return s;
}

struct GridCompactum {
    Level level;
    CellWindow window;
    std::vector<std::uint8_t> bits;  // row-major over window, row = j
    SpecPtr source;

    std::size_t index(std::int64_t i, std::int64_t j) const {
        return static_cast<std::size_t>((j - window.j0) * window.w + (i - window.i0));
    }
    bool has(std::int64_t i, std::int64_t j) const {
        return window.contains(i, j) && bits[index(i, j)] != 0;
    }
    bool has(const Cell& c) const { return has(c.i, c.j); }
    std::size_t count() const {
        return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
    }
    bool empty() const { return count() == 0; }
    double cell_size() const { return level.cell_size(); }

    // Cells in row-major order.
    std::vector<Cell> cells() const {
        std::vector<Cell> out;
        for (std::int64_t y = 0; y < window.h; ++y)
            for (std::int64_t x = 0; x < window.w; ++x)
                if (bits[static_cast<std::size_t>(y * window.w + x)])
                    out.push_back({window.i0 + x, window.j0 + y});
        return out;
    }
};

inline constexpr std::int64_t max_raster_cells = std::int64_t{1} << 30;

// Outer cover of `spec` over an explicit window of cells.
inline GridCompactum rasterize_window(const SpecPtr& spec, const Level& level,
                                      const CellWindow& window) {
    level.validate();
    if (window.w <= 0 || window.h <= 0) throw Error("empty raster window");
    if (window.size() > max_raster_cells) throw Error("raster window too large");
    GridCompactum K;
    K.level = level;
    K.window = window;
    K.source = spec;
    K.bits.assign(static_cast<std::size_t>(window.size()), 0);
    if (spec->empty) return K;

    struct Block {
        std::int64_t x, y, w, h;
    };
    auto fill = [&](const Block& b) {
        for (std::int64_t y = b.y; y < b.y + b.h; ++y)
            std::fill_n(K.bits.begin() + y * window.w + b.x, b.w, std::uint8_t{1});
    };
    std::vector<Block> stack{{0, 0, window.w, window.h}};
    while (!stack.empty()) {
        Block b = stack.back();
        stack.pop_back();
        CellWindow cw{window.i0 + b.x, window.j0 + b.y, b.w, b.h};
        Hit hit = spec->oracle(cw.box(level));
        if (hit == Hit::disjoint) continue;
        if (hit == Hit::covered || (b.w == 1 && b.h == 1)) {
            fill(b);
            continue;
        }
        std::int64_t hw = (b.w + 1) / 2, hh = (b.h + 1) / 2;
        for (int part = 3; part >= 0; --part) {
            bool right = part & 1, top = part & 2;
            if ((right && hw == b.w) || (top && hh == b.h)) continue;
            stack.push_back({right ? b.x + hw : b.x, top ? b.y + hh : b.y,
                             right ? b.w - hw : hw, top ? b.h - hh : hh});
        }
    }
    return K;
}

inline GridCompactum rasterize(const SpecPtr& spec, const Level& level) {
    if (!spec) throw Error("null spec");
    if (!std::isfinite(spec->bbox.x0) || !std::isfinite(spec->bbox.x1) ||
        !std::isfinite(spec->bbox.y0) || !std::isfinite(spec->bbox.y1))
        throw Error("spec bbox is not finite");
    level.validate();
    return rasterize_window(spec, level, snap_window(spec->bbox, level));
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

inline GridCompactum coarsen(const GridCompactum& K) {
    if (K.level.n < 1) throw Error("cannot coarsen level 0");
    std::int64_t b = K.level.base;
    GridCompactum C;
    C.level = {K.level.n - 1, K.level.base};
    C.source = K.source;
    std::int64_t i0 = floor_div(K.window.i0, b), j0 = floor_div(K.window.j0, b);
    std::int64_t i1 = ceil_div(K.window.i0 + K.window.w, b);
    std::int64_t j1 = ceil_div(K.window.j0 + K.window.h, b);
    C.window = {i0, j0, i1 - i0, j1 - j0};
    C.bits.assign(static_cast<std::size_t>(C.window.size()), 0);
    for (std::int64_t y = 0; y < K.window.h; ++y)
        for (std::int64_t x = 0; x < K.window.w; ++x)
            if (K.bits[static_cast<std::size_t>(y * K.window.w + x)]) {
                std::int64_t pi = floor_div(K.window.i0 + x, b), pj = floor_div(K.window.j0 + y, b);
                C.bits[C.index(pi, pj)] = 1;
            }
    return C;
}

// Builds a compactum from explicit cells; the window is their bounding rectangle
// unless one is given.
inline GridCompactum from_cells(const std::vector<Cell>& cells, const Level& level,
                                const CellWindow* window = nullptr) {
    GridCompactum K;
    K.level = level;
    if (window) {
        K.window = *window;
    } else if (cells.empty()) {
        K.window = {0, 0, 1, 1};
    } else {
        std::int64_t i0 = cells[0].i, i1 = cells[0].i, j0 = cells[0].j, j1 = cells[0].j;
        for (const Cell& c : cells) {
            i0 = std::min(i0, c.i), i1 = std::max(i1, c.i);
            j0 = std::min(j0, c.j), j1 = std::max(j1, c.j);
        }
        K.window = {i0, j0, i1 - i0 + 1, j1 - j0 + 1};
    }
    K.bits.assign(static_cast<std::size_t>(K.window.size()), 0);
    for (const Cell& c : cells) {
        if (!K.window.contains(c.i, c.j)) throw Error("cell outside window");
        K.bits[K.index(c.i, c.j)] = 1;
    }
    return K;
}

// ---------------------------------------------------------------------------
// Labeling on plain byte masks

// Labels nonzero cells of a w*h mask; ids follow row-major order of first cell.
// Returns the component count; out gets -1 for background.
inline int label_mask(std::int64_t w, std::int64_t h, const std::uint8_t* mask, int connectivity,
                      std::int32_t* out) {
    std::size_t n = static_cast<std::size_t>(w * h);
    std::fill(out, out + n, -1);
    std::vector<std::int64_t> stack;
    int next = 0;
    for (std::size_t start = 0; start < n; ++start) {
        if (!mask[start] || out[start] >= 0) continue;
        out[start] = next;
        stack.assign(1, static_cast<std::int64_t>(start));
        while (!stack.empty()) {
            std::int64_t p = stack.back();
            stack.pop_back();
            std::int64_t x = p % w, y = p / w;
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                std::int64_t ny = y + dy;
                if (ny < 0 || ny >= h) continue;
                for (std::int64_t dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (connectivity == 4 && dx != 0 && dy != 0) continue;
                    std::int64_t nx = x + dx;
                    if (nx < 0 || nx >= w) continue;
                    std::int64_t q = ny * w + nx;
                    if (mask[q] && out[q] < 0) {
                        out[q] = next;
                        stack.push_back(q);
                    }
                }
            }
        }
        ++next;
    }
    return next;
}

struct ComponentMeta {
    std::int64_t size = 0;
    CellWindow bbox;       // cells
    double diameter = 0;   // scene units
    bool touches_left = false, touches_right = false;
    bool touches_bottom = false, touches_top = false;
    bool unbounded = false;  // complement components touching the frame
};

struct ComponentLabeling {
    Level level;
    CellWindow window;
    int connectivity = 8;
    std::vector<std::int32_t> label;  // -1 where no cell
    std::vector<ComponentMeta> meta;

    std::size_t count() const { return meta.size(); }
    std::int32_t at(std::int64_t i, std::int64_t j) const {
        if (!window.contains(i, j)) return -1;
        return label[static_cast<std::size_t>((j - window.j0) * window.w + (i - window.i0))];
    }
    std::vector<std::vector<Cell>> members() const {
        std::vector<std::vector<Cell>> out(meta.size());
        for (std::int64_t y = 0; y < window.h; ++y)
            for (std::int64_t x = 0; x < window.w; ++x) {
                std::int32_t l = label[static_cast<std::size_t>(y * window.w + x)];
                if (l >= 0) out[static_cast<std::size_t>(l)].push_back({window.i0 + x, window.j0 + y});
            }
        return out;
    }
};

double diameter(const std::vector<Cell>& cells, const Level& level);

inline ComponentLabeling label_window(const Level& level, const CellWindow& window,
                                      const std::vector<std::uint8_t>& mask, int connectivity) {
    if (connectivity != 4 && connectivity != 8) throw Error("connectivity must be 4 or 8");
    ComponentLabeling L;
    L.level = level;
    L.window = window;
    L.connectivity = connectivity;
    L.label.resize(mask.size());
    int n = label_mask(window.w, window.h, mask.data(), connectivity, L.label.data());
    L.meta.resize(static_cast<std::size_t>(n));
    std::vector<std::int64_t> x0(n, window.w), x1(n, -1), y0(n, window.h), y1(n, -1);
    for (std::int64_t y = 0; y < window.h; ++y)
        for (std::int64_t x = 0; x < window.w; ++x) {
            std::int32_t l = L.label[static_cast<std::size_t>(y * window.w + x)];
            if (l < 0) continue;
            auto& m = L.meta[static_cast<std::size_t>(l)];
            ++m.size;
            x0[l] = std::min(x0[l], x), x1[l] = std::max(x1[l], x);
            y0[l] = std::min(y0[l], y), y1[l] = std::max(y1[l], y);
            if (x == 0) m.touches_left = true;
            if (x == window.w - 1) m.touches_right = true;
            if (y == 0) m.touches_bottom = true;
            if (y == window.h - 1) m.touches_top = true;
        }
    auto groups = L.members();
    for (int l = 0; l < n; ++l) {
        auto& m = L.meta[static_cast<std::size_t>(l)];
        m.bbox = {window.i0 + x0[l], window.j0 + y0[l], x1[l] - x0[l] + 1, y1[l] - y0[l] + 1};
        m.diameter = diameter(groups[static_cast<std::size_t>(l)], level);
    }
    return L;
}

inline ComponentLabeling label_components(const GridCompactum& K, int connectivity = 8) {
    return label_window(K.level, K.window, K.bits, connectivity);
}

// 4-connected components of window cells outside K. The window is given in
// cells and must contain K's window.
inline ComponentLabeling complement_components(const GridCompactum& K, const CellWindow& window) {
    const CellWindow& kw = K.window;
    if (window.i0 > kw.i0 || window.j0 > kw.j0 || window.i0 + window.w < kw.i0 + kw.w ||
        window.j0 + window.h < kw.j0 + kw.h)
        throw Error("window smaller than the compactum");
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(window.size()), 1);
    for (std::int64_t y = 0; y < window.h; ++y)
        for (std::int64_t x = 0; x < window.w; ++x)
            if (K.has(window.i0 + x, window.j0 + y)) mask[static_cast<std::size_t>(y * window.w + x)] = 0;
    ComponentLabeling L = label_window(K.level, window, mask, 4);
    for (auto& m : L.meta)
        m.unbounded = m.touches_left || m.touches_right || m.touches_bottom || m.touches_top;
    return L;
}

// Scene-unit window variant; snapped outward to K's lattice.
inline ComponentLabeling complement_components(const GridCompactum& K, const Box& window) {
    return complement_components(K, snap_window(window, K.level));
}

// ---------------------------------------------------------------------------
// Metrics

namespace detail {

// Exact 1D squared distance transform (Felzenszwalb-Huttenlocher).
inline void edt_1d(const double* f, std::int64_t n, double* d, std::int64_t* v, double* z) {
    const double inf = std::numeric_limits<double>::infinity();
    std::int64_t k = 0;
    std::int64_t first = 0;
    while (first < n && f[first] == inf) ++first;
    if (first == n) {
        std::fill(d, d + n, inf);
        return;
    }
    v[0] = first;
    z[0] = -inf;
    z[1] = inf;
    for (std::int64_t q = first + 1; q < n; ++q) {
        if (f[q] == inf) continue;
        double s;
        for (;;) {
            std::int64_t p = v[k];
            s = ((f[q] + static_cast<double>(q * q)) - (f[p] + static_cast<double>(p * p))) /
                (2.0 * static_cast<double>(q - p));
            if (s <= z[k] && k > 0) {
                --k;
                continue;
            }
            break;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    k = 0;
    for (std::int64_t q = 0; q < n; ++q) {
        while (z[k + 1] < static_cast<double>(q)) ++k;
        double dq = static_cast<double>(q - v[k]);
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace detail

// Squared Euclidean distance (in cells) from every cell of a w*h grid to the
// nearest nonzero mask cell; +inf when the mask is empty.
inline std::vector<double> squared_distance_field(std::int64_t w, std::int64_t h,
                                                  const std::vector<std::uint8_t>& mask) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> g(static_cast<std::size_t>(w * h));
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = mask[k] ? 0.0 : inf;
    std::int64_t m = std::max(w, h);
    std::vector<double> f(static_cast<std::size_t>(m)), d(static_cast<std::size_t>(m)),
        z(static_cast<std::size_t>(m + 1));
    std::vector<std::int64_t> v(static_cast<std::size_t>(m));
    for (std::int64_t x = 0; x < w; ++x) {
        for (std::int64_t y = 0; y < h; ++y) f[y] = g[static_cast<std::size_t>(y * w + x)];
        detail::edt_1d(f.data(), h, d.data(), v.data(), z.data());
        for (std::int64_t y = 0; y < h; ++y) g[static_cast<std::size_t>(y * w + x)] = d[y];
    }
    for (std::int64_t y = 0; y < h; ++y) {
        for (std::int64_t x = 0; x < w; ++x) f[x] = g[static_cast<std::size_t>(y * w + x)];
        detail::edt_1d(f.data(), w, d.data(), v.data(), z.data());
        for (std::int64_t x = 0; x < w; ++x) g[static_cast<std::size_t>(y * w + x)] = d[x];
    }
    return g;
}

inline CellWindow bounding_window(const std::vector<Cell>& a, const std::vector<Cell>& b = {}) {
    std::int64_t i0 = std::numeric_limits<std::int64_t>::max(), j0 = i0;
    std::int64_t i1 = std::numeric_limits<std::int64_t>::min(), j1 = i1;
    for (const auto* s : {&a, &b})
        for (const Cell& c : *s) {
            i0 = std::min(i0, c.i), i1 = std::max(i1, c.i);
            j0 = std::min(j0, c.j), j1 = std::max(j1, c.j);
        }
    if (i1 < i0) return {0, 0, 0, 0};
    return {i0, j0, i1 - i0 + 1, j1 - j0 + 1};
}

// Max of the two directed center-to-center distances, in scene units.
inline double hausdorff_distance(const std::vector<Cell>& a, const std::vector<Cell>& b,
                                 const Level& level) {
    if (a.empty() || b.empty()) throw Error("hausdorff_distance of an empty set");
    CellWindow win = bounding_window(a, b);
    auto directed = [&](const std::vector<Cell>& from, const std::vector<Cell>& to) {
        double best = 0;
        if (win.size() <= (std::int64_t{1} << 26)) {
            std::vector<std::uint8_t> mask(static_cast<std::size_t>(win.size()), 0);
            for (const Cell& c : to) mask[static_cast<std::size_t>((c.j - win.j0) * win.w + c.i - win.i0)] = 1;
            auto field = squared_distance_field(win.w, win.h, mask);
            for (const Cell& c : from)
                best = std::max(best, field[static_cast<std::size_t>((c.j - win.j0) * win.w + c.i - win.i0)]);
        } else {
            for (const Cell& p : from) {
                double m = std::numeric_limits<double>::infinity();
                for (const Cell& q : to) {
                    double dx = static_cast<double>(p.i - q.i), dy = static_cast<double>(p.j - q.j);
                    m = std::min(m, dx * dx + dy * dy);
                }
                best = std::max(best, m);
            }
        }
        return best;
    };
    double d2 = std::max(directed(a, b), directed(b, a));
    return std::sqrt(d2) * level.cell_size();
}

// Max distance between corners of the cell boxes, in scene units.
inline double diameter(const std::vector<Cell>& cells, const Level& level) {
    if (cells.empty()) throw Error("diameter of an empty set");
    // Extreme corners per row suffice: the farthest pair lies on the convex hull.
    struct P {
        std::int64_t x, y;
    };
    std::vector<std::pair<std::int64_t, std::pair<std::int64_t, std::int64_t>>> rows;
    {
        std::vector<Cell> s = cells;
        std::sort(s.begin(), s.end(), row_major_less);
        for (std::size_t k = 0; k < s.size();) {
            std::size_t e = k;
            while (e < s.size() && s[e].j == s[k].j) ++e;
            rows.push_back({s[k].j, {s[k].i, s[e - 1].i}});
            k = e;
        }
    }
    std::vector<P> pts;
    for (auto& [j, ext] : rows) {
        pts.push_back({ext.first, j});
        pts.push_back({ext.first, j + 1});
        pts.push_back({ext.second + 1, j});
        pts.push_back({ext.second + 1, j + 1});
    }
    std::sort(pts.begin(), pts.end(), [](const P& a, const P& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const P& a, const P& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    auto cross = [](const P& o, const P& a, const P& b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<P> hull;
    if (pts.size() <= 2) {
        hull = pts;
    } else {
        std::vector<P> h(2 * pts.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
            h[k++] = pts[i];
        }
        for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
            while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
            h[k++] = pts[i];
        }
        h.resize(k - 1);
        hull = std::move(h);
    }
    std::int64_t best = 0;
    for (std::size_t a = 0; a < hull.size(); ++a)
        for (std::size_t b = a + 1; b < hull.size(); ++b) {
            std::int64_t dx = hull[a].x - hull[b].x, dy = hull[a].y - hull[b].y;
            best = std::max(best, dx * dx + dy * dy);
        }
    return std::sqrt(static_cast<double>(best)) * level.cell_size();
}

}  // namespace pcx

#endif  // PCX_GRID_HPP
