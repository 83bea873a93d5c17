// SPDX-FileCopyrightText: 2026 pcx contributors
// SPDX-License-Identifier: Apache-2.0
//
// Finite-scale relation seeding, equivalence closure, quotient graphs and
// fineness comparison of decompositions.

#ifndef PCX_DECOMPOSITION_HPP
#define PCX_DECOMPOSITION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pcx/grid.hpp"
#include "pcx/schoenflies.hpp"

namespace pcx {

enum class Family { strips, annuli, both };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::strips: return "strips";
        case Family::annuli: return "annuli";
        case Family::both: return "both";
    }
    return "?";
}

inline Family parse_family(const std::string& s) {
    if (s == "strips") return Family::strips;
    if (s == "annuli") return Family::annuli;
    if (s == "both") return Family::both;
    throw Error("unknown region family: " + s);
}

// Lengths are in cells of the level being decomposed.
struct RelationParams {
    int n_min = 4;                   // components standing in for an infinite sequence
    double delta = 2.0;              // tolerance; approach distance is 3 * delta
    Family family = Family::strips;  // see README for why annuli are opt-in
    int stride = 8;                  // annulus centre spacing
    std::vector<int> widths = {2, 4, 8, 16};
    std::vector<int> annulus_holes = {1, 2, 4, 8};  // inner half-width
    std::vector<int> annulus_rings = {2, 4, 8};
    int refine_depth = 2;  // finer levels consulted for persistence
    int jobs = 1;

    void validate() const {
        if (n_min < 3) throw Error("n_min must be at least 3");
        if (!(delta >= 1)) throw Error("delta must be at least one cell");
        if (stride < 1) throw Error("stride must be positive");
        if (refine_depth < 0 || refine_depth > 3) throw Error("refine_depth must be in 0..3");
        if (widths.empty()) throw Error("no strip widths");
        for (int w : widths)
            if (w < 1) throw Error("strip widths must be positive");
        if (jobs < 1) throw Error("jobs must be positive");
    }
};

struct RelationSeed {
    std::vector<std::vector<Cell>> merge_sets;
    std::vector<std::string> sources;  // region that produced each merge set
    int depth_used = 0;
    std::size_t regions = 0;
};

// Every region of the family at K's level.
inline std::vector<RegionCells> region_family(const GridCompactum& K, const RelationParams& p) {
    std::vector<RegionCells> out;
    const CellWindow& w = K.window;
    if (p.family != Family::annuli) {
        for (int width : p.widths)
            for (Axis ax : {Axis::horizontal, Axis::vertical}) {
                std::int64_t t0 = ax == Axis::horizontal ? w.j0 : w.i0;
                std::int64_t n = ax == Axis::horizontal ? w.h : w.w;
                for (std::int64_t o = t0; o + width <= t0 + n; ++o) {
                    RegionCells R;
                    R.axis = ax;
                    R.lo = o, R.hi = o + width;
                    R.s0 = ax == Axis::horizontal ? w.i0 : w.j0;
                    R.s1 = R.s0 + (ax == Axis::horizontal ? w.w : w.h);
                    out.push_back(R);
                }
            }
    }
    if (p.family != Family::strips) {
        // Centres are lattice vertices placed symmetrically about the window
        // centre so the family is preserved by every lattice isometry.
        auto centres = [&](std::int64_t lo, std::int64_t len) {
            std::vector<std::int64_t> v;
            std::int64_t c2 = 2 * lo + len;
            for (std::int64_t x = lo; x <= lo + len; ++x) {
                std::int64_t d = std::abs(2 * x - c2) % (2 * p.stride);
                if (d == 0 || d == 1) v.push_back(x);
            }
            return v;
        };
        auto xs = centres(w.i0, w.w), ys = centres(w.j0, w.h);
        for (int a : p.annulus_holes)
            for (int ring : p.annulus_rings)
                for (std::int64_t cy : ys)
                    for (std::int64_t cx : xs) {
                        RegionCells R;
                        R.annulus = true;
                        R.inner = {cx - a, cy - a, 2 * a, 2 * a};
                        R.outer = R.inner.expanded(ring, ring);
                        if (R.outer.i0 < w.i0 || R.outer.j0 < w.j0 || R.outer.i0 + R.outer.w > w.i0 + w.w ||
                            R.outer.j0 + R.outer.h > w.j0 + w.h)
                            continue;
                        out.push_back(R);
                    }
    }
    return out;
}

namespace detail {

struct FineLevel {
    GridCompactum K;
    std::int64_t scale = 1;  // cells of this level per coarse cell, per axis
};

// 3x3 erosion followed by 3x3 dilation; cells outside the mask count as empty.
inline std::vector<std::uint8_t> open3(const std::vector<std::uint8_t>& m, std::int64_t w, std::int64_t h) {
    std::vector<std::uint8_t> er(m.size(), 0), out(m.size(), 0);
    for (std::int64_t y = 1; y + 1 < h; ++y)
        for (std::int64_t x = 1; x + 1 < w; ++x) {
            bool all = true;
            for (std::int64_t dy = -1; dy <= 1 && all; ++dy)
                for (std::int64_t dx = -1; dx <= 1 && all; ++dx)
                    all = m[static_cast<std::size_t>((y + dy) * w + x + dx)] != 0;
            er[static_cast<std::size_t>(y * w + x)] = all;
        }
    for (std::int64_t y = 0; y < h; ++y)
        for (std::int64_t x = 0; x < w; ++x) {
            if (!er[static_cast<std::size_t>(y * w + x)]) continue;
            for (std::int64_t dy = -1; dy <= 1; ++dy)
                for (std::int64_t dx = -1; dx <= 1; ++dx) {
                    std::int64_t yy = y + dy, xx = x + dx;
                    if (yy >= 0 && yy < h && xx >= 0 && xx < w) out[static_cast<std::size_t>(yy * w + xx)] = 1;
                }
        }
    return out;
}

class RegionRelator {
public:
    RegionRelator(const GridCompactum& K, const std::vector<FineLevel>& fines, const RegionCells& R,
                  const RelationParams& p)
        : K_(K), fines_(fines), R_(R), p_(p), rect_(R.rect()) {}

    void run(std::vector<std::vector<Cell>>& out) {
        lc_ = find_crossings(R_, rect_, [&](std::int64_t i, std::int64_t j) { return K_.has(i, j); }, 8);
        comps_ = collect(lc_);
        m_ = comps_.size();
        if (m_ == 0) return;
        fields_.assign(m_, {});
        double th = static_cast<double>(R_.thickness());
        for (std::size_t t = 0; t < m_; ++t) {
            CellWindow bb = bounding_window(comps_[t]);
            double diag = std::hypot(static_cast<double>(bb.w), static_cast<double>(bb.h));
            if (diag <= 2 * th)
                thin(t, out);
            else
                fat(t, out);
        }
    }

private:
    std::size_t at(std::int64_t i, std::int64_t j) const {
        return static_cast<std::size_t>((j - rect_.j0) * rect_.w + (i - rect_.i0));
    }

    // A thin crossing merges when it splits into a growing number of
    // crossings at the finer levels.
    void thin(std::size_t t, std::vector<std::vector<Cell>>& out) {
        if (fines_.empty()) return;
        std::int32_t lab = lc_.order[t];
        CellWindow bb = bounding_window(comps_[t]);
        std::int64_t prev = 1, last = 1;
        for (const FineLevel& f : fines_) {
            RegionCells Rf = R_.scaled(f.scale);
            CellWindow sub = bb.scaled(f.scale);
            auto in_set = [&](std::int64_t i, std::int64_t j) {
                return f.K.has(i, j) && lc_.at(floor_div(i, f.scale), floor_div(j, f.scale)) == lab;
            };
            last = prev;
            prev = static_cast<std::int64_t>(find_crossings(Rf, sub, in_set, 8).order.size());
        }
        if (prev >= 3 && prev > last) out.push_back(comps_[t]);
    }

    const std::vector<double>& field(std::size_t k) {
        if (fields_[k].empty()) {
            std::vector<std::uint8_t> mask(static_cast<std::size_t>(rect_.size()), 0);
            for (const Cell& c : comps_[k]) mask[at(c.i, c.j)] = 1;
            fields_[k] = squared_distance_field(rect_.w, rect_.h, mask);
        }
        return fields_[k];
    }

    double gap2(std::size_t a, std::size_t b) {
        const auto& f = field(b);
        double best = std::numeric_limits<double>::infinity();
        for (const Cell& c : comps_[a]) best = std::min(best, f[at(c.i, c.j)]);
        return best;
    }

    bool grows() {
        if (grow_ < 0) {
            const FineLevel& f = fines_.back();
            RegionCells Rf = R_.scaled(f.scale);
            auto n = find_crossings(Rf, Rf.rect(), [&](std::int64_t i, std::int64_t j) { return f.K.has(i, j); }, 8)
                         .order.size();
            grow_ = n > m_ ? 1 : 0;
        }
        return grow_ == 1;
    }

    // A fat crossing merges the part of it that a convergent run of smaller
    // crossings approaches.
    void fat(std::size_t t, std::vector<std::vector<Cell>>& out) {
        if (fines_.empty()) return;
        const double dacc = 3 * p_.delta;
        const std::size_t size_t_ = comps_[t].size();
        for (int dir : {-1, 1}) {
            std::vector<std::size_t> seq;
            if (R_.annulus) {
                for (std::size_t s = 1; s < m_; ++s) seq.push_back(dir > 0 ? (t + s) % m_ : (t + m_ - s) % m_);
            } else {
                for (std::int64_t k = static_cast<std::int64_t>(t) + dir; k >= 0 && k < static_cast<std::int64_t>(m_); k += dir)
                    seq.push_back(static_cast<std::size_t>(k));
            }
            if (seq.empty()) continue;
            std::size_t q1 = seq[0];
            double g1 = gap2(t, q1);
            if (g1 > dacc * dacc || comps_[q1].size() > size_t_) continue;
            std::size_t chain = 1, cur = q1;
            double prev = g1;
            for (std::size_t k = 1; k < seq.size(); ++k) {
                std::size_t j = seq[k];
                if (comps_[j].size() > size_t_) continue;
                double d = gap2(cur, j);
                if (d > prev) {
                    ++chain;
                    prev = d;
                    cur = j;
                }
            }
            if (chain + 1 < static_cast<std::size_t>(p_.n_min)) continue;
            if (!grows()) return;
            band(t, q1, dacc, out);
        }
    }

    void band(std::size_t t, std::size_t q1, double dacc, std::vector<std::vector<Cell>>& out) {
        std::vector<std::uint8_t> mask(static_cast<std::size_t>(rect_.size()), 0);
        for (const Cell& c : comps_[t]) mask[at(c.i, c.j)] = 1;
        auto core = open3(mask, rect_.w, rect_.h);
        const auto& f = field(q1);
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < core.size(); ++k)
            if (core[k]) dmin = std::min(dmin, std::sqrt(f[k]));
        if (!std::isfinite(dmin)) return;
        std::vector<std::uint8_t> sel(core.size(), 0);
        for (std::size_t k = 0; k < core.size(); ++k)
            if (core[k] && std::sqrt(f[k]) <= dmin + dacc) sel[k] = 1;
        std::vector<std::int32_t> lab(sel.size());
        int n = label_mask(rect_.w, rect_.h, sel.data(), 8, lab.data());
        std::vector<std::vector<Cell>> pieces(static_cast<std::size_t>(n));
        for (std::int64_t y = 0; y < rect_.h; ++y)
            for (std::int64_t x = 0; x < rect_.w; ++x) {
                std::int32_t l = lab[static_cast<std::size_t>(y * rect_.w + x)];
                if (l >= 0) pieces[static_cast<std::size_t>(l)].push_back({rect_.i0 + x, rect_.j0 + y});
            }
        for (auto& pc : pieces) out.push_back(std::move(pc));
    }

    const GridCompactum& K_;
    const std::vector<FineLevel>& fines_;
    const RegionCells& R_;
    const RelationParams& p_;
    CellWindow rect_;
    LocalCrossing lc_;
    std::vector<std::vector<Cell>> comps_;
    std::vector<std::vector<double>> fields_;
    std::size_t m_ = 0;
    int grow_ = -1;
};

}  // namespace detail

inline constexpr std::int64_t max_fine_cells = std::int64_t{1} << 27;

inline RelationSeed schoenflies_relation(const GridCompactum& K, const RelationParams& p) {
    p.validate();
    RelationSeed seed;
    if (K.empty()) return seed;
    std::vector<detail::FineLevel> fines;
    int depth = K.source ? p.refine_depth : 0;
    std::int64_t b = K.level.base;
    while (depth > 0 && (K.window.size() * ipow(b, 2 * depth) > max_fine_cells || K.level.n + depth > max_level()))
        --depth;
    for (int d = 1; d <= depth; ++d) {
        std::int64_t f = ipow(b, d);
        fines.push_back({rasterize_window(K.source, K.level.finer(d), K.window.scaled(f)), f});
    }
    seed.depth_used = depth;
    auto regions = region_family(K, p);
    seed.regions = regions.size();
    std::vector<std::vector<std::vector<Cell>>> per(regions.size());
    parallel_for(regions.size(), p.jobs, [&](std::size_t k) {
        detail::RegionRelator(K, fines, regions[k], p).run(per[k]);
    });
    for (std::size_t k = 0; k < regions.size(); ++k)
        for (auto& ms : per[k]) {
            seed.merge_sets.push_back(std::move(ms));
            seed.sources.push_back(regions[k].describe());
        }
    return seed;
}

// ---------------------------------------------------------------------------
// Decompositions

struct ClassInfo {
    std::int64_t id = 0;
    std::int64_t size = 0;
    double diameter = 0;
    CellWindow bbox;
};

// Partition of K's cells. Cells are kept in row-major order and class ids are
// the row-major rank of each class's smallest cell.
struct Decomposition {
    Level level;
    std::vector<Cell> cells;
    std::vector<std::int64_t> cls;
    std::vector<ClassInfo> classes;  // ordered by id

    CellWindow window;
    std::vector<std::int64_t> slot;  // window cell -> index into cells, -1 if absent

    std::int64_t index_of(const Cell& c) const {
        if (!window.contains(c.i, c.j)) return -1;
        return slot[static_cast<std::size_t>((c.j - window.j0) * window.w + (c.i - window.i0))];
    }
    std::int64_t class_of(const Cell& c) const {
        std::int64_t k = index_of(c);
        if (k < 0) throw Error("cell not in decomposition");
        return cls[static_cast<std::size_t>(k)];
    }
    const ClassInfo& info(std::int64_t id) const {
        auto it = std::lower_bound(classes.begin(), classes.end(), id,
                                   [](const ClassInfo& c, std::int64_t v) { return c.id < v; });
        if (it == classes.end() || it->id != id) throw Error("unknown class id");
        return *it;
    }
    std::vector<std::vector<Cell>> members() const {
        std::map<std::int64_t, std::size_t> pos;
        for (std::size_t k = 0; k < classes.size(); ++k) pos[classes[k].id] = k;
        std::vector<std::vector<Cell>> out(classes.size());
        for (std::size_t k = 0; k < cells.size(); ++k) out[pos[cls[k]]].push_back(cells[k]);
        return out;
    }
};

// Builds a decomposition from cells and arbitrary per-cell labels; labels are
// canonicalized and class metadata computed.
inline Decomposition make_decomposition(const Level& level, std::vector<Cell> cells,
                                        const std::vector<std::int64_t>& labels) {
    if (cells.size() != labels.size()) throw Error("label count mismatch");
    std::vector<std::size_t> perm(cells.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return row_major_less(cells[a], cells[b]); });
    Decomposition D;
    D.level = level;
    D.cells.reserve(cells.size());
    std::vector<std::int64_t> lab;
    lab.reserve(cells.size());
    for (std::size_t k : perm) {
        if (!D.cells.empty() && D.cells.back() == cells[k]) throw Error("duplicate cell");
        D.cells.push_back(cells[k]);
        lab.push_back(labels[k]);
    }
    std::map<std::int64_t, std::int64_t> canon;
    D.cls.resize(D.cells.size());
    for (std::size_t k = 0; k < D.cells.size(); ++k) {
        auto it = canon.try_emplace(lab[k], static_cast<std::int64_t>(k)).first;
        D.cls[k] = it->second;
    }
    D.window = bounding_window(D.cells);
    if (D.window.w == 0) D.window = {0, 0, 0, 0};
    D.slot.assign(static_cast<std::size_t>(D.window.size()), -1);
    for (std::size_t k = 0; k < D.cells.size(); ++k)
        D.slot[static_cast<std::size_t>((D.cells[k].j - D.window.j0) * D.window.w + (D.cells[k].i - D.window.i0))] =
            static_cast<std::int64_t>(k);
    std::map<std::int64_t, std::vector<Cell>> groups;
    for (std::size_t k = 0; k < D.cells.size(); ++k) groups[D.cls[k]].push_back(D.cells[k]);
    for (auto& [id, members] : groups) {
        ClassInfo ci;
        ci.id = id;
        ci.size = static_cast<std::int64_t>(members.size());
        ci.diameter = diameter(members, level);
        ci.bbox = bounding_window(members);
        D.classes.push_back(ci);
    }
    return D;
}

inline Decomposition singletons(const GridCompactum& K) {
    auto cells = K.cells();
    std::vector<std::int64_t> lab(cells.size());
    std::iota(lab.begin(), lab.end(), std::int64_t{0});
    return make_decomposition(K.level, std::move(cells), lab);
}

struct UnionFind {
    std::vector<std::int64_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::int64_t{0}); }
    std::int64_t find(std::int64_t x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(std::int64_t a, std::int64_t b) {
        a = find(a), b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

inline Decomposition close_equivalence(const GridCompactum& K, const RelationSeed& seed) {
    auto cells = K.cells();
    UnionFind uf(cells.size());
    std::vector<std::int64_t> rank(K.bits.size(), -1);
    for (std::size_t k = 0; k < cells.size(); ++k) rank[K.index(cells[k].i, cells[k].j)] = static_cast<std::int64_t>(k);
    for (const auto& ms : seed.merge_sets) {
        if (ms.empty()) throw Error("empty merge set");
        std::int64_t first = -1;
        for (const Cell& c : ms) {
            if (!K.has(c)) throw Error("seed cell outside the compactum");
            std::int64_t r = rank[K.index(c.i, c.j)];
            if (first < 0)
                first = r;
            else
                uf.unite(first, r);
        }
    }
    std::vector<std::int64_t> lab(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) lab[k] = uf.find(static_cast<std::int64_t>(k));
    return make_decomposition(K.level, std::move(cells), lab);
}

inline Decomposition decompose(const SpecPtr& spec, const Level& level, const RelationParams& p) {
    GridCompactum K = rasterize(spec, level);
    return close_equivalence(K, schoenflies_relation(K, p));
}

// Classes of D merged as seeds again; closing must reproduce D.
inline RelationSeed seed_from(const Decomposition& D) {
    RelationSeed s;
    for (auto& m : D.members()) s.merge_sets.push_back(std::move(m));
    return s;
}

inline void require_same_cells(const Decomposition& a, const Decomposition& b) {
    if (a.level != b.level || a.cells != b.cells) throw Error("decompositions cover different cell sets");
}

inline bool refines(const Decomposition& a, const Decomposition& b) {
    require_same_cells(a, b);
    std::map<std::int64_t, std::int64_t> image;
    for (std::size_t k = 0; k < a.cells.size(); ++k) {
        auto [it, fresh] = image.try_emplace(a.cls[k], b.cls[k]);
        if (!fresh && it->second != b.cls[k]) return false;
    }
    return true;
}

// Each class of a lies in one class of b after ignoring cells within `tol`
// cells (Chebyshev) of that class; the target is the class holding most cells.
inline bool refines_within(const Decomposition& a, const Decomposition& b, std::int64_t tol) {
    require_same_cells(a, b);
    if (tol <= 0) return refines(a, b);
    std::map<std::int64_t, std::map<std::int64_t, std::int64_t>> votes;
    for (std::size_t k = 0; k < a.cells.size(); ++k) ++votes[a.cls[k]][b.cls[k]];
    std::map<std::int64_t, std::int64_t> target;
    for (auto& [ca, m] : votes) {
        std::int64_t best = -1, cnt = -1;
        for (auto& [cb, n] : m)
            if (n > cnt) best = cb, cnt = n;
        target[ca] = best;
    }
    for (std::size_t k = 0; k < a.cells.size(); ++k) {
        std::int64_t want = target[a.cls[k]];
        if (b.cls[k] == want) continue;
        bool near = false;
        const Cell& c = a.cells[k];
        for (std::int64_t dj = -tol; dj <= tol && !near; ++dj)
            for (std::int64_t di = -tol; di <= tol && !near; ++di) {
                std::int64_t q = b.index_of({c.i + di, c.j + dj});
                near = q >= 0 && b.cls[static_cast<std::size_t>(q)] == want;
            }
        if (!near) return false;
    }
    return true;
}

inline bool same_partition(const Decomposition& a, const Decomposition& b) {
    return a.level == b.level && a.cells == b.cells && a.cls == b.cls;
}

inline Decomposition common_refinement(const Decomposition& a, const Decomposition& b) {
    require_same_cells(a, b);
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> ids;
    std::vector<std::int64_t> lab(a.cells.size());
    for (std::size_t k = 0; k < a.cells.size(); ++k)
        lab[k] = ids.try_emplace({a.cls[k], b.cls[k]}, static_cast<std::int64_t>(ids.size())).first->second;
    return make_decomposition(a.level, a.cells, lab);
}

// Components of K inside each column (vertical fibers) or row (horizontal).
inline Decomposition fiber_decomposition(const GridCompactum& K, Axis fibers) {
    auto cells = K.cells();
    std::vector<std::int64_t> lab(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const Cell& c = cells[k];
        // Runs are identified by their first cell along the fiber.
        Cell start = c;
        if (fibers == Axis::vertical)
            while (K.has(start.i, start.j - 1)) --start.j;
        else
            while (K.has(start.i - 1, start.j)) --start.i;
        lab[k] = static_cast<std::int64_t>(K.index(start.i, start.j));
    }
    return make_decomposition(K.level, std::move(cells), lab);
}

inline Decomposition transform(const Decomposition& D, Isometry g) {
    std::vector<Cell> cells;
    cells.reserve(D.cells.size());
    for (const Cell& c : D.cells) cells.push_back(apply(g, c));
    return make_decomposition(D.level, std::move(cells), D.cls);
}

// ---------------------------------------------------------------------------
// Quotient graphs

struct QuotientGraph {
    Level level;
    std::vector<ClassInfo> nodes;
    std::vector<std::pair<std::int64_t, std::int64_t>> edges;  // class ids, first < second
    std::vector<std::int64_t> component;                       // per node
    std::int64_t components = 0;
};

inline QuotientGraph quotient_graph(const Decomposition& D) {
    QuotientGraph G;
    G.level = D.level;
    G.nodes = D.classes;
    std::set<std::pair<std::int64_t, std::int64_t>> e;
    for (std::size_t k = 0; k < D.cells.size(); ++k) {
        const Cell& c = D.cells[k];
        for (std::int64_t dj = 0; dj <= 1; ++dj)
            for (std::int64_t di = -1; di <= 1; ++di) {
                if (dj == 0 && di <= 0) continue;
                std::int64_t q = D.index_of({c.i + di, c.j + dj});
                if (q < 0) continue;
                std::int64_t a = D.cls[k], b = D.cls[static_cast<std::size_t>(q)];
                if (a != b) e.insert({std::min(a, b), std::max(a, b)});
            }
    }
    G.edges.assign(e.begin(), e.end());
    std::map<std::int64_t, std::size_t> pos;
    for (std::size_t k = 0; k < G.nodes.size(); ++k) pos[G.nodes[k].id] = k;
    UnionFind uf(G.nodes.size());
    for (auto& [a, b] : G.edges) uf.unite(static_cast<std::int64_t>(pos[a]), static_cast<std::int64_t>(pos[b]));
    std::map<std::int64_t, std::int64_t> comp;
    for (std::size_t k = 0; k < G.nodes.size(); ++k) {
        auto it = comp.try_emplace(uf.find(static_cast<std::int64_t>(k)), static_cast<std::int64_t>(comp.size())).first;
        G.component.push_back(it->second);
    }
    G.components = static_cast<std::int64_t>(comp.size());
    return G;
}

inline QuotientGraph quotient_graph(const GridCompactum& K, const Decomposition& D) {
    if (K.cells() != D.cells || K.level != D.level) throw Error("decomposition does not partition the compactum");
    return quotient_graph(D);
}

// Shape of a quotient graph after removing dominated vertices (a vertex whose
// closed neighbourhood lies inside a neighbour's) while keeping the two ends
// of a longest BFS path, then contracting chains of degree-2 vertices.
struct ReducedGraph {
    std::int64_t nodes = 0, edges = 0;          // after domination removal
    std::int64_t contracted_nodes = 0, contracted_edges = 0;
    std::pair<std::int64_t, std::int64_t> terminals{-1, -1};
    bool is_path = false;
};

inline ReducedGraph reduce_quotient(const QuotientGraph& G) {
    ReducedGraph out;
    std::size_t n = G.nodes.size();
    if (n == 0) return out;
    std::map<std::int64_t, std::size_t> pos;
    for (std::size_t k = 0; k < n; ++k) pos[G.nodes[k].id] = k;
    std::vector<std::set<std::size_t>> adj(n);
    for (auto& [a, b] : G.edges) {
        adj[pos[a]].insert(pos[b]);
        adj[pos[b]].insert(pos[a]);
    }
    auto bfs_far = [&](std::size_t s) {
        std::vector<std::int64_t> dist(n, -1);
        std::deque<std::size_t> q{s};
        dist[s] = 0;
        std::size_t far = s;
        while (!q.empty()) {
            std::size_t v = q.front();
            q.pop_front();
            if (dist[v] > dist[far] || (dist[v] == dist[far] && v < far)) far = v;
            for (std::size_t u : adj[v])
                if (dist[u] < 0) dist[u] = dist[v] + 1, q.push_back(u);
        }
        return far;
    };
    std::size_t t1 = bfs_far(0), t2 = bfs_far(t1);
    out.terminals = {G.nodes[t1].id, G.nodes[t2].id};
    std::vector<std::uint8_t> alive(n, 1);
    std::set<std::size_t> work;
    for (std::size_t k = 0; k < n; ++k) work.insert(k);
    auto dominated = [&](std::size_t v) {
        for (std::size_t u : adj[v]) {
            bool sub = true;
            for (std::size_t w : adj[v])
                if (w != u && !adj[u].count(w)) {
                    sub = false;
                    break;
                }
            if (sub) return true;
        }
        return false;
    };
    while (!work.empty()) {
        std::size_t v = *work.begin();
        work.erase(work.begin());
        if (!alive[v] || v == t1 || v == t2 || adj[v].empty()) continue;
        if (!dominated(v)) continue;
        alive[v] = 0;
        for (std::size_t u : adj[v]) {
            adj[u].erase(v);
            work.insert(u);
        }
        adj[v].clear();
    }
    std::int64_t nodes = 0, twice_edges = 0;
    for (std::size_t k = 0; k < n; ++k)
        if (alive[k]) ++nodes, twice_edges += static_cast<std::int64_t>(adj[k].size());
    out.nodes = nodes;
    out.edges = twice_edges / 2;
    // Contract degree-2 vertices: each maximal chain becomes one edge.
    std::int64_t keep = 0, deg2 = 0;
    for (std::size_t k = 0; k < n; ++k)
        if (alive[k]) (adj[k].size() == 2 ? deg2 : keep) += 1;
    bool cycle_only = keep == 0 && deg2 > 0;
    out.contracted_nodes = cycle_only ? 1 : keep;
    out.contracted_edges = cycle_only ? 1 : out.edges - deg2;
    // Single component test on the survivors.
    std::vector<std::uint8_t> seen(n, 0);
    std::deque<std::size_t> q{t1};
    seen[t1] = 1;
    std::int64_t reached = 0;
    while (!q.empty()) {
        std::size_t v = q.front();
        q.pop_front();
        ++reached;
        for (std::size_t u : adj[v])
            if (!seen[u]) seen[u] = 1, q.push_back(u);
    }
    bool connected = reached == nodes;
    bool max2 = true;
    for (std::size_t k = 0; k < n; ++k)
        if (alive[k] && adj[k].size() > 2) max2 = false;
    out.is_path = connected && max2 && out.edges == nodes - 1;
    return out;
}

// ---------------------------------------------------------------------------
// Checks

struct MonotoneReport {
    std::vector<std::int64_t> disconnected;  // class ids that are not 8-connected
    bool all_connected = true;
    std::int64_t quotient_components = 0;
    std::int64_t compactum_components = 0;
    bool components_match = true;
};

inline MonotoneReport monotone_check(const GridCompactum& K, const Decomposition& D) {
    MonotoneReport r;
    QuotientGraph G = quotient_graph(K, D);
    auto members = D.members();
    for (std::size_t k = 0; k < members.size(); ++k) {
        const auto& cells = members[k];
        if (cells.size() <= 1) continue;
        CellWindow w = bounding_window(cells);
        std::vector<std::uint8_t> mask(static_cast<std::size_t>(w.size()), 0);
        for (const Cell& c : cells) mask[static_cast<std::size_t>((c.j - w.j0) * w.w + c.i - w.i0)] = 1;
        std::vector<std::int32_t> lab(mask.size());
        if (label_mask(w.w, w.h, mask.data(), 8, lab.data()) != 1) r.disconnected.push_back(D.classes[k].id);
    }
    r.all_connected = r.disconnected.empty();
    r.quotient_components = G.components;
    r.compactum_components = static_cast<std::int64_t>(label_components(K, 8).count());
    r.components_match = r.quotient_components == r.compactum_components;
    return r;
}

struct PeanoLevel {
    int level = 0;
    std::vector<std::int64_t> big_components;  // per threshold: quotient components with diameter >= C
    std::int64_t scan_max_count = 0;           // largest crossing count on the representative raster
};

struct PeanoReport {
    std::vector<double> thresholds;
    std::vector<PeanoLevel> levels;
    std::vector<bool> stable;           // per threshold: counts equal over the last two levels
    std::vector<std::int64_t> divergent_strips;  // on representative rasters across levels
    bool consistent = false;
};

// Representative raster: singleton classes keep their cell, every other class
// shrinks to its smallest cell.
inline GridCompactum representative_raster(const Decomposition& D) {
    std::vector<Cell> keep;
    std::set<std::int64_t> done;
    for (std::size_t k = 0; k < D.cells.size(); ++k)
        if (done.insert(D.cls[k]).second) keep.push_back(D.cells[k]);
    CellWindow w = D.window.w > 0 ? D.window : CellWindow{0, 0, 1, 1};
    return from_cells(keep, D.level, &w);
}

inline PeanoReport peano_check(const std::vector<Decomposition>& per_level, const std::vector<double>& thresholds,
                               int divergence_window = 3) {
    PeanoReport r;
    r.thresholds = thresholds;
    if (per_level.empty()) return r;
    std::vector<GridCompactum> reps;
    for (const Decomposition& D : per_level) {
        QuotientGraph G = quotient_graph(D);
        std::map<std::int64_t, std::size_t> pos;
        for (std::size_t k = 0; k < G.nodes.size(); ++k) pos[G.nodes[k].id] = k;
        std::vector<std::vector<Cell>> comp_cells(static_cast<std::size_t>(G.components));
        for (std::size_t k = 0; k < D.cells.size(); ++k)
            comp_cells[static_cast<std::size_t>(G.component[pos[D.cls[k]]])].push_back(D.cells[k]);
        PeanoLevel pl;
        pl.level = D.level.n;
        for (double C : thresholds) {
            std::int64_t n = 0;
            for (const auto& cc : comp_cells)
                if (!cc.empty() && diameter(cc, D.level) >= C) ++n;
            pl.big_components.push_back(n);
        }
        r.levels.push_back(pl);
        reps.push_back(representative_raster(D));
    }
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
        std::size_t L = r.levels.size();
        r.stable.push_back(L < 2 || r.levels[L - 1].big_components[t] == r.levels[L - 2].big_components[t]);
    }
    // Strips aligned at the coarsest level, counted on every level's representative raster.
    const Decomposition& first = per_level.front();
    CellWindow w0 = first.window.w > 0 ? first.window : CellWindow{0, 0, 1, 1};
    Box bbox = w0.box(first.level);
    SetSpec frame;
    frame.bbox = bbox;
    frame.base = first.level.base;
    auto strips = auto_strips(frame, first.level);
    std::vector<std::vector<std::int64_t>> counts(strips.size());
    for (std::size_t l = 0; l < reps.size(); ++l) {
        std::int64_t mx = 0;
        for (std::size_t s = 0; s < strips.size(); ++s) {
            RegionCells R = resolve(reps[l], strips[s], 1);
            std::int64_t c = count_crossings(reps[l], R, Mode::intersection);
            counts[s].push_back(c);
            mx = std::max(mx, c);
        }
        r.levels[l].scan_max_count = mx;
    }
    for (std::size_t s = 0; s < strips.size(); ++s)
        if (diverges(counts[s], divergence_window)) r.divergent_strips.push_back(static_cast<std::int64_t>(s));
    r.consistent = r.divergent_strips.empty() &&
                   std::all_of(r.stable.begin(), r.stable.end(), [](bool b) { return b; });
    return r;
}

}  // namespace pcx

#endif  // PCX_DECOMPOSITION_HPP
