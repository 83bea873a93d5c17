// SPDX-FileCopyrightText: 2026 pcx contributors
// SPDX-License-Identifier: Apache-2.0
//
// Lattice primitives shared by every pcx module: levels, boxes, cell windows,
// grid isometries and a deterministic parallel loop.

#ifndef PCX_CORE_HPP
#define PCX_CORE_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace pcx {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input files.
struct ParseError : Error {
    using Error::Error;
};

inline int max_level() {
    if (const char* env = std::getenv("PCX_MAX_LEVEL")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 0 && v <= 40) return static_cast<int>(v);
    }
    return 12;
}

inline std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

struct Level {
    int n = 0;
    int base = 2;

    double cell_size() const { return 1.0 / static_cast<double>(ipow(base, n)); }
    std::int64_t cells_per_unit() const { return ipow(base, n); }
    // Lattice coordinate k as a scene coordinate; exact whenever k / b^n is representable.
    double coord(std::int64_t k) const { return static_cast<double>(k) / static_cast<double>(ipow(base, n)); }
    Level finer(int k = 1) const { return {n + k, base}; }

    void validate() const {
        if (base != 2 && base != 3) throw Error("base must be 2 or 3");
        if (n < 0) throw Error("negative level");
        if (n > max_level())
            throw Error("depth exceeded: level " + std::to_string(n) + " > max " +
                        std::to_string(max_level()));
    }
    bool operator==(const Level&) const = default;
};

// Closed axis-aligned box in scene units.
struct Box {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    bool operator==(const Box&) const = default;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

struct Cell {
    std::int64_t i = 0, j = 0;
    bool operator==(const Cell&) const = default;
};

// Row-major order: by j, then by i.
inline bool row_major_less(const Cell& a, const Cell& b) {
    return a.j != b.j ? a.j < b.j : a.i < b.i;
}

// Value * scale snapped to the nearest integer when it is within rounding noise.
inline double snap_scaled(double v, double scale) {
    double s = v * scale;
    double r = std::nearbyint(s);
    if (std::fabs(s - r) < 1e-7 * std::max(1.0, std::fabs(s))) return r;
    return s;
}

// Rectangle of cells [i0, i0+w) x [j0, j0+h) at some level.
struct CellWindow {
    std::int64_t i0 = 0, j0 = 0;
    std::int64_t w = 0, h = 0;

    bool operator==(const CellWindow&) const = default;
    std::int64_t size() const { return w * h; }
    bool contains(std::int64_t i, std::int64_t j) const {
        return i >= i0 && i < i0 + w && j >= j0 && j < j0 + h;
    }
    CellWindow scaled(std::int64_t f) const { return {i0 * f, j0 * f, w * f, h * f}; }
    CellWindow expanded(std::int64_t dx, std::int64_t dy) const {
        return {i0 - dx, j0 - dy, w + 2 * dx, h + 2 * dy};
    }
    Box box(const Level& lv) const {
        return {lv.coord(i0), lv.coord(j0), lv.coord(i0 + w), lv.coord(j0 + h)};
    }
};

// Outward snap of a box to the lattice of a level; never empty.
inline CellWindow snap_window(const Box& b, const Level& lv) {
    double s = static_cast<double>(lv.cells_per_unit());
    auto i0 = static_cast<std::int64_t>(std::floor(snap_scaled(b.x0, s)));
    auto i1 = static_cast<std::int64_t>(std::ceil(snap_scaled(b.x1, s)));
    auto j0 = static_cast<std::int64_t>(std::floor(snap_scaled(b.y0, s)));
    auto j1 = static_cast<std::int64_t>(std::ceil(snap_scaled(b.y1, s)));
    if (i1 <= i0) i1 = i0 + 1;
    if (j1 <= j0) j1 = j0 + 1;
    return {i0, j0, i1 - i0, j1 - j0};
}

inline Box cell_box(const Cell& c, const Level& lv) {
    return {lv.coord(c.i), lv.coord(c.j), lv.coord(c.i + 1), lv.coord(c.j + 1)};
}

// The eight symmetries of the square lattice, as linear maps about the origin.
enum class Isometry { identity, rot90, rot180, rot270, flip_x, flip_y, transpose, antitranspose };

inline constexpr std::array<Isometry, 8> all_isometries = {
    Isometry::identity, Isometry::rot90,  Isometry::rot180,    Isometry::rot270,
    Isometry::flip_x,   Isometry::flip_y, Isometry::transpose, Isometry::antitranspose};

inline const char* to_string(Isometry g) {
    switch (g) {
        case Isometry::identity: return "identity";
        case Isometry::rot90: return "rot90";
        case Isometry::rot180: return "rot180";
        case Isometry::rot270: return "rot270";
        case Isometry::flip_x: return "flip_x";
        case Isometry::flip_y: return "flip_y";
        case Isometry::transpose: return "transpose";
        case Isometry::antitranspose: return "antitranspose";
    }
    return "?";
}

template <class T>
inline std::array<T, 2> apply(Isometry g, T x, T y) {
    switch (g) {
        case Isometry::identity: return {x, y};
        case Isometry::rot90: return {-y, x};
        case Isometry::rot180: return {-x, -y};
        case Isometry::rot270: return {y, -x};
        case Isometry::flip_x: return {-x, y};
        case Isometry::flip_y: return {x, -y};
        case Isometry::transpose: return {y, x};
        case Isometry::antitranspose: return {-y, -x};
    }
    return {x, y};
}

inline Isometry inverse(Isometry g) {
    if (g == Isometry::rot90) return Isometry::rot270;
    if (g == Isometry::rot270) return Isometry::rot90;
    return g;
}

inline Box apply(Isometry g, const Box& b) {
    auto p = apply(g, b.x0, b.y0);
    auto q = apply(g, b.x1, b.y1);
    return {std::min(p[0], q[0]), std::min(p[1], q[1]), std::max(p[0], q[0]),
            std::max(p[1], q[1])};
}

// Cells map through their doubled centers, which stay odd under every isometry.
inline Cell apply(Isometry g, const Cell& c) {
    auto p = apply<std::int64_t>(g, 2 * c.i + 1, 2 * c.j + 1);
    return {(p[0] - 1) / 2, (p[1] - 1) / 2};
}

inline CellWindow apply(Isometry g, const CellWindow& w) {
    Cell a = apply(g, Cell{w.i0, w.j0});
    Cell b = apply(g, Cell{w.i0 + w.w - 1, w.j0 + w.h - 1});
    std::int64_t i0 = std::min(a.i, b.i), j0 = std::min(a.j, b.j);
    return {i0, j0, std::max(a.i, b.i) - i0 + 1, std::max(a.j, b.j) - j0 + 1};
}

// Runs fn(k) for k in [0, n) on up to `jobs` threads. Callers write results into
// slot k, so output never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t k = next.fetch_add(1);
                if (k >= n) return;
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(n);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace pcx

#endif  // PCX_CORE_HPP
