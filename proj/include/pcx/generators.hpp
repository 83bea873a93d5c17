// SPDX-FileCopyrightText: 2026 pcx contributors
// SPDX-License-Identifier: Apache-2.0
//
// Built-in compacta as box oracles.
//
// Two intersection conventions are used. Sets that are finite unions of
// segments, disks and boxes answer for the closed query box. Cantor-type sets
// (comb teeth, dust, carpet) and bitmaps answer for the open query box, so a
// tooth sitting on a lattice line does not claim both neighbouring columns.

#ifndef PCX_GENERATORS_HPP
#define PCX_GENERATORS_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pcx/grid.hpp"

namespace pcx {

struct GeneratorParams {
    std::string name;
    std::map<std::string, double> values;
    std::uint64_t seed = 0;

    double get(const std::string& key, double fallback) const {
        auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    }
};

inline const std::vector<std::string>& generator_names() {
    static const std::vector<std::string> names = {
        "cantor_comb", "topologist_sine", "spiral_disk", "sierpinski_carpet",
        "cantor_dust", "unit_square",     "bars",        "random_blobs"};
    return names;
}

namespace ternary {

inline constexpr int digits = 24;
inline constexpr std::int64_t scale = 282429536481;  // 3^24

// Scene coordinate to the scale lattice, rounding toward the given direction
// unless already within noise of a lattice point.
inline std::int64_t to_lattice(double v, bool up) {
    double s = snap_scaled(v, static_cast<double>(scale));
    return static_cast<std::int64_t>(up ? std::ceil(s) : std::floor(s));
}

// Smallest integer >= a whose ternary digits avoid 1, i.e. the left end of the
// first finest-level Cantor interval starting at or after a. 0 <= a < scale.
inline std::int64_t next_cantor_ge(std::int64_t a) {
    std::array<int, digits> d{};
    std::int64_t v = a;
    for (int k = digits - 1; k >= 0; --k) {
        d[static_cast<std::size_t>(k)] = static_cast<int>(v % 3);
        v /= 3;
    }
    for (int k = 0; k < digits; ++k) {
        if (d[static_cast<std::size_t>(k)] == 1) {
            d[static_cast<std::size_t>(k)] = 2;
            for (int r = k + 1; r < digits; ++r) d[static_cast<std::size_t>(r)] = 0;
            break;
        }
    }
    std::int64_t out = 0;
    for (int k = 0; k < digits; ++k) out = out * 3 + d[static_cast<std::size_t>(k)];
    return out;
}

// Does the open interval (x0, x1) meet the middle-thirds Cantor set?
inline bool cantor_meets_open(double x0, double x1) {
    std::int64_t a = std::max<std::int64_t>(to_lattice(x0, false), 0);
    std::int64_t b = std::min<std::int64_t>(to_lattice(x1, true), scale);
    if (a >= b || a >= scale) return false;
    return next_cantor_ge(a) < b;
}

// Does the open rectangle meet the Sierpinski carpet? Coordinates on the scale
// lattice, rectangle [x0,x1) x [y0,y1) against square (sx, sy, side).
inline bool carpet_meets(std::int64_t x0, std::int64_t x1, std::int64_t y0, std::int64_t y1,
                         std::int64_t sx, std::int64_t sy, std::int64_t side) {
    x0 = std::max(x0, sx), y0 = std::max(y0, sy);
    x1 = std::min(x1, sx + side), y1 = std::min(y1, sy + side);
    if (x0 >= x1 || y0 >= y1) return false;
    if (side == 1) return true;
    std::int64_t t = side / 3;
    for (int q = 0; q < 9; ++q) {
        if (q == 4) continue;
        std::int64_t cx = sx + (q % 3) * t, cy = sy + (q / 3) * t;
        if (x0 <= cx && x1 >= cx + t && y0 <= cy && y1 >= cy + t) return true;
        if (carpet_meets(x0, x1, y0, y1, cx, cy, t)) return true;
    }
    return false;
}

}  // namespace ternary

namespace shapes {

inline bool open_overlap(double a0, double a1, double b0, double b1) { return a0 < b1 && b0 < a1; }

inline bool closed_overlap(double a0, double a1, double b0, double b1) { return a0 <= b1 && b0 <= a1; }

// Closed box against the closed segment p-q (Liang-Barsky clipping).
inline bool segment_meets_box(double px, double py, double qx, double qy, const Box& b) {
    double t0 = 0, t1 = 1;
    double dx = qx - px, dy = qy - py;
    auto clip = [&](double p, double q) {
        if (p == 0) return q >= 0;
        double r = q / p;
        if (p < 0) {
            if (r > t1) return false;
            if (r > t0) t0 = r;
        } else {
            if (r < t0) return false;
            if (r < t1) t1 = r;
        }
        return true;
    };
    return clip(-dx, px - b.x0) && clip(dx, b.x1 - px) && clip(-dy, py - b.y0) &&
           clip(dy, b.y1 - py);
}

// Range of sin over [t0, t1].
inline std::pair<double, double> sin_range(double t0, double t1) {
    double lo = std::min(std::sin(t0), std::sin(t1));
    double hi = std::max(std::sin(t0), std::sin(t1));
    const double pi = std::numbers::pi;
    double k = std::ceil((t0 - pi / 2) / (2 * pi));
    if (pi / 2 + 2 * pi * k <= t1) hi = 1;
    k = std::ceil((t0 + pi / 2) / (2 * pi));
    if (-pi / 2 + 2 * pi * k <= t1) lo = -1;
    return {lo, hi};
}

// Polyline with a bounding-volume tree over contiguous runs of segments.
class Polyline {
public:
    Polyline(std::vector<double> xs, std::vector<double> ys, double tolerance)
        : xs_(std::move(xs)), ys_(std::move(ys)), tol_(tolerance) {
        std::size_t segs = xs_.size() > 1 ? xs_.size() - 1 : 0;
        leaves_ = (segs + leaf_size - 1) / leaf_size;
        std::size_t cap = 1;
        while (cap < leaves_) cap *= 2;
        cap_ = cap;
        nodes_.assign(2 * cap_, Box{1, 1, -1, -1});
        for (std::size_t l = 0; l < leaves_; ++l) {
            Box b{xs_[l * leaf_size], ys_[l * leaf_size], xs_[l * leaf_size], ys_[l * leaf_size]};
            std::size_t end = std::min(segs, (l + 1) * leaf_size);
            for (std::size_t k = l * leaf_size; k <= end; ++k) {
                b.x0 = std::min(b.x0, xs_[k]), b.x1 = std::max(b.x1, xs_[k]);
                b.y0 = std::min(b.y0, ys_[k]), b.y1 = std::max(b.y1, ys_[k]);
            }
            nodes_[cap_ + l] = b;
        }
        for (std::size_t k = cap_ - 1; k >= 1; --k) nodes_[k] = merge(nodes_[2 * k], nodes_[2 * k + 1]);
    }

    bool meets(const Box& q) const {
        if (leaves_ == 0) return false;
        Box e{q.x0 - tol_, q.y0 - tol_, q.x1 + tol_, q.y1 + tol_};
        std::size_t stack[64];
        std::size_t top = 0;
        stack[top++] = 1;
        std::size_t segs = xs_.size() - 1;
        while (top > 0) {
            std::size_t k = stack[--top];
            const Box& b = nodes_[k];
            if (b.x0 > b.x1 || b.x1 < e.x0 || b.x0 > e.x1 || b.y1 < e.y0 || b.y0 > e.y1) continue;
            if (k >= cap_) {
                std::size_t l = k - cap_;
                std::size_t end = std::min(segs, (l + 1) * leaf_size);
                for (std::size_t s = l * leaf_size; s < end; ++s)
                    if (segment_meets_box(xs_[s], ys_[s], xs_[s + 1], ys_[s + 1], e)) return true;
                continue;
            }
            stack[top++] = 2 * k + 1;
            stack[top++] = 2 * k;
        }
        return false;
    }

private:
    static constexpr std::size_t leaf_size = 16;
    static Box merge(const Box& a, const Box& b) {
        if (a.x0 > a.x1) return b;
        if (b.x0 > b.x1) return a;
        return {std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1),
                std::max(a.y1, b.y1)};
    }
    std::vector<double> xs_, ys_;
    double tol_;
    std::size_t leaves_ = 0, cap_ = 1;
    std::vector<Box> nodes_;
};

}  // namespace shapes

inline SpecPtr make_spec_from(std::string name, Box bbox, int base,
                              std::function<Hit(const Box&)> oracle) {
    auto s = std::make_shared<SetSpec>();
    s->name = std::move(name);
    s->bbox = bbox;
    s->base = base;
    s->oracle = std::move(oracle);
    return s;
}

inline SpecPtr unit_square() {
    return make_spec_from("unit_square", {0, 0, 1, 1}, 2, [](const Box& b) {
        if (!shapes::closed_overlap(b.x0, b.x1, 0, 1) || !shapes::closed_overlap(b.y0, b.y1, 0, 1))
            return Hit::disjoint;
        if (b.x0 >= 0 && b.x1 <= 1 && b.y0 >= 0 && b.y1 <= 1) return Hit::covered;
        return Hit::intersects;
    });
}

// Cantor set times [0,1], plus the segment [0,1] x {1}.
inline SpecPtr cantor_comb() {
    return make_spec_from("cantor_comb", {0, 0, 1, 1}, 3, [](const Box& b) {
        bool bar = shapes::closed_overlap(b.x0, b.x1, 0, 1) && b.y0 <= 1 && 1 <= b.y1;
        if (bar) return Hit::intersects;
        bool teeth = shapes::open_overlap(b.y0, b.y1, 0, 1) && ternary::cantor_meets_open(b.x0, b.x1);
        return teeth ? Hit::intersects : Hit::disjoint;
    });
}

inline SpecPtr cantor_dust() {
    return make_spec_from("cantor_dust", {0, 0, 1, 1}, 3, [](const Box& b) {
        return ternary::cantor_meets_open(b.x0, b.x1) && ternary::cantor_meets_open(b.y0, b.y1)
                   ? Hit::intersects
                   : Hit::disjoint;
    });
}

inline SpecPtr sierpinski_carpet() {
    return make_spec_from("sierpinski_carpet", {0, 0, 1, 1}, 3, [](const Box& b) {
        using namespace ternary;
        bool hit = carpet_meets(to_lattice(b.x0, false), to_lattice(b.x1, true),
                                to_lattice(b.y0, false), to_lattice(b.y1, true), 0, 0, scale);
        return hit ? Hit::intersects : Hit::disjoint;
    });
}

// Closure of the graph of sin(1/x) on (0,1]: the curve plus {0} x [-1,1].
inline SpecPtr topologist_sine() {
    return make_spec_from("topologist_sine", {0, -1, 1, 1}, 2, [](const Box& b) {
        if (b.x0 > 1 || b.x1 < 0 || b.y0 > 1 || b.y1 < -1) return Hit::disjoint;
        if (b.x0 <= 0) return Hit::intersects;  // meets the limit bar
        double xhi = std::min(b.x1, 1.0);
        auto [lo, hi] = shapes::sin_range(1.0 / xhi, 1.0 / b.x0);
        return (hi >= b.y0 && lo <= b.y1) ? Hit::intersects : Hit::disjoint;
    });
}

// Closed unit disk plus the curve (1 + e^-t) e^(2 pi i t), t in [0, t_max].
inline SpecPtr spiral_disk(double t_max = 40.0, double step = 2e-4, double tolerance = 2e-6) {
    if (!(t_max > 0) || !(step > 0) || !(tolerance >= 0)) throw Error("invalid spiral parameters");
    auto count = static_cast<std::size_t>(std::ceil(t_max / step));
    std::vector<double> xs(count + 1), ys(count + 1);
    for (std::size_t k = 0; k <= count; ++k) {
        double t = std::min(t_max, static_cast<double>(k) * step);
        double r = 1 + std::exp(-t);
        xs[k] = r * std::cos(2 * std::numbers::pi * t);
        ys[k] = r * std::sin(2 * std::numbers::pi * t);
    }
    auto curve = std::make_shared<shapes::Polyline>(std::move(xs), std::move(ys), tolerance);
    return make_spec_from("spiral_disk", {-2, -2, 2, 2}, 2, [curve](const Box& b) {
        auto nearest = [](double lo, double hi) { return lo <= 0 && 0 <= hi ? 0.0 : std::min(std::fabs(lo), std::fabs(hi)); };
        double nx = nearest(b.x0, b.x1), ny = nearest(b.y0, b.y1);
        if (nx * nx + ny * ny <= 1) {
            double fx = std::max(std::fabs(b.x0), std::fabs(b.x1));
            double fy = std::max(std::fabs(b.y0), std::fabs(b.y1));
            return fx * fx + fy * fy <= 1 ? Hit::covered : Hit::intersects;
        }
        return curve->meets(b) ? Hit::intersects : Hit::disjoint;
    });
}

// Closed boxes; covered when the query lies inside one of them.
inline SpecPtr boxes_spec(std::string name, std::vector<Box> boxes, Box bbox) {
    bool none = boxes.empty();
    auto spec = make_spec_from(std::move(name), bbox, 2, [boxes = std::move(boxes)](const Box& q) {
        bool any = false;
        for (const Box& r : boxes) {
            if (!shapes::closed_overlap(q.x0, q.x1, r.x0, r.x1) ||
                !shapes::closed_overlap(q.y0, q.y1, r.y0, r.y1))
                continue;
            if (q.x0 >= r.x0 && q.x1 <= r.x1 && q.y0 >= r.y0 && q.y1 <= r.y1) return Hit::covered;
            any = true;
        }
        return any ? Hit::intersects : Hit::disjoint;
    });
    if (none) std::const_pointer_cast<SetSpec>(spec)->empty = true;
    return spec;
}

// `count` vertical bars of width `width` spread evenly over [0,1], full height.
inline SpecPtr bars(int count = 3, double width = 0.1) {
    if (count < 0 || count > 1000 || !(width > 0) || width * count > 1)
        throw Error("invalid bars parameters");
    std::vector<Box> boxes;
    for (int k = 0; k < count; ++k) {
        double c = (k + 0.5) / count;
        boxes.push_back({c - width / 2, 0, c + width / 2, 1});
    }
    return boxes_spec("bars", std::move(boxes), {0, 0, 1, 1});
}

struct RandomParams {
    int blobs = 6;          // free rectangles
    int spanning_bars = 0;  // vertical bars with y in [0,1]
    double min_size = 0.03;
    double max_size = 0.3;
};

// Unit interval double from the top 53 bits.
inline double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline SpecPtr random_compactum(std::uint64_t seed, const RandomParams& p = {}) {
    if (p.blobs < 0 || p.spanning_bars < 0 || !(p.min_size > 0) || p.max_size < p.min_size ||
        p.max_size > 1)
        throw Error("invalid random_compactum parameters");
    std::mt19937_64 rng(seed);
    std::vector<Box> boxes;
    for (int k = 0; k < p.spanning_bars; ++k) {
        double w = p.min_size * 0.5 + unit_double(rng) * p.min_size;
        double x = unit_double(rng) * (1 - w);
        boxes.push_back({x, 0, x + w, 1});
    }
    for (int k = 0; k < p.blobs; ++k) {
        double w = p.min_size + unit_double(rng) * (p.max_size - p.min_size);
        double h = p.min_size + unit_double(rng) * (p.max_size - p.min_size);
        // Alternate between squat blobs and thin bars.
        if (unit_double(rng) < 0.5) (unit_double(rng) < 0.5 ? w : h) *= 0.15;
        double x = unit_double(rng) * (1 - w), y = unit_double(rng) * (1 - h);
        boxes.push_back({x, y, x + w, y + h});
    }
    return boxes_spec("random_blobs", std::move(boxes), {0, 0, 1, 1});
}

// Applies a lattice isometry to a spec: the new set is g(S).
inline SpecPtr transform_spec(const SpecPtr& spec, Isometry g) {
    auto s = std::make_shared<SetSpec>(*spec);
    s->name = spec->name + "@" + to_string(g);
    s->bbox = apply(g, spec->bbox);
    Isometry inv = inverse(g);
    s->oracle = [inner = spec->oracle, inv](const Box& b) { return inner(apply(inv, b)); };
    return s;
}

// ---------------------------------------------------------------------------
// Bitmaps

struct Bitmap {
    std::int64_t width = 0, height = 0;
    std::vector<std::uint8_t> black;  // row-major, row 0 at the top
};

inline Bitmap parse_pbm(const std::string& data) {
    std::size_t pos = 0;
    auto skip_space = [&] {
        for (;;) {
            while (pos < data.size() && std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
            if (pos < data.size() && data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
                continue;
            }
            return;
        }
    };
    auto read_int = [&] {
        skip_space();
        if (pos >= data.size() || !std::isdigit(static_cast<unsigned char>(data[pos])))
            throw ParseError("pbm: expected integer");
        std::int64_t v = 0;
        while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) {
            v = v * 10 + (data[pos++] - '0');
            if (v > (1 << 20)) throw ParseError("pbm: dimension too large");
        }
        return v;
    };
    if (data.size() < 2 || data[0] != 'P' || (data[1] != '1' && data[1] != '4'))
        throw ParseError("pbm: bad magic");
    bool ascii = data[1] == '1';
    pos = 2;
    Bitmap bm;
    bm.width = read_int();
    bm.height = read_int();
    if (bm.width <= 0 || bm.height <= 0) throw ParseError("pbm: empty image");
    bm.black.assign(static_cast<std::size_t>(bm.width * bm.height), 0);
    if (ascii) {
        for (auto& px : bm.black) {
            skip_space();
            if (pos >= data.size()) throw ParseError("pbm: truncated");
            char c = data[pos++];
            if (c != '0' && c != '1') throw ParseError("pbm: bad pixel");
            px = c == '1';
        }
    } else {
        if (pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[pos])))
            throw ParseError("pbm: missing separator");
        ++pos;
        std::int64_t stride = (bm.width + 7) / 8;
        if (static_cast<std::int64_t>(data.size() - pos) < stride * bm.height) throw ParseError("pbm: truncated");
        for (std::int64_t r = 0; r < bm.height; ++r)
            for (std::int64_t x = 0; x < bm.width; ++x) {
                auto byte = static_cast<unsigned char>(data[pos + static_cast<std::size_t>(r * stride + x / 8)]);
                bm.black[static_cast<std::size_t>(r * bm.width + x)] = (byte >> (7 - x % 8)) & 1;
            }
    }
    return bm;
}

// Pixels become the cells of the smallest dyadic level covering the width;
// row 0 of the image is the top row of the unit square.
inline SpecPtr from_bitmap(const Bitmap& bm, std::string name = "pbm") {
    int n = 0;
    while ((std::int64_t{1} << n) < bm.width) ++n;
    std::int64_t side = std::int64_t{1} << n;
    if (bm.height > side) throw ParseError("pbm: image taller than its padded square");
    // prefix[(j)*(W+1)+i] counts black pixels with cell coords < (i, j).
    std::int64_t W = side, H = side;
    auto prefix = std::make_shared<std::vector<std::int64_t>>(static_cast<std::size_t>((W + 1) * (H + 1)), 0);
    std::int64_t total = 0;
    for (std::int64_t j = 0; j < H; ++j)
        for (std::int64_t i = 0; i < W; ++i) {
            std::int64_t r = bm.height - 1 - j;
            std::int64_t v = (i < bm.width && r >= 0 && j < bm.height)
                                 ? bm.black[static_cast<std::size_t>(r * bm.width + i)]
                                 : 0;
            total += v;
            auto at = [&](std::int64_t a, std::int64_t b) -> std::int64_t& {
                return (*prefix)[static_cast<std::size_t>(b * (W + 1) + a)];
            };
            at(i + 1, j + 1) = v + at(i, j + 1) + at(i + 1, j) - at(i, j);
        }
    auto spec = make_spec_from(std::move(name), {0, 0, 1, 1}, 2, [prefix, W, H](const Box& b) {
        double s = static_cast<double>(W);
        auto lo = [&](double v) { return static_cast<std::int64_t>(std::floor(snap_scaled(v, s))); };
        auto hi = [&](double v) { return static_cast<std::int64_t>(std::ceil(snap_scaled(v, s))); };
        std::int64_t i0 = lo(b.x0), i1 = hi(b.x1), j0 = lo(b.y0), j1 = hi(b.y1);
        if (i1 == i0) ++i1;  // degenerate boxes behave like their open neighbourhood
        if (j1 == j0) ++j1;
        std::int64_t ci0 = std::clamp<std::int64_t>(i0, 0, W), ci1 = std::clamp<std::int64_t>(i1, 0, W);
        std::int64_t cj0 = std::clamp<std::int64_t>(j0, 0, H), cj1 = std::clamp<std::int64_t>(j1, 0, H);
        if (ci0 >= ci1 || cj0 >= cj1) return Hit::disjoint;
        auto at = [&](std::int64_t a, std::int64_t c) { return (*prefix)[static_cast<std::size_t>(c * (W + 1) + a)]; };
        std::int64_t k = at(ci1, cj1) - at(ci0, cj1) - at(ci1, cj0) + at(ci0, cj0);
        if (k == 0) return Hit::disjoint;
        if (ci0 == i0 && ci1 == i1 && cj0 == j0 && cj1 == j1 && k == (i1 - i0) * (j1 - j0))
            return Hit::covered;
        return Hit::intersects;
    });
    auto mut = std::const_pointer_cast<SetSpec>(spec);
    mut->empty = total == 0;
    return spec;
}

// Native level of a bitmap spec: smallest n with 2^n >= width.
inline int bitmap_level(const Bitmap& bm) {
    int n = 0;
    while ((std::int64_t{1} << n) < bm.width) ++n;
    return n;
}

inline SpecPtr from_pbm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_bitmap(parse_pbm(ss.str()), path);
}

inline SpecPtr make_spec(const GeneratorParams& p) {
    const std::string& n = p.name;
    if (n == "cantor_comb") return cantor_comb();
    if (n == "topologist_sine") return topologist_sine();
    if (n == "spiral_disk")
        return spiral_disk(p.get("t_max", 40.0), p.get("step", 2e-4), p.get("tolerance", 2e-6));
    if (n == "sierpinski_carpet") return sierpinski_carpet();
    if (n == "cantor_dust") return cantor_dust();
    if (n == "unit_square") return unit_square();
    if (n == "bars") return bars(static_cast<int>(p.get("count", 3)), p.get("width", 0.1));
    if (n == "random_blobs") {
        RandomParams rp;
        rp.blobs = static_cast<int>(p.get("blobs", rp.blobs));
        rp.spanning_bars = static_cast<int>(p.get("spanning_bars", rp.spanning_bars));
        rp.min_size = p.get("min_size", rp.min_size);
        rp.max_size = p.get("max_size", rp.max_size);
        return random_compactum(p.seed, rp);
    }
    throw Error("unknown generator: " + n);
}

inline SpecPtr make_spec(const std::string& name) { return make_spec(GeneratorParams{name, {}, 0}); }

}  // namespace pcx

#endif  // PCX_GENERATORS_HPP
