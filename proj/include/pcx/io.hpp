// SPDX-FileCopyrightText: 2026 pcx contributors
// SPDX-License-Identifier: Apache-2.0
//
// JSON reports, PBM output and SVG rendering.

#ifndef PCX_IO_HPP
#define PCX_IO_HPP

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcx/decomposition.hpp"
#include "pcx/grid.hpp"
#include "pcx/schoenflies.hpp"

namespace pcx {

using json = nlohmann::json;  // std::map backed, so keys come out sorted

inline constexpr const char* schema_tag = "pcx/1";

inline json box_json(const Box& b) { return json::array({b.x0, b.y0, b.x1, b.y1}); }

inline json header(const std::string& kind, const Level& level) {
    return {{"schema", schema_tag}, {"kind", kind}, {"level", level.n}, {"base", level.base},
            {"cell_size", level.cell_size()}};
}

inline json cells_json(const std::vector<Cell>& cells) {
    json a = json::array();
    for (const Cell& c : cells) a.push_back({c.i, c.j});
    return a;
}

inline json labeling_json(const ComponentLabeling& L, const std::string& spec, bool complement) {
    json j = header(complement ? "complement_components" : "components", L.level);
    j["spec"] = spec;
    j["connectivity"] = L.connectivity;
    j["count"] = L.count();
    json comps = json::array();
    for (std::size_t k = 0; k < L.meta.size(); ++k) {
        const auto& m = L.meta[k];
        json c = {{"id", k},
                  {"size", m.size},
                  {"bbox", box_json(m.bbox.box(L.level))},
                  {"diameter", m.diameter},
                  {"touches", {{"left", m.touches_left}, {"right", m.touches_right},
                               {"bottom", m.touches_bottom}, {"top", m.touches_top}}}};
        if (complement) c["unbounded"] = m.unbounded;
        comps.push_back(c);
    }
    j["components"] = comps;
    if (complement) {
        std::int64_t bounded = 0;
        for (const auto& m : L.meta) bounded += m.unbounded ? 0 : 1;
        j["bounded"] = bounded;
    }
    return j;
}

inline json strip_json(const Strip& s) {
    json j = {{"axis", to_string(s.axis)}, {"c1", s.c1}, {"c2", s.c2}};
    if (s.window) j["window"] = box_json(*s.window);
    return j;
}

inline json scan_json(const ScanReport& r) {
    json j = {{"schema", schema_tag}, {"kind", "scan"}, {"spec", r.spec}, {"base", r.base},
              {"levels", r.levels}, {"divergence_window", r.divergence_window}, {"verdict", r.verdict}};
    json cs = json::array();
    for (int n : r.levels) cs.push_back(Level{n, r.base}.cell_size());
    j["cell_size"] = cs;
    json strips = json::array();
    for (const auto& s : r.strips) {
        json lines = json::array();
        for (auto& [a, b] : s.lines) lines.push_back({a, b});
        strips.push_back({{"strip", strip_json(s.strip)},
                          {"intersection", s.m_int},
                          {"difference", s.m_diff},
                          {"lines", lines},
                          {"divergent", s.divergent}});
    }
    j["strips"] = strips;
    if (!r.complement.empty()) {
        json cd = json::array();
        for (const auto& c : r.complement) cd.push_back({{"level", c.level}, {"diameters", c.diameters}});
        j["complement"] = {{"levels", cd}, {"rank", r.complement_rank}, {"flag", r.complement_flag}};
    }
    return j;
}

inline json crossing_json(const CrossingReport& r) {
    json j = header("crossing", r.level);
    j["region"] = r.region;
    j["mode"] = to_string(r.mode);
    j["count"] = r.count();
    json comps = json::array();
    for (const auto& c : r.components) comps.push_back({{"size", c.size()}, {"bbox", box_json(bounding_window(c).box(r.level))}});
    j["components"] = comps;
    json cl = json::array();
    for (std::size_t k = 0; k < r.clusters.size(); ++k)
        cl.push_back({{"members", r.clusters[k]}, {"limit_size", r.limits[k].size()}});
    j["clusters"] = cl;
    return j;
}

inline json decomposition_json(const Decomposition& D, const std::string& spec) {
    json j = header("decomposition", D.level);
    j["spec"] = spec;
    j["cells"] = cells_json(D.cells);
    j["class"] = D.cls;
    json cl = json::array();
    std::int64_t nontrivial = 0;
    for (const auto& c : D.classes) {
        cl.push_back({{"id", c.id}, {"size", c.size}, {"diameter", c.diameter}, {"bbox", box_json(c.bbox.box(D.level))}});
        nontrivial += c.size > 1 ? 1 : 0;
    }
    j["classes"] = cl;
    j["class_count"] = D.classes.size();
    j["nontrivial_classes"] = nontrivial;
    return j;
}

inline Decomposition decomposition_from_json(const json& j) {
    try {
        if (j.at("schema").get<std::string>() != schema_tag) throw ParseError("unsupported schema");
        if (j.at("kind").get<std::string>() != "decomposition") throw ParseError("not a decomposition");
        Level lv{j.at("level").get<int>(), j.at("base").get<int>()};
        std::vector<Cell> cells;
        for (const auto& c : j.at("cells")) cells.push_back({c.at(0).get<std::int64_t>(), c.at(1).get<std::int64_t>()});
        auto cls = j.at("class").get<std::vector<std::int64_t>>();
        return make_decomposition(lv, std::move(cells), cls);
    } catch (const json::exception& e) {
        throw ParseError(std::string("decomposition json: ") + e.what());
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(std::string("decomposition json: ") + e.what());
    }
}

inline json quotient_json(const QuotientGraph& G, const ReducedGraph& R, const std::string& spec) {
    json j = header("quotient", G.level);
    j["spec"] = spec;
    json nodes = json::array();
    for (std::size_t k = 0; k < G.nodes.size(); ++k)
        nodes.push_back({{"id", G.nodes[k].id}, {"size", G.nodes[k].size}, {"diameter", G.nodes[k].diameter},
                         {"component", G.component[k]}});
    j["nodes"] = nodes;
    json edges = json::array();
    for (auto& [a, b] : G.edges) edges.push_back({a, b});
    j["edges"] = edges;
    j["components"] = G.components;
    j["reduced"] = {{"nodes", R.nodes},
                    {"edges", R.edges},
                    {"contracted_nodes", R.contracted_nodes},
                    {"contracted_edges", R.contracted_edges},
                    {"terminals", {R.terminals.first, R.terminals.second}},
                    {"is_path", R.is_path}};
    return j;
}

// ---------------------------------------------------------------------------
// PBM

// Rows are written top (largest j) first; 1 is black, i.e. in the set.
inline std::string to_pbm(const GridCompactum& K, bool binary = false) {
    std::ostringstream out;
    const CellWindow& w = K.window;
    out << (binary ? "P4\n" : "P1\n") << w.w << " " << w.h << "\n";
    for (std::int64_t y = w.h - 1; y >= 0; --y) {
        if (binary) {
            for (std::int64_t x = 0; x < w.w; x += 8) {
                unsigned char byte = 0;
                for (std::int64_t b = 0; b < 8 && x + b < w.w; ++b)
                    if (K.bits[static_cast<std::size_t>(y * w.w + x + b)]) byte |= static_cast<unsigned char>(0x80u >> b);
                out.put(static_cast<char>(byte));
            }
        } else {
            for (std::int64_t x = 0; x < w.w; ++x) {
                if (x) out << ' ';
                out << (K.bits[static_cast<std::size_t>(y * w.w + x)] ? '1' : '0');
            }
            out << '\n';
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// SVG

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::string class_colour(std::int64_t id) {
    std::uint64_t h = splitmix64(static_cast<std::uint64_t>(id));
    // Keep colours away from white so every cell stays visible.
    unsigned r = 32 + static_cast<unsigned>(h & 0xff) * 3 / 4;
    unsigned g = 32 + static_cast<unsigned>((h >> 8) & 0xff) * 3 / 4;
    unsigned b = 32 + static_cast<unsigned>((h >> 16) & 0xff) * 3 / 4;
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

inline std::string fmt_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

inline std::string render_svg(const GridCompactum& K, const Decomposition* D = nullptr) {
    if (D && (D->level != K.level || D->cells != K.cells())) throw Error("decomposition does not partition the compactum");
    const CellWindow& w = K.window;
    double px = 1024.0 / static_cast<double>(std::max(w.w, w.h));
    double width = px * static_cast<double>(w.w), height = px * static_cast<double>(w.h);
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt_px(width) << "\" height=\""
        << fmt_px(height) << "\" viewBox=\"0 0 " << fmt_px(width) << " " << fmt_px(height) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
        << "<g shape-rendering=\"crispEdges\"" << (D ? "" : " fill=\"#000000\"") << ">\n";
    for (std::int64_t y = 0; y < w.h; ++y)
        for (std::int64_t x = 0; x < w.w; ++x) {
            if (!K.bits[static_cast<std::size_t>(y * w.w + x)]) continue;
            out << "<rect x=\"" << fmt_px(static_cast<double>(x) * px) << "\" y=\""
                << fmt_px(static_cast<double>(w.h - 1 - y) * px) << "\" width=\"" << fmt_px(px) << "\" height=\""
                << fmt_px(px) << "\"";
            if (D) out << " fill=\"" << class_colour(D->class_of({w.i0 + x, w.j0 + y})) << "\"";
            out << "/>\n";
        }
    out << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace pcx

#endif  // PCX_IO_HPP
