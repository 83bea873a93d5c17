// SPDX-FileCopyrightText: 2026 pcx contributors
// SPDX-License-Identifier: Apache-2.0
//
// The `pcx` command line. Exit codes: 0 success, 2 usage or configuration
// error, 3 unreadable input. Verdicts are reported in the output only.

#ifndef PCX_CLI_HPP
#define PCX_CLI_HPP

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcx/decomposition.hpp"
#include "pcx/generators.hpp"
#include "pcx/io.hpp"
#include "pcx/schoenflies.hpp"

namespace pcx::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_parse = 3;

struct RunConfig {
    std::string generator;
    std::string input;
    int level = -1;
    std::vector<std::string> params;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string out;
    std::string format = "json";
};

struct Source {
    SpecPtr spec;
    int level = 0;
};

inline GeneratorParams parse_params(const RunConfig& cfg) {
    GeneratorParams gp{cfg.generator, {}, cfg.seed};
    for (const std::string& kv : cfg.params) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw Error("--param expects key=value, got " + kv);
        try {
            std::size_t used = 0;
            double v = std::stod(kv.substr(eq + 1), &used);
            if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
            gp.values[kv.substr(0, eq)] = v;
        } catch (const std::logic_error&) {
            throw Error("--param value is not a number: " + kv);
        }
    }
    return gp;
}

inline Source load_source(const RunConfig& cfg, int default_level = 5) {
    if (cfg.generator.empty() == cfg.input.empty()) throw Error("give exactly one of --gen or --input");
    Source s;
    if (!cfg.generator.empty()) {
        s.spec = make_spec(parse_params(cfg));
        s.level = cfg.level >= 0 ? cfg.level : default_level;
    } else {
        std::ifstream in(cfg.input, std::ios::binary);
        if (!in) throw ParseError("cannot open " + cfg.input);
        std::stringstream ss;
        ss << in.rdbuf();
        Bitmap bm = parse_pbm(ss.str());
        s.spec = from_bitmap(bm, cfg.input);
        s.level = cfg.level >= 0 ? cfg.level : bitmap_level(bm);
    }
    return s;
}

inline void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw Error("cannot write " + cfg.out);
    f << text;
}

inline std::vector<int> parse_levels(const std::string& s) {
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            int n = std::stoi(s);
            return level_range(n, n);
        }
        return level_range(std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2)));
    } catch (const std::logic_error&) {
        throw Error("bad --levels, expected a..b: " + s);
    }
}

inline Strip parse_strip(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3 || (parts[0] != "h" && parts[0] != "v")) throw Error("bad --strip, expected h:c1:c2 or v:c1:c2");
    Strip st;
    st.axis = parts[0] == "h" ? Axis::horizontal : Axis::vertical;
    try {
        st.c1 = std::stod(parts[1]);
        st.c2 = std::stod(parts[2]);
    } catch (const std::logic_error&) {
        throw Error("bad --strip offsets: " + s);
    }
    if (!(st.c1 < st.c2)) throw Error("--strip needs c1 < c2");
    return st;
}

inline Decomposition load_decomposition(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return decomposition_from_json(j);
}

inline std::string dump(const json& j) { return j.dump() + "\n"; }

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"pcx: Schoenflies crossings and core decompositions of rasterized planar compacta"};
    app.set_version_flag("--version", std::string("pcx 1.0.0"));
    app.require_subcommand(1, 1);
    RunConfig cfg;

    auto add_source = [&](CLI::App* sub, bool with_level = true) {
        sub->add_option("--gen", cfg.generator, "built-in generator name");
        sub->add_option("--input", cfg.input, "PBM file (P1 or P4)");
        if (with_level) sub->add_option("--level", cfg.level, "refinement level")->check(CLI::NonNegativeNumber);
        sub->add_option("--param", cfg.params, "generator parameter key=value (repeatable)");
        sub->add_option("--seed", cfg.seed, "seed for random_blobs");
        sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out, "write output to this file instead of stdout");
    };

    auto* gen = app.add_subcommand("gen", "write a generator's raster as PBM");
    add_source(gen);
    bool binary = false;
    gen->add_flag("--binary", binary, "write P4 instead of P1");

    auto* comps = app.add_subcommand("components", "component labeling report");
    add_source(comps);
    int connectivity = 8;
    bool complement = false;
    comps->add_option("--connectivity", connectivity, "4 or 8")->check(CLI::IsMember({4, 8}));
    comps->add_flag("--complement", complement, "label the complement (4-connected) instead");

    auto* scan = app.add_subcommand("scan", "strip crossing counts across levels");
    add_source(scan, false);
    std::string levels = "2..5";
    std::vector<std::string> strip_args;
    ScanOptions sopt;
    int rank = 10;
    scan->add_option("--levels", levels, "level range a..b");
    scan->add_option("--strip", strip_args, "h:c1:c2, v:c1:c2 or auto (repeatable)");
    scan->add_option("--k", sopt.divergence_window, "levels of strict growth that count as divergence")
        ->check(CLI::Range(2, 100));
    scan->add_option("--margin", sopt.margin, "lateral window margin in cells")->check(CLI::NonNegativeNumber);
    scan->add_option("--rank", rank, "complement diameter rank for the shrink flag")->check(CLI::PositiveNumber);

    RelationParams rp;
    std::string family = to_string(rp.family);
    std::string fibers;
    auto add_relation = [&](CLI::App* sub) {
        sub->add_option("--nmin", rp.n_min, "components standing in for an infinite sequence")->check(CLI::Range(3, 1000));
        sub->add_option("--delta", rp.delta, "tolerance in cells")->check(CLI::Range(1.0, 1e6));
        sub->add_option("--stride", rp.stride, "annulus centre spacing in cells")->check(CLI::PositiveNumber);
        sub->add_option("--family", family, "strips, annuli or both")->check(CLI::IsMember({"strips", "annuli", "both"}));
        sub->add_option("--depth", rp.refine_depth, "finer levels consulted")->check(CLI::Range(0, 3));
        sub->add_option("--fibers", fibers, "v or h: emit the fiber decomposition instead")
            ->check(CLI::IsMember({"v", "h"}));
    };

    auto* dec = app.add_subcommand("decompose", "core decomposition of a compactum");
    add_source(dec);
    add_relation(dec);
    dec->add_option("--format", cfg.format, "json, svg or text")->check(CLI::IsMember({"json", "svg", "text"}));

    auto* quo = app.add_subcommand("quotient", "quotient graph of the decomposition");
    add_source(quo);
    add_relation(quo);

    auto* cmp = app.add_subcommand("compare", "fineness comparison of two decompositions");
    std::string file_a, file_b;
    std::int64_t tolerance = 0;
    cmp->add_option("--a", file_a, "decomposition JSON")->required();
    cmp->add_option("--b", file_b, "decomposition JSON")->required();
    cmp->add_option("--tolerance", tolerance, "membership tolerance in cells")->check(CLI::NonNegativeNumber);
    cmp->add_option("--out", cfg.out, "write output to this file instead of stdout");

    auto* ren = app.add_subcommand("render", "SVG of a compactum, optionally coloured by class");
    add_source(ren);
    add_relation(ren);
    std::string dec_file;
    bool ren_decompose = false;
    ren->add_option("--decomposition", dec_file, "decomposition JSON to colour by");
    ren->add_flag("--decompose", ren_decompose, "compute the decomposition and colour by it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
    }

    try {
        rp.family = parse_family(family);
        rp.jobs = cfg.jobs;
        auto decomposition = [&](const Source& s, GridCompactum& K) {
            if (fibers == "v") return fiber_decomposition(K, Axis::vertical);
            if (fibers == "h") return fiber_decomposition(K, Axis::horizontal);
            (void)s;
            return close_equivalence(K, schoenflies_relation(K, rp));
        };

        if (gen->parsed()) {
            Source s = load_source(cfg);
            emit(cfg, to_pbm(rasterize(s.spec, {s.level, s.spec->base}), binary), out);
        } else if (comps->parsed()) {
            Source s = load_source(cfg);
            GridCompactum K = rasterize(s.spec, {s.level, s.spec->base});
            ComponentLabeling L = complement ? complement_components(K, K.window.expanded(1, 1))
                                             : label_components(K, connectivity);
            emit(cfg, dump(labeling_json(L, s.spec->name, complement)), out);
        } else if (scan->parsed()) {
            Source s = load_source(cfg);
            auto lv = parse_levels(levels);
            std::vector<Strip> strips;
            if (strip_args.empty()) strip_args.push_back("auto");
            for (const std::string& a : strip_args) {
                if (a == "auto") {
                    auto fam = auto_strips(*s.spec, {lv.front(), s.spec->base});
                    strips.insert(strips.end(), fam.begin(), fam.end());
                } else {
                    strips.push_back(parse_strip(a));
                }
            }
            sopt.jobs = cfg.jobs;
            ScanReport r = schoenflies_scan(s.spec, strips, lv, sopt);
            complement_diameter_scan(s.spec, lv, r, rank, cfg.jobs);
            emit(cfg, dump(scan_json(r)), out);
        } else if (dec->parsed()) {
            Source s = load_source(cfg);
            GridCompactum K = rasterize(s.spec, {s.level, s.spec->base});
            Decomposition D = decomposition(s, K);
            if (cfg.format == "svg") {
                emit(cfg, render_svg(K, &D), out);
            } else if (cfg.format == "text") {
                std::ostringstream t;
                std::int64_t nontrivial = 0;
                for (const auto& c : D.classes) nontrivial += c.size > 1 ? 1 : 0;
                t << "spec " << s.spec->name << "\nlevel " << D.level.n << " base " << D.level.base << " cell_size "
                  << D.level.cell_size() << "\ncells " << D.cells.size() << "\nclasses " << D.classes.size()
                  << "\nnontrivial " << nontrivial << "\n";
                for (const auto& c : D.classes)
                    if (c.size > 1) t << "class " << c.id << " size " << c.size << " diameter " << c.diameter << "\n";
                emit(cfg, t.str(), out);
            } else {
                emit(cfg, dump(decomposition_json(D, s.spec->name)), out);
            }
        } else if (quo->parsed()) {
            Source s = load_source(cfg);
            GridCompactum K = rasterize(s.spec, {s.level, s.spec->base});
            Decomposition D = decomposition(s, K);
            QuotientGraph G = quotient_graph(K, D);
            emit(cfg, dump(quotient_json(G, reduce_quotient(G), s.spec->name)), out);
        } else if (cmp->parsed()) {
            Decomposition a = load_decomposition(file_a), b = load_decomposition(file_b);
            if (a.level != b.level || a.cells != b.cells) throw Error("decompositions cover different cell sets");
            json j = {{"schema", schema_tag},
                      {"kind", "compare"},
                      {"tolerance", tolerance},
                      {"a_refines_b", refines(a, b)},
                      {"b_refines_a", refines(b, a)},
                      {"a_refines_b_within", refines_within(a, b, tolerance)},
                      {"b_refines_a_within", refines_within(b, a, tolerance)},
                      {"equal", same_partition(a, b)},
                      {"a_classes", a.classes.size()},
                      {"b_classes", b.classes.size()},
                      {"common_refinement_classes", common_refinement(a, b).classes.size()}};
            emit(cfg, dump(j), out);
        } else if (ren->parsed()) {
            Source s = load_source(cfg);
            GridCompactum K = rasterize(s.spec, {s.level, s.spec->base});
            if (!dec_file.empty()) {
                Decomposition D = load_decomposition(dec_file);
                emit(cfg, render_svg(K, &D), out);
            } else if (ren_decompose || !fibers.empty()) {
                Decomposition D = decomposition(s, K);
                emit(cfg, render_svg(K, &D), out);
            } else {
                emit(cfg, render_svg(K), out);
            }
        }
    } catch (const ParseError& e) {
        err << "pcx: " << e.what() << "\n";
        return exit_parse;
    } catch (const Error& e) {
        err << "pcx: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_ok;
}

}  // namespace pcx::cli

#endif  // PCX_CLI_HPP
