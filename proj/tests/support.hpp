// Shared oracles and fixtures for the unit tests.

#ifndef PCX_TESTS_SUPPORT_HPP
#define PCX_TESTS_SUPPORT_HPP

#include <cstdint>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pcx/core.hpp"
#include "pcx/grid.hpp"

namespace pcx::testing {

using CellSet = std::set<std::pair<std::int64_t, std::int64_t>>;

inline CellSet as_set(const std::vector<Cell>& v) {
    CellSet s;
    for (const Cell& c : v) s.insert({c.i, c.j});
    return s;
}

inline std::vector<Cell> as_cells(const CellSet& s) {
    std::vector<Cell> v;
    for (auto [i, j] : s) v.push_back({i, j});
    return v;
}

inline CellSet flood(const CellSet& free, const CellSet& from, int conn) {
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

// Number of connected pieces of s.
inline int pieces(CellSet s, int conn) {
    int n = 0;
    while (!s.empty()) {
        CellSet c = flood(s, {*s.begin()}, conn);
        for (auto x : c) s.erase(x);
        ++n;
    }
    return n;
}

// Level-n Cantor interval indices: n ternary digits from {0, 2}.
inline std::vector<std::int64_t> cantor_columns(int n) {
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

inline std::vector<Cell> rect_cells(std::int64_t i0, std::int64_t j0, std::int64_t w, std::int64_t h) {
    std::vector<Cell> v;
    for (std::int64_t j = j0; j < j0 + h; ++j)
        for (std::int64_t i = i0; i < i0 + w; ++i) v.push_back({i, j});
    return v;
}

}  // namespace pcx::testing

#endif
