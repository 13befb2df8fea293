#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace plgc {

// Open-boundary square lattice of lx x ly vertices with one qubit per bond.
// Horizontal bonds come first in row-major order, then vertical bonds in
// row-major order. Vertex rows run top to bottom, columns left to right.
enum class BondOrientation { horizontal, vertical };

struct BondCoord {
    BondOrientation orientation;
    int row;
    int col;
};

struct LatticeGeometry {
    int lx = 0;  // vertex columns
    int ly = 0;  // vertex rows
    int n_qubits = 0;
    int n_plaquettes = 0;
    int n_vertices = 0;

    // star_members[v] lists the bond qubits incident to vertex v, sorted.
    std::vector<std::vector<int>> star_members;
    // plaquette_members[p] is ordered (top, left, right, bottom).
    std::vector<std::array<int, 4>> plaquette_members;

    int n_horizontal() const { return ly * (lx - 1); }

    int vertex_index(int row, int col) const { return row * lx + col; }
    int plaquette_index(int row, int col) const { return row * (lx - 1) + col; }

    int bond_index(BondOrientation o, int row, int col) const {
        if (o == BondOrientation::horizontal) {
            if (row < 0 || row >= ly || col < 0 || col >= lx - 1) {
                throw std::out_of_range("horizontal bond (" + std::to_string(row) + "," +
                                        std::to_string(col) + ") outside lattice");
            }
            return row * (lx - 1) + col;
        }
        if (row < 0 || row >= ly - 1 || col < 0 || col >= lx) {
            throw std::out_of_range("vertical bond (" + std::to_string(row) + "," +
                                    std::to_string(col) + ") outside lattice");
        }
        return n_horizontal() + row * lx + col;
    }

    int horizontal_bond(int row, int col) const {
        return bond_index(BondOrientation::horizontal, row, col);
    }
    int vertical_bond(int row, int col) const {
        return bond_index(BondOrientation::vertical, row, col);
    }

    BondCoord bond_coord(int qubit) const {
        if (qubit < 0 || qubit >= n_qubits) {
            throw std::out_of_range("qubit id " + std::to_string(qubit) + " outside [0, " +
                                    std::to_string(n_qubits) + ")");
        }
        if (qubit < n_horizontal()) {
            return {BondOrientation::horizontal, qubit / (lx - 1), qubit % (lx - 1)};
        }
        int v = qubit - n_horizontal();
        return {BondOrientation::vertical, v / lx, v % lx};
    }

    // Representative qubit of a plaquette: its bottom horizontal bond.
    int representative_qubit(int plaquette) const { return plaquette_members.at(plaquette)[3]; }

    uint64_t plaquette_mask(int plaquette) const {
        uint64_t m = 0;
        for (int q : plaquette_members.at(plaquette)) m |= uint64_t{1} << q;
        return m;
    }

    uint64_t star_mask(int vertex) const {
        uint64_t m = 0;
        for (int q : star_members.at(vertex)) m |= uint64_t{1} << q;
        return m;
    }
};

inline LatticeGeometry build_lattice(int lx, int ly) {
    if (lx < 2 || ly < 2) {
        throw std::invalid_argument("lattice needs at least 2x2 vertices, got " +
                                    std::to_string(lx) + "x" + std::to_string(ly));
    }
    LatticeGeometry g;
    g.lx = lx;
    g.ly = ly;
    g.n_vertices = lx * ly;
    g.n_plaquettes = (lx - 1) * (ly - 1);
    g.n_qubits = ly * (lx - 1) + lx * (ly - 1);

    g.star_members.resize(g.n_vertices);
    for (int r = 0; r < ly; ++r) {
        for (int c = 0; c < lx; ++c) {
            auto& star = g.star_members[g.vertex_index(r, c)];
            if (c > 0) star.push_back(g.horizontal_bond(r, c - 1));
            if (c < lx - 1) star.push_back(g.horizontal_bond(r, c));
            if (r > 0) star.push_back(g.vertical_bond(r - 1, c));
            if (r < ly - 1) star.push_back(g.vertical_bond(r, c));
            std::sort(star.begin(), star.end());
        }
    }

    g.plaquette_members.resize(g.n_plaquettes);
    for (int r = 0; r < ly - 1; ++r) {
        for (int c = 0; c < lx - 1; ++c) {
            g.plaquette_members[g.plaquette_index(r, c)] = {
                g.horizontal_bond(r, c),      // top
                g.vertical_bond(r, c),        // left
                g.vertical_bond(r, c + 1),    // right
                g.horizontal_bond(r + 1, c),  // bottom
            };
        }
    }
    return g;
}

inline const std::vector<int>& star_qubits(const LatticeGeometry& geom, int vertex) {
    if (vertex < 0 || vertex >= geom.n_vertices) {
        throw std::out_of_range("vertex " + std::to_string(vertex) + " outside [0, " +
                                std::to_string(geom.n_vertices) + ")");
    }
    return geom.star_members[vertex];
}

// Largest subsystem size for which a dense reduced density matrix is built.
// Every region combination of a valid Tripartition stays at or below this.
inline constexpr int rdm_max_qubits = 14;

// Three disjoint, nonempty qubit regions whose union leaves a nonempty
// complement. Regions are kept sorted.
struct Tripartition {
    std::vector<int> region_a;
    std::vector<int> region_b;
    std::vector<int> region_c;

    // Sorted union of the three regions.
    std::vector<int> combined() const {
        std::vector<int> all;
        all.reserve(region_a.size() + region_b.size() + region_c.size());
        all.insert(all.end(), region_a.begin(), region_a.end());
        all.insert(all.end(), region_b.begin(), region_b.end());
        all.insert(all.end(), region_c.begin(), region_c.end());
        std::sort(all.begin(), all.end());
        return all;
    }

    void validate(int n_qubits) const {
        if (region_a.empty() || region_b.empty() || region_c.empty()) {
            throw std::invalid_argument("tripartition regions must all be nonempty");
        }
        std::vector<int> all = combined();
        for (int q : all) {
            if (q < 0 || q >= n_qubits) {
                throw std::invalid_argument("tripartition qubit id " + std::to_string(q) +
                                            " outside [0, " + std::to_string(n_qubits) + ")");
            }
        }
        if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
            throw std::invalid_argument("tripartition regions must be pairwise disjoint");
        }
        if (static_cast<int>(all.size()) >= n_qubits) {
            throw std::invalid_argument("tripartition must leave a nonempty complement");
        }
        if (static_cast<int>(all.size()) > rdm_max_qubits) {
            throw std::invalid_argument("tripartition union of " + std::to_string(all.size()) +
                                        " qubits exceeds the reduced-density-matrix cap of " +
                                        std::to_string(rdm_max_qubits));
        }
    }
};

namespace detail {

// Bond midpoint in vertex coordinates: columns grow along x, rows along y.
inline std::pair<double, double> bond_midpoint(const LatticeGeometry& geom, int qubit) {
    BondCoord bc = geom.bond_coord(qubit);
    if (bc.orientation == BondOrientation::horizontal) {
        return {bc.col + 0.5, static_cast<double>(bc.row)};
    }
    return {static_cast<double>(bc.col), bc.row + 0.5};
}

// Deterministic fallback: the innermost bonds around the lattice center,
// split into three contiguous polar-angle arcs.
inline Tripartition wedge_tripartition(const LatticeGeometry& geom) {
    const double cx = (geom.lx - 1) / 2.0;
    const double cy = (geom.ly - 1) / 2.0;
    const int take = std::min(rdm_max_qubits, geom.n_qubits - 1);

    std::vector<int> order(geom.n_qubits);
    for (int q = 0; q < geom.n_qubits; ++q) order[q] = q;
    auto radius2 = [&](int q) {
        auto [x, y] = bond_midpoint(geom, q);
        return (x - cx) * (x - cx) + (y - cy) * (y - cy);
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return radius2(a) < radius2(b); });
    order.resize(take);

    auto angle = [&](int q) {
        auto [x, y] = bond_midpoint(geom, q);
        return std::atan2(y - cy, x - cx);
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return angle(a) < angle(b); });

    const int na = (take + 2) / 3;
    const int nb = (take - na + 1) / 2;
    Tripartition tri;
    tri.region_a.assign(order.begin(), order.begin() + na);
    tri.region_b.assign(order.begin() + na, order.begin() + na + nb);
    tri.region_c.assign(order.begin() + na + nb, order.end());
    std::sort(tri.region_a.begin(), tri.region_a.end());
    std::sort(tri.region_b.begin(), tri.region_b.end());
    std::sort(tri.region_c.begin(), tri.region_c.end());
    return tri;
}

}  // namespace detail

// Default regions for the supported clusters are pinned constants; any other
// geometry with at least 6 qubits gets deterministic central wedges. The
// pinned choices give S_topo = -ln 2 exactly on the x = 0 ground state.
inline Tripartition default_tripartition(const LatticeGeometry& geom) {
    if (geom.n_qubits < 6) {
        throw std::invalid_argument("geometry too small for a tripartition: " +
                                    std::to_string(geom.n_qubits) +
                                    " qubits cannot host three nonempty regions plus complement");
    }
    Tripartition tri;
    if (geom.lx == 3 && geom.ly == 3) {
        tri = {{2}, {3, 7}, {10}};
    } else if (geom.lx == 4 && geom.ly == 3) {
        tri = {{3, 4, 5, 9, 13}, {11, 15}, {6, 7, 10, 14}};
    } else if (geom.lx == 4 && geom.ly == 4) {
        tri = {{3, 4, 13, 14}, {5, 8, 18, 22}, {6, 7, 17, 21}};
    } else {
        tri = detail::wedge_tripartition(geom);
    }
    tri.validate(geom.n_qubits);
    return tri;
}

// Reads a region override file: a JSON object with keys "A", "B", "C", each an
// array of qubit ids. The result is validated against the geometry.
inline Tripartition load_tripartition(const std::string& path, const LatticeGeometry& geom) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open tripartition file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("cannot parse tripartition file " + path + ": " + e.what());
    }
    for (const char* key : {"A", "B", "C"}) {
        if (!j.contains(key) || !j[key].is_array()) {
            throw std::runtime_error("tripartition file " + path +
                                     " needs an array under key \"" + key + "\"");
        }
    }
    Tripartition tri;
    tri.region_a = j["A"].get<std::vector<int>>();
    tri.region_b = j["B"].get<std::vector<int>>();
    tri.region_c = j["C"].get<std::vector<int>>();
    std::sort(tri.region_a.begin(), tri.region_a.end());
    std::sort(tri.region_b.begin(), tri.region_b.end());
    std::sort(tri.region_c.begin(), tri.region_c.end());
    tri.validate(geom.n_qubits);
    return tri;
}

}  // namespace plgc
