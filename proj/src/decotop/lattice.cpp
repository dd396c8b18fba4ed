// Copyright 2026 The decotop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "decotop/lattice.hpp"

#include <stdexcept>

namespace decotop::lattice {

std::array<int, 2> Torus2D::edge_xy(int e) const {
    int idx = edge_is_horizontal(e) ? e : e - lx * ly;
    return {idx % lx, idx / lx};
}

std::array<int, 2> Torus2D::edge_vertices(int e) const {
    auto [x, y] = edge_xy(e);
    if (edge_is_horizontal(e)) {
        return {vertex(x, y), vertex(x + 1, y)};
    }
    return {vertex(x, y), vertex(x, y + 1)};
}

std::array<int, 2> Torus2D::edge_plaquettes(int e) const {
    auto [x, y] = edge_xy(e);
    // Plaquette (x,y) has corners (x,y)..(x+1,y+1). A horizontal edge at (x,y)
    // bounds the plaquettes above and below it; a vertical edge the ones left
    // and right of it.
    if (edge_is_horizontal(e)) {
        return {plaquette(x, y), plaquette(x, y - 1)};
    }
    return {plaquette(x, y), plaquette(x - 1, y)};
}

std::array<int, 4> Torus2D::star_edges(int v) const {
    int x = v % lx, y = v / lx;
    return {h_edge(x, y), h_edge(x - 1, y), v_edge(x, y), v_edge(x, y - 1)};
}

std::array<int, 4> Torus2D::plaquette_edges(int p) const {
    int x = p % lx, y = p / lx;
    return {h_edge(x, y), h_edge(x, y + 1), v_edge(x, y), v_edge(x + 1, y)};
}

Torus2D build_torus_2d(int lx, int ly) {
    if (lx < 2 || ly < 2) {
        throw std::invalid_argument("build_torus_2d: need lx, ly >= 2");
    }
    Torus2D lat{lx, ly};
    // Incidence sanity: every edge in exactly 2 stars and 2 plaquettes.
    std::vector<int> star_count(lat.n_edges(), 0), plaq_count(lat.n_edges(), 0);
    for (int v = 0; v < lat.n_vertices(); v++) {
        for (int e : lat.star_edges(v)) {
            star_count[e]++;
        }
    }
    for (int p = 0; p < lat.n_plaquettes(); p++) {
        for (int e : lat.plaquette_edges(p)) {
            plaq_count[e]++;
        }
    }
    for (int e = 0; e < lat.n_edges(); e++) {
        if (star_count[e] != 2 || plaq_count[e] != 2) {
            throw std::logic_error("build_torus_2d: incidence invariant violated");
        }
    }
    return lat;
}

std::array<int, 3> Torus3D::cell_xyz(int idx) const {
    int x = idx % lx;
    int y = (idx / lx) % ly;
    int z = idx / (lx * ly);
    return {x, y, z};
}

std::array<int, 2> Torus3D::edge_vertices(int e) const {
    int d = edge_direction(e);
    auto [x, y, z] = cell_xyz(e % n_vertices());
    int dx = d == 0, dy = d == 1, dz = d == 2;
    return {vertex(x, y, z), vertex(x + dx, y + dy, z + dz)};
}

std::array<int, 4> Torus3D::face_edges(int f) const {
    int d = face_normal(f);
    auto [x, y, z] = cell_xyz(f % n_vertices());
    // Face normal to d spans directions a and b (a < b, both != d).
    int a = d == 0 ? 1 : 0;
    int b = d == 2 ? 1 : 2;
    int ax = a == 0, ay = a == 1, az = a == 2;
    int bx = b == 0, by = b == 1, bz = b == 2;
    return {
        edge(a, x, y, z),
        edge(a, x + bx, y + by, z + bz),
        edge(b, x, y, z),
        edge(b, x + ax, y + ay, z + az),
    };
}

std::array<int, 4> Torus3D::edge_faces(int e) const {
    int d = edge_direction(e);
    auto [x, y, z] = cell_xyz(e % n_vertices());
    int a = d == 0 ? 1 : 0;
    int b = d == 2 ? 1 : 2;
    int ax = a == 0, ay = a == 1, az = a == 2;
    int bx = b == 0, by = b == 1, bz = b == 2;
    // Faces containing edge e have normals a or b.
    return {
        face(b, x, y, z),
        face(b, x - ax, y - ay, z - az),
        face(a, x, y, z),
        face(a, x - bx, y - by, z - bz),
    };
}

std::array<int, 6> Torus3D::cube_faces(int c) const {
    auto [x, y, z] = cell_xyz(c);
    return {
        face(0, x, y, z), face(0, x + 1, y, z),
        face(1, x, y, z), face(1, x, y + 1, z),
        face(2, x, y, z), face(2, x, y, z + 1),
    };
}

std::array<int, 12> Torus3D::cube_edges(int c) const {
    auto [x, y, z] = cell_xyz(c);
    return {
        edge(0, x, y, z), edge(0, x, y + 1, z), edge(0, x, y, z + 1), edge(0, x, y + 1, z + 1),
        edge(1, x, y, z), edge(1, x + 1, y, z), edge(1, x, y, z + 1), edge(1, x + 1, y, z + 1),
        edge(2, x, y, z), edge(2, x + 1, y, z), edge(2, x, y + 1, z), edge(2, x + 1, y + 1, z),
    };
}

std::array<int, 4> Torus3D::edge_cubes(int e) const {
    int d = edge_direction(e);
    auto [x, y, z] = cell_xyz(e % n_vertices());
    int a = d == 0 ? 1 : 0;
    int b = d == 2 ? 1 : 2;
    int ax = a == 0, ay = a == 1, az = a == 2;
    int bx = b == 0, by = b == 1, bz = b == 2;
    return {
        cube(x, y, z),
        cube(x - ax, y - ay, z - az),
        cube(x - bx, y - by, z - bz),
        cube(x - ax - bx, y - ay - by, z - az - bz),
    };
}

std::array<int, 6> Torus3D::star_edges(int v) const {
    auto [x, y, z] = cell_xyz(v);
    return {
        edge(0, x, y, z), edge(0, x - 1, y, z),
        edge(1, x, y, z), edge(1, x, y - 1, z),
        edge(2, x, y, z), edge(2, x, y, z - 1),
    };
}

std::array<int, 4> Torus3D::planar_star_edges(int v, int gamma) const {
    auto [x, y, z] = cell_xyz(v);
    std::array<int, 4> out{};
    int k = 0;
    for (int d = 0; d < 3; d++) {
        if (d == gamma) {
            continue;
        }
        int dx = d == 0, dy = d == 1, dz = d == 2;
        out[k++] = edge(d, x, y, z);
        out[k++] = edge(d, x - dx, y - dy, z - dz);
    }
    return out;
}

Torus3D build_torus_3d(int lx, int ly, int lz) {
    if (lx < 2 || ly < 2 || lz < 2) {
        throw std::invalid_argument("build_torus_3d: need lx, ly, lz >= 2");
    }
    Torus3D lat{lx, ly, lz};
    std::vector<int> face_count(lat.n_edges(), 0);
    for (int f = 0; f < lat.n_faces(); f++) {
        for (int e : lat.face_edges(f)) {
            face_count[e]++;
        }
    }
    for (int e = 0; e < lat.n_edges(); e++) {
        if (face_count[e] != 4) {
            throw std::logic_error("build_torus_3d: edge/face incidence violated");
        }
    }
    std::vector<int> cube_count(lat.n_edges(), 0);
    for (int c = 0; c < lat.n_cubes(); c++) {
        for (int e : lat.cube_edges(c)) {
            cube_count[e]++;
        }
    }
    for (int e = 0; e < lat.n_edges(); e++) {
        if (cube_count[e] != 4) {
            throw std::logic_error("build_torus_3d: edge/cube incidence violated");
        }
    }
    return lat;
}

Cycle primal_loop_2d(const Torus2D &lat, int direction) {
    Cycle c;
    c.kind = CycleKind::primal_loop;
    c.direction = direction;
    if (direction == 0) {
        for (int x = 0; x < lat.lx; x++) {
            c.edges.push_back(lat.h_edge(x, 0));
        }
    } else {
        for (int y = 0; y < lat.ly; y++) {
            c.edges.push_back(lat.v_edge(0, y));
        }
    }
    return c;
}

Cycle dual_loop_2d(const Torus2D &lat, int direction) {
    // A dual loop winding along `direction` crosses the edges perpendicular
    // to it: winding along x crosses one vertical edge per column.
    Cycle c;
    c.kind = CycleKind::dual_loop;
    c.direction = direction;
    if (direction == 0) {
        for (int x = 0; x < lat.lx; x++) {
            c.edges.push_back(lat.v_edge(x, 0));
        }
    } else {
        for (int y = 0; y < lat.ly; y++) {
            c.edges.push_back(lat.h_edge(0, y));
        }
    }
    return c;
}

Cycle primal_loop_3d(const Torus3D &lat, int direction) {
    Cycle c;
    c.kind = CycleKind::primal_loop;
    c.direction = direction;
    int n = direction == 0 ? lat.lx : direction == 1 ? lat.ly : lat.lz;
    for (int i = 0; i < n; i++) {
        int x = direction == 0 ? i : 0;
        int y = direction == 1 ? i : 0;
        int z = direction == 2 ? i : 0;
        c.edges.push_back(lat.edge(direction, x, y, z));
    }
    return c;
}

Cycle dual_membrane_3d(const Torus3D &lat, int normal) {
    // Edges pierced by the dual plane between layers 0 and 1 along `normal`:
    // all edges parallel to `normal` anchored in layer 0.
    Cycle c;
    c.kind = CycleKind::dual_membrane;
    c.direction = normal;
    for (int v = 0; v < lat.n_vertices(); v++) {
        auto [x, y, z] = lat.cell_xyz(v);
        int coord = normal == 0 ? x : normal == 1 ? y : z;
        if (coord == 0) {
            c.edges.push_back(lat.edge(normal, x, y, z));
        }
    }
    return c;
}

uint64_t BinaryConfig::to_mask() const {
    uint64_t m = 0;
    for (size_t i = 0; i < s.size(); i++) {
        if (s[i] < 0) {
            m |= uint64_t{1} << i;
        }
    }
    return m;
}

BinaryConfig BinaryConfig::from_mask(uint64_t m, int n) {
    BinaryConfig c = ones(n);
    for (int i = 0; i < n; i++) {
        if ((m >> i) & 1) {
            c.s[i] = -1;
        }
    }
    return c;
}

FluxAndLogical flux_of(const BinaryConfig &config, const Torus2D &lat) {
    if (config.size() != lat.n_edges()) {
        throw std::invalid_argument("flux_of: config must live on edges");
    }
    FluxAndLogical out;
    out.flux.resize(lat.n_plaquettes());
    for (int p = 0; p < lat.n_plaquettes(); p++) {
        int8_t f = +1;
        for (int e : lat.plaquette_edges(p)) {
            f *= config.s[e];
        }
        out.flux[p] = f;
    }
    for (int e : primal_loop_2d(lat, 0).edges) {
        out.logical_x *= config.s[e];
    }
    for (int e : primal_loop_2d(lat, 1).edges) {
        out.logical_y *= config.s[e];
    }
    return out;
}

Gf2Basis gauge_group_2d(const Torus2D &lat) {
    Gf2Basis basis(lat.n_edges());
    for (int v = 0; v < lat.n_vertices(); v++) {
        BitVec star(lat.n_edges());
        for (int e : lat.star_edges(v)) {
            star.flip(e);
        }
        basis.add(star);
    }
    return basis;
}

BinaryConfig gauge_orbit_representative(const BinaryConfig &config, const Torus2D &lat) {
    Gf2Basis basis = gauge_group_2d(lat);
    BitVec v(lat.n_edges());
    for (int e = 0; e < lat.n_edges(); e++) {
        if (config.s[e] < 0) {
            v.set(e, true);
        }
    }
    BitVec best = basis.lex_min_in_coset(v);
    BinaryConfig out = BinaryConfig::ones(lat.n_edges());
    for (int e = 0; e < lat.n_edges(); e++) {
        if (best.get(e)) {
            out.s[e] = -1;
        }
    }
    return out;
}

int Bipartition::n_a() const {
    int n = 0;
    for (uint8_t b : in_a) {
        n += b != 0;
    }
    return n;
}

std::vector<int> Bipartition::boundary_vertices_2d(const Torus2D &lat) const {
    std::vector<int> out;
    for (int v = 0; v < lat.n_vertices(); v++) {
        bool has_a = false, has_b = false;
        for (int e : lat.star_edges(v)) {
            (in_a[e] ? has_a : has_b) = true;
        }
        if (has_a && has_b) {
            out.push_back(v);
        }
    }
    return out;
}

std::vector<int> Bipartition::boundary_vertices_3d(const Torus3D &lat) const {
    std::vector<int> out;
    for (int v = 0; v < lat.n_vertices(); v++) {
        bool has_a = false, has_b = false;
        for (int e : lat.star_edges(v)) {
            (in_a[e] ? has_a : has_b) = true;
        }
        if (has_a && has_b) {
            out.push_back(v);
        }
    }
    return out;
}

Bipartition rect_region_2d(const Torus2D &lat, int x0, int y0, int w, int h) {
    if (w < 1 || h < 1 || w >= lat.lx || h >= lat.ly) {
        throw std::invalid_argument("rect_region_2d: block must be nontrivial and non-wrapping");
    }
    Bipartition bp;
    bp.in_a.assign(lat.n_edges(), 0);
    for (int dy = 0; dy < h; dy++) {
        for (int dx = 0; dx < w; dx++) {
            for (int e : lat.plaquette_edges(lat.plaquette(x0 + dx, y0 + dy))) {
                bp.in_a[e] = 1;
            }
        }
    }
    return bp;
}

Bipartition box_region_3d(const Torus3D &lat, int w, int h, int d) {
    if (w < 1 || h < 1 || d < 1 || w > lat.lx || h > lat.ly || d > lat.lz) {
        throw std::invalid_argument("box_region_3d: bad box");
    }
    // A = every edge touching the vertex box [0,w) x [0,h) x [0,d).
    Bipartition bp;
    bp.in_a.assign(lat.n_edges(), 0);
    for (int e = 0; e < lat.n_edges(); e++) {
        auto [u, v] = lat.edge_vertices(e);
        auto inside = [&](int vtx) {
            auto [x, y, z] = lat.cell_xyz(vtx);
            return x < w && y < h && z < d;
        };
        if (inside(u) || inside(v)) {
            bp.in_a[e] = 1;
        }
    }
    return bp;
}

int region_boundary_size_2d(const Torus2D &lat, const Bipartition &bp) {
    return (int)bp.boundary_vertices_2d(lat).size();
}

}  // namespace decotop::lattice
