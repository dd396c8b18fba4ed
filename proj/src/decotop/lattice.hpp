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

#ifndef DECOTOP_LATTICE_HPP
#define DECOTOP_LATTICE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "decotop/gf2.hpp"

namespace decotop::lattice {

// Indexing convention (version "decotop-conv-1"): cells are row-major with x
// fastest. 2d edges come in two blocks, horizontal first then vertical; 3d
// edges and faces come in direction-major blocks (x, then y, then z normal).

constexpr const char *kConventionVersion = "decotop-conv-1";

// Square-lattice torus. Qubits/couplings live on edges; spins can sit on
// vertices or plaquettes depending on the model.
struct Torus2D {
    int lx = 0, ly = 0;

    int n_vertices() const { return lx * ly; }
    int n_edges() const { return 2 * lx * ly; }
    int n_plaquettes() const { return lx * ly; }

    int vertex(int x, int y) const { return mod(y, ly) * lx + mod(x, lx); }
    int plaquette(int x, int y) const { return vertex(x, y); }
    // Horizontal edge from (x,y) to (x+1,y).
    int h_edge(int x, int y) const { return vertex(x, y); }
    // Vertical edge from (x,y) to (x,y+1).
    int v_edge(int x, int y) const { return lx * ly + vertex(x, y); }

    bool edge_is_horizontal(int e) const { return e < lx * ly; }
    // (x,y) anchor of an edge (its tail vertex).
    std::array<int, 2> edge_xy(int e) const;
    std::array<int, 2> edge_vertices(int e) const;
    std::array<int, 2> edge_plaquettes(int e) const;
    // The 4 edges meeting at vertex (its star).
    std::array<int, 4> star_edges(int v) const;
    // The 4 boundary edges of plaquette p, whose corners are (x,y)..(x+1,y+1).
    std::array<int, 4> plaquette_edges(int p) const;

    static int mod(int a, int m) { return ((a % m) + m) % m; }
};

Torus2D build_torus_2d(int lx, int ly);

// Cubic-lattice torus.
struct Torus3D {
    int lx = 0, ly = 0, lz = 0;

    int n_vertices() const { return lx * ly * lz; }
    int n_edges() const { return 3 * n_vertices(); }
    int n_faces() const { return 3 * n_vertices(); }
    int n_cubes() const { return n_vertices(); }

    int vertex(int x, int y, int z) const {
        return (mod(z, lz) * ly + mod(y, ly)) * lx + mod(x, lx);
    }
    int cube(int x, int y, int z) const { return vertex(x, y, z); }
    // Edge along direction d (0=x,1=y,2=z) anchored at vertex (x,y,z).
    int edge(int d, int x, int y, int z) const { return d * n_vertices() + vertex(x, y, z); }
    // Face with normal direction d anchored at (x,y,z); spans the two other
    // directions starting from the anchor.
    int face(int d, int x, int y, int z) const { return d * n_vertices() + vertex(x, y, z); }

    int edge_direction(int e) const { return e / n_vertices(); }
    int face_normal(int f) const { return f / n_vertices(); }
    std::array<int, 3> cell_xyz(int idx_within_block) const;

    std::array<int, 2> edge_vertices(int e) const;
    std::array<int, 4> face_edges(int f) const;
    std::array<int, 4> edge_faces(int e) const;
    std::array<int, 6> cube_faces(int c) const;
    std::array<int, 12> cube_edges(int c) const;
    // The 4 cubes sharing edge e.
    std::array<int, 4> edge_cubes(int e) const;
    std::array<int, 6> star_edges(int v) const;
    // The 4 edges at vertex v normal to direction gamma.
    std::array<int, 4> planar_star_edges(int v, int gamma) const;

    static int mod(int a, int m) { return ((a % m) + m) % m; }
};

Torus3D build_torus_3d(int lx, int ly, int lz);

enum class CycleKind {
    primal_loop,     // closed loop of edges on the lattice
    dual_loop,       // 2d: edges crossed by a loop on the dual lattice
    dual_membrane,   // 3d: edges crossed by a dual plane
    primal_membrane  // 3d: faces forming a plane (kept for completeness)
};

struct Cycle {
    std::vector<int> edges;
    CycleKind kind = CycleKind::primal_loop;
    int direction = 0;  // torus direction the cycle winds around (or plane normal)
    bool contractible = false;
};

// Non-contractible representative cycles through the origin.
Cycle primal_loop_2d(const Torus2D &lat, int direction);
Cycle dual_loop_2d(const Torus2D &lat, int direction);
Cycle primal_loop_3d(const Torus3D &lat, int direction);
Cycle dual_membrane_3d(const Torus3D &lat, int normal);

// One +/-1 value per cell of some lattice block (edges unless stated).
struct BinaryConfig {
    std::vector<int8_t> s;

    int size() const { return (int)s.size(); }
    static BinaryConfig ones(int n) { return BinaryConfig{std::vector<int8_t>(n, +1)}; }
    uint64_t to_mask() const;  // bit set where s == -1 (size <= 64)
    static BinaryConfig from_mask(uint64_t m, int n);
};

struct FluxAndLogical {
    std::vector<int8_t> flux;  // per plaquette
    int8_t logical_x = +1;
    int8_t logical_y = +1;

    bool operator==(const FluxAndLogical &o) const {
        return flux == o.flux && logical_x == o.logical_x && logical_y == o.logical_y;
    }
};

// Plaquette fluxes f_p = prod_{e in p} x_e plus the two logical labels read
// along the fixed representative loops (x row / y column through the origin).
FluxAndLogical flux_of(const BinaryConfig &config, const Torus2D &lat);

// Lexicographically smallest configuration in the vertex-gauge orbit of
// `config` (gauge move: x_e -> x_e * prod_{v in e} sigma_v). Two configs share
// a representative iff they share FluxAndLogical.
BinaryConfig gauge_orbit_representative(const BinaryConfig &config, const Torus2D &lat);

// Basis of the vertex-gauge group acting on edge signs (star patterns).
Gf2Basis gauge_group_2d(const Torus2D &lat);

// Edge bipartition with derived boundary vertex data.
struct Bipartition {
    std::vector<uint8_t> in_a;  // per edge

    int n_a() const;
    std::vector<int> boundary_vertices_2d(const Torus2D &lat) const;
    std::vector<int> boundary_vertices_3d(const Torus3D &lat) const;
};

// All edges of a w x h block of plaquettes anchored at (x0,y0); the region is
// required to be simply connected (w < lx, h < ly).
Bipartition rect_region_2d(const Torus2D &lat, int x0, int y0, int w, int h);

// All edges incident to a w x h x d block of vertices anchored at the origin
// corner; used for 3d entanglement cuts.
Bipartition box_region_3d(const Torus3D &lat, int w, int h, int d);

int region_boundary_size_2d(const Torus2D &lat, const Bipartition &bp);

}  // namespace decotop::lattice

#endif
