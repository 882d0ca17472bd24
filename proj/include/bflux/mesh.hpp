#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bflux {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

// ---------------------------------------------------------------------------
// 1D interval chain on [0, L] with the boundary-cell degree layout
// [m+p, m, ..., m, m+p]. Refinement in p is static: rebuilding after an h
// refinement re-derives the same layout on the new cell count.
// ---------------------------------------------------------------------------
struct Mesh1D {
    double length = 1.0;        // L
    int n_cells = 0;            // N
    int interior_degree = 1;    // m
    int boundary_increment = 0; // p
    std::vector<int> degrees;   // per cell

    double cell_width() const { return length / n_cells; }
};

Mesh1D build_mesh_1d(double L, int N, int m, int p);
Mesh1D refine_uniform(const Mesh1D& mesh);

// ---------------------------------------------------------------------------
// Generic quadrilateral mesh. Cells store both topology (vertex ids) and
// their own corner positions; periodic identification is purely topological,
// so a cell on the periodic seam keeps its geometric corners while sharing
// vertex ids with the wrapped column.
//
// Reference conventions for a cell (v0, v1, v2, v3) listed counterclockwise:
//   bilinear map x(xi, eta) with corners at (0,0), (1,0), (1,1), (0,1);
//   deg_x is the polynomial degree along xi, deg_y along eta;
//   face 0: eta=0, face 1: xi=1, face 2: eta=1, face 3: xi=0.
// ---------------------------------------------------------------------------
struct QuadCell {
    std::array<int, 4> v{};
    std::array<Point2, 4> corner{};
    int deg_x = 1;
    int deg_y = 1;
};

struct FaceRef {
    int cell = 0;
    int face = 0;
};

// face -> (start corner, end corner), node order ascending in the varying
// reference coordinate.
inline constexpr std::array<std::array<int, 2>, 4> kFaceCorners = {{{0, 1}, {1, 2}, {3, 2}, {0, 3}}};

// Degree of the trace polynomial along a face.
int face_degree(const QuadCell& cell, int face);

// Bilinear reference-to-physical map and its Jacobian determinant.
Point2 cell_map(const QuadCell& cell, double xi, double eta);
double cell_jacobian_determinant(const QuadCell& cell, double xi, double eta);

struct QuadMesh {
    enum class NormalKind { face_geometry, radial };

    std::vector<Point2> vertices;
    std::vector<QuadCell> cells;
    std::vector<FaceRef> dirichlet_faces;
    std::vector<FaceRef> boundary_faces;  // every non-periodic boundary face
    NormalKind normal_kind = NormalKind::face_geometry;
    double boundary_radius = 0.0;  // circle radius when normal_kind == radial

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_cells() const { return static_cast<int>(cells.size()); }
};

/// Outward unit normal of a boundary face, evaluated at the face midpoint
/// (exact for the straight faces used here).
Point2 face_outward_normal(const QuadMesh& mesh, FaceRef face);

/// Minimum bilinear-map Jacobian determinant over all cells at an
/// n_gauss x n_gauss tensor Gauss rule.
double min_jacobian_determinant(const QuadMesh& mesh, int n_gauss);

// ---------------------------------------------------------------------------
// Tensor-product grid on [0,1] x [0, L], optionally periodic in x.
// ---------------------------------------------------------------------------
enum class RefinementMode { normal, isotropic };

struct SideSet {
    bool left = false;    // x = 0
    bool right = false;   // x = 1
    bool bottom = false;  // y = 0
    bool top = false;     // y = L
};

struct TensorMesh2D {
    int nx = 0;
    int ny = 0;
    double length_y = 1.0;
    bool periodic_x = false;
    int p = 0;
    RefinementMode mode = RefinementMode::normal;
    SideSet dirichlet_sides;
    QuadMesh quads;

    double dx() const { return 1.0 / nx; }
    double dy() const { return length_y / ny; }
    int cell_index(int ix, int iy) const { return iy * nx + ix; }
};

TensorMesh2D build_tensor_mesh_2d(int nx, int ny, int p, RefinementMode mode, bool periodic_x,
                                  SideSet dirichlet_sides, double length_y = 1.0);
TensorMesh2D refine_uniform(const TensorMesh2D& mesh);

// ---------------------------------------------------------------------------
// Disk mesh: a central Cartesian square of half-width radius/(2*sqrt(2)) plus
// one transfinite block per side blending the square edge (Cartesian regime)
// into the circular arc (polar regime). Radial grid lines are exact rays, so
// the boundary layer stays aligned with the (r, theta) axes at every
// refinement. Each refinement quadrisects every quad, with the new vertices
// placed by the same blended parametrization and boundary vertices exactly on
// the circle. Cells owning a boundary face carry degree (1, 1+p), eta radial.
// ---------------------------------------------------------------------------
struct MappedMesh2D {
    double radius = 1.0;
    int p = 0;
    int refinements = 0;
    QuadMesh quads;
};

MappedMesh2D build_disk_mesh(double radius, int refinements, int p = 0);
MappedMesh2D refine_uniform(const MappedMesh2D& mesh);

/// Plain-text dump: `vertex x y` and `quad i0 i1 i2 i3 degx degy` lines.
void dump_mesh(const QuadMesh& mesh, std::ostream& out);
/// 1D meshes are rendered as a one-cell-tall strip of quads for plotting.
void dump_mesh(const Mesh1D& mesh, std::ostream& out);

}  // namespace bflux
