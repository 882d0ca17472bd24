#include "bflux/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "bflux/basis.hpp"

namespace bflux {

Mesh1D build_mesh_1d(double L, int N, int m, int p) {
    if (L <= 0.0) throw std::invalid_argument("build_mesh_1d: L must be positive");
    if (N < 3) throw std::invalid_argument("build_mesh_1d: need N >= 3 so an interior cell exists");
    if (m < 1) throw std::invalid_argument("build_mesh_1d: interior degree must be >= 1");
    if (p < 0) throw std::invalid_argument("build_mesh_1d: p must be >= 0");
    if (m + p > kMaxBasisDegree)
        throw std::invalid_argument("build_mesh_1d: boundary degree m+p exceeds supported maximum");

    Mesh1D mesh;
    mesh.length = L;
    mesh.n_cells = N;
    mesh.interior_degree = m;
    mesh.boundary_increment = p;
    mesh.degrees.assign(N, m);
    mesh.degrees.front() = m + p;
    mesh.degrees.back() = m + p;
    return mesh;
}

Mesh1D refine_uniform(const Mesh1D& mesh) {
    return build_mesh_1d(mesh.length, 2 * mesh.n_cells, mesh.interior_degree,
                         mesh.boundary_increment);
}

int face_degree(const QuadCell& cell, int face) {
    return (face == 0 || face == 2) ? cell.deg_x : cell.deg_y;
}

Point2 cell_map(const QuadCell& cell, double xi, double eta) {
    const double w0 = (1.0 - xi) * (1.0 - eta);
    const double w1 = xi * (1.0 - eta);
    const double w2 = xi * eta;
    const double w3 = (1.0 - xi) * eta;
    return {w0 * cell.corner[0].x + w1 * cell.corner[1].x + w2 * cell.corner[2].x +
                w3 * cell.corner[3].x,
            w0 * cell.corner[0].y + w1 * cell.corner[1].y + w2 * cell.corner[2].y +
                w3 * cell.corner[3].y};
}

double cell_jacobian_determinant(const QuadCell& cell, double xi, double eta) {
    const auto& c = cell.corner;
    const double dxdxi = (c[1].x - c[0].x) * (1.0 - eta) + (c[2].x - c[3].x) * eta;
    const double dydxi = (c[1].y - c[0].y) * (1.0 - eta) + (c[2].y - c[3].y) * eta;
    const double dxdeta = (c[3].x - c[0].x) * (1.0 - xi) + (c[2].x - c[1].x) * xi;
    const double dydeta = (c[3].y - c[0].y) * (1.0 - xi) + (c[2].y - c[1].y) * xi;
    return dxdxi * dydeta - dxdeta * dydxi;
}

Point2 face_outward_normal(const QuadMesh& mesh, FaceRef face) {
    const QuadCell& cell = mesh.cells[face.cell];
    const auto [a, b] = kFaceCorners[face.face];
    const Point2 pa = cell.corner[a];
    const Point2 pb = cell.corner[b];
    const double tx = pb.x - pa.x;
    const double ty = pb.y - pa.y;
    const double len = std::hypot(tx, ty);
    Point2 n{ty / len, -tx / len};
    // Flip toward the outside: away from the cell centroid.
    Point2 centroid{0.0, 0.0};
    for (const Point2& c : cell.corner) {
        centroid.x += 0.25 * c.x;
        centroid.y += 0.25 * c.y;
    }
    const Point2 mid{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
    if (n.x * (mid.x - centroid.x) + n.y * (mid.y - centroid.y) < 0.0) {
        n.x = -n.x;
        n.y = -n.y;
    }
    return n;
}

double min_jacobian_determinant(const QuadMesh& mesh, int n_gauss) {
    const QuadratureRule rule = gauss_rule(n_gauss);
    double min_det = std::numeric_limits<double>::max();
    for (const QuadCell& cell : mesh.cells)
        for (double xi : rule.points)
            for (double eta : rule.points)
                min_det = std::min(min_det, cell_jacobian_determinant(cell, xi, eta));
    return min_det;
}

TensorMesh2D build_tensor_mesh_2d(int nx, int ny, int p, RefinementMode mode, bool periodic_x,
                                  SideSet dirichlet_sides, double length_y) {
    if (nx < 3 || ny < 3) throw std::invalid_argument("build_tensor_mesh_2d: need nx, ny >= 3");
    if (p < 0) throw std::invalid_argument("build_tensor_mesh_2d: p must be >= 0");
    if (1 + p > kMaxBasisDegree)
        throw std::invalid_argument("build_tensor_mesh_2d: boundary degree 1+p exceeds maximum");
    if (length_y <= 0.0) throw std::invalid_argument("build_tensor_mesh_2d: length_y must be positive");
    if (periodic_x && (dirichlet_sides.left || dirichlet_sides.right))
        throw std::invalid_argument(
            "build_tensor_mesh_2d: periodic_x cannot be combined with Dirichlet x-sides");

    TensorMesh2D mesh;
    mesh.nx = nx;
    mesh.ny = ny;
    mesh.length_y = length_y;
    mesh.periodic_x = periodic_x;
    mesh.p = p;
    mesh.mode = mode;
    mesh.dirichlet_sides = dirichlet_sides;

    const int nxv = periodic_x ? nx : nx + 1;
    const double hx = 1.0 / nx;
    const double hy = length_y / ny;

    QuadMesh& q = mesh.quads;
    q.vertices.resize(static_cast<std::size_t>(nxv) * (ny + 1));
    for (int iy = 0; iy <= ny; ++iy)
        for (int ix = 0; ix < nxv; ++ix)
            q.vertices[static_cast<std::size_t>(iy) * nxv + ix] = {ix * hx, iy * hy};

    auto vid = [&](int ix, int iy) {
        if (periodic_x) ix %= nx;
        return iy * nxv + ix;
    };

    q.cells.resize(static_cast<std::size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            QuadCell cell;
            cell.v = {vid(ix, iy), vid(ix + 1, iy), vid(ix + 1, iy + 1), vid(ix, iy + 1)};
            const double x0 = ix * hx, x1 = (ix + 1) * hx;
            const double y0 = iy * hy, y1 = (iy + 1) * hy;
            cell.corner = {Point2{x0, y0}, Point2{x1, y0}, Point2{x1, y1}, Point2{x0, y1}};

            const bool at_bottom = dirichlet_sides.bottom && iy == 0;
            const bool at_top = dirichlet_sides.top && iy == ny - 1;
            const bool at_left = dirichlet_sides.left && ix == 0;
            const bool at_right = dirichlet_sides.right && ix == nx - 1;
            if (mode == RefinementMode::normal) {
                if (at_bottom || at_top) cell.deg_y = 1 + p;
                if (at_left || at_right) cell.deg_x = 1 + p;
            } else if (at_bottom || at_top || at_left || at_right) {
                cell.deg_x = 1 + p;
                cell.deg_y = 1 + p;
            }
            q.cells[mesh.cell_index(ix, iy)] = cell;
        }
    }

    for (int ix = 0; ix < nx; ++ix) {
        q.boundary_faces.push_back({mesh.cell_index(ix, 0), 0});
        q.boundary_faces.push_back({mesh.cell_index(ix, ny - 1), 2});
        if (dirichlet_sides.bottom) q.dirichlet_faces.push_back({mesh.cell_index(ix, 0), 0});
        if (dirichlet_sides.top) q.dirichlet_faces.push_back({mesh.cell_index(ix, ny - 1), 2});
    }
    if (!periodic_x) {
        for (int iy = 0; iy < ny; ++iy) {
            q.boundary_faces.push_back({mesh.cell_index(0, iy), 3});
            q.boundary_faces.push_back({mesh.cell_index(nx - 1, iy), 1});
            if (dirichlet_sides.left) q.dirichlet_faces.push_back({mesh.cell_index(0, iy), 3});
            if (dirichlet_sides.right) q.dirichlet_faces.push_back({mesh.cell_index(nx - 1, iy), 1});
        }
    }
    return mesh;
}

TensorMesh2D refine_uniform(const TensorMesh2D& mesh) {
    return build_tensor_mesh_2d(2 * mesh.nx, 2 * mesh.ny, mesh.p, mesh.mode, mesh.periodic_x,
                                mesh.dirichlet_sides, mesh.length_y);
}

MappedMesh2D build_disk_mesh(double radius, int refinements, int p) {
    if (radius <= 0.0) throw std::invalid_argument("build_disk_mesh: radius must be positive");
    if (refinements < 0) throw std::invalid_argument("build_disk_mesh: refinements must be >= 0");
    if (p < 0 || 1 + p > kMaxBasisDegree)
        throw std::invalid_argument("build_disk_mesh: unsupported p");

    MappedMesh2D mesh;
    mesh.radius = radius;
    mesh.p = p;
    mesh.refinements = refinements;

    // Central square of half-width a, warped so its edge vertices sit on
    // equiangular rays, plus a radial zone blending the square edge (t = 0)
    // into the circle (t = 1). Every radial grid line is an exact ray, so
    // boundary cells stay aligned with the polar axes under refinement.
    const int n = 1 << refinements;  // cells per block direction
    const double a = radius / (2.0 * std::sqrt(2.0));
    auto warp = [&](int i) { return std::tan(-M_PI / 4.0 + (M_PI / 2.0) * i / n); };

    QuadMesh& q = mesh.quads;
    const int n_central = (n + 1) * (n + 1);
    auto central_id = [&](int i, int j) { return j * (n + 1) + i; };

    q.vertices.resize(n_central);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            q.vertices[central_id(i, j)] = {a * warp(i), a * warp(j)};

    // Rays k = 0..4n-1 counterclockwise from theta = -pi/4 (the square's SE
    // corner). Ring levels j = 1..n hold the radial-zone vertices; level 0
    // reuses the square-edge vertices of the central grid.
    auto square_edge_id = [&](int k) {
        k %= 4 * n;
        if (k <= n) return central_id(n, k);
        if (k <= 2 * n) return central_id(2 * n - k, n);
        if (k <= 3 * n) return central_id(0, 3 * n - k);
        return central_id(k - 3 * n, 0);
    };
    auto ring_id = [&](int k, int j) {
        k %= 4 * n;
        if (j == 0) return square_edge_id(k);
        return n_central + (j - 1) * 4 * n + k;
    };

    q.vertices.resize(n_central + n * 4 * n);
    for (int k = 0; k < 4 * n; ++k) {
        const double theta = -M_PI / 4.0 + (M_PI / 2.0) * k / n;
        const Point2 edge = q.vertices[square_edge_id(k)];
        const Point2 rim{radius * std::cos(theta), radius * std::sin(theta)};
        for (int j = 1; j <= n; ++j) {
            const double t = static_cast<double>(j) / n;
            q.vertices[ring_id(k, j)] = {(1.0 - t) * edge.x + t * rim.x,
                                         (1.0 - t) * edge.y + t * rim.y};
        }
    }

    auto add_cell = [&](int v0, int v1, int v2, int v3, int deg_y) {
        QuadCell cell;
        cell.v = {v0, v1, v2, v3};
        for (int i = 0; i < 4; ++i) cell.corner[i] = q.vertices[cell.v[i]];
        cell.deg_y = deg_y;
        q.cells.push_back(cell);
    };

    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            add_cell(central_id(i, j), central_id(i + 1, j), central_id(i + 1, j + 1),
                     central_id(i, j + 1), 1);

    // Radial cells: xi runs clockwise (decreasing theta) so that eta points
    // outward with counterclockwise corners; the outermost layer carries the
    // radial p-refinement and its eta = 1 face is the boundary.
    for (int j = 0; j < n; ++j) {
        const bool outermost = j == n - 1;
        for (int k = 0; k < 4 * n; ++k) {
            add_cell(ring_id(k + 1, j), ring_id(k, j), ring_id(k, j + 1), ring_id(k + 1, j + 1),
                     outermost ? 1 + p : 1);
            if (outermost) {
                const int cell = q.n_cells() - 1;
                q.boundary_faces.push_back({cell, 2});
            }
        }
    }

    q.dirichlet_faces = q.boundary_faces;
    q.normal_kind = QuadMesh::NormalKind::radial;
    q.boundary_radius = radius;
    return mesh;
}

MappedMesh2D refine_uniform(const MappedMesh2D& mesh) {
    // Topological quadrisection with vertices placed by the disk's blended
    // parametrization (chord midpoints would drift the boundary layer off the
    // polar axes); boundary vertices land exactly on the circle.
    return build_disk_mesh(mesh.radius, mesh.refinements + 1, mesh.p);
}

void dump_mesh(const QuadMesh& mesh, std::ostream& out) {
    for (const Point2& v : mesh.vertices) out << "vertex " << v.x << ' ' << v.y << '\n';
    for (const QuadCell& c : mesh.cells)
        out << "quad " << c.v[0] << ' ' << c.v[1] << ' ' << c.v[2] << ' ' << c.v[3] << ' '
            << c.deg_x << ' ' << c.deg_y << '\n';
}

void dump_mesh(const Mesh1D& mesh, std::ostream& out) {
    const double h = mesh.cell_width();
    for (int i = 0; i <= mesh.n_cells; ++i) out << "vertex " << i * h << " 0\n";
    for (int i = 0; i <= mesh.n_cells; ++i) out << "vertex " << i * h << ' ' << h << '\n';
    const int off = mesh.n_cells + 1;
    for (int c = 0; c < mesh.n_cells; ++c)
        out << "quad " << c << ' ' << c + 1 << ' ' << off + c + 1 << ' ' << off + c << ' '
            << mesh.degrees[c] << " 1\n";
}

}  // namespace bflux
