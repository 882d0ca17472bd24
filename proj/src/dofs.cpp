#include "bflux/dofs.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace bflux {

std::vector<std::pair<double, double>> isotropic_face_constraints(int low_degree,
                                                                  int high_degree) {
    if (low_degree != 1)
        throw std::invalid_argument(
            "isotropic_face_constraints: only degree-1 neighbors are supported");
    if (high_degree < 2)
        throw std::invalid_argument("isotropic_face_constraints: high side must have degree >= 2");
    std::vector<std::pair<double, double>> weights;
    weights.reserve(high_degree - 1);
    for (int k = 1; k < high_degree; ++k) {
        const double t = static_cast<double>(k) / high_degree;
        weights.emplace_back(1.0 - t, t);
    }
    return weights;
}

DofSystem enumerate_dofs(const Mesh1D& mesh) {
    DofSystem dofs;
    const int n = mesh.n_cells;
    const double h = mesh.cell_width();

    // Vertices first, then cell-interior nodes in cell order.
    dofs.positions.reserve(n + 1);
    for (int v = 0; v <= n; ++v) dofs.positions.push_back({0.0, v * h});

    dofs.cell_dofs.resize(n);
    int next = n + 1;
    for (int c = 0; c < n; ++c) {
        const int deg = mesh.degrees[c];
        std::vector<int>& local = dofs.cell_dofs[c];
        local.resize(deg + 1);
        local.front() = c;
        local.back() = c + 1;
        for (int k = 1; k < deg; ++k) {
            local[k] = next++;
            dofs.positions.push_back({0.0, (c + static_cast<double>(k) / deg) * h});
        }
    }
    dofs.total_dofs = next;
    dofs.is_dirichlet.assign(dofs.total_dofs, 0);
    dofs.is_dirichlet[0] = 1;
    dofs.is_dirichlet[n] = 1;
    dofs.dirichlet = {0, n};
    dofs.constraint_index.assign(dofs.total_dofs, -1);
    return dofs;
}

namespace {

struct EdgeInfo {
    int degree = -1;            // degree of the allocated trace nodes
    int largest_degree = -1;    // max degree seen across incident cells
    bool mixed = false;         // incident cells disagree on the face degree
    int first_dof = -1;
    Point2 pa, pb;              // canonical endpoints (low id -> high id)
};

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(const QuadCell& cell, int face) {
    const auto [a, b] = kFaceCorners[face];
    return std::minmax(cell.v[a], cell.v[b]);
}

}  // namespace

DofSystem enumerate_dofs(const QuadMesh& mesh) {
    DofSystem dofs;
    dofs.positions.assign(mesh.vertices.begin(), mesh.vertices.end());

    // Pass 1: degrees per edge. An edge shared with equal trace degree is
    // conforming; a degree-1 side against a refined side gets constrained.
    std::map<EdgeKey, EdgeInfo> edges;
    for (const QuadCell& cell : mesh.cells) {
        for (int f = 0; f < 4; ++f) {
            const int deg = face_degree(cell, f);
            EdgeInfo& info = edges[edge_key(cell, f)];
            if (info.largest_degree < 0) {
                const auto [a, b] = kFaceCorners[f];
                const bool forward = cell.v[a] < cell.v[b];
                info.pa = forward ? cell.corner[a] : cell.corner[b];
                info.pb = forward ? cell.corner[b] : cell.corner[a];
                info.largest_degree = deg;
            } else if (deg != info.largest_degree) {
                if (std::min(deg, info.largest_degree) != 1)
                    throw std::invalid_argument(
                        "enumerate_dofs: mismatched face degrees with both sides above 1");
                info.mixed = true;
                info.largest_degree = std::max(deg, info.largest_degree);
            }
        }
    }

    int next = mesh.n_vertices();
    for (auto& [key, info] : edges) {
        info.degree = info.largest_degree;
        if (info.degree < 2) continue;
        info.first_dof = next;
        for (int k = 1; k < info.degree; ++k) {
            const double t = static_cast<double>(k) / info.degree;
            dofs.positions.push_back(
                {(1.0 - t) * info.pa.x + t * info.pb.x, (1.0 - t) * info.pa.y + t * info.pb.y});
            ++next;
        }
        if (info.mixed) {
            const auto weights = isotropic_face_constraints(1, info.degree);
            for (int k = 1; k < info.degree; ++k) {
                Constraint c;
                c.dof = info.first_dof + k - 1;
                c.masters = {{key.first, weights[k - 1].first}, {key.second, weights[k - 1].second}};
                dofs.constraints.push_back(std::move(c));
            }
        }
    }

    // Pass 2: local -> global maps, with cell-interior nodes appended.
    dofs.cell_dofs.resize(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const QuadCell& cell = mesh.cells[c];
        const int dx = cell.deg_x;
        const int dy = cell.deg_y;
        std::vector<int>& local = dofs.cell_dofs[c];
        local.assign(static_cast<std::size_t>(dx + 1) * (dy + 1), -1);

        local[local_node_index(0, 0, dx)] = cell.v[0];
        local[local_node_index(dx, 0, dx)] = cell.v[1];
        local[local_node_index(dx, dy, dx)] = cell.v[2];
        local[local_node_index(0, dy, dx)] = cell.v[3];

        for (int f = 0; f < 4; ++f) {
            const int deg = face_degree(cell, f);
            if (deg < 2) continue;
            const EdgeInfo& info = edges.at(edge_key(cell, f));
            if (info.degree != deg)
                throw std::logic_error("enumerate_dofs: inconsistent edge degree bookkeeping");
            const auto [a, b] = kFaceCorners[f];
            const bool forward = cell.v[a] < cell.v[b];
            for (int k = 1; k < deg; ++k) {
                const int canonical = forward ? k : deg - k;
                const int g = info.first_dof + canonical - 1;
                int i, j;
                switch (f) {
                    case 0: i = k; j = 0; break;
                    case 1: i = dx; j = k; break;
                    case 2: i = k; j = dy; break;
                    default: i = 0; j = k; break;
                }
                local[local_node_index(i, j, dx)] = g;
            }
        }

        for (int j = 1; j < dy; ++j)
            for (int i = 1; i < dx; ++i) {
                local[local_node_index(i, j, dx)] = next++;
                dofs.positions.push_back(cell_map(cell, static_cast<double>(i) / dx,
                                                  static_cast<double>(j) / dy));
            }
    }

    dofs.total_dofs = next;
    dofs.is_dirichlet.assign(dofs.total_dofs, 0);
    dofs.constraint_index.assign(dofs.total_dofs, -1);
    for (int i = 0; i < static_cast<int>(dofs.constraints.size()); ++i)
        dofs.constraint_index[dofs.constraints[i].dof] = i;

    // Dirichlet: face endpoint vertices plus the face's trace nodes.
    for (const FaceRef& fr : mesh.dirichlet_faces) {
        const QuadCell& cell = mesh.cells[fr.cell];
        const auto [a, b] = kFaceCorners[fr.face];
        dofs.is_dirichlet[cell.v[a]] = 1;
        dofs.is_dirichlet[cell.v[b]] = 1;
        const EdgeInfo& info = edges.at(edge_key(cell, fr.face));
        for (int k = 1; k < info.degree; ++k) dofs.is_dirichlet[info.first_dof + k - 1] = 1;
    }
    for (int d = 0; d < dofs.total_dofs; ++d)
        if (dofs.is_dirichlet[d]) {
            dofs.dirichlet.push_back(d);
            if (dofs.constrained(d))
                throw std::logic_error("enumerate_dofs: a dof is both Dirichlet and constrained");
        }
    return dofs;
}

}  // namespace bflux
