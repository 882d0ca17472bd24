#pragma once

#include <utility>
#include <vector>

#include "bflux/mesh.hpp"

namespace bflux {

/// A nonconforming (isotropic-refinement) face node tied to the face's two
/// endpoint vertices so that the trace stays continuous against the linear
/// neighbor. Weights sum to 1.
struct Constraint {
    int dof = -1;
    std::vector<std::pair<int, double>> masters;
};

struct DofSystem {
    int total_dofs = 0;
    std::vector<std::vector<int>> cell_dofs;  // local lexicographic -> global
    std::vector<Point2> positions;            // global dof -> node position
    std::vector<int> dirichlet;               // sorted, unique
    std::vector<char> is_dirichlet;
    std::vector<Constraint> constraints;
    std::vector<int> constraint_index;  // global dof -> index in constraints, or -1

    bool constrained(int dof) const { return constraint_index[dof] >= 0; }
    int n_cells() const { return static_cast<int>(cell_dofs.size()); }
};

DofSystem enumerate_dofs(const Mesh1D& mesh);
DofSystem enumerate_dofs(const QuadMesh& mesh);

/// Interior-node weights for a degree-(1+p) face trace constrained against a
/// degree-1 neighbor: node k sits at t = (k+1)/high_degree and is tied to the
/// endpoints with weights (1-t, t).
std::vector<std::pair<double, double>> isotropic_face_constraints(int low_degree, int high_degree);

/// Local tensor node index (i, j) -> j*(deg_x+1) + i.
inline int local_node_index(int i, int j, int deg_x) { return j * (deg_x + 1) + i; }

}  // namespace bflux
