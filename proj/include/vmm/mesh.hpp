#ifndef VMM_MESH_HPP
#define VMM_MESH_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace vmm {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Conforming simplicial mesh in 1-D (segments) or 2-D (triangles).
/// Immutable after construction; builders below are the only way to make one.
struct Mesh {
    int dimension = 0;
    std::vector<Vec2> vertices;                  // y == 0 in 1-D
    std::vector<std::array<int, 2>> segments;    // 1-D cells, left vertex first
    std::vector<std::array<int, 3>> triangles;   // 2-D cells, counterclockwise
    std::vector<std::array<int, 2>> edges;       // global edges, lower vertex index first
    std::vector<std::array<int, 3>> cell_edges;  // per triangle; local edge i is opposite vertex i
    std::vector<int> boundary_vertices;          // sorted ascending
    std::vector<int> boundary_edges;             // sorted edge ids
    double h = 0.0;                              // max cell diameter

    std::size_t cell_count() const {
        return dimension == 1 ? segments.size() : triangles.size();
    }
    double cell_diameter(std::size_t cell) const;
    double triangle_area(std::size_t cell) const;
    /// Unit normal of the global lo->hi edge orientation (tangent rotated -90 deg).
    Vec2 edge_normal(int edge) const;
    bool vertex_on_boundary(int v) const;
};

Mesh build_interval_mesh(double a, double b, int n);
Mesh build_rectangle_mesh(std::pair<double, double> x_bounds,
                          std::pair<double, double> y_bounds, int n);
Mesh build_disk_mesh(double radius, int n_boundary, int refine_levels);

struct MeshLimits {
    double shape_ratio_bound = 10.0;  // circumradius / inradius
    double uniformity_bound = 4.0;    // max diameter / min diameter
};

struct ValidationReport {
    double h = 0.0;
    double min_diameter = 0.0;
    double max_diameter = 0.0;
    double worst_shape_ratio = 0.0;
    bool conforming = false;
    std::vector<std::string> issues;
};

ValidationReport validate_mesh(const Mesh& mesh, const MeshLimits& limits = {});

/// Plain-text dump: sections for vertices, cells, boundary tags (see README).
void dump_mesh(const Mesh& mesh, std::ostream& out);

}  // namespace vmm

#endif
