#include "vmm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace vmm {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

std::array<int, 2> sorted_edge(int a, int b) {
    return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
}

// Builds edges, cell_edges, boundary sets and h for a 2-D mesh whose
// vertices and triangles are already in place.
void finalize_2d(Mesh& m) {
    std::vector<std::array<int, 2>> all;
    all.reserve(3 * m.triangles.size());
    for (const auto& t : m.triangles) {
        all.push_back(sorted_edge(t[1], t[2]));
        all.push_back(sorted_edge(t[2], t[0]));
        all.push_back(sorted_edge(t[0], t[1]));
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    m.edges = all;

    auto edge_id = [&](int a, int b) {
        auto key = sorted_edge(a, b);
        auto it = std::lower_bound(m.edges.begin(), m.edges.end(), key);
        return static_cast<int>(it - m.edges.begin());
    };

    std::vector<int> use_count(m.edges.size(), 0);
    m.cell_edges.resize(m.triangles.size());
    for (std::size_t c = 0; c < m.triangles.size(); ++c) {
        const auto& t = m.triangles[c];
        m.cell_edges[c] = {edge_id(t[1], t[2]), edge_id(t[2], t[0]), edge_id(t[0], t[1])};
        for (int e : m.cell_edges[c]) ++use_count[e];
    }

    m.boundary_edges.clear();
    std::vector<char> on_boundary(m.vertices.size(), 0);
    for (std::size_t e = 0; e < m.edges.size(); ++e) {
        if (use_count[e] == 1) {
            m.boundary_edges.push_back(static_cast<int>(e));
            on_boundary[m.edges[e][0]] = 1;
            on_boundary[m.edges[e][1]] = 1;
        }
    }
    m.boundary_vertices.clear();
    for (std::size_t v = 0; v < m.vertices.size(); ++v)
        if (on_boundary[v]) m.boundary_vertices.push_back(static_cast<int>(v));

    m.h = 0.0;
    for (std::size_t c = 0; c < m.triangles.size(); ++c)
        m.h = std::max(m.h, m.cell_diameter(c));
}

}  // namespace

double Mesh::cell_diameter(std::size_t cell) const {
    if (dimension == 1) {
        const auto& s = segments[cell];
        return std::abs(vertices[s[1]].x() - vertices[s[0]].x());
    }
    const auto& t = triangles[cell];
    double d01 = (vertices[t[1]] - vertices[t[0]]).norm();
    double d12 = (vertices[t[2]] - vertices[t[1]]).norm();
    double d20 = (vertices[t[0]] - vertices[t[2]]).norm();
    return std::max({d01, d12, d20});
}

double Mesh::triangle_area(std::size_t cell) const {
    const auto& t = triangles[cell];
    return signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
}

Vec2 Mesh::edge_normal(int edge) const {
    const auto& e = edges[edge];
    Vec2 t = (vertices[e[1]] - vertices[e[0]]).normalized();
    return Vec2(t.y(), -t.x());
}

bool Mesh::vertex_on_boundary(int v) const {
    return std::binary_search(boundary_vertices.begin(), boundary_vertices.end(), v);
}

Mesh build_interval_mesh(double a, double b, int n) {
    if (!(a < b)) throw std::invalid_argument("interval mesh: need a < b");
    if (n < 1) throw std::invalid_argument("interval mesh: need n >= 1");
    Mesh m;
    m.dimension = 1;
    m.vertices.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        double x = a + (b - a) * (static_cast<double>(i) / n);
        m.vertices.emplace_back(x, 0.0);
    }
    m.vertices.front() = Vec2(a, 0.0);
    m.vertices.back() = Vec2(b, 0.0);
    m.segments.reserve(n);
    for (int i = 0; i < n; ++i) m.segments.push_back({i, i + 1});
    m.boundary_vertices = {0, n};
    m.h = 0.0;
    for (std::size_t c = 0; c < m.segments.size(); ++c)
        m.h = std::max(m.h, m.cell_diameter(c));
    return m;
}

Mesh build_rectangle_mesh(std::pair<double, double> x_bounds,
                          std::pair<double, double> y_bounds, int n) {
    auto [x0, x1] = x_bounds;
    auto [y0, y1] = y_bounds;
    if (!(x0 < x1) || !(y0 < y1))
        throw std::invalid_argument("rectangle mesh: degenerate bounds");
    if (n < 1) throw std::invalid_argument("rectangle mesh: need n >= 1");

    Mesh m;
    m.dimension = 2;
    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
            double x = (i == n) ? x1 : x0 + (x1 - x0) * (static_cast<double>(i) / n);
            double y = (j == n) ? y1 : y0 + (y1 - y0) * (static_cast<double>(j) / n);
            m.vertices.emplace_back(x, y);
        }
    // Every square is split by the same diagonal (lower-left to upper-right).
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            int v00 = vid(i, j), v10 = vid(i + 1, j);
            int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            m.triangles.push_back({v00, v10, v11});
            m.triangles.push_back({v00, v11, v01});
        }
    finalize_2d(m);
    return m;
}

Mesh build_disk_mesh(double radius, int n_boundary, int refine_levels) {
    if (!(radius > 0.0)) throw std::invalid_argument("disk mesh: need radius > 0");
    if (n_boundary < 6) throw std::invalid_argument("disk mesh: need n_boundary >= 6");
    if (refine_levels < 0) throw std::invalid_argument("disk mesh: refine_levels >= 0");

    Mesh m;
    m.dimension = 2;
    m.vertices.emplace_back(0.0, 0.0);
    for (int k = 0; k < n_boundary; ++k) {
        double th = 2.0 * M_PI * k / n_boundary;
        m.vertices.emplace_back(radius * std::cos(th), radius * std::sin(th));
    }
    for (int k = 0; k < n_boundary; ++k)
        m.triangles.push_back({0, 1 + k, 1 + (k + 1) % n_boundary});
    finalize_2d(m);

    for (int level = 0; level < refine_levels; ++level) {
        std::vector<char> boundary_edge(m.edges.size(), 0);
        for (int e : m.boundary_edges) boundary_edge[e] = 1;

        // One midpoint vertex per edge; midpoints of boundary edges are
        // projected back onto the circle.
        std::vector<int> midpoint(m.edges.size());
        for (std::size_t e = 0; e < m.edges.size(); ++e) {
            Vec2 p = 0.5 * (m.vertices[m.edges[e][0]] + m.vertices[m.edges[e][1]]);
            if (boundary_edge[e]) p *= radius / p.norm();
            midpoint[e] = static_cast<int>(m.vertices.size());
            m.vertices.push_back(p);
        }

        std::vector<std::array<int, 3>> refined;
        refined.reserve(4 * m.triangles.size());
        for (std::size_t c = 0; c < m.triangles.size(); ++c) {
            const auto& t = m.triangles[c];
            int m12 = midpoint[m.cell_edges[c][0]];
            int m20 = midpoint[m.cell_edges[c][1]];
            int m01 = midpoint[m.cell_edges[c][2]];
            refined.push_back({t[0], m01, m20});
            refined.push_back({m01, t[1], m12});
            refined.push_back({m20, m12, t[2]});
            refined.push_back({m01, m12, m20});
        }
        m.triangles = std::move(refined);
        finalize_2d(m);
    }
    return m;
}

ValidationReport validate_mesh(const Mesh& m, const MeshLimits& limits) {
    ValidationReport r;
    r.conforming = true;
    auto fail = [&r](std::string msg) {
        r.conforming = false;
        r.issues.push_back(std::move(msg));
    };

    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (std::size_t c = 0; c < m.cell_count(); ++c) {
        double d = m.cell_diameter(c);
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    r.min_diameter = dmin;
    r.max_diameter = dmax;
    r.h = dmax;
    if (m.cell_count() == 0) {
        fail("mesh has no cells");
        return r;
    }

    if (m.dimension == 1) {
        r.worst_shape_ratio = 1.0;
        for (const auto& s : m.segments)
            if (m.vertices[s[1]].x() <= m.vertices[s[0]].x())
                fail("segment with nonpositive length");
    } else {
        r.worst_shape_ratio = 0.0;
        for (std::size_t c = 0; c < m.triangles.size(); ++c) {
            const auto& t = m.triangles[c];
            double area = m.triangle_area(c);
            if (!(area > 0.0)) {
                fail("triangle " + std::to_string(c) + " not positively oriented");
                continue;
            }
            double l0 = (m.vertices[t[2]] - m.vertices[t[1]]).norm();
            double l1 = (m.vertices[t[0]] - m.vertices[t[2]]).norm();
            double l2 = (m.vertices[t[1]] - m.vertices[t[0]]).norm();
            double circum = l0 * l1 * l2 / (4.0 * area);
            double inr = area / (0.5 * (l0 + l1 + l2));
            double ratio = circum / inr;
            r.worst_shape_ratio = std::max(r.worst_shape_ratio, ratio);
            if (ratio > limits.shape_ratio_bound)
                fail("triangle " + std::to_string(c) + " shape ratio " + std::to_string(ratio));
        }

        // Conformity: each edge belongs to one (boundary) or two (interior)
        // triangles, and the two incident triangles traverse a shared edge in
        // opposite directions.
        std::map<std::array<int, 2>, std::vector<std::array<int, 2>>> uses;
        for (const auto& t : m.triangles) {
            const std::array<std::array<int, 2>, 3> dirs = {
                std::array<int, 2>{t[1], t[2]}, {t[2], t[0]}, {t[0], t[1]}};
            for (const auto& d : dirs) uses[sorted_edge(d[0], d[1])].push_back(d);
        }
        for (const auto& [key, dirs] : uses) {
            if (dirs.size() > 2) {
                fail("edge shared by more than two triangles");
            } else if (dirs.size() == 2 && dirs[0] == dirs[1]) {
                fail("interior edge traversed twice in the same direction");
            }
        }
    }

    if (dmin > 0.0 && dmax / dmin > limits.uniformity_bound)
        fail("quasi-uniformity ratio " + std::to_string(dmax / dmin));
    return r;
}

void dump_mesh(const Mesh& m, std::ostream& out) {
    out << "vmm-mesh dim " << m.dimension << "\n";
    out << "vertices " << m.vertices.size() << "\n";
    out.precision(17);
    for (std::size_t v = 0; v < m.vertices.size(); ++v)
        out << v << " " << m.vertices[v].x() << " " << m.vertices[v].y() << "\n";
    out << "cells " << m.cell_count() << "\n";
    for (std::size_t c = 0; c < m.cell_count(); ++c) {
        out << c;
        if (m.dimension == 1)
            out << " " << m.segments[c][0] << " " << m.segments[c][1];
        else
            out << " " << m.triangles[c][0] << " " << m.triangles[c][1] << " "
                << m.triangles[c][2];
        out << "\n";
    }
    out << "boundary_vertices " << m.boundary_vertices.size() << "\n";
    for (int v : m.boundary_vertices) out << v << "\n";
    out << "boundary_edges " << m.boundary_edges.size() << "\n";
    for (int e : m.boundary_edges)
        out << m.edges[e][0] << " " << m.edges[e][1] << "\n";
}

}  // namespace vmm
