#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "fluxtune/errors.hpp"

namespace fluxtune {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
};

// Closed polygonal wire loop. Vertices are stored as an open ring; a
// trailing vertex equal to the first is dropped on construction.
struct WireLoop {
    std::vector<Vec3> vertices;
    double wire_radius;            // m
    int subdivisions_per_segment;  // filaments per polygon edge

    WireLoop(std::vector<Vec3> vertices, double wire_radius, int subdivisions_per_segment);

    std::size_t segment_count() const { return vertices.size(); }
    // directed segment i, from vertices[i] to vertices[(i+1) % n]
    std::pair<Vec3, Vec3> segment(std::size_t i) const;
};

struct InductanceBreakdown {
    double total = 0.0;      // H
    double shared = 0.0;     // H, contribution of declared shared segment pairs
    double nonshared = 0.0;  // H
    double floored_fraction = 0.0;  // non-shared filament pairs at the radius floor
};

// Neumann double sum over midpoint filaments:
//   M = (mu0 / 4 pi) sum_ij (dl_i . dl_j) / r_ij
// with r_ij floored at the larger wire radius. Bit-exact symmetric in its
// arguments. Throws GeometryOverlap when more than 1% of non-shared pairs
// sit at the floor.
double mutual_inductance(const WireLoop& loop_a, const WireLoop& loop_b);

// Same sum, with the listed segment pairs (index in a, index in b) treated
// as galvanically shared edges: their filament pairs are evaluated at a
// transverse separation of one wire radius and reported separately.
InductanceBreakdown shared_edge_estimate(const WireLoop& loop_a, const WireLoop& loop_b,
                                         std::span<const std::pair<int, int>> shared_segments);

// Low-level kernel between two open polylines, for oracle checks against
// closed-form filament formulas. radius_floor regularizes near contact.
double filament_mutual(std::span<const Vec3> path_a, std::span<const Vec3> path_b,
                       double radius_floor, int subdivisions);

}  // namespace fluxtune
