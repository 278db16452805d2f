#include "fluxtune/inductance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fluxtune/constants.hpp"
#include "fluxtune/parallel.hpp"

namespace fluxtune {

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

WireLoop::WireLoop(std::vector<Vec3> vertices_, double wire_radius_,
                   int subdivisions_per_segment_)
    : vertices(std::move(vertices_)),
      wire_radius(wire_radius_),
      subdivisions_per_segment(subdivisions_per_segment_) {
    if (vertices.size() >= 2 && (vertices.front() - vertices.back()).norm() == 0.0) {
        vertices.pop_back();  // accept explicitly closed rings
    }
    if (vertices.size() < 3) {
        throw InvalidArgument("wire loop needs at least 3 distinct vertices");
    }
    if (!(wire_radius > 0.0)) {
        throw InvalidArgument("wire_radius must be > 0");
    }
    if (subdivisions_per_segment < 1) {
        throw InvalidArgument("subdivisions_per_segment must be >= 1");
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if ((segment(i).second - segment(i).first).norm() == 0.0) {
            throw InvalidArgument("wire loop contains a zero-length segment");
        }
    }
}

std::pair<Vec3, Vec3> WireLoop::segment(std::size_t i) const {
    return {vertices[i], vertices[(i + 1) % vertices.size()]};
}

namespace {

struct Filaments {
    // one entry per segment: unit-step element vector and midpoints
    struct Segment {
        Vec3 element;  // direction * (length / subdivisions)
        std::vector<Vec3> midpoints;
    };
    std::vector<Segment> segments;
};

Filaments subdivide(const WireLoop& loop) {
    Filaments out;
    out.segments.resize(loop.segment_count());
    const int k = loop.subdivisions_per_segment;
    for (std::size_t s = 0; s < loop.segment_count(); ++s) {
        const auto [p0, p1] = loop.segment(s);
        const Vec3 step = (p1 - p0) * (1.0 / k);
        auto& seg = out.segments[s];
        seg.element = step;
        seg.midpoints.reserve(k);
        for (int i = 0; i < k; ++i) {
            seg.midpoints.push_back(p0 + step * (i + 0.5));
        }
    }
    return out;
}

// Deterministic ordering of the two loops so that M(a, b) and M(b, a) run
// the identical floating-point reduction.
bool comes_first(const WireLoop& a, const WireLoop& b) {
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    if (a.subdivisions_per_segment != b.subdivisions_per_segment) {
        return a.subdivisions_per_segment < b.subdivisions_per_segment;
    }
    for (std::size_t i = 0; i < a.vertices.size(); ++i) {
        const Vec3& va = a.vertices[i];
        const Vec3& vb = b.vertices[i];
        if (va.x != vb.x) return va.x < vb.x;
        if (va.y != vb.y) return va.y < vb.y;
        if (va.z != vb.z) return va.z < vb.z;
    }
    return a.wire_radius <= b.wire_radius;
}

struct PairSum {
    double inverse_distance_sum = 0.0;
    double dot_term = 0.0;
    long floored = 0;
    long count = 0;
    bool shared = false;
};

InductanceBreakdown neumann_sum(const WireLoop& first, const WireLoop& second,
                                std::span<const std::pair<int, int>> shared_first_second) {
    const Filaments fa = subdivide(first);
    const Filaments fb = subdivide(second);
    const double radius = std::max(first.wire_radius, second.wire_radius);
    const std::size_t nb = second.segment_count();

    auto is_shared = [&](std::size_t sa, std::size_t sb) {
        for (const auto& [ia, ib] : shared_first_second) {
            if (static_cast<std::size_t>(ia) == sa && static_cast<std::size_t>(ib) == sb) {
                return true;
            }
        }
        return false;
    };

    std::vector<PairSum> partial(first.segment_count() * nb);
    parallel_for(partial.size(), [&](std::size_t pair_index) {
        const std::size_t sa = pair_index / nb;
        const std::size_t sb = pair_index % nb;
        PairSum sum;
        sum.shared = is_shared(sa, sb);
        sum.dot_term = fa.segments[sa].element.dot(fb.segments[sb].element);
        for (const Vec3& ma : fa.segments[sa].midpoints) {
            for (const Vec3& mb : fb.segments[sb].midpoints) {
                const double d = (ma - mb).norm();
                double effective = d;
                if (sum.shared) {
                    // coincident wires: transverse offset of one wire radius
                    effective = std::hypot(d, radius);
                } else if (d < radius) {
                    effective = radius;
                    ++sum.floored;
                }
                sum.inverse_distance_sum += 1.0 / effective;
                ++sum.count;
            }
        }
        partial[pair_index] = sum;
    });

    // canonical-order reduction
    InductanceBreakdown breakdown;
    long nonshared_pairs = 0;
    long nonshared_floored = 0;
    double shared_sum = 0.0;
    double nonshared_sum = 0.0;
    for (const PairSum& sum : partial) {
        const double contribution = sum.dot_term * sum.inverse_distance_sum;
        if (sum.shared) {
            shared_sum += contribution;
        } else {
            nonshared_sum += contribution;
            nonshared_pairs += sum.count;
            nonshared_floored += sum.floored;
        }
    }

    const double prefactor = si::mu0 / (4.0 * std::numbers::pi);
    breakdown.shared = prefactor * shared_sum;
    breakdown.nonshared = prefactor * nonshared_sum;
    breakdown.total = prefactor * (shared_sum + nonshared_sum);
    breakdown.floored_fraction =
        nonshared_pairs > 0 ? static_cast<double>(nonshared_floored) /
                                  static_cast<double>(nonshared_pairs)
                            : 0.0;

    if (breakdown.floored_fraction > 0.01) {
        std::ostringstream msg;
        msg << "loops overlap: " << breakdown.floored_fraction * 100.0
            << "% of non-shared filament pairs sit at the wire-radius floor";
        throw GeometryOverlap(msg.str());
    }
    return breakdown;
}

}  // namespace

double mutual_inductance(const WireLoop& loop_a, const WireLoop& loop_b) {
    return shared_edge_estimate(loop_a, loop_b, {}).total;
}

InductanceBreakdown shared_edge_estimate(const WireLoop& loop_a, const WireLoop& loop_b,
                                         std::span<const std::pair<int, int>> shared_segments) {
    for (const auto& [ia, ib] : shared_segments) {
        if (ia < 0 || static_cast<std::size_t>(ia) >= loop_a.segment_count() || ib < 0 ||
            static_cast<std::size_t>(ib) >= loop_b.segment_count()) {
            throw InvalidArgument("shared segment index out of range");
        }
    }
    if (comes_first(loop_a, loop_b)) {
        return neumann_sum(loop_a, loop_b, shared_segments);
    }
    std::vector<std::pair<int, int>> swapped;
    swapped.reserve(shared_segments.size());
    for (const auto& [ia, ib] : shared_segments) swapped.emplace_back(ib, ia);
    return neumann_sum(loop_b, loop_a, swapped);
}

double filament_mutual(std::span<const Vec3> path_a, std::span<const Vec3> path_b,
                       double radius_floor, int subdivisions) {
    if (path_a.size() < 2 || path_b.size() < 2) {
        throw InvalidArgument("polylines need at least 2 points");
    }
    if (subdivisions < 1) {
        throw InvalidArgument("subdivisions must be >= 1");
    }
    double sum = 0.0;
    for (std::size_t sa = 0; sa + 1 < path_a.size(); ++sa) {
        const Vec3 step_a = (path_a[sa + 1] - path_a[sa]) * (1.0 / subdivisions);
        for (std::size_t sb = 0; sb + 1 < path_b.size(); ++sb) {
            const Vec3 step_b = (path_b[sb + 1] - path_b[sb]) * (1.0 / subdivisions);
            const double dot_term = step_a.dot(step_b);
            if (dot_term == 0.0) continue;
            double inv = 0.0;
            for (int i = 0; i < subdivisions; ++i) {
                const Vec3 ma = path_a[sa] + step_a * (i + 0.5);
                for (int j = 0; j < subdivisions; ++j) {
                    const Vec3 mb = path_b[sb] + step_b * (j + 0.5);
                    inv += 1.0 / std::max((ma - mb).norm(), radius_floor);
                }
            }
            sum += dot_term * inv;
        }
    }
    return si::mu0 / (4.0 * std::numbers::pi) * sum;
}

}  // namespace fluxtune
