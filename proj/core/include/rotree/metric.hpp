#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rotree/cadlag.hpp"
#include "rotree/rmq.hpp"
#include "rotree/transforms.hpp"

namespace rotree {

/*
 * d_x(s,t) = x(s) + x(t) - 2 inf_{[s∧t, s∨t]} x. The infimum over a closed window
 * of a piecewise affine càdlàg function is reached at the window ends, at the left
 * limit of the right end, or at a knot inside, so a range-minimum table over the
 * knots makes every query exact.
 */
class PseudoDistance {
public:
    explicit PseudoDistance(CadlagFn x);
    explicit PseudoDistance(const TimeScaledFn& f) : PseudoDistance(CadlagFn::from(f)) {}

    double operator()(double s, double t) const;
    double inf_between(double s, double t) const;  // inf over [s∧t, s∨t]
    const CadlagFn& function() const { return x_; }

private:
    CadlagFn x_;
    RangeMin<double> knot_min_;  // min(x(t_k-), x(t_k))
};

/* finite rooted metric space with optional masses, dist stored row-major */
struct MetricCloud {
    std::size_t m = 0;
    std::vector<double> times;  // source time of each point, empty for graph clouds
    std::vector<double> dist;
    std::size_t root = 0;
    std::vector<double> mass;  // empty or summing to 1

    std::size_t size() const { return m; }
    double operator()(std::size_t i, std::size_t j) const { return dist[i * m + j]; }
    double diameter() const;
    MetricCloud scaled(double factor) const;
};

// zero diagonal, symmetry, nonnegativity and (when check_triangle) every triangle
std::optional<std::string> check_metric(const MetricCloud& cloud, bool check_triangle, double tol = 1e-9);

enum class JumpPolicy {
    reject_negative,  // the quotient is the whole tree only without negative jumps
    allow_negative,   // caller knows the quotient is a subspace, e.g. the constant contour view
};

/*
 * Quotient cloud of x at the given times (one of which must be 0, the root). x must
 * be nonnegative, vanish at 0 and 1, and by default have no negative jump.
 */
MetricCloud tree_cloud(const CadlagFn& x, const std::vector<double>& times, std::vector<double> masses = {},
                       JumpPolicy policy = JumpPolicy::reject_negative);
MetricCloud tree_cloud(const TimeScaledFn& f, const std::vector<double>& times, std::vector<double> masses = {},
                       JumpPolicy policy = JumpPolicy::reject_negative);

// tree distances between the given vertices (all when empty) via contour range minima
MetricCloud vertex_cloud(const PlaneTree& tree, const std::vector<PlaneTree::Vertex>& vertices = {});

/*
 * Clouds of 𝒯_χ1 and 𝒯_χ2 sampled along an M1 certificate path (at most max_points
 * path entries, evenly spaced). Point k of both clouds is the k-th coupled pair, so
 * the diagonal correspondence follows the coupling and has distortion <= 4 x bound.
 */
std::pair<MetricCloud, MetricCloud> certificate_clouds(const ParamRep& p, const ParamRep& q, const M1Certificate& cert,
                                                        std::size_t max_points = 1000);

// graph distances of T between the given vertices (all vertices when empty); root is ∅ when listed
MetricCloud graph_cloud(const std::vector<std::vector<std::int32_t>>& adjacency, std::int32_t root,
                        const std::vector<std::int32_t>& vertices = {});
std::vector<std::vector<std::int32_t>> tree_adjacency(const PlaneTree& tree);
std::vector<std::int32_t> bfs_distances(const std::vector<std::vector<std::int32_t>>& adjacency, std::int32_t source);

// Loop(T) with unit corner edges; self-loops add nothing
MetricCloud looptree_cloud(const Looptree& loop, const std::vector<std::int32_t>& vertices = {});

// classes of points at distance 0 (labels in first-appearance order)
std::vector<std::size_t> quotient_classes(const MetricCloud& cloud, double tol = 0.0);

struct Correspondence {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

struct CouplingEntry {
    std::size_t a = 0;
    std::size_t b = 0;
    double mass = 0.0;
};

// surjective on both sides and containing (root_a, root_b); returns the violation
std::optional<std::string> check_correspondence(const MetricCloud& a, const MetricCloud& b, const Correspondence& corr);

double distortion(const MetricCloud& a, const MetricCloud& b, const Correspondence& corr);

// dis(corr)/2; throws InvalidArgument on an invalid correspondence
double gh_upper(const MetricCloud& a, const MetricCloud& b, const Correspondence& corr);
// diagonal correspondence {(i,i)}; the clouds must share their sample times
double gh_upper_diag(const MetricCloud& a, const MetricCloud& b);
// (dis(corr)/2) ∨ (1 - coupling mass on corr); coupling marginals must match within 1e-9
double ghp_upper(const MetricCloud& a, const MetricCloud& b, const Correspondence& corr,
                 const std::vector<CouplingEntry>& coupling);

struct DimensionEstimate {
    double dimension = 0.0;
    double slope_stderr = 0.0;
    double r_min = 0.0;  // fit window, in units of the diameter
    double r_max = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
    std::size_t radii = 0;
};

struct DimensionOptions {
    double r_min = 0.01;
    double r_max = 0.1;
    std::size_t radii = 20;
};

/*
 * Slope of log C(r) against log r, where C(r) is the fraction of pairs at distance
 * <= r after normalizing the diameter to 1. Throws when all points coincide.
 */
DimensionEstimate correlation_dimension(const MetricCloud& cloud, const DimensionOptions& options = {});

/*
 * For each point x: connected components of the points y with r < d(x,y) <= 2r,
 * linking pairs at distance <= r. r <= 0 selects 3 x the median nearest-neighbour
 * distance.
 */
std::vector<int> degree_stat(const MetricCloud& cloud, double r = 0.0);
double default_degree_radius(const MetricCloud& cloud);

// "#schema,rotree.cloud.v1" then the matrix; the sidecar JSON carries times, masses and root
void write_cloud_csv(std::ostream& os, const MetricCloud& cloud);
std::string cloud_sidecar_json(const MetricCloud& cloud);

}  // namespace rotree
