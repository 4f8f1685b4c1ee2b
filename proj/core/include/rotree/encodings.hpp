#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rotree/tree_core.hpp"

namespace rotree {

enum class WalkKind { height, contour, lukasiewicz, custom };

std::string to_string(WalkKind kind);
WalkKind walk_kind_from_string(const std::string& name);

/* integer sequence of length m+1, indexed 0..m */
struct Walk {
    std::vector<int> values;
    WalkKind kind = WalkKind::custom;

    std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
    int operator[](std::size_t k) const { return values[k]; }
    int max() const;
    int min() const;
};

Walk height_walk(const PlaneTree& tree);       // H(k) = |u_k|, H(n) = 0
Walk contour_walk(const PlaneTree& tree);      // 2(n-1)+1 entries
Walk lukasiewicz_walk(const PlaneTree& tree);  // S(k+1) - S(k) = d_{u_k} - 1

// x_0..x_{2n-2}: vertices visited by the contour particle
std::vector<PlaneTree::Vertex> contour_vertices(const PlaneTree& tree);

// edges grafted on the ancestral line of u, left (L) or right (R) of it
int left_count(const PlaneTree& tree, PlaneTree::Vertex u);
int right_count(const PlaneTree& tree, PlaneTree::Vertex u);
std::vector<int> left_counts(const PlaneTree& tree);
std::vector<int> right_counts(const PlaneTree& tree);

// first contour time reaching u_k: 2k - H(k) for k < n, and 2n - 2 for k = n
std::int64_t height_to_contour_time(const PlaneTree& tree, std::int64_t k);

// throws ParseError when the walk violates the invariants of its kind
void validate(const Walk& walk);

PlaneTree tree_from_height(const Walk& walk);
PlaneTree tree_from_contour(const Walk& walk);
PlaneTree tree_from_lukasiewicz(const Walk& walk);

// a ⊕ b: concatenation where b is shifted to start at the last value of a
Walk concat(const Walk& a, const Walk& b);
Walk reversed(const Walk& walk);

enum class Interpolation { linear, constant };

/* position on the grid k/p: index k and fraction in [0,1) */
struct GridPoint {
    std::int64_t index = 0;
    double frac = 0.0;
};

/*
 * t -> scale * W(pt) on [0,1], affine on each [k/p,(k+1)/p] (linear view)
 * or W(floor(pt)) (constant view). p = number of steps.
 */
class TimeScaledFn {
public:
    TimeScaledFn() = default;
    TimeScaledFn(Walk walk, Interpolation interpolation, double scale = 1.0);

    double operator()(double t) const { return at(locate(t)); }
    double at(GridPoint g) const;
    // exact value at the rational time num/den
    double at_rational(std::int64_t num, std::int64_t den) const;
    GridPoint locate(double t) const;

    const Walk& walk() const { return walk_; }
    Interpolation interpolation() const { return interp_; }
    double scale() const { return scale_; }
    std::int64_t steps() const { return static_cast<std::int64_t>(walk_.steps()); }
    double grid_value(std::int64_t k) const { return scale_ * walk_.values[k]; }

private:
    Walk walk_;
    Interpolation interp_ = Interpolation::linear;
    double scale_ = 1.0;
};

TimeScaledFn time_scaled(const Walk& walk, Interpolation interpolation, double scale = 1.0);

// "#schema,rotree.walk.v1" then "k,<kind>" then one row per index
void write_walk_csv(std::ostream& os, const Walk& walk);
Walk read_walk_csv(std::istream& is);

}  // namespace rotree
