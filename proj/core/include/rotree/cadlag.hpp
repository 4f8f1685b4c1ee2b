#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rotree/encodings.hpp"

namespace rotree {

enum class SegmentKind : std::uint8_t { constant, affine };

std::string to_string(SegmentKind kind);

/*
 * Piecewise affine càdlàg function on [0,1]. Knots 0 = t_0 < ... < t_K = 1 carry
 * the left limit x(t_i-) and the value x(t_i); on [t_i, t_{i+1}) the function
 * runs affinely from x(t_i) to x(t_{i+1}-). By convention x(0-) = x(0).
 */
class CadlagFn {
public:
    CadlagFn() = default;
    CadlagFn(std::vector<double> times, std::vector<double> left, std::vector<double> right,
             std::vector<SegmentKind> kinds);

    static CadlagFn constant(double c);
    // linear view is continuous; constant view jumps at every grid time
    static CadlagFn from(const TimeScaledFn& f);
    // steps[i] holds on [times[i], times[i+1]), the last value also at 1
    static CadlagFn step(std::vector<double> times, std::vector<double> values);

    double operator()(double t) const;
    double left_limit(double t) const;

    std::size_t knot_count() const { return t_.size(); }
    const std::vector<double>& times() const { return t_; }
    const std::vector<double>& left_values() const { return left_; }
    const std::vector<double>& right_values() const { return right_; }
    const std::vector<SegmentKind>& kinds() const { return kind_; }  // K entries

    // knot indices i with x(t_i-) != x(t_i)
    std::vector<std::size_t> jumps() const;
    double sup() const;
    double inf() const;
    bool has_negative_jump() const;

    CadlagFn scaled(double factor) const;

private:
    std::size_t segment_of(double t) const;  // i with t_i <= t < t_{i+1}, K-1 at t = 1
    std::vector<double> t_, left_, right_;
    std::vector<SegmentKind> kind_;
};

struct GraphPoint {
    double t = 0.0;
    double z = 0.0;
};

struct VerticalSegment {
    double t = 0.0;
    double from = 0.0;  // x(t-)
    double to = 0.0;    // x(t)
};

/*
 * Γ_x as a polyline in graph order: each knot contributes (t, x(t-)) and, at a
 * jump, (t, x(t)) right after it.
 */
struct CompletedGraph {
    std::vector<GraphPoint> polyline;
    std::vector<VerticalSegment> vertical;
};

CompletedGraph completed_graph(const CadlagFn& x);

/* polyline u -> (χ(u), τ(u)) through knots u_0 = 0 < ... < u_m = 1 */
struct ParamRep {
    std::vector<double> u;
    std::vector<double> chi;
    std::vector<double> tau;

    double chi_at(double s) const;
    double tau_at(double s) const;
    // right-continuous inverse of τ: inf{u : τ(u) > t}, and 1 at t = 1
    double tau_inverse(double t) const;
};

/*
 * One-to-one representation from F = cdf of Leb/2 + Σ m_s δ_s, m_s proportional
 * to |Δx(s)|; τ is the right-continuous inverse of F. Without jumps F = id.
 */
ParamRep parametric_representation(const CadlagFn& x);

// endpoint, monotonicity and Γ_x membership checks; returns the first violation
std::optional<std::string> check_representation(const ParamRep& rep, const CadlagFn& x, std::size_t grid = 10000);

struct M1Certificate {
    // aligned parameter pairs (u, v) of the two representations along the path
    std::vector<std::pair<double, double>> path;
    std::size_t grid = 0;
    double band = 0.0;  // temporal band of the final pass
};

struct M1Bound {
    double value = 0.0;
    std::optional<M1Certificate> certificate;
};

// larger grids are reached by doubling from a grid of at most this size
inline constexpr std::size_t m1_exact_grid = 4096;

/*
 * Upper bound on d_M1(x, y): the cheapest monotone coupling of the two traces cut
 * into N cells of equal L∞ arc length. Steps move one curve across a cell while
 * the other waits at a grid point, or move both across a cell at equal speed;
 * every step cost is the exact sup-gap of that piece of coupling, so the result
 * is a valid bound, and the optimum over all such couplings is returned. Large
 * grids are reached by doubling, each level pruning with the previous optimum.
 * Non-increasing along N, 2N, 4N, ... The certificate stores one move per cell
 * of the final band, so ask for it only on moderate grids.
 */
M1Bound m1_upper(const CadlagFn& x, const CadlagFn& y, std::size_t N = 4096, bool certificate = false);
M1Bound m1_upper(const ParamRep& p, const ParamRep& q, std::size_t N = 4096, bool certificate = false);

// x̂(t) = x((1-t)-)
CadlagFn time_reverse(const CadlagFn& x);

// sup_{|s-t| < δ} |f(s) - f(t)|, exact over the knot structure
double modulus_of_continuity(const CadlagFn& f, double delta);
// same for χ of a representation (continuous, piecewise affine in u)
double modulus_of_continuity(const ParamRep& rep, double delta);

// "#schema,rotree.cadlag.v1" then rows (t, left_value, right_value, segment_kind)
void write_cadlag_csv(std::ostream& os, const CadlagFn& x);
CadlagFn read_cadlag_csv(std::istream& is);

}  // namespace rotree
