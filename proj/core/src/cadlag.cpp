#include "rotree/cadlag.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "rotree/errors.hpp"
#include "rotree/rmq.hpp"

namespace rotree {

std::string to_string(SegmentKind kind) { return kind == SegmentKind::constant ? "constant" : "affine"; }

CadlagFn::CadlagFn(std::vector<double> times, std::vector<double> left, std::vector<double> right,
                   std::vector<SegmentKind> kinds)
    : t_(std::move(times)), left_(std::move(left)), right_(std::move(right)), kind_(std::move(kinds)) {
    const std::size_t m = t_.size();
    if (m < 2) throw InvalidArgument("cadlag function needs knots at 0 and 1");
    if (left_.size() != m || right_.size() != m || kind_.size() != m - 1) {
        throw InvalidArgument("cadlag function: inconsistent knot arrays");
    }
    if (t_.front() != 0.0 || t_.back() != 1.0) throw InvalidArgument("cadlag knots must start at 0 and end at 1");
    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (!(t_[i] < t_[i + 1])) throw InvalidArgument("cadlag knots must increase strictly");
        if (kind_[i] == SegmentKind::constant && left_[i + 1] != right_[i]) {
            throw InvalidArgument("constant segment with different end values");
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (!std::isfinite(left_[i]) || !std::isfinite(right_[i])) throw InvalidArgument("non-finite cadlag value");
    }
    left_[0] = right_[0];
}

CadlagFn CadlagFn::constant(double c) { return CadlagFn({0.0, 1.0}, {c, c}, {c, c}, {SegmentKind::constant}); }

CadlagFn CadlagFn::from(const TimeScaledFn& f) {
    const std::int64_t p = f.steps();
    if (p == 0) return constant(f.grid_value(0));
    std::vector<double> t(p + 1), left(p + 1), right(p + 1);
    const bool linear = f.interpolation() == Interpolation::linear;
    for (std::int64_t k = 0; k <= p; ++k) {
        t[k] = static_cast<double>(k) / static_cast<double>(p);
        right[k] = f.grid_value(k);
        left[k] = linear || k == 0 ? right[k] : f.grid_value(k - 1);
    }
    t[p] = 1.0;
    return CadlagFn(std::move(t), std::move(left), std::move(right),
                    std::vector<SegmentKind>(p, linear ? SegmentKind::affine : SegmentKind::constant));
}

CadlagFn CadlagFn::step(std::vector<double> times, std::vector<double> values) {
    if (times.empty() || times.size() != values.size() || times.front() != 0.0) {
        throw InvalidArgument("step function needs matching times starting at 0");
    }
    std::vector<double> left, right;
    for (std::size_t i = 0; i < times.size(); ++i) {
        left.push_back(i == 0 ? values[0] : values[i - 1]);
        right.push_back(values[i]);
    }
    if (times.back() != 1.0) {
        times.push_back(1.0);
        left.push_back(values.back());
        right.push_back(values.back());
    }
    const std::size_t segments = times.size() - 1;
    return CadlagFn(std::move(times), std::move(left), std::move(right),
                    std::vector<SegmentKind>(segments, SegmentKind::constant));
}

std::size_t CadlagFn::segment_of(double t) const {
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - t_.begin() - 1, 0));
    return std::min(i, t_.size() - 2);
}

double CadlagFn::operator()(double t) const {
    if (t >= 1.0) return right_.back();
    if (t <= 0.0) return right_[0];
    const std::size_t i = segment_of(t);
    if (kind_[i] == SegmentKind::constant) return right_[i];
    const double w = (t - t_[i]) / (t_[i + 1] - t_[i]);
    return right_[i] + (left_[i + 1] - right_[i]) * w;
}

double CadlagFn::left_limit(double t) const {
    if (t <= 0.0) return right_[0];
    if (t > 1.0) return right_.back();
    const auto j = static_cast<std::size_t>(std::lower_bound(t_.begin(), t_.end(), t) - t_.begin());
    if (t_[j] == t) return left_[j];
    const std::size_t i = j - 1;
    if (kind_[i] == SegmentKind::constant) return right_[i];
    const double w = (t - t_[i]) / (t_[i + 1] - t_[i]);
    return right_[i] + (left_[i + 1] - right_[i]) * w;
}

std::vector<std::size_t> CadlagFn::jumps() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i < t_.size(); ++i) {
        if (left_[i] != right_[i]) out.push_back(i);
    }
    return out;
}

double CadlagFn::sup() const {
    return std::max(*std::max_element(left_.begin(), left_.end()), *std::max_element(right_.begin(), right_.end()));
}

double CadlagFn::inf() const {
    return std::min(*std::min_element(left_.begin(), left_.end()), *std::min_element(right_.begin(), right_.end()));
}

bool CadlagFn::has_negative_jump() const {
    for (std::size_t i = 1; i < t_.size(); ++i) {
        if (right_[i] < left_[i]) return true;
    }
    return false;
}

CadlagFn CadlagFn::scaled(double factor) const {
    auto l = left_, r = right_;
    for (auto& v : l) v *= factor;
    for (auto& v : r) v *= factor;
    return CadlagFn(t_, std::move(l), std::move(r), kind_);
}

CompletedGraph completed_graph(const CadlagFn& x) {
    CompletedGraph g;
    const auto& t = x.times();
    for (std::size_t i = 0; i < t.size(); ++i) {
        g.polyline.push_back({t[i], x.left_values()[i]});
        if (x.left_values()[i] != x.right_values()[i]) {
            g.polyline.push_back({t[i], x.right_values()[i]});
            g.vertical.push_back({t[i], x.left_values()[i], x.right_values()[i]});
        }
    }
    return g;
}

/* ----------------------------------------------------------- representations */

namespace {

double polyline_at(const std::vector<double>& u, const std::vector<double>& v, double s) {
    if (s <= u.front()) return v.front();
    if (s >= u.back()) return v.back();
    const auto j = static_cast<std::size_t>(std::upper_bound(u.begin(), u.end(), s) - u.begin());
    const double w = (s - u[j - 1]) / (u[j] - u[j - 1]);
    return v[j - 1] + (v[j] - v[j - 1]) * w;
}

}  // namespace

double ParamRep::chi_at(double s) const { return polyline_at(u, chi, s); }
double ParamRep::tau_at(double s) const { return polyline_at(u, tau, s); }

double ParamRep::tau_inverse(double t) const {
    if (t >= 1.0) return 1.0;
    const auto j = static_cast<std::size_t>(std::upper_bound(tau.begin(), tau.end(), t) - tau.begin());
    if (j == 0) return 0.0;
    const double w = (t - tau[j - 1]) / (tau[j] - tau[j - 1]);
    return u[j - 1] + (u[j] - u[j - 1]) * w;
}

ParamRep parametric_representation(const CadlagFn& x) {
    ParamRep rep;
    const auto& t = x.times();
    const auto& left = x.left_values();
    const auto& right = x.right_values();
    double total = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) total += std::abs(right[i] - left[i]);
    const double lebesgue = total > 0.0 ? 0.5 : 1.0;
    double atoms = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double f_minus = lebesgue * t[i] + atoms;
        rep.u.push_back(f_minus);
        rep.chi.push_back(left[i]);
        rep.tau.push_back(t[i]);
        const double jump = std::abs(right[i] - left[i]);
        if (jump > 0.0) {
            atoms += jump / (2.0 * total);
            rep.u.push_back(lebesgue * t[i] + atoms);
            rep.chi.push_back(right[i]);
            rep.tau.push_back(t[i]);
        }
    }
    rep.u.back() = 1.0;
    return rep;
}

std::optional<std::string> check_representation(const ParamRep& rep, const CadlagFn& x, std::size_t grid) {
    const std::size_t m = rep.u.size();
    if (m < 2 || rep.chi.size() != m || rep.tau.size() != m) return "knot arrays of unequal length";
    if (rep.u.front() != 0.0 || rep.u.back() != 1.0) return "parameter does not span [0,1]";
    if (rep.tau.front() != 0.0 || rep.chi.front() != x(0.0)) return "does not start at (x(0), 0)";
    if (rep.tau.back() != 1.0 || rep.chi.back() != x(1.0)) return "does not end at (x(1), 1)";
    const double scale = std::max(1.0, std::max(std::abs(x.sup()), std::abs(x.inf())));
    auto on_graph = [&](double chi, double tau, double tol) -> bool {
        const double lo = x.left_limit(tau), hi = x(tau);
        return chi >= std::min(lo, hi) - tol && chi <= std::max(lo, hi) + tol;
    };
    for (std::size_t k = 0; k < m; ++k) {
        if (k > 0 && !(rep.u[k] > rep.u[k - 1])) return "parameter knots not increasing at " + std::to_string(k);
        if (k > 0 && rep.tau[k] < rep.tau[k - 1]) return "tau decreases at knot " + std::to_string(k);
        if (!on_graph(rep.chi[k], rep.tau[k], 0.0)) return "knot " + std::to_string(k) + " leaves the completed graph";
    }
    // graph order along a dense parameter grid
    double prev_chi = rep.chi_at(0.0), prev_tau = 0.0;
    const double tol = 1e-9 * scale;
    for (std::size_t i = 1; i <= grid; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(grid);
        const double c = rep.chi_at(s), tt = rep.tau_at(s);
        if (!on_graph(c, tt, tol)) return "point at u=" + std::to_string(s) + " leaves the completed graph";
        if (tt < prev_tau) return "tau decreases at u=" + std::to_string(s);
        if (tt == prev_tau) {
            const double base = x.left_limit(tt);
            if (std::abs(c - base) + tol < std::abs(prev_chi - base)) return "graph order violated at u=" + std::to_string(s);
        }
        prev_chi = c;
        prev_tau = tt;
    }
    return std::nullopt;
}

/* ------------------------------------------------------------- time reversal */

CadlagFn time_reverse(const CadlagFn& x) {
    const auto& t = x.times();
    const auto& left = x.left_values();
    const auto& right = x.right_values();
    const std::size_t m = t.size();
    std::vector<double> rt(m), rl(m), rr(m);
    std::vector<SegmentKind> rk(m - 1);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = m - 1 - i;
        rt[i] = 1.0 - t[j];
        // x̂(1 - t_j) = x(t_j-), x̂((1 - t_j)-) = x(t_j)
        rr[i] = left[j];
        rl[i] = right[j];
        if (i + 1 < m) rk[i] = x.kinds()[j - 1];
    }
    rt.front() = 0.0;
    rt.back() = 1.0;
    rl.front() = rr.front();
    // x̂(1) = x(0-) = x(0)
    rr.back() = right.front();
    rl.back() = right.front();
    return CadlagFn(std::move(rt), std::move(rl), std::move(rr), std::move(rk));
}

/* -------------------------------------------------------- modulus of continuity */

double modulus_of_continuity(const CadlagFn& f, double delta) {
    if (!(delta > 0.0)) throw InvalidArgument("modulus of continuity needs delta > 0");
    const auto& t = f.times();
    const auto& left = f.left_values();
    const auto& right = f.right_values();
    const std::size_t m = t.size();
    std::vector<double> hi(m), lo(m);
    for (std::size_t i = 0; i < m; ++i) {
        hi[i] = std::max(left[i], right[i]);
        lo[i] = std::min(left[i], right[i]);
    }
    const RangeMax<double> top(hi);
    const RangeMin<double> bottom(lo);
    // f is extended by f(0) on the left and f(1) on the right, which changes no oscillation
    auto value = [&](double s) { return s <= 0.0 ? right.front() : f(s); };
    auto before = [&](double s) { return s <= 0.0 ? right.front() : f.left_limit(s); };
    auto knots_between = [&](double a, bool a_closed, double b, bool b_closed, double& mx, double& mn) {
        auto first = a_closed ? std::lower_bound(t.begin(), t.end(), a) : std::upper_bound(t.begin(), t.end(), a);
        auto last = b_closed ? std::upper_bound(t.begin(), t.end(), b) : std::lower_bound(t.begin(), t.end(), b);
        if (first >= last) return;
        const auto i = static_cast<std::size_t>(first - t.begin());
        const auto j = static_cast<std::size_t>(last - t.begin()) - 1;
        mx = std::max(mx, top.query(i, j));
        mn = std::min(mn, bottom.query(i, j));
    };
    // sup over windows [a, a+δ) of the oscillation; it is convex between events where
    // a or a+δ crosses a knot, so the one-sided limits at events suffice
    double best = 0.0;
    auto event = [&](double e) {
        {
            // a -> e from below: f(e-), knots in [e, e+δ), f((e+δ)-)
            double mx = before(e), mn = mx;
            knots_between(e, true, e + delta, false, mx, mn);
            const double end = before(e + delta);
            mx = std::max(mx, end);
            mn = std::min(mn, end);
            best = std::max(best, mx - mn);
        }
        {
            // a -> e from above: f(e), knots in (e, e+δ], f(e+δ)
            double mx = value(e), mn = mx;
            knots_between(e, false, e + delta, true, mx, mn);
            const double end = value(e + delta);
            mx = std::max(mx, end);
            mn = std::min(mn, end);
            best = std::max(best, mx - mn);
        }
    };
    for (std::size_t k = 0; k < m; ++k) {
        event(t[k]);
        event(t[k] - delta);
    }
    return best;
}

double modulus_of_continuity(const ParamRep& rep, double delta) {
    std::vector<double> l = rep.chi;
    CadlagFn chi(rep.u, l, rep.chi, std::vector<SegmentKind>(rep.u.size() - 1, SegmentKind::affine));
    return modulus_of_continuity(chi, delta);
}

/* ------------------------------------------------------------------------ CSV */

void write_cadlag_csv(std::ostream& os, const CadlagFn& x) {
    os << "#schema,rotree.cadlag.v1\n";
    os << "t,left_value,right_value,segment_kind\n";
    const auto& t = x.times();
    std::ostringstream row;
    row.precision(17);
    for (std::size_t i = 0; i < t.size(); ++i) {
        row.str("");
        // the kind of the segment starting at t; the final knot repeats the last one
        const SegmentKind kind = x.kinds()[std::min(i, x.kinds().size() - 1)];
        row << t[i] << ',' << x.left_values()[i] << ',' << x.right_values()[i] << ',' << to_string(kind) << '\n';
        os << row.str();
    }
}

CadlagFn read_cadlag_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("#schema,rotree.cadlag.v1", 0) != 0) {
        throw ParseError("missing cadlag schema row");
    }
    if (!std::getline(is, line) || line.rfind("t,left_value,right_value,segment_kind", 0) != 0) {
        throw ParseError("missing cadlag header row");
    }
    std::vector<double> t, l, r;
    std::vector<SegmentKind> kinds;
    std::size_t row = 2;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b, c, d;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ',') ||
            !std::getline(ss, d)) {
            throw ParseError("cadlag row " + std::to_string(row) + " needs four fields");
        }
        if (!d.empty() && d.back() == '\r') d.pop_back();
        try {
            t.push_back(std::stod(a));
            l.push_back(std::stod(b));
            r.push_back(std::stod(c));
        } catch (const std::logic_error&) {
            throw ParseError("cadlag row " + std::to_string(row) + " has a non-numeric field");
        }
        if (d == "constant") {
            kinds.push_back(SegmentKind::constant);
        } else if (d == "affine") {
            kinds.push_back(SegmentKind::affine);
        } else {
            throw ParseError("cadlag row " + std::to_string(row) + ": unknown segment kind '" + d + "'");
        }
    }
    if (kinds.empty()) throw ParseError("cadlag file has no rows");
    kinds.pop_back();
    try {
        return CadlagFn(std::move(t), std::move(l), std::move(r), std::move(kinds));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
}

}  // namespace rotree
