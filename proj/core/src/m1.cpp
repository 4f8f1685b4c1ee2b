#include <algorithm>
#include <cmath>
#include <limits>

#include "rotree/cadlag.hpp"
#include "rotree/errors.hpp"

namespace rotree {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct Box {
    double chi_lo, chi_hi, tau_lo, tau_hi;
};

/* a representation cut into N cells of parameter length 1/N */
struct Sampled {
    std::size_t N = 0;
    std::vector<double> chi, tau;  // values at u = i/N
    std::vector<Box> box;          // range of the curve over cell i
    // rep knots strictly inside cell i are [inner_begin[i], inner_end[i])
    std::vector<std::size_t> inner_begin, inner_end;
    const ParamRep* rep = nullptr;

    Sampled(const ParamRep& p, std::size_t n) : N(n), rep(&p) {
        chi.resize(N + 1);
        tau.resize(N + 1);
        for (std::size_t i = 0; i <= N; ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(N);
            chi[i] = p.chi_at(s);
            tau[i] = p.tau_at(s);
        }
        box.resize(N);
        inner_begin.resize(N);
        inner_end.resize(N);
        for (std::size_t i = 0; i < N; ++i) {
            const double a = static_cast<double>(i) / static_cast<double>(N);
            const double b = static_cast<double>(i + 1) / static_cast<double>(N);
            inner_begin[i] = static_cast<std::size_t>(std::upper_bound(p.u.begin(), p.u.end(), a) - p.u.begin());
            inner_end[i] = static_cast<std::size_t>(std::lower_bound(p.u.begin(), p.u.end(), b) - p.u.begin());
            Box bx{std::min(chi[i], chi[i + 1]), std::max(chi[i], chi[i + 1]), std::min(tau[i], tau[i + 1]),
                   std::max(tau[i], tau[i + 1])};
            for (std::size_t k = inner_begin[i]; k < inner_end[i]; ++k) {
                bx.chi_lo = std::min(bx.chi_lo, p.chi[k]);
                bx.chi_hi = std::max(bx.chi_hi, p.chi[k]);
                bx.tau_lo = std::min(bx.tau_lo, p.tau[k]);
                bx.tau_hi = std::max(bx.tau_hi, p.tau[k]);
            }
            box[i] = bx;
        }
    }
};

double gap(double c1, double t1, double c2, double t2) { return std::max(std::abs(c1 - c2), std::abs(t1 - t2)); }

// sup over the cell of the distance to a fixed point (exact: coordinatewise extremes)
double box_gap(const Box& b, double chi, double tau) {
    return std::max(std::max(std::abs(b.chi_hi - chi), std::abs(b.chi_lo - chi)),
                    std::max(std::abs(b.tau_hi - tau), std::abs(b.tau_lo - tau)));
}

/*
 * Both curves cross their cell at equal speed. The gap is piecewise affine in the
 * common offset with breakpoints at the inner knots of either cell, so its sup is
 * reached at one of them.
 */
double synced_gap(const Sampled& P, std::size_t i, const Sampled& Q, std::size_t j) {
    const ParamRep& p = *P.rep;
    const ParamRep& q = *Q.rep;
    const double N = static_cast<double>(P.N);
    const double pa = static_cast<double>(i) / N, qa = static_cast<double>(j) / N;
    double worst = std::max(gap(P.chi[i], P.tau[i], Q.chi[j], Q.tau[j]),
                            gap(P.chi[i + 1], P.tau[i + 1], Q.chi[j + 1], Q.tau[j + 1]));
    // walk P's inner knots, evaluating Q at the same offset, then the reverse
    const std::size_t pe = P.inner_end[i], qe = Q.inner_end[j];
    std::size_t qk = Q.inner_begin[j];
    for (std::size_t k = P.inner_begin[i]; k < pe; ++k) {
        const double s = p.u[k] - pa;
        while (qk < qe && q.u[qk] - qa <= s) ++qk;
        // Q between (qk-1 or cell start) and (qk or cell end)
        const double u0 = qk > Q.inner_begin[j] ? q.u[qk - 1] : qa;
        const double c0 = qk > Q.inner_begin[j] ? q.chi[qk - 1] : Q.chi[j];
        const double t0 = qk > Q.inner_begin[j] ? q.tau[qk - 1] : Q.tau[j];
        const double u1 = qk < qe ? q.u[qk] : qa + 1.0 / N;
        const double c1 = qk < qe ? q.chi[qk] : Q.chi[j + 1];
        const double t1 = qk < qe ? q.tau[qk] : Q.tau[j + 1];
        const double w = u1 > u0 ? (qa + s - u0) / (u1 - u0) : 0.0;
        worst = std::max(worst, gap(p.chi[k], p.tau[k], c0 + (c1 - c0) * w, t0 + (t1 - t0) * w));
    }
    std::size_t pk = P.inner_begin[i];
    for (std::size_t k = Q.inner_begin[j]; k < qe; ++k) {
        const double s = q.u[k] - qa;
        while (pk < pe && p.u[pk] - pa <= s) ++pk;
        const double u0 = pk > P.inner_begin[i] ? p.u[pk - 1] : pa;
        const double c0 = pk > P.inner_begin[i] ? p.chi[pk - 1] : P.chi[i];
        const double t0 = pk > P.inner_begin[i] ? p.tau[pk - 1] : P.tau[i];
        const double u1 = pk < pe ? p.u[pk] : pa + 1.0 / N;
        const double c1 = pk < pe ? p.chi[pk] : P.chi[i + 1];
        const double t1 = pk < pe ? p.tau[pk] : P.tau[i + 1];
        const double w = u1 > u0 ? (pa + s - u0) / (u1 - u0) : 0.0;
        worst = std::max(worst, gap(c0 + (c1 - c0) * w, t0 + (t1 - t0) * w, q.chi[k], q.tau[k]));
    }
    return worst;
}

enum Move : std::uint8_t { from_p = 0, from_q = 1, diagonal = 2 };

using Path = std::vector<std::pair<std::size_t, std::size_t>>;

struct BandResult {
    double value = inf;
    Path path;
};

/* admissible columns [lo[i], hi[i]] of each DP row; an empty row has hi < lo */
struct Rows {
    std::vector<std::size_t> lo, hi;
};

// grid pairs whose temporal gap is at most w
Rows band_rows(const Sampled& P, const Sampled& Q, double w) {
    const std::size_t N = P.N;
    Rows r{std::vector<std::size_t>(N + 1), std::vector<std::size_t>(N + 1)};
    std::size_t a = 0, b = 0;  // b counts the j with τ_Q(j) <= τ_P(i) + w
    for (std::size_t i = 0; i <= N; ++i) {
        while (a <= N && Q.tau[a] < P.tau[i] - w) ++a;
        while (b <= N && Q.tau[b] <= P.tau[i] + w) ++b;
        r.lo[i] = a;
        r.hi[i] = b - 1;
        if (b == 0) r.lo[i] = 1, r.hi[i] = 0;
    }
    return r;
}

/*
 * Bottleneck DP over the admissible cells. With band rows of width w: every step
 * into (i, j) costs at least |τ_P(i) - τ_Q(j)|, so a banded optimum <= w equals
 * the unrestricted one. Cells that cannot lie on a path of cost <= cap are
 * dropped, and each row is scanned only where the previous one left finite
 * cells (plus runs along the row).
 */
BandResult solve(const Sampled& P, const Sampled& Q, const Rows& rows, bool keep_path, double cap = inf) {
    const std::size_t N = P.N;
    const auto& lo = rows.lo;
    const auto& hi = rows.hi;
    BandResult out;
    if (lo[0] != 0 || hi[N] != N) return out;

    std::vector<std::vector<std::uint8_t>> moves;
    if (keep_path) moves.resize(N + 1);
    std::vector<double> prev, cur;
    std::size_t prev_lo = 1, prev_hi = 0;
    // finite cells of the previous row lie in [reach_lo, reach_hi]; paths never move left
    std::size_t reach_lo = 0, reach_hi = 0;
    for (std::size_t i = 0; i <= N; ++i) {
        const std::size_t l = lo[i], h = hi[i];
        if (h < l) return out;
        cur.assign(h - l + 1, inf);
        if (keep_path) moves[i].assign(h - l + 1, from_p);
        bool any = false;
        std::size_t first = 0, last = 0;
        for (std::size_t j = std::max(l, reach_lo); j <= h; ++j) {
            // past the previous row only a run along this row can continue
            if (j > reach_hi + 1 && (j == l || !std::isfinite(cur[j - 1 - l]))) break;
            const double here = gap(P.chi[i], P.tau[i], Q.chi[j], Q.tau[j]);
            double best = inf;
            std::uint8_t mv = from_p;
            if (here > cap) {
                // unreachable below the cap
            } else if (i == 0 && j == 0) {
                best = here;
            } else {
                if (i > 0 && j >= prev_lo && j <= prev_hi) {
                    const double base = prev[j - prev_lo];
                    if (base < best) {
                        const double c = std::max(base, box_gap(P.box[i - 1], Q.chi[j], Q.tau[j]));
                        if (c < best) best = c, mv = from_p;
                    }
                }
                if (j > l) {
                    const double base = cur[j - 1 - l];
                    if (base < best) {
                        const double c = std::max(base, box_gap(Q.box[j - 1], P.chi[i], P.tau[i]));
                        if (c < best) best = c, mv = from_q;
                    }
                }
                if (i > 0 && j > 0 && j - 1 >= prev_lo && j - 1 <= prev_hi) {
                    const double base = prev[j - 1 - prev_lo];
                    if (std::max(base, here) < best) {
                        const double c = std::max(base, synced_gap(P, i - 1, Q, j - 1));
                        if (c < best) best = c, mv = diagonal;
                    }
                }
            }
            if (best > cap) best = inf;
            cur[j - l] = best;
            if (keep_path) moves[i][j - l] = mv;
            if (std::isfinite(best)) {
                if (!any) first = j;
                any = true;
                last = j;
            }
        }
        if (!any) return out;
        reach_lo = first;
        reach_hi = last;
        std::swap(prev, cur);
        prev_lo = l;
        prev_hi = h;
    }
    out.value = prev[N - prev_lo];
    if (keep_path && std::isfinite(out.value)) {
        std::size_t i = N, j = N;
        out.path.emplace_back(i, j);
        while (i > 0 || j > 0) {
            switch (moves[i][j - lo[i]]) {
                case from_p: --i; break;
                case from_q: --j; break;
                default: --i, --j; break;
            }
            out.path.emplace_back(i, j);
        }
        std::reverse(out.path.begin(), out.path.end());
    }
    return out;
}

/*
 * Same trace, parameter proportional to L∞ arc length, so that steep pieces get
 * as many grid cells as flat ones of the same extent. A tiny share of the old
 * parameter keeps the knots strictly increasing.
 */
ParamRep arc_length(const ParamRep& p) {
    ParamRep a;
    a.chi = p.chi;
    a.tau = p.tau;
    a.u.assign(p.u.size(), 0.0);
    for (std::size_t k = 1; k < p.u.size(); ++k) {
        const double len = std::max(std::abs(p.chi[k] - p.chi[k - 1]), std::abs(p.tau[k] - p.tau[k - 1]));
        a.u[k] = a.u[k - 1] + len + 1e-9 * (p.u[k] - p.u[k - 1]);
    }
    const double total = a.u.back();
    for (auto& v : a.u) v /= total;
    a.u.back() = 1.0;
    return a;
}

// parameter of `to` at the point of the trace that `from` reaches at s
double convert(const ParamRep& from, const ParamRep& to, double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const auto k = static_cast<std::size_t>(std::upper_bound(from.u.begin(), from.u.end(), s) - from.u.begin());
    const double w = (s - from.u[k - 1]) / (from.u[k] - from.u[k - 1]);
    return to.u[k - 1] + (to.u[k] - to.u[k - 1]) * w;
}

}  // namespace

M1Bound m1_upper(const ParamRep& p, const ParamRep& q, std::size_t N, bool certificate) {
    if (N < 2) throw InvalidArgument("m1_upper needs a grid of at least 2 cells");
    if (p.u.size() != p.chi.size() || p.u.size() != p.tau.size() || q.u.size() != q.chi.size() ||
        q.u.size() != q.tau.size() || p.u.size() < 2 || q.u.size() < 2) {
        throw InvalidArgument("malformed parametric representation");
    }
    const ParamRep pa = arc_length(p), qa = arc_length(q);
    std::size_t level = N;
    while (level > m1_exact_grid && level % 2 == 0) level /= 2;

    // coarsest grid: widen the band until it certifies itself
    double w = 1.0 / 128.0;
    BandResult r;
    {
        const Sampled P(pa, level), Q(qa, level);
        const bool last = level == N;
        while (true) {
            r = solve(P, Q, band_rows(P, Q, w), false);
            if (r.value <= w || w >= 1.0) break;
            w = std::min(1.0, std::max(2.0 * w, r.value));
        }
        if (last && certificate) r = solve(P, Q, band_rows(P, Q, w), true);
    }
    /*
     * Each doubling: the coarse optimum V bounds the fine one (the coarse path
     * projects onto a fine path of no larger cost), so the band w = V and the
     * cap V lose nothing.
     */
    while (level < N) {
        level *= 2;
        const Sampled P(pa, level), Q(qa, level);
        const double cap = r.value * (1.0 + 1e-12) + 1e-15;  // rounding slack
        BandResult next = solve(P, Q, band_rows(P, Q, cap), level == N && certificate, cap);
        if (!std::isfinite(next.value)) break;  // rounding only; r stays a valid bound
        w = cap;
        r = std::move(next);
    }

    M1Bound out;
    out.value = r.value;
    if (certificate) {
        M1Certificate cert;
        cert.grid = level;
        cert.band = w;
        const double L = static_cast<double>(level);
        for (auto [i, j] : r.path) {
            cert.path.emplace_back(convert(pa, p, static_cast<double>(i) / L), convert(qa, q, static_cast<double>(j) / L));
        }
        out.certificate = std::move(cert);
    }
    return out;
}

M1Bound m1_upper(const CadlagFn& x, const CadlagFn& y, std::size_t N, bool certificate) {
    return m1_upper(parametric_representation(x), parametric_representation(y), N, certificate);
}

}  // namespace rotree
