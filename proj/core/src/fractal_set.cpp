#include "fractalc/fractal_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "fractalc/errors.hpp"

namespace fractalc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Best rational p/q with q <= 64 approximating x, by continued fractions.
// Returns {0,0} when no small fraction is within 16 eps of x.
std::pair<long, long> rationalize(double x) {
  long best_p = 0, best_q = 0;
  double best_err = std::numeric_limits<double>::infinity();
  // continued-fraction convergents of x
  double v = x;
  long h0 = 1, k0 = 0, h1 = 0, k1 = 1;  // p_{-1}/q_{-1}, p_0/q_0 seeds
  for (int it = 0; it < 32; ++it) {
    double af = std::floor(v);
    if (af > 1e18) break;
    long a = static_cast<long>(af);
    long h2 = a * h0 + h1;
    long k2 = a * k0 + k1;
    if (k2 > 64 || k2 <= 0) break;
    double err = std::abs(x - static_cast<double>(h2) / static_cast<double>(k2));
    if (err < best_err) {
      best_err = err;
      best_p = h2;
      best_q = k2;
    }
    h1 = h0; k1 = k0; h0 = h2; k0 = k2;
    double frac = v - af;
    if (frac < 1e-18) break;
    v = 1.0 / frac;
  }
  if (best_q != 0 && best_err <= 16.0 * kEps) return {best_p, best_q};
  return {0, 0};
}

}  // namespace

FractalSet make_set(double ratio, Interval interval) {
  if (!(ratio > 0.0) || !(ratio <= 0.5) || !std::isfinite(ratio)) {
    throw DomainError("make_set: ratio must lie in (0, 1/2], got " + std::to_string(ratio));
  }
  if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi) || !(interval.lo < interval.hi)) {
    throw DomainError("make_set: interval is degenerate");
  }
  FractalSet s;
  s.ratio_ = ratio;
  s.interval_ = interval;
  s.alpha_ = std::log(2.0) / (-std::log(ratio));
  auto [p, q] = rationalize(ratio);
  s.num_ = p;
  s.den_ = q;
  return s;
}

FractalSet make_set_from_alpha(double alpha, Interval interval) {
  if (!(alpha > 0.0) || !(alpha <= 1.0) || !std::isfinite(alpha)) {
    throw DomainError("make_set_from_alpha: alpha must lie in (0, 1], got " +
                      std::to_string(alpha));
  }
  double ratio = std::exp2(-1.0 / alpha);
  FractalSet s = make_set(ratio, interval);
  s.alpha_ = alpha;  // keep the requested dimension exactly
  return s;
}

PreFractal prefractal(const FractalSet& set, int depth) {
  if (depth < 0 || depth > set.max_depth()) {
    throw DomainError("prefractal: depth " + std::to_string(depth) + " outside [0, " +
                      std::to_string(set.max_depth()) + "]");
  }
  if (depth >= 63 || (std::uint64_t{1} << depth) > set.enumeration_cap()) {
    throw ResourceError("prefractal: 2^" + std::to_string(depth) +
                        " intervals exceed the enumeration cap; use membership queries");
  }
  const double r = set.ratio();
  std::vector<Interval> cur{set.interval()};
  std::vector<Interval> next;
  for (int level = 0; level < depth; ++level) {
    next.clear();
    next.reserve(cur.size() * 2);
    for (const Interval& iv : cur) {
      double w = iv.hi - iv.lo;
      next.push_back({iv.lo, iv.lo + r * w});
      next.push_back({iv.hi - r * w, iv.hi});
    }
    cur.swap(next);
  }
  return PreFractal{depth, std::move(cur)};
}

namespace detail {

Descent descend(const FractalSet& set, double t, int levels, bool want_path) {
  using f128 = __float128;
  Descent out;
  const Interval dom = set.interval();
  if (!(t >= dom.lo) || !(t <= dom.hi)) {
    out.in_domain = false;
    out.gap_level = 0;
    out.s_fraction = (t < dom.lo) ? 0.0 : 1.0;
    return out;
  }
  out.in_domain = true;

  const double r = set.ratio();
  const bool rational = set.ratio_is_rational();
  const f128 q = rational ? (f128)set.ratio_den() : 0;
  const f128 p = rational ? (f128)set.ratio_num() : 0;
  const f128 rr = (f128)r;
  // Snap width: IFS endpoints arrive as doubles, so boundary comparisons are
  // honored to ~4 ulp of the unit scale; no geometric tolerance beyond that.
  const f128 tol = (f128)(4.0 * kEps);

  // Orbit track (measure-exact branch decisions).
  f128 u = ((f128)t - (f128)dom.lo) / ((f128)dom.hi - (f128)dom.lo);
  bool orbit_alive = true;
  bool orbit_resolved = false;   // landed exactly on an endpoint; tail digits known
  double orbit_resolved_s = 0.0; // dyadic tail value once resolved
  double acc = 0.0, scale = 1.0;

  // Lock track (bitwise agreement with prefractal()'s forward maps).
  double lo = dom.lo, hi = dom.hi;
  bool lock_alive = true;
  double lacc = 0.0, lscale = 1.0;

  std::vector<std::uint8_t> orbit_path, lock_path;
  if (want_path) {
    orbit_path.reserve(levels);
    lock_path.reserve(levels);
  }

  for (int k = 0; k < levels; ++k) {
    if (lock_alive && !out.locked) {
      if (t == lo) {
        out.locked = true;
        out.lock_is_hi = false;
        out.lock_level = k;
      } else if (t == hi) {
        out.locked = true;
        out.lock_is_hi = true;
        out.lock_level = k;
      } else {
        double w = hi - lo;
        double lmid = lo + r * w;
        double rmid = hi - r * w;
        if (t <= lmid) {
          hi = lmid;
          lscale *= 0.5;
          if (want_path) lock_path.push_back(0);
        } else if (t >= rmid) {
          lo = rmid;
          lacc += lscale * 0.5;
          lscale *= 0.5;
          if (want_path) lock_path.push_back(1);
        } else {
          lock_alive = false;
        }
      }
    }
    if (out.locked && (!orbit_alive || orbit_resolved)) break;
    if (out.locked && out.gap_level >= 0) break;

    if (orbit_alive && !orbit_resolved && out.gap_level < 0) {
      bool go_left;
      f128 u_next;
      if (rational) {
        f128 uq = u * q;
        f128 snap = tol * q;
        if (uq >= p - snap && uq <= p + snap) {
          // right endpoint of the left child: digit 0 then all 1s
          orbit_resolved = true;
          orbit_resolved_s = acc + scale * 0.5;
          if (want_path) orbit_path.push_back(0);
          continue;
        }
        if (uq >= (q - p) - snap && uq <= (q - p) + snap) {
          // left endpoint of the right child: digit 1 then all 0s
          orbit_resolved = true;
          orbit_resolved_s = acc + scale * 0.5;
          if (want_path) orbit_path.push_back(1);
          continue;
        }
        if (uq < p) {
          go_left = true;
          u_next = uq / p;
        } else if (uq > q - p) {
          go_left = false;
          u_next = (uq - (q - p)) / p;
        } else {
          out.gap_level = k;
          continue;
        }
      } else {
        if (u >= rr - tol && u <= rr + tol) {
          orbit_resolved = true;
          orbit_resolved_s = acc + scale * 0.5;
          if (want_path) orbit_path.push_back(0);
          continue;
        }
        f128 one_minus_r = (f128)1 - rr;
        if (u >= one_minus_r - tol && u <= one_minus_r + tol) {
          orbit_resolved = true;
          orbit_resolved_s = acc + scale * 0.5;
          if (want_path) orbit_path.push_back(1);
          continue;
        }
        if (u < rr) {
          go_left = true;
          u_next = u / rr;
        } else if (u > one_minus_r) {
          go_left = false;
          u_next = (u - one_minus_r) / rr;
        } else {
          out.gap_level = k;
          continue;
        }
      }
      u = u_next;
      if (!go_left) acc += scale * 0.5;
      scale *= 0.5;
      if (want_path) orbit_path.push_back(go_left ? 0 : 1);
    }
    if (!lock_alive && (out.gap_level >= 0 || orbit_resolved)) break;
  }

  // Measure coordinate: a lock is exact-by-construction and wins.
  if (out.locked) {
    out.s_fraction = out.lock_is_hi ? lacc + lscale : lacc;
  } else if (orbit_resolved) {
    out.s_fraction = orbit_resolved_s;
  } else {
    out.s_fraction = acc + scale * 0.5;  // gap midpoint or truncation midpoint
  }

  if (want_path) {
    // Path of whichever track certified the point; directional fill once
    // the tail is known.
    std::vector<std::uint8_t>& base = out.locked ? lock_path : orbit_path;
    out.path = base;
    out.path.resize(static_cast<std::size_t>(levels), 0);
    if (out.locked) {
      for (int k = out.lock_level; k < levels; ++k) {
        out.path[static_cast<std::size_t>(k)] = out.lock_is_hi ? 1 : 0;
      }
    } else if (orbit_resolved) {
      std::size_t done = orbit_path.size();  // includes the snap digit
      std::uint8_t tail = orbit_path.empty() ? 0 : (orbit_path.back() ? 0 : 1);
      for (std::size_t k = done; k < out.path.size(); ++k) out.path[k] = tail;
    }
  }
  return out;
}

}  // namespace detail

bool contains(const FractalSet& set, double t, int depth) {
  if (depth < 0) throw DomainError("contains: depth must be nonnegative");
  detail::Descent d = detail::descend(set, t, depth, false);
  if (!d.in_domain) return false;
  return d.locked || d.gap_level < 0;
}

std::uint64_t locate_index(const FractalSet& set, double t, int depth) {
  if (depth < 0 || depth > set.max_depth()) {
    throw DomainError("locate_index: depth outside [0, max_depth]");
  }
  detail::Descent d = detail::descend(set, t, depth, true);
  if (!d.in_domain || (!d.locked && d.gap_level >= 0)) {
    throw DomainError("locate_index: point is not a member at this depth");
  }
  std::uint64_t idx = 0;
  for (int k = 0; k < depth; ++k) idx = (idx << 1) | d.path[static_cast<std::size_t>(k)];
  return idx;
}

Interval interval_at(const FractalSet& set, int depth, std::uint64_t index) {
  if (depth < 0 || depth > set.max_depth()) {
    throw DomainError("interval_at: depth outside [0, max_depth]");
  }
  if (depth < 63 && index >= (std::uint64_t{1} << depth)) {
    throw DomainError("interval_at: index out of range");
  }
  const double r = set.ratio();
  double lo = set.interval().lo, hi = set.interval().hi;
  for (int k = depth - 1; k >= 0; --k) {
    double w = hi - lo;
    if ((index >> k) & 1u) {
      lo = hi - r * w;
    } else {
      hi = lo + r * w;
    }
  }
  return {lo, hi};
}

std::vector<FractalPoint> nearest_fractal_neighbors(const FractalSet& set, double t, int depth,
                                                    int count) {
  if (count < 1) throw DomainError("nearest_fractal_neighbors: count must be >= 1");
  if (!contains(set, t, depth)) {
    throw DomainError("nearest_fractal_neighbors: t is not a member at this depth");
  }
  const std::uint64_t n_intervals = depth >= 63 ? 0 : (std::uint64_t{1} << depth);
  const std::uint64_t idx = locate_index(set, t, depth);

  // Gather endpoint candidates from intervals around idx, widening the
  // window until we have enough distinct values or the window spans all.
  std::uint64_t radius = static_cast<std::uint64_t>(count) + 2;
  std::vector<double> candidates;
  for (;;) {
    std::uint64_t first = idx > radius ? idx - radius : 0;
    std::uint64_t last = std::min(n_intervals - 1, idx + radius);
    candidates.clear();
    for (std::uint64_t i = first; i <= last; ++i) {
      Interval iv = interval_at(set, depth, i);
      candidates.push_back(iv.lo);
      candidates.push_back(iv.hi);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::erase(candidates, t);
    bool whole_range = (first == 0 && last == n_intervals - 1);
    if (candidates.size() >= static_cast<std::size_t>(count)) break;
    if (whole_range) {
      throw DomainError("nearest_fractal_neighbors: insufficient neighbors at depth " +
                        std::to_string(depth) + " (" + std::to_string(candidates.size()) +
                        " available, " + std::to_string(count) + " requested)");
    }
    radius *= 2;
  }

  // Candidates are ascending; stable sort by distance keeps the smaller
  // endpoint first on ties.
  std::stable_sort(candidates.begin(), candidates.end(), [t](double x, double y) {
    return std::abs(x - t) < std::abs(y - t);
  });
  std::vector<FractalPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back({candidates[static_cast<std::size_t>(i)], depth});
  return out;
}

}  // namespace fractalc
