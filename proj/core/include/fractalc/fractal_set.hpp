#pragma once

#include <cstdint>
#include <vector>

namespace fractalc {

/// Closed interval [lo, hi].
struct Interval {
  double lo;
  double hi;
  double width() const { return hi - lo; }
};

/// A point together with the pre-fractal depth at which it was certified
/// to lie in an interval of the set.
struct FractalPoint {
  double t;
  int depth;
};

/// Depth-n approximation of the set: 2^n sorted disjoint closed intervals,
/// each of length (b-a) * r^n.
struct PreFractal {
  int depth;
  std::vector<Interval> intervals;
};

/// Compact Cantor-like subset of [a,b] generated by the symmetric two-map
/// IFS  x -> a + r(x-a),  x -> b - r(b-x)  with contraction ratio
/// r in (0, 1/2].  Similarity dimension alpha = ln 2 / ln(1/r); r = 1/2
/// degenerates to the full interval (alpha = 1).
///
/// Ratios within a few ulp of a small fraction p/q (q <= 64) are treated
/// as that exact fraction, which makes the membership/measure descent
/// exact for the classic sets (r = 1/3, 1/4, 1/2).
class FractalSet {
 public:
  double ratio() const { return ratio_; }
  Interval interval() const { return interval_; }
  double alpha() const { return alpha_; }

  /// Maximum admissible pre-fractal depth (default 48).
  int max_depth() const { return max_depth_; }
  void set_max_depth(int d) { max_depth_ = d; }

  /// Cap on explicitly enumerated intervals (default 2^24).
  std::uint64_t enumeration_cap() const { return enum_cap_; }
  void set_enumeration_cap(std::uint64_t cap) { enum_cap_ = cap; }

  /// Exact rational form of the ratio, if one was recognized (num/den).
  bool ratio_is_rational() const { return den_ != 0; }
  long ratio_num() const { return num_; }
  long ratio_den() const { return den_; }

  friend FractalSet make_set(double ratio, Interval interval);
  friend FractalSet make_set_from_alpha(double alpha, Interval interval);

 private:
  FractalSet() = default;
  double ratio_ = 0.0;
  Interval interval_{0.0, 1.0};
  double alpha_ = 0.0;
  long num_ = 0, den_ = 0;  // den_ == 0: no exact rational form
  int max_depth_ = 48;
  std::uint64_t enum_cap_ = std::uint64_t{1} << 24;
};

/// Build a set from its contraction ratio.  Throws DomainError unless
/// 0 < ratio <= 1/2 and the interval is nondegenerate.
FractalSet make_set(double ratio, Interval interval = {0.0, 1.0});

/// Build the unique symmetric two-map set of dimension alpha in (0,1]
/// via r = 2^(-1/alpha).
FractalSet make_set_from_alpha(double alpha, Interval interval = {0.0, 1.0});

/// All 2^depth intervals of the depth-n pre-fractal, sorted left to right.
/// Throws DomainError for depth outside [0, max_depth] and ResourceError
/// when 2^depth exceeds the enumeration cap.
PreFractal prefractal(const FractalSet& set, int depth);

/// Depth-truncated membership, O(depth).  Points outside [a,b] are never
/// members.  Endpoints produced by prefractal() are recognized bitwise and
/// remain members at every deeper depth.
bool contains(const FractalSet& set, double t, int depth);

/// The `count` depth-`depth` interval endpoints closest to t, excluding t
/// itself, sorted by |y - t| (ties keep the smaller endpoint first).
/// Requires contains(set, t, depth); throws DomainError otherwise and a
/// DomainError("insufficient neighbors...") when fewer than `count`
/// distinct endpoints exist.
std::vector<FractalPoint> nearest_fractal_neighbors(const FractalSet& set, double t, int depth,
                                                    int count);

/// Index (0-based, left to right) of the depth-`depth` interval whose
/// closure holds t.  Requires contains(set, t, depth).
std::uint64_t locate_index(const FractalSet& set, double t, int depth);

/// Materialize interval `index` of the depth-`depth` pre-fractal without
/// enumerating the others (forward maps along the index bits, O(depth)).
Interval interval_at(const FractalSet& set, int depth, std::uint64_t index);

namespace detail {

/// Outcome of the fused membership/measure descent.
///
/// Two certification tracks run side by side:
///  - an exact-as-possible orbit in __float128 (rationalized ratio when
///    available) that decides left / right / gap per level, and
///  - a double-precision interval track using the same forward-map
///    arithmetic as prefractal(), which "locks" when t is bitwise equal to
///    a computed endpoint; a locked point stays a member at every depth
///    and its measure coordinate is an exact dyadic.
struct Descent {
  bool in_domain = false;  // t inside [a,b]
  bool locked = false;     // bitwise endpoint lock occurred
  bool lock_is_hi = false;
  int lock_level = -1;
  int gap_level = -1;      // orbit exited into a gap at this level (-1: alive)
  double s_fraction = 0.0; // normalized measure CDF of [a,t], in [0,1]
  std::vector<std::uint8_t> path;  // branch per level (0 left, 1 right), when requested
};

Descent descend(const FractalSet& set, double t, int levels, bool want_path);

}  // namespace detail

}  // namespace fractalc
