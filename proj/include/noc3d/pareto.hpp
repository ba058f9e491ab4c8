#pragma once

// Pareto dominance (minimization), a non-dominated archive, affine
// normalization, and exact hypervolume by slicing objectives (HSO).

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "noc3d/error.hpp"
#include "noc3d/objectives.hpp"

namespace noc3d {

// a dominates b: a <= b everywhere and a < b somewhere.
inline bool dominates(std::span<const double> a, std::span<const double> b) noexcept {
  bool strictly = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly = true;
  }
  return strictly;
}

inline bool weakly_dominates(std::span<const double> a, std::span<const double> b) noexcept {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.keys() != b.keys()) throw DomainError("dominates: objective keysets differ");
  return dominates(a.values(), b.values());
}

// Per-objective envelope.
struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  static Bounds empty(std::size_t objectives) {
    return {std::vector<double>(objectives, std::numeric_limits<double>::infinity()),
            std::vector<double>(objectives, -std::numeric_limits<double>::infinity())};
  }

  std::size_t size() const noexcept { return lower.size(); }

  void include(std::span<const double> point) {
    if (lower.empty()) *this = empty(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) {
      lower[i] = std::min(lower[i], point[i]);
      upper[i] = std::max(upper[i], point[i]);
    }
  }

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

// Affine map of each objective onto [0, 1] with clamping. Objectives whose
// bounds are degenerate (lower >= upper) map to 0.
inline std::vector<double> normalize(std::span<const double> point, const Bounds& bounds) {
  if (bounds.size() != point.size()) throw DomainError("normalize: bounds size mismatch");
  std::vector<double> out(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    const double span = bounds.upper[i] - bounds.lower[i];
    if (!(span > 0.0)) {
      out[i] = 0.0;
      continue;
    }
    out[i] = std::clamp((point[i] - bounds.lower[i]) / span, 0.0, 1.0);
  }
  return out;
}

namespace detail {

// HSO over objectives [dim, m). `pts` is reordered in place.
inline double hso(std::vector<const double*>& pts, const double* ref, std::size_t dim, std::size_t m) {
  if (pts.empty()) return 0.0;
  if (dim + 1 == m) {
    double best = ref[dim];
    for (const double* p : pts) best = std::min(best, p[dim]);
    return ref[dim] - best;
  }

  auto less = [dim, m](const double* a, const double* b) {
    for (std::size_t k = dim; k < m; ++k) {
      if (a[k] != b[k]) return a[k] < b[k];
    }
    return false;
  };
  std::sort(pts.begin(), pts.end(), less);

  if (dim + 2 == m) {
    // Two objectives left: slice on the first, each slice is an interval.
    double area = 0.0;
    double best = ref[dim + 1];
    for (std::size_t i = 0; i < pts.size(); ++i) {
      best = std::min(best, pts[i][dim + 1]);
      const double next = i + 1 < pts.size() ? pts[i + 1][dim] : ref[dim];
      area += (next - pts[i][dim]) * (ref[dim + 1] - best);
    }
    return area;
  }

  // Slice along `dim`: between consecutive cut points the cross-section is
  // the hypervolume of all points seen so far, projected onto [dim+1, m).
  double volume = 0.0;
  std::vector<const double*> slice;
  std::vector<const double*> work;
  auto covers = [dim, m](const double* a, const double* b) {
    for (std::size_t k = dim + 1; k < m; ++k) {
      if (a[k] > b[k]) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double* p = pts[i];
    const bool redundant = std::any_of(slice.begin(), slice.end(), [&](const double* q) { return covers(q, p); });
    if (!redundant) {
      std::erase_if(slice, [&](const double* q) { return covers(p, q); });
      slice.push_back(p);
    }
    const double next = i + 1 < pts.size() ? pts[i + 1][dim] : ref[dim];
    const double depth = next - p[dim];
    if (depth > 0.0) {
      work = slice;
      volume += depth * hso(work, ref, dim + 1, m);
    }
  }
  return volume;
}

}  // namespace detail

// Lebesgue measure of the union of boxes [p, ref] (minimization). Every
// point must be strictly below `ref` in every coordinate.
inline double hypervolume(std::span<const std::vector<double>> points, std::span<const double> ref) {
  if (points.empty()) return 0.0;
  const std::size_t m = ref.size();
  if (m == 0) throw DomainError("hypervolume: no objectives");
  std::vector<const double*> pts;
  pts.reserve(points.size());
  for (const auto& p : points) {
    if (p.size() != m) throw DomainError("hypervolume: point dimension differs from reference");
    for (std::size_t k = 0; k < m; ++k) {
      if (!(p[k] < ref[k])) throw ReferencePointError("hypervolume: point not strictly below reference point");
    }
    pts.push_back(p.data());
  }
  return detail::hso(pts, ref.data(), 0, m);
}

// Normalization bounds plus a uniform reference coordinate in normalized space.
struct PhvFrame {
  Bounds bounds;
  double reference = 1.1;

  std::vector<double> reference_point() const { return std::vector<double>(bounds.size(), reference); }

  template <class Range>
  double phv(const Range& objective_vectors) const {
    std::vector<std::vector<double>> points;
    for (const ObjectiveVector& v : objective_vectors) points.push_back(normalize(v.values(), bounds));
    const auto ref = reference_point();
    return hypervolume(points, ref);
  }

  double phv_of_points(std::span<const std::vector<double>> normalized) const {
    const auto ref = reference_point();
    return hypervolume(normalized, ref);
  }
};

// Mutually non-dominated set of (payload, objective vector) pairs. Equal
// objective vectors are not co-archived. `bounds()` envelopes every vector
// ever offered, inserted or not.
template <class Payload>
class ParetoArchive {
 public:
  struct Entry {
    Payload payload;
    ObjectiveVector objectives;
  };

  ParetoArchive() = default;

  bool insert(Payload payload, const ObjectiveVector& objectives) {
    if (entries_.empty() && bounds_.lower.empty()) {
      keys_ = objectives.keys();
    } else if (objectives.keys() != keys_) {
      throw DomainError("archive insert: objective keyset differs from archive");
    }
    bounds_.include(objectives.values());
    for (const auto& e : entries_) {
      if (weakly_dominates(e.objectives.values(), objectives.values())) return false;
    }
    std::erase_if(entries_, [&](const Entry& e) { return dominates(objectives.values(), e.objectives.values()); });
    entries_.push_back({std::move(payload), objectives});
    return true;
  }

  // True when some member dominates or equals `objectives`.
  bool covers(const ObjectiveVector& objectives) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) {
      return weakly_dominates(e.objectives.values(), objectives.values());
    });
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const Bounds& bounds() const noexcept { return bounds_; }
  ObjectiveSet keys() const noexcept { return keys_; }

  std::vector<ObjectiveVector> objective_vectors() const {
    std::vector<ObjectiveVector> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.objectives);
    return out;
  }

 private:
  std::vector<Entry> entries_;
  Bounds bounds_;
  ObjectiveSet keys_;
};

}  // namespace noc3d
