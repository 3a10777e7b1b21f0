#pragma once

// Exact plane geometry: rational points, chirality-preserving similarity
// transforms (rotation x uniform scale + translation, never a reflection),
// and the handful of predicates the robot algorithms are built from.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcmsim/rational.hpp"

namespace lcmsim {

struct DegenerateConfiguration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Point {
  Scalar x{};
  Scalar y{};

  friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
  friend bool operator<(const Point& a, const Point& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
  friend Point operator+(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(const Scalar& k, const Point& p) { return {k * p.x, k * p.y}; }
};

inline Point make_point(std::int64_t xn, std::int64_t xd, std::int64_t yn, std::int64_t yd) {
  return {make_scalar(xn, xd), make_scalar(yn, yd)};
}

inline Point make_point(std::int64_t x, std::int64_t y) {
  return {make_scalar(x), make_scalar(y)};
}

inline Scalar squared_distance(const Point& a, const Point& b) {
  const Scalar dx = a.x - b.x;
  const Scalar dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline Scalar cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }
inline Scalar dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }

// A nonzero rational complex number a+bi acting on points by complex
// multiplication: any rotation-plus-uniform-scale realizable over the
// rationals. Orientation is always preserved (there is no conjugation).
struct RotScale {
  Scalar re{};
  Scalar im{};

  bool is_zero() const { return re == 0 && im == 0; }

  friend bool operator==(const RotScale& a, const RotScale& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend RotScale operator*(const RotScale& a, const RotScale& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend RotScale operator/(const RotScale& a, const RotScale& b) {
    const Scalar n = b.re * b.re + b.im * b.im;
    if (n == 0) throw std::domain_error("division by zero multiplier");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }

  Point apply(const Point& p) const {
    return {re * p.x - im * p.y, im * p.x + re * p.y};
  }

  static RotScale identity() { return {Scalar(1), Scalar(0)}; }
};

inline RotScale make_rotscale(std::int64_t ren, std::int64_t red, std::int64_t imn,
                              std::int64_t imd) {
  return {make_scalar(ren, red), make_scalar(imn, imd)};
}

// p -> multiplier * p + translation. The invariant multiplier != 0 makes
// every Transform invertible and chirality-preserving.
struct Transform {
  RotScale multiplier = RotScale::identity();
  Point translation{};

  friend bool operator==(const Transform& a, const Transform& b) {
    return a.multiplier == b.multiplier && a.translation == b.translation;
  }

  static Transform identity() { return {}; }

  /// The frame of a robot at `position`: maps position to the origin.
  static Transform frame_at(const RotScale& multiplier, const Point& position) {
    if (multiplier.is_zero()) throw std::domain_error("zero frame multiplier");
    const Point shifted = multiplier.apply(position);
    return {multiplier, Point{-shifted.x, -shifted.y}};
  }
};

inline Point apply_transform(const Transform& t, const Point& p) {
  if (t.multiplier.is_zero()) throw std::domain_error("zero transform multiplier");
  return t.multiplier.apply(p) + t.translation;
}

inline Transform inverse(const Transform& t) {
  const RotScale inv = RotScale::identity() / t.multiplier;
  const Point back = inv.apply(t.translation);
  return {inv, Point{-back.x, -back.y}};
}

/// outer(inner(p)) as a single Transform.
inline Transform compose(const Transform& outer, const Transform& inner) {
  return {outer.multiplier * inner.multiplier,
          outer.multiplier.apply(inner.translation) + outer.translation};
}

inline Point rotate90_cw(const Point& p, const Point& center) {
  const Point d = p - center;
  return center + Point{d.y, -d.x};
}

/// True iff p lies on the open segment (a, b). Exact: collinearity by cross
/// product, interiority by the sign of the dot product.
inline bool strictly_between(const Point& p, const Point& a, const Point& b) {
  if (a == b) throw DegenerateConfiguration("strictly_between: segment endpoints coincide");
  if (cross(b - a, p - a) != 0) return false;
  return dot(p - a, p - b) < 0;
}

/// Index of the unique point equidistant from the other three, if exactly
/// one exists. Requires four pairwise distinct points.
inline std::optional<std::size_t> equidistant_index(std::span<const Point> points) {
  if (points.size() != 4) throw DegenerateConfiguration("equidistant_index: need 4 points");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j])
        throw DegenerateConfiguration("equidistant_index: duplicate points");

  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::optional<Scalar> common;
    bool ok = true;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      Scalar d = squared_distance(points[i], points[j]);
      if (!common) {
        common = std::move(d);
      } else if (*common != d) {
        ok = false;
        break;
      }
    }
    if (ok) {
      if (found) return std::nullopt;  // not unique
      found = i;
    }
  }
  return found;
}

inline std::optional<std::size_t> equidistant_index(const std::vector<Point>& points) {
  return equidistant_index(std::span<const Point>(points));
}

// A witness that T maps list A onto list B: T(A[i]) = B[image[i]] with
// `image` a bijection of indices.
struct Correspondence {
  Transform map;
  std::vector<std::size_t> image;
};

namespace detail {

inline bool verify_candidate(std::span<const Point> a, std::span<const Point> b,
                             std::span<const std::string> labels_a,
                             std::span<const std::string> labels_b, const Transform& t,
                             std::vector<std::size_t>& image_out) {
  const std::size_t n = a.size();
  image_out.assign(n, n);
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const Point mapped = apply_transform(t, a[i]);
    bool placed = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || mapped != b[j]) continue;
      if (!labels_a.empty() && labels_a[i] != labels_b[j]) continue;
      used[j] = true;
      image_out[i] = j;
      placed = true;
      break;
    }
    if (!placed) return false;
  }
  return true;
}

// Similar point sets have proportional multisets of squared distances; the
// comparison cross-multiplies against the maxima so no division is needed.
// A cheap necessary condition checked before the candidate search.
inline bool distance_profiles_compatible(std::span<const Point> a, std::span<const Point> b) {
  const std::size_t n = a.size();
  std::vector<Scalar> da, db;
  da.reserve(n * (n - 1) / 2);
  db.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      da.push_back(squared_distance(a[i], a[j]));
      db.push_back(squared_distance(b[i], b[j]));
    }
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  const Scalar& max_a = da.back();
  const Scalar& max_b = db.back();
  for (std::size_t k = 0; k < da.size(); ++k)
    if (da[k] * max_b != db[k] * max_a) return false;
  return true;
}

inline std::optional<Correspondence> match_impl(std::span<const Point> a,
                                                std::span<const Point> b,
                                                std::span<const std::string> labels_a,
                                                std::span<const std::string> labels_b) {
  if (a.size() != b.size())
    throw std::invalid_argument("match_up_to_similarity: size mismatch");
  if (!labels_a.empty() && (labels_a.size() != a.size() || labels_b.size() != b.size()))
    throw std::invalid_argument("match_up_to_similarity: label list size mismatch");
  const std::size_t n = a.size();
  if (n == 0) return Correspondence{Transform::identity(), {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a[i] == a[j] || b[i] == b[j])
        throw DegenerateConfiguration("match_up_to_similarity: duplicate points");
  if (n >= 3 && !distance_profiles_compatible(a, b)) return std::nullopt;

  std::vector<std::size_t> image;
  if (n == 1) {
    Transform t{RotScale::identity(), b[0] - a[0]};
    if (verify_candidate(a, b, labels_a, labels_b, t, image))
      return Correspondence{t, std::move(image)};
    return std::nullopt;
  }

  // A similarity is pinned by the images of two distinct points. Anchor
  // a[0], a[1] and try every ordered pair of b as their images.
  const Point base = a[1] - a[0];
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      if (k == l) continue;
      if (!labels_a.empty() && (labels_a[0] != labels_b[k] || labels_a[1] != labels_b[l]))
        continue;
      const Point span = b[l] - b[k];
      const RotScale m = RotScale{span.x, span.y} / RotScale{base.x, base.y};
      if (m.is_zero()) continue;
      const Point shifted = m.apply(a[0]);
      Transform t{m, b[k] - shifted};
      if (verify_candidate(a, b, labels_a, labels_b, t, image))
        return Correspondence{t, std::move(image)};
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Finds a chirality-preserving similarity T with T(A) = B as labeled sets
/// (labels must agree pointwise under the correspondence). Returns the first
/// match in a deterministic search order; never a reflection.
inline std::optional<Correspondence> match_with_correspondence(
    std::span<const Point> a, std::span<const Point> b) {
  return detail::match_impl(a, b, {}, {});
}

inline std::optional<Correspondence> match_with_correspondence(
    std::span<const Point> a, std::span<const Point> b, std::span<const std::string> labels_a,
    std::span<const std::string> labels_b) {
  return detail::match_impl(a, b, labels_a, labels_b);
}

inline std::optional<Transform> match_up_to_similarity(std::span<const Point> a,
                                                       std::span<const Point> b) {
  auto c = match_with_correspondence(a, b);
  if (!c) return std::nullopt;
  return c->map;
}

inline std::optional<Transform> match_up_to_similarity(const std::vector<Point>& a,
                                                       const std::vector<Point>& b) {
  return match_up_to_similarity(std::span<const Point>(a), std::span<const Point>(b));
}

inline std::optional<Transform> match_up_to_similarity(const std::vector<Point>& a,
                                                       const std::vector<Point>& b,
                                                       const std::vector<std::string>& labels_a,
                                                       const std::vector<std::string>& labels_b) {
  auto c = match_with_correspondence(std::span<const Point>(a), std::span<const Point>(b),
                                     std::span<const std::string>(labels_a),
                                     std::span<const std::string>(labels_b));
  if (!c) return std::nullopt;
  return c->map;
}

/// Number of chirality-preserving similarities mapping the set onto itself
/// (at least 1, the identity). Role resolution inside a formation is only
/// well-defined when this is exactly 1.
inline std::size_t chirality_symmetries(std::span<const Point> points) {
  const std::size_t n = points.size();
  if (n < 2) return 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (points[i] == points[j])
        throw DegenerateConfiguration("chirality_symmetries: duplicate points");

  std::vector<Transform> found;
  const Point base = points[1] - points[0];
  std::vector<std::size_t> image;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      if (k == l) continue;
      const Point span = points[l] - points[k];
      const RotScale m = RotScale{span.x, span.y} / RotScale{base.x, base.y};
      if (m.is_zero()) continue;
      const Point shifted = m.apply(points[0]);
      Transform t{m, points[k] - shifted};
      if (!detail::verify_candidate(points, points, {}, {}, t, image)) continue;
      bool fresh = true;
      for (const auto& seen : found)
        if (seen == t) fresh = false;
      if (fresh) found.push_back(std::move(t));
    }
  }
  return found.size();
}

inline std::size_t chirality_symmetries(const std::vector<Point>& points) {
  return chirality_symmetries(std::span<const Point>(points));
}

}  // namespace lcmsim
