#pragma once

#include <array>
#include <cstddef>

namespace fpg {

/// Symmetric rule on a triangle: barycentric points, weights summing to 1 (scale by |T|).
template <std::size_t N>
struct TriangleRule {
  std::array<std::array<double, 3>, N> points;
  std::array<double, N> weights;
  int degree;
};

/// 6-point rule exact for polynomials of total degree 4 (Dunavant).
inline constexpr TriangleRule<6> kDegree4Rule = [] {
  constexpr double a1 = 0.445948490915964886318330;
  constexpr double w1 = 0.223381589678011465944793;
  constexpr double a2 = 0.091576213509770743459571;
  constexpr double w2 = 0.109951743655321867388540;
  constexpr double b1 = 1.0 - 2.0 * a1;
  constexpr double b2 = 1.0 - 2.0 * a2;
  return TriangleRule<6>{{{{b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1},
                           {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2}}},
                         {w1, w1, w1, w2, w2, w2},
                         4};
}();

/// 7-point rule exact for degree 5 (Radon). Used as an independent reference.
inline constexpr TriangleRule<7> kDegree5Rule = [] {
  // sqrt(15) spelled out so the table stays constexpr.
  constexpr double s15 = 3.872983346207416885179265;
  constexpr double a1 = (6.0 - s15) / 21.0;
  constexpr double a2 = (6.0 + s15) / 21.0;
  constexpr double w1 = (155.0 - s15) / 1200.0;
  constexpr double w2 = (155.0 + s15) / 1200.0;
  constexpr double b1 = 1.0 - 2.0 * a1;
  constexpr double b2 = 1.0 - 2.0 * a2;
  return TriangleRule<7>{{{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                           {b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1},
                           {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2}}},
                         {9.0 / 40.0, w1, w1, w1, w2, w2, w2},
                         5};
}();

}  // namespace fpg
