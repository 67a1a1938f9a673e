#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "chainfix/metric.hpp"

namespace chainfix {

// Open metric ball in the weighted l1 metric.
struct Ball {
  std::vector<Rat> center;
  Rat radius;
};

bool ball_contains(const Ball& b, const std::vector<Rat>& p);
bool balls_meet(const Ball& a, const Ball& b);

// Open cover whose members are finite unions of open balls. Unions of two
// members intersect iff some pair of their balls does, so all the tests
// below are exact.
struct BallCover {
  std::vector<std::vector<Ball>> members;

  int size() const { return static_cast<int>(members.size()); }
  bool member_contains(int i, const std::vector<Rat>& p) const;
  bool members_meet(int i, int j) const;
  // Index of a single ball of member i containing all the points, if any.
  std::optional<int> member_ball_containing_all(
      int i, const std::vector<std::vector<Rat>>& pts) const;
  // Upper bound for diam(member i): max pairwise center distance plus radii.
  Rat member_diam_bound(int i) const;
  bool covers(const std::vector<std::vector<Rat>>& pts) const;
};

// St(A, U) for a finite point set A: indices of members meeting A, ascending.
// Doubles as the restriction U|A.
std::vector<int> star_of_points(const BallCover& U, const std::vector<std::vector<Rat>>& A);
// Indices of members meeting member i (itself included when nonempty).
std::vector<int> star_of_member(const BallCover& U, int i);

// Minimizes max_i (d(x, c_i) - r_i) over x by exact LP. The open balls have
// a common point iff the optimum is strictly negative; the witness point is
// returned alongside.
std::pair<Rat, std::vector<Rat>> balls_slack(const std::vector<Ball>& balls);
bool balls_have_common_point(const std::vector<Ball>& balls);

// Whether an intersection of finite ball unions is nonempty, by distributing
// the unions (one ball per factor) over balls_have_common_point. The number
// of combinations is capped; exceeding the cap is an internal error.
bool unions_have_common_point(const std::vector<const std::vector<Ball>*>& unions,
                              long cap = 200000);

// U1 x U2 with members indexed by pairs; all predicates act componentwise.
struct ProductCover {
  const BallCover* first = nullptr;
  const BallCover* second = nullptr;

  bool members_meet(std::pair<int, int> a, std::pair<int, int> b) const {
    return first->members_meet(a.first, b.first) &&
           second->members_meet(a.second, b.second);
  }
  bool member_contains(std::pair<int, int> m, const std::vector<Rat>& p,
                       const std::vector<Rat>& q) const {
    return first->member_contains(m.first, p) &&
           second->member_contains(m.second, q);
  }
};

}  // namespace chainfix
