#include "chainfix/cover.hpp"

#include <algorithm>

#include "chainfix/lp.hpp"

namespace chainfix {

bool ball_contains(const Ball& b, const std::vector<Rat>& p) {
  return l1w_dist(b.center, p) < b.radius;
}

bool balls_meet(const Ball& a, const Ball& b) {
  Rat sum = a.radius + b.radius;
  return l1w_dist(a.center, b.center) < sum;
}

bool BallCover::member_contains(int i, const std::vector<Rat>& p) const {
  for (const Ball& b : members.at(i))
    if (ball_contains(b, p)) return true;
  return false;
}

bool BallCover::members_meet(int i, int j) const {
  for (const Ball& a : members.at(i))
    for (const Ball& b : members.at(j))
      if (balls_meet(a, b)) return true;
  return false;
}

std::optional<int> BallCover::member_ball_containing_all(
    int i, const std::vector<std::vector<Rat>>& pts) const {
  const auto& balls = members.at(i);
  for (int k = 0; k < static_cast<int>(balls.size()); ++k) {
    bool all = true;
    for (const auto& p : pts)
      if (!ball_contains(balls[k], p)) {
        all = false;
        break;
      }
    if (all) return k;
  }
  return std::nullopt;
}

Rat BallCover::member_diam_bound(int i) const {
  const auto& balls = members.at(i);
  Rat best(0);
  for (size_t a = 0; a < balls.size(); ++a)
    for (size_t b = a; b < balls.size(); ++b) {
      Rat d = l1w_dist(balls[a].center, balls[b].center) + balls[a].radius +
              balls[b].radius;
      if (d > best) best = d;
    }
  return best;
}

bool BallCover::covers(const std::vector<std::vector<Rat>>& pts) const {
  for (const auto& p : pts) {
    bool hit = false;
    for (int i = 0; i < size() && !hit; ++i) hit = member_contains(i, p);
    if (!hit) return false;
  }
  return true;
}

std::vector<int> star_of_points(const BallCover& U,
                                const std::vector<std::vector<Rat>>& A) {
  std::vector<int> out;
  for (int i = 0; i < U.size(); ++i)
    for (const auto& p : A)
      if (U.member_contains(i, p)) {
        out.push_back(i);
        break;
      }
  return out;
}

std::vector<int> star_of_member(const BallCover& U, int i) {
  std::vector<int> out;
  for (int j = 0; j < U.size(); ++j)
    if (U.members_meet(i, j)) out.push_back(j);
  return out;
}

std::pair<Rat, std::vector<Rat>> balls_slack(const std::vector<Ball>& balls) {
  CFX_INPUT(!balls.empty(), "balls_slack needs at least one ball");
  int d = 0;
  for (const Ball& b : balls)
    d = std::max(d, static_cast<int>(b.center.size()));
  int k = static_cast<int>(balls.size());
  // variables: x (d), t_{i,j} (k*d), s (1)
  LinearProgram lp(d + k * d + 1);
  int sv = d + k * d;
  lp.c[sv] = 1;
  auto coord = [&](const Ball& b, int j) {
    return j < static_cast<int>(b.center.size()) ? b.center[j] : Rat(0);
  };
  for (int i = 0; i < k; ++i) {
    std::vector<Rat> rad(lp.n, Rat(0));
    for (int j = 0; j < d; ++j) {
      int tv = d + i * d + j;
      std::vector<Rat> row(lp.n, Rat(0));
      row[j] = 1;
      row[tv] = -1;
      lp.leq(row, coord(balls[i], j));
      std::vector<Rat> row2(lp.n, Rat(0));
      row2[j] = -1;
      row2[tv] = -1;
      lp.leq(row2, Rat(-coord(balls[i], j)));
      rad[tv] = coord_weight(j);
    }
    rad[sv] = -1;
    lp.leq(rad, balls[i].radius);
  }
  LPResult res = lp_solve(lp);
  CFX_CHECK(res.status == LPStatus::Optimal, "slack LP must be solvable");
  std::vector<Rat> x(res.x.begin(), res.x.begin() + d);
  return {res.value, x};
}

bool balls_have_common_point(const std::vector<Ball>& balls) {
  return balls_slack(balls).first < 0;
}

bool unions_have_common_point(
    const std::vector<const std::vector<Ball>*>& unions, long cap) {
  long combos = 1;
  for (const auto* u : unions) {
    if (u->empty()) return false;
    combos *= static_cast<long>(u->size());
    CFX_CHECK(combos <= cap, "too many ball combinations");
  }
  std::vector<int> pick(unions.size(), 0);
  while (true) {
    std::vector<Ball> chosen;
    chosen.reserve(unions.size());
    for (size_t i = 0; i < unions.size(); ++i)
      chosen.push_back((*unions[i])[pick[i]]);
    if (balls_have_common_point(chosen)) return true;
    size_t i = 0;
    while (i < pick.size()) {
      if (++pick[i] < static_cast<int>(unions[i]->size())) break;
      pick[i] = 0;
      ++i;
    }
    if (i == pick.size()) return false;
  }
}

}  // namespace chainfix
