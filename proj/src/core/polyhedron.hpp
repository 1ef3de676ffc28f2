#pragma once

#include "core/rational.hpp"

#include <optional>
#include <vector>

namespace betaforms {

using QVec = std::vector<Rational>;

// Membership of p in conv(hull) + cone(rays), everything exact rational.
// Two independent deciders; decide_monomial runs both and insists they agree.
bool hull_cone_member_lp(const QVec& p, const std::vector<QVec>& hull,
                         const std::vector<QVec>& rays);
bool hull_cone_member_enum(const QVec& p, const std::vector<QVec>& hull,
                           const std::vector<QVec>& rays);

// Integer weight vector w with w.p < min over hull of w.v and w.r >= 0 for
// all rays; exists whenever p is outside. Deterministic smallest-first search.
std::optional<std::vector<int>> separating_weights(const QVec& p, const std::vector<QVec>& hull,
                                                   const std::vector<QVec>& rays, int search_bound);

} // namespace betaforms
