#pragma once

namespace gibbspp::pred {

// Exact planar predicates: fast double evaluation with a conservative error
// filter, falling back to arbitrary-precision rational arithmetic when the
// filter cannot decide. Inputs are doubles, so the rational path is exact.

/// Sign of the signed area of triangle (a, b, c): +1 ccw, -1 cw, 0 collinear.
int orient2d(const double* a, const double* b, const double* c);

/// Sign of the incircle determinant for ccw triangle (a, b, c) and query d:
/// +1 if d lies strictly inside the circumcircle, -1 strictly outside,
/// 0 exactly on it. Caller must pass (a, b, c) in ccw order.
int incircle(const double* a, const double* b, const double* c, const double* d);

}  // namespace gibbspp::pred
