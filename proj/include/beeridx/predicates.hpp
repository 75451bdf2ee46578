#pragma once

namespace beeridx {

// Sign of the 2x2 determinant |b-a, c-a|, i.e. twice the signed area of the
// triangle abc. Exact: a floating-point filter decides the easy cases and an
// error-free expansion evaluation decides the rest, so the sign is never
// misclassified for finite double inputs.
int orient2d(double ax, double ay, double bx, double by, double cx, double cy);

// True iff p lies on the closed segment [a,b] (exact collinearity + range).
bool on_segment(double ax, double ay, double bx, double by, double px, double py);

}  // namespace beeridx
