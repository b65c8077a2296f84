#pragma once

#include "braid/hopf.hpp"

namespace braid {

struct Twist {
  TensorElement F;
  TensorElement Finv;
};

// F = sum_{k<N} B^k / k! for an h-positive bivector B of primitive legs that
// pairwise commute in U(g); Finv is the same series in -B.
Twist exp_twist(const Enveloping& U, const TensorElement& bivector);
// Wraps an explicit tensor; the inverse comes from the h-adic series.
Twist twist_from_tensor(const Enveloping& U, const TensorElement& F);

// 2-cocycle, normalization and inverse 2-cocycle with respect to the
// coproduct of H (which may itself be twisted).
Report check_cocycle(const HopfAlgebra& H, const Twist& F);

// H_F with total twist F * F_H. Throws CocycleViolation unless check_cocycle
// passes and R_F passes the triangular suite at `depth`.
HopfAlgebra twist_hopf(const HopfAlgebra& H, const Twist& F, int depth);

// F2 * F1, where F2 is a twist of H_{F1}. Checks that twisting by F1 and then
// F2 agrees with twisting by the product on every generator.
Twist compose_twists(const HopfAlgebra& H, const Twist& F2, const Twist& F1, int depth);

}  // namespace braid
