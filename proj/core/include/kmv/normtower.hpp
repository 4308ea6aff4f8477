#pragma once

#include "kmv/exactpoly.hpp"

namespace kmv {

// Norm from A(p, k+1, l) down to A(p, k, l): determinant of the p x p
// multiplication matrix on the basis 1, x, ..., x^{p-1} with x^p sent to
// the generator below. Computed by the Faddeev-LeVerrier recurrence, whose
// only divisions are by the integers 1..p (exact here since the ring is
// torsion free as a Z-module).
TowerElem norm_step(const TowerElem& a);

// iterated one-step norm between cyclotomic levels (l = 1): steps many
// applications, from level k down to level k - steps
TowerElem usual_norm(const TowerElem& a, u32 steps);

// Norm from the conductor-p^{k+l+1} cyclotomic ring onto A(p, k, l).
// Computed twice (recursively through the pullback, and from the tuple of
// iterated cyclotomic norms); the two must agree.
TowerElem norm_kl(const TowerElem& cyclo, RingId target);

// embed a unit of the conductor-p^{k+l} cyclotomic ring into A(p, k, l)
// by pairing it with its own norm; identity at l = 1
TowerElem embed_unit(const TowerElem& eps, RingId target);

// norm down to Z: determinant of the integer multiplication matrix
// (fraction-free Bareiss elimination)
mpz_class abs_norm(const TowerElem& a);

bool is_unit(const TowerElem& a);  // |absolute norm| = 1

}  // namespace kmv
