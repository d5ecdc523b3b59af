"""Weak order on S4: brick labels, forcing and a few quotients.

Run with ``python3 demos/weak_order_tour.py``.
"""
from collections import Counter

from torslat import build_weak_order
from torslat.congruence import congruence_closure, forcing_classes, quotient
from torslat.poset_core import hasse_degree, join_irreducibles
from torslat.typea_bricks import brick_forcing_poset

W = build_weak_order(3)
L = W.lattice
print(f"S4 has {L.n_elements} elements and {len(L.covers)} arrows")

print("\njoin-irreducibles and the label of the arrow below each one:")
for j in join_irreducibles(L):
    (lower,) = L.lower_covers[j]
    print(f"  {W.perms[j]} -> {W.perms[lower]}   {W.labels[j, lower]}")

print(f"\n{len(forcing_classes(L))} forcing classes, one per string")
print("Hasse arrows of the forcing order (u => w when contracting u contracts w):")
for u, w in brick_forcing_poset(3).hasse:
    print(f"  {u} => {w}")

print("\nquotients by a single arrow:")
for upper, lower in (("2413", "2143"), ("3412", "3142"), ("2134", "1234")):
    theta = congruence_closure(L, [W.arrow(upper, lower)])
    quo = quotient(L, theta).lattice
    degrees = Counter(hasse_degree(quo, x) for x in range(quo.n_elements))
    print(f"  contract {upper}->{lower}: {quo.n_elements} classes, degrees {dict(sorted(degrees.items()))}")
