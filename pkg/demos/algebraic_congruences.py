"""Algebraic congruences of the weak order on S4 from ideals of paths.

Every up-closed set of paths in the doubled A_3 quiver kills the bricks it
acts on; the arrows carrying those bricks generate a congruence. Run with
``python3 demos/algebraic_congruences.py``.
"""
from torslat import build_weak_order
from torslat.congruence import algebraic_quotient, quotient
from torslat.lattice_io import read_document
from torslat.poset_core import is_hasse_regular
from torslat.typea_bricks import count_algebraic_congruences, ideal_congruence

W = build_weak_order(3)
res = count_algebraic_congruences(3, W)
print(f"{res.count} up-closed path sets, all giving different congruences")
regular = 0
for key, ideal in sorted(res.congruences.items(), key=lambda kv: (len(kv[1]), sorted(map(str, kv[1])))):
    theta = ideal_congruence(3, ideal, W)
    ok = bool(is_hasse_regular(quotient(W.lattice, theta).lattice))
    regular += ok
    gens = " ".join(sorted(map(str, ideal))) or "(none)"
    print(f"  {theta.n_classes:2d} classes  regular={ok!s:5}  {gens}")
print(f"{regular} of them have a Hasse-regular quotient")

doc = read_document("tors_three_vertex")
aq = algebraic_quotient(doc.labelled, {"Sa", "Sb", "Sc", "ab", "bc"})
print(f"\nthree-vertex algebra: {doc.lattice.n_elements} torsion classes, "
      f"{aq.quotient.lattice.n_elements} after killing cb and acb")
