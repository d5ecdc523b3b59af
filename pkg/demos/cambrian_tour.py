"""Cambrian and biCambrian quotients for every orientation of A_3.

Run with ``python3 demos/cambrian_tour.py``.
"""
from torslat import build_weak_order
from torslat.cambrian import Orientation, bicambrian, cambrian_congruence, sortable_bottoms
from torslat.congruence import quotient
from torslat.poset_core import is_hasse_regular

n = 3
W = build_weak_order(n)
for Q in Orientation.all(n):
    theta = cambrian_congruence(n, Q, W)
    bottoms = sortable_bottoms(n, Q, W)
    bi = quotient(W.lattice, bicambrian(n, Q, W)).lattice
    reg = is_hasse_regular(bi)
    shape = f"regular of degree {reg.detail}" if reg else f"degrees {dict(sorted(reg.witness.items()))}"
    arrows = ", ".join(f"{a}->{b}" for a, b in Q.arrows())
    print(f"{str(Q)}  quiver {arrows}  c = {Q.coxeter_text()}")
    print(f"    Cambrian quotient: {theta.n_classes} classes, {len(theta.contracted)} arrows contracted")
    print(f"    sortable elements: {' '.join(map(str, bottoms))}")
    print(f"    biCambrian quotient: {bi.n_elements} elements, {shape}")
