"""
The 729-element norm-one group
==============================

Build it, look at its layers, then find its intense automorphisms.
"""

import numpy as np

from intensity_lab import constructions as C
from intensity_lab import structure as S
from intensity_lab import intensity as I

# closure of a = 1 - eps + i and b = 1 - eps + j inside F_3[eps]-quaternions
Y = C.build_yo()
print(Y, "generators:", [Y.elements[g] for g in Y.generators])

# lower central series and widths
ser = S.series(Y)
print("LCS orders:", [len(H) for H in ser.lcs])
print("widths:", ser.widths, "class:", ser.nilpotency_class)

# element orders
orders, counts = np.unique(Y.orders(), return_counts=True)
print("order histogram:", dict(zip(orders.tolist(), counts.tolist())))

# kappa-group and regularity
print("kappa group:", S.is_kappa_group(Y))
r = S.regularity(Y)
print("regular:", r.regular, "counterexample pair:", r.counterexample)

# intensity by scalar-restricted search
rep = I.intensity(Y)
print("intensity:", rep.intensity, "realized scalars:", rep.realized)

# the coordinate involution s + ti + uj + vk -> s - ti - uj + vk
alpha = I.alpha_yo(Y)
print("alpha intense:", I.is_intense(Y, alpha), "scalar:", alpha.scalar)
print("acts as (-1)^i on layers:", I.minus_one_powers_check(Y, alpha))

plus, minus = S.plus_minus_decomposition(Y, alpha)
print("|G+| =", len(plus), " |G-| =", len(minus))
