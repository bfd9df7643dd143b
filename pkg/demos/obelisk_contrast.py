"""
Two families of 5-obelisks
==========================

Finite quotients of the norm-one group of the (t, 5) quaternion algebra are
framed; quotients of the unitriangular-mod-5 subgroup of SL2 are not.
"""

from intensity_lab import constructions as C
from intensity_lab import structure as S

for label, G in [("Sn mod 5^2", C.build_sn_delta(5, None, 2)),
                 ("SL2 mod 5^2", C.build_sl2_triangle(5, 2))]:
    ser = S.series(G)
    print(label, "order", G.n, "widths", ser.widths)
    print("  obelisk:", S.is_obelisk(G), " framed:", S.is_framed(G))
    # one row per maximal subgroup, i.e. per line of G/Phi(G)
    lines = S.lines_report(G)
    framed = S.framed_report(G)
    for x in lines:
        print(f"  line through {G.word(x)}: Phi(M) = G_3 {framed[x]}, lines criterion {lines[x]}")

# a bigger quotient, built directly in Delta / m^5
G5 = C.build_sn_delta(5, None, 3, 5)
print("Sn / G_5:", G5.n, "widths", S.series(G5).widths)
