"""
Structures on the plane F_3^2
=============================
"""

from intensity_lab import kappa as K

fields = K.enumerate_subfields()
print(len(fields), "subfields F_3[J] of End(V)")
for f in fields:
    print("  J =", f.J)

kappas = K.enumerate_kappa_structures()
print(len(kappas), "kappa-maps")

for lam in K.enumerate_lambda_maps():
    print("Lambda-map x^5 + b x with b =", K.lambda_shape(lam))

cert = K.certificate()
for name, value in cert["checks"].items():
    print(f"{name:>24}: {value}")
