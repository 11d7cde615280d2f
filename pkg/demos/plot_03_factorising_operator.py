"""
The factorising integral operator
=================================

An integral operator with an Askey-Wilson type kernel sends P_lambda(x_1, x_2)
to a product c phi_lambda(y_1) phi_lambda(y_2).  Its inverse goes back.  All
integrals are trapezoid sums on the unit circle; when the kernel parameters
leave the disc the contour picks up residues at the escaping poles.
"""

from macdo import AWParams, DominantWeight, aw_integral
from macdo.factorise import roundtrip_n2, theorem1, theorem3

q, t, xi = 0.2, 0.5, 1.0

# the Askey-Wilson integral itself, quadrature against the product formula
lhs, rhs = aw_integral(AWParams(0.3, 0.2 + 0.1j, 0.1, -0.4, 0.4))
print("Askey-Wilson: quadrature", lhs, " product", rhs)

# with |a| > 1 the deformed contour is needed
lhs, rhs = aw_integral(AWParams(1.2, 0.2, 0.1, 0.05, 0.4), deform=True)
print("deformed contour, a = 1.2:", abs(lhs - rhs) / abs(rhs))

print("\nn = 2 factorisation at y = (0.5, 0.5)")
for lam in ("0,0", "0,1", "0,2", "1,2"):
    got, want = theorem1(DominantWeight.parse(lam), 0.5, 0.5, xi, q, t)
    print(f"  lambda = {lam}: {got.real:.12f} vs {want.real:.12f}")

print("\nn = 3 factorisation at y = (0.5, 0.5, 0.8)")
for lam in ("0,0,1", "0,1,1", "0,0,2"):
    got, want = theorem3(DominantWeight.parse(lam), 0.5, 0.5, 0.8, q, t)
    print(f"  lambda = {lam}: {got.real:.12f} vs {want.real:.12f}")

# inverse after forward, both done by quadrature (about a second)
got, want = roundtrip_n2(DominantWeight.parse("1,2"), 0.8, 0.6, xi, q, t)
print("\nround trip on P_12 at x = (0.8, 0.6):", got.real, "vs", want.real)
