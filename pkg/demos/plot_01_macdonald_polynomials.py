"""
Macdonald polynomials from the difference operators
===================================================

P_lambda is the eigenfunction of the operators H_1..H_n that is unitriangular
in the monomial basis.  Everything here is exact: coefficients live in the
field Q(q, t).
"""

from macdo import DominantWeight, MacdonaldOperator, apply_H, eigenvalues, macdonald_P

# weights are weakly increasing tuples of nonnegative integers
lam = DominantWeight.parse("0,1,2")
P = macdonald_P(lam)
print("P_012 =", P.to_string())

# the eigenvalues h_k are elementary symmetric functions of q^{lam_j} t^{j-(n+1)/2}
ev = eigenvalues(lam)
for k in range(1, lam.n + 1):
    lhs = apply_H(MacdonaldOperator(3, k), P)
    print(f"H_{k} P == h_{k} P :", lhs == P.scale(ev.h(k)), "  h =", ev.h(k).to_string())

# two classical limits: t = 1 gives monomials, q = t gives Schur polynomials
schur = P.map_coeffs(lambda c: c.specialize_t(1))
print("q = t  :", schur.to_string())

# numeric evaluation at a point
print("P_012(1, 2, 3; q=0.3, t=0.6) =", P.evaluate([1.0, 2.0, 3.0], 0.3, 0.6))
