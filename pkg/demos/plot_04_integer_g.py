"""
Integer g: the inverse as a difference operator
===============================================

When t = q^g the inverse integral operator collapses to a finite
q-difference operator of order g, so the reconstruction of P_lambda from
its separated form can be checked in exact arithmetic over Q(q).
"""

from macdo import DominantWeight
from macdo.factorise import difference_coefficients, integer_g_check

for g in (1, 2):
    for lam in ("0,0,1", "0,1,2", "1,2,2"):
        got, want, ok = integer_g_check(g, DominantWeight.parse(lam))
        print(f"g = {g}, lambda = {lam}: exact match = {ok}")

print("\nP_012 at t = q^2:", integer_g_check(2, DominantWeight.parse("0,1,2"))[0].to_string())

# the sum over shifts must include k = 0; without it the result is not
# even a polynomial in x
got, _, ok = integer_g_check(1, DominantWeight.parse("0,0,1"), k_start=1)
print("\nwithout the k = 0 term:", ok)

print("\ncoefficient of the k = 1 shift for g = 1:")
print(" ", difference_coefficients(1)[1].pretty())
