"""The shift-operator algebra and division with remainder.

Operators live in Q[n,i,j]<S_n,S_i,S_j> with the commutation rule
S_x p(x) = p(x+1) S_x.  The transfer operator T of a step set encodes the
one-step recurrence of the counts and annihilates them by construction;
division with remainder by T is the engine of the certification algorithm.
"""

from quarterwalks import (
    Box,
    GESSEL,
    MultiPoly,
    OreOperator,
    WalkOracle,
    build_table,
    div_rem,
    trivial_operator,
)

n = MultiPoly.variable("n")
i = MultiPoly.variable("i")
Sn = OreOperator.shift("Sn")
Si = OreOperator.shift("Si")

# --- noncommutativity ---------------------------------------------------------

print("S_n * n        =", Sn * n)
print("n * S_n        =", OreOperator.from_poly(n) * Sn)
print("difference     =", Sn * n - OreOperator.from_poly(n) * Sn)
print()
print("i (S_i - 1)            =", OreOperator.from_poly(i) * (Si - 1))
print("(S_i - 1)(i - 1) - 1   =", (Si - 1) * OreOperator.from_poly(i - 1) - 1)
print()

# --- the transfer operator -----------------------------------------------------

T = trivial_operator(GESSEL)
print("Gessel transfer operator T =", T)
oracle = WalkOracle(build_table(GESSEL, 13))
print("T annihilates the counts on n,i,j <= 12:", T.is_zero_on(oracle, Box.cube(12)))
print()

# --- division with remainder ----------------------------------------------------

X = OreOperator.from_poly(n * n) * T + OreOperator.from_poly(i) * Sn + 3
U, V = div_rem(X, T)
print("X        =", X)
print("quotient =", U)
print("remainder=", V)
print("round-trip U*T + V == X:", U * T + V == X)
lm = T.leading_monomial()
print("no remainder monomial is divisible by the leading monomial", lm, ":",
      all(not all(e[k] >= lm[k] for k in range(3)) for e in V.support()))
