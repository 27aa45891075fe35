"""Multiplicativity as a computation.

Push the genus of the projectivised bundle over CP(1) x CP(1) down to a
point by fixed-point localisation.  A genuine elliptic genus gives a class in
degree zero and nothing above; a tampered series leaves debris, and the degree
where it appears is the same one where the pole equation breaks.
"""

from fractions import Fraction

from ellgenus import PushforwardInput, equivalence_check, gysin_pushforward, recursion_solve

sg = recursion_solve((Fraction(1, 3), Fraction(1, 5), Fraction(-1, 2), Fraction(2, 9)), 10)

for label, series in (("solution", sg), ("a6 + 1", sg.perturbed(6))):
    inp = PushforwardInput(series, 10)
    rep = gysin_pushforward(inp)
    print(f"{label:>9}: degree-0 part {rep.h0_value}, lands in H0: {rep.lands_in_h0}, "
          f"first failure {rep.first_failure_degree}, agrees with pole equation: {equivalence_check(inp)}")
    print("           largest coefficient per degree:", [str(v) for v in rep.per_degree_max])
