# Classical functions written as "exotic" sums over partition numbers,
# Mobius values and pentagonal shifts.

import mpmath

from lambertfact.applications import exotic_reference, exotic_sum

print(" n  phi  J_2   exotic(phi)  exotic(J_2)")
for n in range(1, 16):
    print(f"{n:2d} {exotic_reference('totient', n):4d} {exotic_reference('jordan', n, t=2):4d}"
          f" {exotic_sum('totient', n)!s:>12} {exotic_sum('jordan', n, t=2)!s:>12}")

# von Mangoldt needs real arithmetic; the error is at the working precision
with mpmath.workprec(128):
    for n in (2, 8, 9, 12, 25, 27):
        v = exotic_sum("von_mangoldt", n)
        print(n, mpmath.nstr(v, 25), "error", mpmath.nstr(abs(v - exotic_reference("von_mangoldt", n)), 3))
