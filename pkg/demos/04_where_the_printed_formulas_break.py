# Some derivative expansions only hold at low order. This script shows
# where, by comparing them with q-series differentiation.

from lambertfact import DerivParams, a_t, deriv_term_series, theorem34_check
from lambertfact.derivatives import a_t_oracle

N = 14
for s in range(4):
    direct = deriv_term_series(2, s, "direct", N)
    row = {v: deriv_term_series(2, s, v, N) == direct for v in ("i", "ii", "stirling")}
    print(f"s={s} i=2", row)

p = DerivParams(2, N, [1] * N)
oracle = a_t_oracle(p)
print("A_2(n), printed sum vs stirling sum vs oracle")
for n in range(1, 9):
    print(n, a_t(p, n), a_t(p, n, "stirling"), oracle[n])

for t in (1, 2):
    rep = theorem34_check(DerivParams(t, 20, lambda n: n))
    print(f"t={t}:", {r.identity: r.passed for r in rep.results})
