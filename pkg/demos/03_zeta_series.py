# Three series for zeta(s) built from inverse factorization matrices.
# Each term is exactly 1/n^s, so the partial sums are ordinary Dirichlet
# partial sums; the tail bound gives the error.

import mpmath

from lambertfact.applications import ZETA_VARIANTS, zeta_partial, zeta_term

for variant in ZETA_VARIANTS:
    terms = [zeta_term(variant, 3, 1, n) for n in range(1, 7)]
    print(variant, [str(x) for x in terms])

report = zeta_partial("sigma_st", 2, 1, 100)
print("zeta(2) ~", mpmath.nstr(report.partial_sums[-1].numerator / mpmath.mpf(report.partial_sums[-1].denominator), 20))
print("reference", mpmath.nstr(report.reference, 20))
print("error at N=100:", mpmath.nstr(report.abs_errors[-1], 6), "(tail bound 1/100)")
