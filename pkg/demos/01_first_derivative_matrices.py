# The first-derivative factorization matrices and their inverse, printed
# side by side, then checked against a direct q-series expansion.

from lambertfact import deriv_inverse_t1, deriv_matrix, factored_series, lambert_gf, q_derivative

N = 12
M = deriv_matrix(1, N)
inv = deriv_inverse_t1(N)

print("s_{1,n,k}")
print(M.to_pretty())
print("its inverse, from the closed form sum_{d|n} p(d-k)/d mu(n/d)")
print(inv.to_pretty())

# the diagonal of the forward matrix is just n
print("diagonal:", [int(x) for x in M.diagonal()])

# q D[sum a_n q^n/(1-q^n)] against (1/(q;q)) sum_n (M a)_n q^n, with a = n^2
a = [n * n for n in range(1, N + 1)]
lhs = q_derivative(lambert_gf(a, N), 1)
rhs = factored_series(M, a)
print("derivative factorization holds:", lhs == rhs)
print("product is the identity:", (M @ inv).is_identity())
