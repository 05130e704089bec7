"""Regenerate src/compound_dni/_gk_tables.py (Gauss-Legendre + Kronrod extensions).

Nodes/weights are computed at 80 digits with mpmath and written as hex floats.
"""
import mpmath as mp

mp.mp.dps = 80


def legendre_moment(j):
    return mp.mpf(2) / (j + 1) if j % 2 == 0 else mp.mpf(0)


def gauss_kronrod(m):
    xg, wg = zip(*[(x, w) for x, w in zip(*gauss_legendre(m))])
    # Stieltjes polynomial E(x) = x^{m+1} + sum c_j x^j, orthogonal to P_m(x) x^k, k=0..m
    pm = legendre_coeffs(m)

    def inner(j_pow, k):
        # int x^j_pow P_m(x) x^k dx
        return sum(c * legendre_moment(i + j_pow + k) for i, c in enumerate(pm))

    # E has the parity of m + 1; only those coefficients and the k with k + m + 1 + m even matter
    js = [j for j in range(m + 1) if (j - (m + 1)) % 2 == 0]
    ks = [k for k in range(m + 1) if (k + 1) % 2 == 0]
    n_unk = len(js)
    A = mp.matrix(n_unk, n_unk)
    b = mp.matrix(n_unk, 1)
    for r, k in enumerate(ks):
        for col, j in enumerate(js):
            A[r, col] = inner(j, k)
        b[r] = -inner(m + 1, k)
    c = mp.lu_solve(A, b)
    full = {m + 1: mp.mpf(1)}
    for col, j in enumerate(js):
        full[j] = c[col]
    coeffs = [full.get(j, mp.mpf(0)) for j in reversed(range(m + 2))]
    roots = sorted(mp.re(r) for r in mp.polyroots(coeffs, maxsteps=500, extraprec=400))
    nodes = sorted(list(xg) + roots)
    n = len(nodes)
    V = mp.matrix(n, n)
    rhs = mp.matrix(n, 1)
    for j in range(n):
        for i, x in enumerate(nodes):
            V[j, i] = x ** j
        rhs[j] = legendre_moment(j)
    w = mp.lu_solve(V, rhs)
    return nodes, [w[i] for i in range(n)]


def legendre_coeffs(m):
    """Ascending monomial coefficients of P_m via the three-term recurrence."""
    p0, p1 = [mp.mpf(1)], [mp.mpf(0), mp.mpf(1)]
    if m == 0:
        return p0
    for n in range(1, m):
        nxt = [mp.mpf(0)] * (n + 2)
        for i, c in enumerate(p1):
            nxt[i + 1] += (2 * n + 1) * c / (n + 1)
        for i, c in enumerate(p0):
            nxt[i] -= n * c / (n + 1)
        p0, p1 = p1, nxt
    return p1


def gauss_legendre(m):
    pc = legendre_coeffs(m)
    nodes = sorted(mp.re(r) for r in mp.polyroots(list(reversed(pc)), maxsteps=500, extraprec=400))
    dp = [i * c for i, c in enumerate(pc)][1:]
    weights = [2 / ((1 - x**2) * mp.polyval(list(reversed(dp)), x) ** 2) for x in nodes]
    return nodes, weights


def fmt(vals):
    return "(\n" + "".join(f"    float.fromhex({float(v).hex()!r}),\n" for v in vals) + ")"


out = ['"""Gauss-Legendre and Gauss-Kronrod nodes/weights on [-1, 1] as exact doubles.',
       "",
       "Generated by scripts/gen_kronrod.py; do not edit by hand.",
       '"""', ""]
for m in (7, 15):
    xg, wg = gauss_legendre(m)
    xk, wk = gauss_kronrod(m)
    out.append(f"GAUSS_{m}_NODES = {fmt(xg)}")
    out.append(f"GAUSS_{m}_WEIGHTS = {fmt(wg)}")
    out.append(f"KRONROD_{2*m+1}_NODES = {fmt(xk)}")
    out.append(f"KRONROD_{2*m+1}_WEIGHTS = {fmt(wk)}")
    out.append("")
with open("src/compound_dni/_gk_tables.py", "w") as fh:
    fh.write("\n".join(out))
