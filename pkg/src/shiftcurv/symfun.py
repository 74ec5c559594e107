"""Elementary symmetric functions, Newton transformations and related machinery.

Everything here is a pure function of its arguments.  Each operation runs in
one of two numeric modes: float64, or exact rational arithmetic backed by
``fractions.Fraction``.  Exact mode is what the identity test-suite leans on:
the trace identities of the Newton transformation, the shifted-curvature
binomial transform and the Gauss-Bonnet expansion all hold with zero residue
over the rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np

__all__ = [
    "SymTable",
    "ConeReport",
    "elementary_symmetric",
    "elementary_symmetric_list",
    "sym_table",
    "elementary_symmetric_of_matrix",
    "newton_tensor",
    "cone_membership",
    "newton_maclaurin_gap",
    "shift_transform",
    "gauss_bonnet_expand",
    "gauss_bonnet_bruteforce",
    "generalized_delta",
]

CONE_TOL = 1e-12


def _as_exact(values):
    return [Fraction(v) for v in values]


def elementary_symmetric(values, k, exact=False):
    """sigma_k of a vector, by the product-expansion recurrence.

    Coefficients of prod_i (t + lam_i) are accumulated in O(n*k); subset
    enumeration is deliberately not used here (it lives in the test suite as
    an independent oracle).
    """
    values = list(values)
    n = len(values)
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range for n={n}")
    if exact:
        values = _as_exact(values)
        e = [Fraction(1)] + [Fraction(0)] * k
    else:
        e = [1.0] + [0.0] * k
    for i, lam in enumerate(values):
        for j in range(min(i + 1, k), 0, -1):
            e[j] += lam * e[j - 1]
    return e[k]


def elementary_symmetric_list(values, exact=False):
    """All of sigma_0..sigma_n at once (same recurrence)."""
    values = list(values)
    n = len(values)
    if exact:
        values = _as_exact(values)
        e = [Fraction(1)] + [Fraction(0)] * n
    else:
        e = [1.0] + [0.0] * n
    for i, lam in enumerate(values):
        for j in range(i + 1, 0, -1):
            e[j] += lam * e[j - 1]
    return e


@dataclass(frozen=True)
class SymTable:
    """sigma_0..sigma_n and the normalized H_0..H_n of one curvature vector."""

    n: int
    sigma: tuple
    normalized: tuple

    def H(self, k):
        """H_k with the convention H_{-1} = 0."""
        if k == -1:
            return 0 * self.normalized[0]
        return self.normalized[k]


def sym_table(values, exact=False):
    values = list(values)
    n = len(values)
    sigma = elementary_symmetric_list(values, exact=exact)
    if exact:
        H = tuple(s / Fraction(math.comb(n, k)) for k, s in enumerate(sigma))
    else:
        H = tuple(s / math.comb(n, k) for k, s in enumerate(sigma))
    return SymTable(n=n, sigma=tuple(sigma), normalized=H)


def _check_symmetric(A, exact):
    A = np.asarray(A, dtype=object if exact else float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    n = A.shape[0]
    for i in range(n):
        for j in range(i):
            if exact:
                if Fraction(A[i, j]) != Fraction(A[j, i]):
                    raise ValueError("matrix must be symmetric")
            elif abs(A[i, j] - A[j, i]) > 1e-12 * (1 + abs(A[i, j])):
                raise ValueError("matrix must be symmetric")
    if exact:
        A = np.array([[Fraction(v) for v in row] for row in A], dtype=object)
    return A


def _det(M):
    """Determinant by permutation expansion; fine for the small orders used."""
    m = len(M)
    if m == 0:
        return M.dtype.type(1) if hasattr(M, "dtype") else 1
    total = None
    for perm in permutations(range(m)):
        sgn = _perm_sign(perm)
        prod = M[0][perm[0]]
        for i in range(1, m):
            prod = prod * M[i][perm[i]]
        total = prod * sgn if total is None else total + prod * sgn
    return total


def _perm_sign(perm):
    sgn = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, cyc = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            cyc += 1
        if cyc % 2 == 0:
            sgn = -sgn
    return sgn


def elementary_symmetric_of_matrix(A, k, exact=False):
    """sigma_k of a symmetric matrix: the normalized Kronecker-delta
    contraction, which collapses to the sum of principal k x k minors."""
    A = _check_symmetric(A, exact)
    n = A.shape[0]
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range for n={n}")
    if k == 0:
        return Fraction(1) if exact else 1.0
    total = Fraction(0) if exact else 0.0
    for S in combinations(range(n), k):
        minor = [[A[i, j] for j in S] for i in S]
        total += _det(np.array(minor, dtype=object) if exact else np.array(minor))
    return total


def newton_tensor(A, k, exact=False):
    """The k-th Newton transformation T_k(A) = sum_{j<=k} (-sigma)^... via the
    standard expansion T_k = sum_{j=0}^{k} (-1)^j sigma_{k-j}(A) A^j.

    Trace identities (verified exactly in the tests, n x n convention):
        tr(T_{k-1} A)   = k sigma_k(A)
        tr(T_{k-1})     = (n - k + 1) sigma_{k-1}(A)
    The second constant appears elsewhere as (n+1-k); both readings coincide
    for an n x n matrix, there is no ambient-dimension discrepancy.
    """
    A = _check_symmetric(A, exact)
    n = A.shape[0]
    if not 0 <= k <= n - 1:
        raise ValueError(f"k={k} out of range for n={n} (need 0 <= k <= n-1)")
    if exact:
        one = Fraction(1)
        I = np.array(
            [[one if i == j else Fraction(0) for j in range(n)] for i in range(n)],
            dtype=object,
        )
    else:
        I = np.eye(n)
    sig = [elementary_symmetric_of_matrix(A, j, exact=exact) for j in range(k + 1)]
    T = sig[k] * I
    P = I
    sign = 1
    for j in range(1, k + 1):
        P = P @ A
        sign = -sign
        T = T + sign * sig[k - j] * P
    return T


@dataclass(frozen=True)
class ConeReport:
    """Garding-cone placement of one curvature vector."""

    max_k: int  # largest k with lambda in the open cone (0 if none)
    closure_max_k: int  # same with sigma_i >= -tol tests
    per_sigma_signs: tuple  # signs of sigma_1..sigma_n


def cone_membership(values, k, tol=CONE_TOL):
    """Whether sigma_1..sigma_k are all positive, with a full ConeReport.

    Closure membership uses sigma_i >= -tol * (1 + |sigma| scale) per entry.
    """
    values = list(values)
    n = len(values)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for n={n}")
    sigma = elementary_symmetric_list(values)
    scale = 1.0 + max(abs(s) for s in sigma)
    max_k = 0
    closure_max_k = 0
    strict_chain = True
    closed_chain = True
    signs = []
    for i in range(1, n + 1):
        s = sigma[i]
        signs.append(0 if s == 0 else (1 if s > 0 else -1))
        if strict_chain and s > 0:
            max_k = i
        else:
            strict_chain = False
        if closed_chain and s >= -tol * scale:
            closure_max_k = i
        else:
            closed_chain = False
    return max_k >= k, ConeReport(max_k, closure_max_k, tuple(signs))


def in_closed_cone(values, k, tol=CONE_TOL):
    _, rep = cone_membership(values, min(k, len(list(values))), tol=tol)
    return rep.closure_max_k >= k


def newton_maclaurin_gap(values, k, l):
    """The two Maclaurin gaps of a vector in the closed k-th Garding cone.

    gap1 = H_{k-1} H_l - H_k H_{l-1}   >= 0
    gap2 = H_l - H_k^{l/k}             >= 0
    Both vanish exactly on multiples of (1,...,1).
    """
    values = list(values)
    n = len(values)
    if not 1 <= l < k <= n:
        raise ValueError(f"need 1 <= l < k <= n, got l={l}, k={k}, n={n}")
    if not in_closed_cone(values, k):
        raise ValueError("vector not in the closed Garding cone Gamma_k; "
                         "the Maclaurin inequalities are not guaranteed")
    tab = sym_table(values)
    gap1 = tab.H(k - 1) * tab.H(l) - tab.H(k) * tab.H(l - 1)
    Hk = max(tab.H(k), 0.0)  # clamp closure-roundoff negatives
    gap2 = tab.H(l) - Hk ** (l / k)
    return gap1, gap2


def shift_transform(H_list, k, direction="to_shifted", exact=False):
    """Binomial transform between H_k of a curvature vector and H_k of its
    unit shift.

    ``to_shifted``:   H_k(kappa - 1) = sum_i (-1)^{k-i} C(k,i) H_i(kappa)
    ``from_shifted``: H_k(kappa)     = sum_i C(k,i) H_i(kappa - 1)
    ``H_list`` holds H_0..H_k (at least) of the source vector.  The two
    directions invert each other exactly in rational mode.
    """
    H_list = list(H_list)
    if len(H_list) < k + 1:
        raise ValueError(f"need H_0..H_{k}, got {len(H_list)} entries")
    if direction not in ("to_shifted", "from_shifted"):
        raise ValueError(f"unknown direction {direction!r}")
    if exact:
        H_list = [Fraction(v) for v in H_list]
    total = H_list[0] * 0
    for i in range(k + 1):
        c = math.comb(k, i)
        if direction == "to_shifted" and (k - i) % 2 == 1:
            c = -c
        total += c * H_list[i]
    return total


def gauss_bonnet_expand(H_shifted, n, k, exact=False):
    """Gauss-Bonnet curvature L_k from shifted mean curvatures:

        L_k = C(n,2k) (2k)! sum_{j=0}^{k} 2^j C(k,j) H_{2k-j}

    ``H_shifted`` holds H_0..H_{2k} (at least) of the shifted curvature
    vector.  Rejects 2k > n rather than silently returning 0.
    """
    if not 1 <= k:
        raise ValueError("k must be >= 1")
    if 2 * k > n:
        raise ValueError(f"2k={2 * k} exceeds n={n}")
    H_shifted = list(H_shifted)
    if len(H_shifted) < 2 * k + 1:
        raise ValueError(f"need H_0..H_{2 * k}, got {len(H_shifted)} entries")
    if exact:
        H_shifted = [Fraction(v) for v in H_shifted]
    total = H_shifted[0] * 0
    for j in range(k + 1):
        total += (2 ** j) * math.comb(k, j) * H_shifted[2 * k - j]
    return math.comb(n, 2 * k) * math.factorial(2 * k) * total


def generalized_delta(upper, lower):
    """Generalized Kronecker delta of two index tuples: +-1 when the tuples
    are permutations of the same distinct index set, else 0."""
    if len(set(upper)) != len(upper) or set(upper) != set(lower):
        return 0
    order = {v: i for i, v in enumerate(upper)}
    return _perm_sign(tuple(order[v] for v in lower))


def _riemann_from_weingarten(W, exact):
    """Gauss-equation curvature R_{ij}^{sl} of a hypersurface in hyperbolic
    space, from its Weingarten matrix."""
    n = W.shape[0]
    if exact:
        d = lambda a, b: Fraction(1 if a == b else 0)
    else:
        d = lambda a, b: 1.0 if a == b else 0.0
    R = np.empty((n, n, n, n), dtype=object if exact else float)
    for i in range(n):
        for j in range(n):
            for s in range(n):
                for l in range(n):
                    R[i, j, s, l] = (W[i, s] * W[j, l] - W[i, l] * W[j, s]) - (
                        d(i, s) * d(j, l) - d(i, l) * d(j, s)
                    )
    return R


def gauss_bonnet_bruteforce(W, k, exact=False):
    """L_k by direct contraction of the generalized Kronecker delta against
    the Gauss-equation curvature tensor built from a Weingarten matrix.

    Cost grows factorially in 2k index tuples; capped at n <= 6, k <= 2.
    Mutual oracle of :func:`gauss_bonnet_expand`.
    """
    W = _check_symmetric(W, exact)
    n = W.shape[0]
    if n > 6 or k > 2:
        raise ValueError("brute-force contraction capped at n <= 6, k <= 2")
    if not 1 <= k:
        raise ValueError("k must be >= 1")
    if 2 * k > n:
        raise ValueError(f"2k={2 * k} exceeds n={n}")
    R = _riemann_from_weingarten(W, exact)
    p = 2 * k
    total = Fraction(0) if exact else 0.0
    for S in combinations(range(n), p):
        for upper in permutations(S):
            su = _perm_sign(_relative_perm(S, upper))
            for lower in permutations(S):
                sl = _perm_sign(_relative_perm(S, lower))
                prod = su * sl
                for m in range(k):
                    prod = prod * R[
                        upper[2 * m], upper[2 * m + 1], lower[2 * m], lower[2 * m + 1]
                    ]
                total += prod
    if exact:
        return total / Fraction(2 ** k)
    return total / (2 ** k)


def _relative_perm(base, perm):
    order = {v: i for i, v in enumerate(base)}
    return tuple(order[v] for v in perm)
