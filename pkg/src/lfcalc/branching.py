"""GL_2n -> GL_n x GL_n branching for determinant characters, and the balanced predicate.

Two independent routes compute the multiplicity of det^a (x) det^b in an
irreducible GL_2n representation F_mu:

* ``restriction_multiplicity`` counts Littlewood-Richardson tableaux;
* ``brute_force_multiplicity`` enumerates Gelfand-Tsetlin patterns to get all
  weight multiplicities of F_mu and extracts the GL_n x GL_n highest-weight
  multiplicity by an alternating Weyl sum.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Sequence

from .cohomweights import InfinityType, PureWeight, symplectic_check


@dataclass(frozen=True)
class RectBranchQuery:
    mu: tuple
    a: int
    b: int
    n: int

    def __post_init__(self):
        mu = tuple(int(x) for x in self.mu)
        if len(mu) != 2 * self.n or self.n < 1:
            raise ValueError(f"weight of length {len(mu)} does not match n = {self.n}")
        if any(mu[k] < mu[k + 1] for k in range(len(mu) - 1)):
            raise ValueError(f"weight {mu} is not dominant")
        object.__setattr__(self, "mu", mu)


# ---------------------------------------------------------------- Littlewood-Richardson


def lr_coefficient(lam: Sequence[int], mu: Sequence[int], nu: Sequence[int]) -> int:
    """c^lam_{mu, nu} for partitions, by counting LR tableaux of shape lam/mu and content nu."""
    lam = _trim(lam)
    mu = _trim(mu)
    nu = _trim(nu)
    if sum(lam) != sum(mu) + sum(nu):
        return 0
    if len(mu) > len(lam) or any(m > l for m, l in zip(mu, lam)):
        return 0
    if not nu:
        return 1
    mu = mu + (0,) * (len(lam) - len(mu))
    rows = len(lam)
    k = len(nu)
    # cells are filled row by row, each row right to left: that is the reading order
    cells = [(r, c) for r in range(rows) for c in range(lam[r] - 1, mu[r] - 1, -1)]
    grid: dict[tuple[int, int], int] = {}
    used = [0] * k

    def place(idx: int) -> int:
        if idx == len(cells):
            return 1
        r, c = cells[idx]
        total = 0
        hi = k
        right = grid.get((r, c + 1))
        if right is not None:
            hi = min(hi, right + 1)  # row weakly increasing left to right
        lo = 0
        above = grid.get((r - 1, c))
        if above is not None:
            lo = above + 1  # column strictly increasing
        for v in range(lo, hi):
            if used[v] >= nu[v]:
                continue
            if v > 0 and used[v] + 1 > used[v - 1]:
                continue  # lattice word condition
            grid[(r, c)] = v
            used[v] += 1
            total += place(idx + 1)
            used[v] -= 1
            del grid[(r, c)]
        return total

    return place(0)


def _trim(p: Sequence[int]) -> tuple:
    p = tuple(int(x) for x in p)
    if any(x < 0 for x in p):
        raise ValueError(f"{p} is not a partition")
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def restriction_multiplicity(q: RectBranchQuery) -> int:
    """Multiplicity of det^a (x) det^b in F_mu restricted to GL_n x GL_n."""
    mu, a, b, n = q.mu, q.a, q.b, q.n
    if sum(mu) != n * (a + b):
        return 0
    u = max(0, -min(mu[-1], a, b))
    lam = tuple(x + u for x in mu)
    return lr_coefficient(lam, (a + u,) * n, (b + u,) * n)


# ---------------------------------------------------------------- Gelfand-Tsetlin oracle


@lru_cache(maxsize=None)
def gt_weight_multiplicities(mu: tuple) -> Counter:
    """Weight multiplicities of the GL_N irreducible with highest weight mu, via GT patterns."""
    N = len(mu)
    out: Counter = Counter()

    def rows_below(top):
        # all interlacing rows of length len(top) - 1
        ranges = [range(top[i + 1], top[i] + 1) for i in range(len(top) - 1)]
        def rec(i, acc):
            if i == len(ranges):
                yield tuple(acc)
                return
            for v in ranges[i]:
                acc.append(v)
                yield from rec(i + 1, acc)
                acc.pop()
        yield from rec(0, [])

    def descend(row, sums):
        # sums[k] = sum of row k (length k); weight_k = sums[k] - sums[k-1]
        if len(row) == 0:
            full = sums[::-1]
            wt = tuple(full[k] - full[k - 1] for k in range(1, N + 1))
            out[wt] += 1
            return
        for nxt in rows_below(row):
            descend(nxt, sums + [sum(nxt)])

    descend(tuple(mu), [sum(mu)])
    return out


def _sign(perm: tuple) -> int:
    s = 1
    p = list(perm)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def brute_force_multiplicity(mu: Sequence[int], a: int, b: int, n: int, max_patterns: int = 2_000_000) -> int:
    """Same multiplicity as ``restriction_multiplicity`` by an independent route."""
    q = RectBranchQuery(tuple(mu), a, b, n)
    if n > 3 or max(q.mu) - min(q.mu) > 12:
        raise ValueError("instance too large for pattern enumeration")
    wts = gt_weight_multiplicities(q.mu)
    if sum(wts.values()) > max_patterns:
        raise ValueError("instance too large for pattern enumeration")
    rho = tuple(range(n - 1, -1, -1))
    target = (a,) * n + (b,) * n
    total = 0
    perms = list(permutations(range(n)))
    for p1 in perms:
        for p2 in perms:
            wr = tuple(rho[p1[i]] for i in range(n)) + tuple(rho[p2[i]] for i in range(n))
            shift = tuple(target[i] + (rho + rho)[i] - wr[i] for i in range(2 * n))
            total += _sign(p1) * _sign(p2) * wts.get(shift, 0)
    return total


# ---------------------------------------------------------------- balanced characters


def dual_weight(mu: Sequence[int]) -> tuple:
    return tuple(-x for x in reversed(mu))


def is_balanced(mu: PureWeight, tau: InfinityType) -> bool:
    """Every embedding's character det^{d} (x) det^{-d-w} occurs in F_{mu*}."""
    sym = symplectic_check(mu)
    if sym is None:
        return False
    ws, _ = sym
    for vec, w, d in zip(mu.mu, ws, tau.dchi):
        q = RectBranchQuery(dual_weight(vec), d, -d - w, mu.n)
        if restriction_multiplicity(q) == 0:
            return False
    return True


def shifted(tau: InfinityType, j: int) -> InfinityType:
    return InfinityType(tuple(d + j for d in tau.dchi), tau.quad)


def balanced_window(mu: PureWeight, tau: InfinityType) -> range:
    """Shifts outside this range put det^d outside the weight polytope of F_mu*."""
    top = max(max(v) for v in mu.mu)
    bot = min(min(v) for v in mu.mu)
    dmax = max(abs(d) for d in tau.dchi) if tau.dchi else 0
    return range(-top - dmax - 1, -bot + dmax + 2)


def balanced_shifts(mu: PureWeight, tau: InfinityType) -> list[int]:
    return [j for j in balanced_window(mu, tau) if is_balanced(mu, shifted(tau, j))]


__all__ = [
    "RectBranchQuery", "lr_coefficient", "restriction_multiplicity", "gt_weight_multiplicities",
    "brute_force_multiplicity", "dual_weight", "is_balanced", "balanced_shifts", "balanced_window",
    "shifted",
]
