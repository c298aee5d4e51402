"""Cohomological weights for GL_2n: symplectic data, the characters attached to a weight,
archimedean standard L-factors, critical points and the period-ratio constant."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fieldchar import COMPLEX, REAL, AddChar, MultChar, QI, char_inv
from .meromorph import MeroFactor, GC, tate_L, tate_gamma


@dataclass(frozen=True)
class PureWeight:
    """Weights per embedding.  ``places`` lists "real" or "complex"; a complex place
    owns two consecutive entries of ``mu`` (the embedding and its conjugate)."""

    places: tuple
    mu: tuple

    def __post_init__(self):
        places = tuple(self.places)
        mu = tuple(tuple(int(x) for x in v) for v in self.mu)
        if any(p not in ("real", "complex") for p in places):
            raise ValueError(f"unknown place kind in {places}")
        need = sum(1 if p == "real" else 2 for p in places)
        if len(mu) != need:
            raise ValueError(f"{len(mu)} weight vectors for {need} embeddings")
        lengths = {len(v) for v in mu}
        if len(lengths) != 1 or next(iter(lengths)) % 2:
            raise ValueError("weights must share one even length 2n")
        for v in mu:
            if any(v[k] < v[k + 1] for k in range(len(v) - 1)):
                raise ValueError(f"weight {v} is not dominant")
        object.__setattr__(self, "places", places)
        object.__setattr__(self, "mu", mu)

    @property
    def n(self) -> int:
        return len(self.mu[0]) // 2

    @classmethod
    def real(cls, *mu: Sequence[int]) -> PureWeight:
        """One real place per given vector."""
        return cls(tuple("real" for _ in mu), tuple(tuple(v) for v in mu))

    def embeddings(self):
        """Yield (place index, vectors belonging to that place)."""
        k = 0
        for idx, p in enumerate(self.places):
            if p == "real":
                yield idx, (self.mu[k],)
                k += 1
            else:
                yield idx, (self.mu[k], self.mu[k + 1])
                k += 2

    def dual(self) -> PureWeight:
        return PureWeight(self.places, tuple(tuple(-x for x in reversed(v)) for v in self.mu))

    def to_json(self) -> dict:
        return {"places": [{"kind": p} for p in self.places], "mu": [list(v) for v in self.mu],
                "n": self.n}


@dataclass(frozen=True)
class InfinityType:
    """Integer exponent per embedding plus a quadratic sign per place (+1 or -1)."""

    dchi: tuple
    quad: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "dchi", tuple(int(x) for x in self.dchi))
        object.__setattr__(self, "quad", tuple(int(x) for x in self.quad))

    def to_json(self) -> dict:
        return {"dchi": list(self.dchi), "quad": list(self.quad)}


def _rho(n: int, i: int) -> Fraction:
    return Fraction(2 * n + 1 - 2 * i, 2)


def symplectic_check(mu: PureWeight):
    """(w per embedding, eta per place) when every weight pairs up to a constant sum, else None."""
    ws = []
    for v in mu.mu:
        sums = {v[i] + v[len(v) - 1 - i] for i in range(len(v) // 2)}
        if len(sums) != 1:
            return None
        ws.append(sums.pop())
    etas = []
    k = 0
    for p in mu.places:
        if p == "real":
            w = ws[k]
            etas.append(MultChar(REAL, QI.of(w), delta=w % 2))  # x -> x^w
            k += 1
        else:
            w1, w2 = ws[k], ws[k + 1]
            etas.append(MultChar(COMPLEX, QI.of(Fraction(w1 + w2, 2)), N=w1 - w2))  # z^w1 zbar^w2
            k += 2
    return ws, etas


def zeta_mu(mu: PureWeight) -> list:
    """Per place, the tuple zeta_{mu,i} = (embedding)^{mu_i} |.|^{(2n+1-2i)/2}."""
    from .factorcalc import InducedTuple

    n = mu.n
    out = []
    for _, vecs in mu.embeddings():
        chars = []
        for i in range(1, 2 * n + 1):
            r = _rho(n, i)
            if len(vecs) == 1:
                m = vecs[0][i - 1]
                chars.append(MultChar(REAL, QI.of(m + r), delta=m % 2))
            else:
                a, b = vecs[0][i - 1], vecs[1][i - 1]
                chars.append(MultChar(COMPLEX, QI.of(Fraction(a + b, 2) + r), N=a - b))
        out.append(InducedTuple(tuple(chars)))
    return out


def chi_decompose(chars: Sequence[MultChar]) -> InfinityType:
    """Split archimedean characters into an algebraic part and a quadratic part."""
    dchi = []
    quad = []
    for c in chars:
        if c.field.kind == "R":
            if not c.t.is_integer():
                raise ValueError(f"{c} is not algebraic")
            d = int(c.t.re)
            dchi.append(d)
            quad.append(-1 if (c.delta - d) % 2 else 1)
        elif c.field.kind == "C":
            a = c.t + Fraction(c.N, 2)
            b = c.t - Fraction(c.N, 2)
            if not (a.is_integer() and b.is_integer()):
                raise ValueError(f"{c} is not algebraic")
            dchi += [int(a.re), int(b.re)]
            quad.append(1)
        else:
            raise ValueError("infinity types are defined at archimedean places")
    return InfinityType(tuple(dchi), tuple(quad))


def character_of(tau: InfinityType, places: Sequence[str]) -> list[MultChar]:
    """Inverse of chi_decompose."""
    out = []
    k = 0
    for idx, p in enumerate(places):
        q = tau.quad[idx] if idx < len(tau.quad) else 1
        if p == "real":
            d = tau.dchi[k]
            out.append(MultChar(REAL, QI.of(d), delta=(d + (1 if q == -1 else 0)) % 2))
            k += 1
        else:
            a, b = tau.dchi[k], tau.dchi[k + 1]
            out.append(MultChar(COMPLEX, QI.of(Fraction(a + b, 2)), N=a - b))
            k += 2
    return out


def omega_const(mu: PureWeight, tau: InfinityType) -> complex:
    e = 0
    for v, d in zip(mu.mu, tau.dchi):
        e += sum(v[:mu.n]) + mu.n * d
    return 1j ** (e % 4)


def omega_exponent(mu: PureWeight, tau: InfinityType) -> int:
    return sum(sum(v[:mu.n]) + mu.n * d for v, d in zip(mu.mu, tau.dchi)) % 4


def _real_exponents(vec: Sequence[int], d: int, n: int) -> list[Fraction]:
    return [vec[i - 1] + d + _rho(n, i) for i in range(1, n + 1)]


def standard_L_pi_mu(mu: PureWeight, chi: Sequence[MultChar] | MultChar) -> MeroFactor:
    """Archimedean standard L-factor of the cohomological representation of weight mu, twisted by chi.

    At a real place the parameter is a sum of n two-dimensional inductions, giving
    prod_i Gamma_C(s + mu_i + d + (2n+1-2i)/2).  At a complex place it is the product of
    the GL_1 factors of zeta_{mu,i} chi.
    """
    chars = [chi] if isinstance(chi, MultChar) else list(chi)
    if symplectic_check(mu) is None:
        raise ValueError("weight is not of symplectic type")
    tau = chi_decompose(chars)
    out = MeroFactor.one()
    zs = zeta_mu(mu)
    k = 0
    for (idx, vecs), c, z in zip(mu.embeddings(), chars, zs):
        if len(vecs) == 1:
            for e in _real_exponents(vecs[0], tau.dchi[k], mu.n):
                out = out * MeroFactor.of_atoms(GC(e))
            k += 1
        else:
            for zi in z.chars:
                out = out * tate_L(zi * c)
            k += 2
    return out


def standard_L_dual(mu: PureWeight, chi: Sequence[MultChar] | MultChar) -> MeroFactor:
    """L(s, pi_mu^vee (x) chi^{-1})."""
    chars = [chi] if isinstance(chi, MultChar) else list(chi)
    return standard_L_pi_mu(mu.dual(), [char_inv(c) for c in chars])


def critical_places(mu: PureWeight, chi: Sequence[MultChar] | MultChar) -> list[Fraction]:
    """Points 1/2 + j at which neither L(s, pi_mu chi) nor L(1-s, dual) has a pole."""
    L = standard_L_pi_mu(mu, chi)
    Ld = standard_L_dual(mu, chi).reflect()
    chars = [chi] if isinstance(chi, MultChar) else list(chi)
    tau = chi_decompose(chars)
    span = max(max(abs(x) for x in v) for v in mu.mu) + max((abs(d) for d in tau.dchi), default=0)
    span += 2 * mu.n + 2
    out = []
    for j in range(-span, span + 1):
        s0 = Fraction(1, 2) + j
        if L.order_at(s0) >= 0 and Ld.order_at(s0) >= 0:
            out.append(s0)
    return out


def xi_ratio(mu: PureWeight, chi: MultChar, s: complex, psi: AddChar | None = None) -> complex:
    """prod_i gamma(s, zeta_{0,i} chi^quad)/gamma(s, zeta_{mu,i} chi) * L(s, pi_0)/L(s, pi_mu chi)."""
    if mu.places != ("real",):
        raise ValueError("the ratio is implemented for a single real place")
    psi = psi or AddChar(REAL)
    n = mu.n
    tau = chi_decompose([chi])
    quad = MultChar(REAL, delta=1 if tau.quad[0] == -1 else 0)
    zero = PureWeight.real((0,) * (2 * n))
    z0 = zeta_mu(zero)[0]
    zm = zeta_mu(mu)[0]
    val = 1 + 0j
    for i in range(1, n + 1):
        val *= tate_gamma(z0[i] * quad, psi).eval(s) / tate_gamma(zm[i] * chi, psi).eval(s)
    val *= standard_L_pi_mu(zero, MultChar(REAL)).eval(s) / standard_L_pi_mu(mu, chi).eval(s)
    return val


def d_field(kind: str, n: int) -> int:
    if kind in ("R", "real"):
        return n * n + n - 1
    if kind in ("C", "complex"):
        return 2 * n * n - 1
    raise ValueError(f"unknown archimedean place kind {kind}")


def d_infty(places: Sequence[str], n: int) -> int:
    return sum(d_field(p, n) for p in places) + len(places) - 1


__all__ = [
    "PureWeight", "InfinityType", "symplectic_check", "zeta_mu", "chi_decompose", "character_of",
    "omega_const", "omega_exponent", "standard_L_pi_mu", "standard_L_dual", "critical_places",
    "xi_ratio", "d_field", "d_infty",
]
