"""Formal products of Gamma-type and Euler-type atoms.

Every atom is a function of ``z = sign*s + a`` with ``sign = +-1``:

* ``GR``: pi^{-z/2} Gamma(z/2)
* ``GC``: 2 (2 pi)^{-z} Gamma(z)
* ``NA``: (1 - e^{2 pi i angle} p^{-z})^{-1}

The sign lets the reflection s -> 1-s act on atoms without leaving the class,
so products such as gamma(s) gamma(1-s) cancel symbolically.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy.special import loggamma

from .fieldchar import (QI, ZERO, AddChar, MultChar, char_eval, char_inv, _frac,
                        fraction_str, padic_abs, qi_json,
                        _root_of_unity)

KINDS = ("GR", "GC", "NA")


@dataclass(frozen=True, order=True)
class Atom:
    kind: str
    sign: int
    a: QI
    p: int = 0
    angle: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown atom kind {self.kind}")
        if self.sign not in (1, -1):
            raise ValueError("atom sign must be +-1")
        object.__setattr__(self, "a", QI.of(self.a))
        object.__setattr__(self, "angle", _frac(self.angle) % 1)
        if self.kind == "NA" and self.p < 2:
            raise ValueError("Euler atom needs a prime")

    def z(self, s) -> complex:
        return self.sign * s + complex(self.a)

    def z_exact(self, s0: QI) -> QI:
        return s0 * self.sign + self.a

    def substitute(self, sign: int, shift: QI) -> Atom:
        """Atom of s -> sign*s + shift."""
        return Atom(self.kind, self.sign * sign, self.a + shift * self.sign, self.p, self.angle)

    def log_value(self, s: complex) -> complex:
        z = self.z(s)
        if self.kind == "GR":
            return -0.5 * z * math.log(math.pi) + complex(loggamma(0.5 * z))
        if self.kind == "GC":
            return math.log(2) - z * math.log(2 * math.pi) + complex(loggamma(z))
        w = _root_of_unity(self.angle) * cmath.exp(-z * math.log(self.p))
        return -cmath.log(1 - w)

    def is_singular(self, s0: QI) -> bool:
        z = self.z_exact(s0)
        if self.kind == "GR":
            return z.is_integer() and z.re <= 0 and z.re.numerator % 2 == 0
        if self.kind == "GC":
            return z.is_integer() and z.re <= 0
        # p^{-z} root of unity with rational z forces z = 0 (Gelfond-Schneider)
        return z == ZERO and self.angle == 0

    def near_singular(self, s: complex, tol: float = 1e-9) -> bool:
        z = self.z(s)
        if self.kind == "NA":
            w = _root_of_unity(self.angle) * cmath.exp(-z * math.log(self.p))
            return abs(1 - w) < tol
        if abs(z.imag) > tol or z.real > tol:
            return False
        k = round(z.real / 2) * 2 if self.kind == "GR" else round(z.real)
        return abs(z.real - k) < tol

    def label(self) -> str:
        z = _zstr(self.sign, self.a)
        if self.kind == "GR":
            return f"G_R({z})"
        if self.kind == "GC":
            return f"G_C({z})"
        alpha = "" if self.angle == 0 else f"e(2pi i {fraction_str(self.angle)})"
        return f"(1-{alpha}{self.p}^-({z}))^-1"

    def to_json(self) -> dict:
        d = {"kind": self.kind, "sign": self.sign, "a": qi_json(self.a)}
        if self.kind == "NA":
            d["p"] = self.p
            d["alpha"] = fraction_str(self.angle)
        return d

    @classmethod
    def from_json(cls, d: dict) -> Atom:
        from .fieldchar import parse_qi
        return cls(d["kind"], d.get("sign", 1), parse_qi(d["a"]), d.get("p", 0), Fraction(d.get("alpha", "0")))


def _zstr(sign: int, a: QI) -> str:
    head = "s" if sign == 1 else "-s"
    if a == ZERO:
        return head
    txt = qi_json(a)
    return f"{head}+{txt}" if not txt.startswith("-") else f"{head}{txt}"


def GR(a=0, sign: int = 1) -> Atom:
    return Atom("GR", sign, QI.of(a))


def GC(a=0, sign: int = 1) -> Atom:
    return Atom("GC", sign, QI.of(a))


def NA(p: int, a=0, angle=0, sign: int = 1) -> Atom:
    return Atom("NA", sign, QI.of(a), p, _frac(angle))


@dataclass(frozen=True)
class MeroFactor:
    """constant * base^s * prod atom^mult, with base a positive rational."""

    constant: complex = 1.0 + 0j
    base: Fraction = Fraction(1)
    atoms: tuple = ()  # sorted tuple of (Atom, mult) with mult != 0

    def __post_init__(self):
        object.__setattr__(self, "constant", complex(self.constant))
        b = _frac(self.base)
        if b <= 0:
            raise ValueError("exponential base must be positive")
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "atoms", _canon(self.atoms))

    # -- construction helpers
    @classmethod
    def one(cls) -> MeroFactor:
        return cls()

    @classmethod
    def of_atoms(cls, *atoms: Atom, constant=1.0) -> MeroFactor:
        return cls(constant, Fraction(1), tuple((a, 1) for a in atoms))

    # -- algebra
    def __mul__(self, o) -> MeroFactor:
        if not isinstance(o, MeroFactor):
            return MeroFactor(self.constant * complex(o), self.base, self.atoms)
        return MeroFactor(self.constant * o.constant, self.base * o.base, self.atoms + o.atoms)

    __rmul__ = __mul__

    def inverse(self) -> MeroFactor:
        if self.constant == 0:
            raise ZeroDivisionError("inverse of the zero factor")
        return MeroFactor(1 / self.constant, 1 / self.base, tuple((a, -m) for a, m in self.atoms))

    def __truediv__(self, o) -> MeroFactor:
        if not isinstance(o, MeroFactor):
            return MeroFactor(self.constant / complex(o), self.base, self.atoms)
        return self * o.inverse()

    def __pow__(self, k: int) -> MeroFactor:
        if k < 0:
            return self.inverse() ** (-k)
        return MeroFactor(self.constant**k, self.base**k, tuple((a, m * k) for a, m in self.atoms))

    def substitute(self, sign: int, shift=0) -> MeroFactor:
        """The factor s -> F(sign*s + shift)."""
        shift = QI.of(shift)
        const = self.constant * cmath.exp(complex(shift) * math.log(self.base))
        base = self.base if sign == 1 else 1 / self.base
        return MeroFactor(const, base, tuple((a.substitute(sign, shift), m) for a, m in self.atoms))

    def reflect(self) -> MeroFactor:
        """s -> F(1 - s)."""
        return self.substitute(-1, 1)

    def shift(self, c) -> MeroFactor:
        """s -> F(s + c)."""
        return self.substitute(1, c)

    @property
    def is_exponential(self) -> bool:
        return not self.atoms

    def atom_count(self) -> int:
        return sum(abs(m) for _, m in self.atoms)

    # -- analysis
    def order_at(self, s0) -> int:
        s0 = QI.of(s0)
        if self.constant == 0:
            raise ValueError("order of the zero factor is undefined")
        return -sum(m for a, m in self.atoms if a.is_singular(s0))

    def log_eval(self, s: complex) -> complex:
        out = cmath.log(self.constant) + s * math.log(self.base)
        for a, m in self.atoms:
            out += m * a.log_value(s)
        return out

    def _raw(self, s: complex) -> complex:
        if self.constant == 0:
            return 0j
        return cmath.exp(self.log_eval(s))

    def eval(self, s) -> complex:
        exact = isinstance(s, (QI, Fraction, int))
        sc = complex(s)
        if not exact and not any(a.near_singular(sc) for a, _ in self.atoms):
            return self._raw(sc)
        s0 = QI.of(s) if exact else _snap(sc)
        if s0 is None:
            return self._raw(sc)
        k = self.order_at(s0)
        if k != 0:
            kind = "zero" if k > 0 else "pole"
            raise ValueError(f"{kind} of order {abs(k)} at s = {s0}")
        if not any(a.is_singular(s0) for a, _ in self.atoms):
            return self._raw(complex(s0))
        # removable singularity: mean value over a small circle
        c = complex(s0)
        r = 1e-2 * min(1.0, self._singular_gap(s0))
        n = 64
        pts = c + r * np.exp(2j * np.pi * (np.arange(n) + 0.5) / n)
        return complex(np.mean([self._raw(complex(z)) for z in pts]))

    __call__ = eval

    def _singular_gap(self, s0: QI) -> float:
        """Rough distance to the next singularity not located at s0."""
        gap = 1.0
        for a, _ in self.atoms:
            if a.kind == "NA":
                gap = min(gap, 2 * math.pi / math.log(a.p))
        return gap

    def numeric_order(self, s0, radii=(1e-3, 1e-4), n: int = 32) -> float:
        """Order at s0 from the growth of the mean of log|F| on small circles."""
        c = complex(s0)
        vals = []
        for r in radii:
            pts = c + r * np.exp(2j * np.pi * (np.arange(n) + 0.5) / n)
            vals.append(np.mean([self.log_eval(complex(z)).real for z in pts]))
        return float((vals[0] - vals[1]) / (math.log(radii[0]) - math.log(radii[1])))

    # -- output
    def to_json(self) -> dict:
        return {
            "constant": [self.constant.real, self.constant.imag],
            "expBase": fraction_str(self.base),
            "atoms": [{**a.to_json(), "mult": m} for a, m in self.atoms],
        }

    @classmethod
    def from_json(cls, d: dict) -> MeroFactor:
        c = d.get("constant", [1.0, 0.0])
        atoms = tuple((Atom.from_json(x), x.get("mult", 1)) for x in d.get("atoms", []))
        return cls(complex(c[0], c[1]), Fraction(d.get("expBase", "1")), atoms)

    def pretty(self) -> str:
        parts = []
        c = self.constant
        if abs(c - 1) > 1e-15 or (not self.atoms and self.base == 1):
            parts.append(_cstr(c))
        if self.base != 1:
            parts.append(f"({fraction_str(self.base)})^s")
        for a, m in self.atoms:
            parts.append(a.label() + (f"^{m}" if m != 1 else ""))
        return " * ".join(parts)

    def __str__(self):
        return self.pretty()


def _cstr(c: complex) -> str:
    for v, name in ((1, "1"), (-1, "-1"), (1j, "i"), (-1j, "-i")):
        if abs(c - v) < 1e-13:
            return name
    if abs(c.imag) < 1e-15:
        return f"{c.real:.12g}"
    return f"({c.real:.12g}{c.imag:+.12g}i)"


def _canon(atoms: Iterable) -> tuple:
    acc: dict[Atom, int] = {}
    for a, m in atoms:
        acc[a] = acc.get(a, 0) + m
    return tuple(sorted((a, m) for a, m in acc.items() if m != 0))


def _snap(s: complex, tol: float = 1e-9) -> QI | None:
    re = Fraction(s.real).limit_denominator(10**6)
    im = Fraction(s.imag).limit_denominator(10**6)
    if abs(float(re) - s.real) < tol and abs(float(im) - s.imag) < tol:
        return QI(re, im)
    return None


def mero_combine(a: MeroFactor, b: MeroFactor, op: str = "mul") -> MeroFactor:
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def mero_order_at(a: MeroFactor, s0) -> int:
    return a.order_at(s0)


def mero_eval(a: MeroFactor, s) -> complex:
    return a.eval(s)


# ---------------------------------------------------------------- Tate factors

def tate_L(w: MultChar) -> MeroFactor:
    F = w.field
    if F.kind == "R":
        return MeroFactor.of_atoms(GR(w.t + w.delta))
    if F.kind == "C":
        return MeroFactor.of_atoms(GC(w.t + Fraction(abs(w.N), 2)))
    if w.ramified:
        return MeroFactor.one()
    return MeroFactor.of_atoms(NA(F.prime, w.t))


def gauss_sum_na(w: MultChar, psi: AddChar) -> complex:
    """sum over u in (Z/p^c)^x of chi0(u) psi(u / p^c)."""
    F = w.field
    if F.kind != "P":
        raise ValueError("Gauss sums are defined over Q_p only")
    if not w.ramified:
        raise ValueError("unramified character has no Gauss sum")
    if psi.field != F:
        raise ValueError("field mismatch")
    p, c = F.prime, w.conductor
    q = p**c
    total = 0j
    for u in range(1, q):
        if u % p:
            total += w.finite_value(u) * psi(Fraction(u, q))
    return total


def _eps_standard(w: MultChar) -> MeroFactor:
    F = w.field
    if F.kind == "R":
        return MeroFactor(1j**w.delta)
    if F.kind == "C":
        return MeroFactor(1j ** abs(w.N))
    if not w.ramified:
        return MeroFactor()
    p, c = F.prime, w.conductor
    g = gauss_sum_na(char_inv(w), AddChar(F))
    const = g * cmath.exp(-c * complex(w.t) * math.log(p))
    return MeroFactor(const, Fraction(1, p**c))


def tate_eps(w: MultChar, psi: AddChar) -> MeroFactor:
    """epsilon(s, w, psi_a) = w(a) |a|^{s-1/2} epsilon(s, w, psi_std)."""
    F = w.field
    if psi.field != F:
        raise ValueError("field mismatch")
    eps = _eps_standard(w)
    a = psi.a
    if a == QI(1):
        return eps
    if F.kind == "R":
        x = a.re
        absa = abs(x)
        wa = char_eval(w, x)
    elif F.kind == "C":
        absa = a.norm()
        wa = char_eval(w, complex(a))
    else:
        absa = padic_abs(a.re, F.prime)
        wa = char_eval(w, a.re)
    return eps * MeroFactor(wa / math.sqrt(absa), absa)


def tate_gamma(w: MultChar, psi: AddChar) -> MeroFactor:
    return tate_eps(w, psi) * tate_L(char_inv(w)).reflect() / tate_L(w)


__all__ = [
    "Atom", "MeroFactor", "GR", "GC", "NA", "tate_L", "tate_eps", "tate_gamma",
    "gauss_sum_na", "mero_combine", "mero_order_at", "mero_eval",
]
