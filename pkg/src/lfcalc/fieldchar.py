"""Local fields, additive characters and multiplicative characters.

Exponents are stored as exact Gaussian rationals (:class:`QI`) so that pole
and zero bookkeeping downstream never depends on floating point.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

Number = Union[int, float, Fraction, complex, "QI"]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        # decimal literal, so 0.1 becomes 1/10 rather than a binary expansion
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


@dataclass(frozen=True, order=True)
class QI:
    """Exact Gaussian rational ``re + i*im``."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))

    @classmethod
    def of(cls, x) -> QI:
        if isinstance(x, QI):
            return x
        if isinstance(x, complex):
            return cls(_frac(x.real), _frac(x.imag))
        if isinstance(x, (tuple, list)):
            return cls(_frac(x[0]), _frac(x[1]))
        return cls(_frac(x), Fraction(0))

    def __add__(self, o):
        o = QI.of(o)
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = QI.of(o)
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return QI.of(o) - self

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __mul__(self, o):
        o = QI.of(o)
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = QI.of(o)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * QI(o.re / d, -o.im / d)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conj(self) -> QI:
        return QI(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def is_integer(self) -> bool:
        return self.im == 0 and self.re.denominator == 1

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = QI()
ONE = QI(1)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class LocalField:
    kind: str  # "R", "C" or "P"
    prime: int | None = None

    def __post_init__(self):
        if self.kind not in ("R", "C", "P"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "P":
            if self.prime is None or not is_prime(self.prime):
                raise ValueError(f"p-adic field needs a prime, got {self.prime!r}")
        elif self.prime is not None:
            raise ValueError("archimedean fields carry no prime")

    @property
    def archimedean(self) -> bool:
        return self.kind != "P"

    @property
    def degree(self) -> int:
        """Real dimension (1 for R and Q_p by convention of the measure code)."""
        return 2 if self.kind == "C" else 1

    def __str__(self):
        return {"R": "R", "C": "C"}.get(self.kind, f"Q_{self.prime}")

    def to_json(self) -> dict:
        d = {"field": {"R": "R", "C": "C", "P": "Qp"}[self.kind]}
        if self.prime is not None:
            d["prime"] = self.prime
        return d

    @classmethod
    def from_json(cls, d: dict) -> LocalField:
        kind = {"R": "R", "C": "C", "Qp": "P", "P": "P"}[d["field"]]
        return cls(kind, d.get("prime"))

    @classmethod
    def parse(cls, text: str) -> LocalField:
        text = text.strip()
        if text in ("R", "real"):
            return REAL
        if text in ("C", "complex"):
            return COMPLEX
        for prefix in ("Q_", "Qp", "Q", "p="):
            if text.startswith(prefix) and text[len(prefix):].isdigit():
                return padic(int(text[len(prefix):]))
        if text.isdigit():
            return padic(int(text))
        raise ValueError(f"cannot parse field {text!r}")


REAL = LocalField("R")
COMPLEX = LocalField("C")


@lru_cache(maxsize=None)
def padic(p: int) -> LocalField:
    return LocalField("P", p)


# ---------------------------------------------------------------- p-adic helpers

def valuation(x, p: int) -> int:
    x = _frac(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def unit_part(x, p: int) -> Fraction:
    x = _frac(x)
    return x / Fraction(p) ** valuation(x, p)


def padic_abs(x, p: int) -> Fraction:
    x = _frac(x)
    if x == 0:
        return Fraction(0)
    return Fraction(p) ** (-valuation(x, p))


def frac_part(x, p: int) -> Fraction:
    """The p-adic fractional part {x}_p in [0,1) with denominator a power of p."""
    x = _frac(x)
    d = x.denominator
    k = 0
    while d % p == 0:
        d //= p
        k += 1
    if k == 0:
        return Fraction(0)
    pk = p**k
    return Fraction((x.numerator * pow(d, -1, pk)) % pk, pk)


def residue(x, modulus: int) -> int:
    """Image of a p-integral rational in Z/modulus."""
    x = _frac(x)
    return (x.numerator * pow(x.denominator, -1, modulus)) % modulus


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Smallest generator of (Z/p^2)^x; it then generates (Z/p^c)^x for every c."""
    if p == 2:
        raise ValueError("(Z/2^c)^x is not cyclic")
    phi = p - 1
    fac = [q for q in range(2, phi + 1) if phi % q == 0 and is_prime(q)]
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in fac) and pow(g, p - 1, p * p) != 1:
            return g
    raise AssertionError("no primitive root")  # pragma: no cover


def unit_generators(p: int, c: int) -> tuple[int, ...]:
    if c <= 0:
        return ()
    if p != 2:
        return (primitive_root(p),)
    if c == 1:
        return ()
    if c == 2:
        return (p**c - 1,)
    return (p**c - 1, 5)


def generator_orders(p: int, c: int) -> tuple[int, ...]:
    if c <= 0:
        return ()
    if p != 2:
        return ((p - 1) * p ** (c - 1),)
    if c == 1:
        return ()
    if c == 2:
        return (2,)
    return (2, 2 ** (c - 2))


@lru_cache(maxsize=256)
def _dlog_table(p: int, c: int) -> dict[int, tuple[int, ...]]:
    """Exponent vectors of all units mod p^c on the canonical generators."""
    q = p**c
    gens = unit_generators(p, c)
    orders = generator_orders(p, c)
    table: dict[int, tuple[int, ...]] = {}
    if not gens:
        table[1 % q] = ()
        return table
    if len(gens) == 1:
        x = 1
        for k in range(orders[0]):
            table[x] = (k,)
            x = x * gens[0] % q
        return table
    for e0 in range(orders[0]):
        x = pow(gens[0], e0, q)
        for e1 in range(orders[1]):
            table[x] = (e0, e1)
            x = x * gens[1] % q
    return table


def discrete_log(u, p: int, c: int) -> tuple[int, ...]:
    q = p**c
    r = residue(u, q)
    if r % p == 0:
        raise ValueError(f"{u} is not a p-adic unit")
    return _dlog_table(p, c)[r]


# ---------------------------------------------------------------- characters


@dataclass(frozen=True)
class AddChar:
    """x -> psi_std(scale * x), optionally conjugated."""

    field: LocalField
    scale: QI = ONE
    conjugated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "scale", QI.of(self.scale))
        if self.scale == ZERO:
            raise ValueError("additive character must be nontrivial")
        if self.field.kind != "C" and not self.scale.is_real:
            raise ValueError("scale must be rational outside C")

    @property
    def a(self) -> QI:
        """Effective scale: psi(x) = psi_std(a x)."""
        return -self.scale if self.conjugated else self.scale

    def conj(self) -> AddChar:
        return AddChar(self.field, self.scale, not self.conjugated)

    def __call__(self, x) -> complex:
        k = self.field.kind
        if k == "R":
            return cmath.exp(2j * math.pi * float(self.a.re) * float(x))
        if k == "C":
            z = complex(x) * complex(self.a)
            return cmath.exp(4j * math.pi * z.real)
        y = self.a.re * _frac(x)
        return cmath.exp(-2j * math.pi * float(frac_part(y, self.field.prime)))

    def conductor_exponent(self) -> int:
        """Largest k with psi trivial on p^{-k} Z_p (p-adic only)."""
        if self.field.kind != "P":
            raise ValueError("conductor only defined over Q_p")
        return valuation(self.a.re, self.field.prime)

    def to_json(self) -> dict:
        return {**self.field.to_json(), "scale": qi_json(self.scale), "conjugated": self.conjugated}


def standard_psi(F: LocalField) -> AddChar:
    return AddChar(F)


@dataclass(frozen=True)
class MultChar:
    """A quasi-character of a local field.

    R: sgn^delta |x|^t.  C: (z/|z|)^N |z|_C^t with |z|_C = z zbar.
    Q_p: chi0 (x) |x|^t where chi0 has conductor p^c, chi0(p) = 1 and
    ``angles[k]`` gives chi0(generator_k) = exp(2 pi i angle).
    """

    field: LocalField
    t: QI = ZERO
    delta: int = 0
    N: int = 0
    conductor: int = 0
    angles: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "t", QI.of(self.t))
        k = self.field.kind
        if k == "R":
            if self.N or self.conductor or self.angles:
                raise ValueError("real characters carry only delta and t")
            object.__setattr__(self, "delta", self.delta % 2)
        elif k == "C":
            if self.delta or self.conductor or self.angles:
                raise ValueError("complex characters carry only N and t")
        else:
            if self.delta or self.N:
                raise ValueError("p-adic characters carry conductor/angles and t")
            self._normalize_padic()

    def _normalize_padic(self):
        p, c = self.field.prime, self.conductor
        if c < 0:
            raise ValueError("negative conductor")
        orders = generator_orders(p, c)
        angles = tuple(_frac(a) % 1 for a in self.angles)
        if len(angles) != len(orders):
            raise ValueError(
                f"conductor {c} over Q_{p} needs {len(orders)} generator values, got {len(angles)}")
        for a, o in zip(angles, orders):
            if (a * o).denominator != 1:
                raise ValueError(f"angle {a} inconsistent with generator order {o}")
        # drop to the primitive conductor
        while c > 0 and _trivial_on_level(p, c, angles):
            c -= 1
            angles = _restrict_angles(p, c, angles)
        object.__setattr__(self, "conductor", c)
        object.__setattr__(self, "angles", angles)

    # -- basic predicates
    @property
    def ramified(self) -> bool:
        return self.conductor > 0

    @property
    def unitary_part_trivial(self) -> bool:
        return self.delta == 0 and self.N == 0 and self.conductor == 0

    def is_trivial(self) -> bool:
        return self.unitary_part_trivial and self.t == ZERO

    def finite_value(self, u) -> complex:
        """chi0 on a p-adic unit."""
        if not self.conductor:
            return 1.0 + 0j
        e = discrete_log(u, self.field.prime, self.conductor)
        ang = sum((a * k for a, k in zip(self.angles, e)), Fraction(0)) % 1
        return _root_of_unity(ang)

    def finite_angle(self, u) -> Fraction:
        if not self.conductor:
            return Fraction(0)
        e = discrete_log(u, self.field.prime, self.conductor)
        return sum((a * k for a, k in zip(self.angles, e)), Fraction(0)) % 1

    def __call__(self, x) -> complex:
        return char_eval(self, x)

    def __mul__(self, o: MultChar) -> MultChar:
        return char_mul(self, o)

    def __truediv__(self, o: MultChar) -> MultChar:
        return char_mul(self, char_inv(o))

    def __invert__(self) -> MultChar:
        return char_inv(self)

    def twist(self, u) -> MultChar:
        """Multiply by |.|^u."""
        return MultChar(self.field, self.t + QI.of(u), self.delta, self.N, self.conductor, self.angles)

    def sign_value(self) -> complex:
        """omega(-1)."""
        return char_eval(self, -1)

    def __str__(self):
        k = self.field.kind
        parts = []
        if k == "R" and self.delta:
            parts.append("sgn")
        if k == "C" and self.N:
            parts.append(f"(z/|z|)^{self.N}")
        if k == "P" and self.conductor:
            parts.append(f"chi[c={self.conductor};{','.join(map(str, self.angles))}]")
        if self.t != ZERO:
            parts.append(f"|.|^{self.t}")
        return "*".join(parts) or "1"

    def to_json(self) -> dict:
        d = self.field.to_json()
        k = self.field.kind
        if k == "R":
            d["delta"] = self.delta
        elif k == "C":
            d["N"] = self.N
        d["t"] = [self.t.re.numerator, self.t.re.denominator, self.t.im.numerator, self.t.im.denominator]
        if k == "P" and self.conductor:
            d["conductor"] = self.conductor
            d["table"] = [fraction_str(a) for a in self.angles]
        return d

    @classmethod
    def from_json(cls, d: dict) -> MultChar:
        F = LocalField.from_json(d)
        t = d.get("t", [0, 1, 0, 1])
        if isinstance(t, (list, tuple)):
            t = QI(Fraction(t[0], t[1]), Fraction(t[2], t[3]) if len(t) > 2 else 0)
        else:
            t = QI.of(t)
        return cls(F, t, d.get("delta", 0), d.get("N", 0), d.get("conductor", 0),
                   tuple(Fraction(a) for a in d.get("table", ())))


def _root_of_unity(a: Fraction) -> complex:
    a = a % 1
    for q, v in ((Fraction(0), 1), (Fraction(1, 2), -1), (Fraction(1, 4), 1j), (Fraction(3, 4), -1j)):
        if a == q:
            return complex(v)
    return cmath.exp(2j * math.pi * float(a))


def _trivial_on_level(p: int, c: int, angles: tuple) -> bool:
    """Is chi0 trivial on 1 + p^{c-1} Z_p (all of Z_p^x when c = 1)?"""
    q = p**c
    step = p ** (c - 1)
    table = _dlog_table(p, c)
    for k in range(p):
        u = (1 + k * step) % q if c > 1 else k
        if u % p == 0:
            continue
        e = table[u]
        if sum((a * x for a, x in zip(angles, e)), Fraction(0)) % 1 != 0:
            return False
    return True


def _restrict_angles(p: int, c: int, angles: tuple) -> tuple:
    """Angles at level c of a character known to factor through (Z/p^c)^x."""
    if c == 0:
        return ()
    out = []
    big = _dlog_table(p, c + 1)
    for g in unit_generators(p, c):
        e = big[g % (p ** (c + 1))]
        out.append(sum((a * x for a, x in zip(angles, e)), Fraction(0)) % 1)
    return tuple(out)


# -- constructors

def trivial(F: LocalField) -> MultChar:
    return MultChar(F)


def abs_char(F: LocalField, t=1) -> MultChar:
    return MultChar(F, QI.of(t))


def sgn(t=0) -> MultChar:
    return MultChar(REAL, QI.of(t), delta=1)


def real_char(delta: int = 0, t=0) -> MultChar:
    return MultChar(REAL, QI.of(t), delta=delta)


def complex_char(N: int = 0, t=0) -> MultChar:
    return MultChar(COMPLEX, QI.of(t), N=N)


def padic_char(p: int, t=0, conductor: int = 0, angles=()) -> MultChar:
    return MultChar(padic(p), QI.of(t), conductor=conductor, angles=tuple(angles))


def legendre(p: int, t=0) -> MultChar:
    """Quadratic character of conductor p (p odd)."""
    if p == 2:
        raise ValueError("use conductor 2 characters of Q_2 explicitly")
    return padic_char(p, t, 1, (Fraction(1, 2),))


# -- operations

def _check_same(a: MultChar, b: MultChar):
    if a.field != b.field:
        raise ValueError(f"field mismatch: {a.field} vs {b.field}")


def char_mul(a: MultChar, b: MultChar) -> MultChar:
    _check_same(a, b)
    F = a.field
    if F.kind == "R":
        return MultChar(F, a.t + b.t, delta=a.delta + b.delta)
    if F.kind == "C":
        return MultChar(F, a.t + b.t, N=a.N + b.N)
    c = max(a.conductor, b.conductor)
    return MultChar(F, a.t + b.t, conductor=c,
                    angles=tuple(x + y for x, y in zip(_lift_angles(a, c), _lift_angles(b, c))))


def _lift_angles(a: MultChar, c: int) -> tuple:
    """Angles of chi0 on the level-c generators."""
    p = a.field.prime
    return tuple(a.finite_angle(g) for g in unit_generators(p, c))


def char_inv(a: MultChar) -> MultChar:
    return MultChar(a.field, -a.t, a.delta, -a.N, a.conductor, tuple(-x for x in a.angles))


def char_pow(a: MultChar, k: int) -> MultChar:
    out = trivial(a.field)
    base = a if k >= 0 else char_inv(a)
    for _ in range(abs(k)):
        out = char_mul(out, base)
    return out


def char_re(a: MultChar) -> Fraction:
    return a.t.re


def char_eval(a: MultChar, x) -> complex:
    k = a.field.kind
    if k == "R":
        x = float(x)
        if x == 0:
            raise ValueError("character evaluated at 0")
        s = -1.0 if (a.delta and x < 0) else 1.0
        return s * cmath.exp(complex(a.t) * math.log(abs(x)))
    if k == "C":
        z = complex(x)
        r = abs(z)
        if r == 0:
            raise ValueError("character evaluated at 0")
        u = z / r
        return (u**a.N if a.N >= 0 else u.conjugate() ** (-a.N)) * cmath.exp(complex(a.t) * 2 * math.log(r))
    x = _frac(x)
    if x == 0:
        raise ValueError("character evaluated at 0")
    p = a.field.prime
    v = valuation(x, p)
    return a.finite_value(unit_part(x, p)) * cmath.exp(-complex(a.t) * v * math.log(p))


def field_abs(F: LocalField, x) -> float:
    """Normalized absolute value."""
    if F.kind == "R":
        return abs(float(x))
    if F.kind == "C":
        return abs(complex(x)) ** 2
    return float(padic_abs(x, F.prime))


# -- formatting

def fraction_str(x) -> str:
    x = _frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def qi_json(z: QI) -> str:
    z = QI.of(z)
    if z.im == 0:
        return fraction_str(z.re)
    return f"{fraction_str(z.re)}{'+' if z.im >= 0 else '-'}{fraction_str(abs(z.im))}i"


def parse_qi(text: str) -> QI:
    """Parse '1/2', '-0.1', '1/3+1/2i', '2i'."""
    s = text.strip().replace(" ", "")
    if not s.endswith("i"):
        return QI(_frac(s))
    body = s[:-1]
    cut = max(body.rfind("+", 1), body.rfind("-", 1))
    while cut > 0 and body[cut - 1] in "eE":
        cut = max(body.rfind("+", 1, cut), body.rfind("-", 1, cut))
    if cut <= 0:
        im = body if body not in ("", "+", "-") else body + "1"
        return QI(0, _frac(im))
    re, im = body[:cut], body[cut:]
    if im in ("+", "-"):
        im += "1"
    return QI(_frac(re), _frac(im))


def measure_scale(psi: AddChar) -> float:
    """Factor c with self-dual measure for psi = c * (self-dual measure for psi_std)."""
    a = psi.a
    F = psi.field
    if F.kind == "R":
        return math.sqrt(abs(float(a.re)))
    if F.kind == "C":
        return math.sqrt(float(a.norm()))  # |a|_C^{1/2}
    return math.sqrt(float(padic_abs(a.re, F.prime)))


__all__ = [
    "QI", "LocalField", "AddChar", "MultChar", "REAL", "COMPLEX", "padic",
    "char_mul", "char_inv", "char_re", "char_eval", "char_pow", "trivial", "abs_char",
    "sgn", "real_char", "complex_char", "padic_char", "legendre", "standard_psi",
    "valuation", "padic_abs", "frac_part", "field_abs", "parse_qi", "qi_json", "fraction_str",
]
