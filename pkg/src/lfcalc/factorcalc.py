"""Exterior-square and Friedberg-Jacquet factor calculus on principal-series tuples."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .fieldchar import AddChar, LocalField, MultChar, QI, char_inv, char_re
from .meromorph import MeroFactor, tate_L, tate_eps, tate_gamma


@dataclass(frozen=True)
class InducedTuple:
    """An ordered tuple of characters (xi_1, ..., xi_m) over one local field."""

    chars: tuple

    def __post_init__(self):
        chars = tuple(self.chars)
        if not chars:
            raise ValueError("need at least one character")
        F = chars[0].field
        if any(c.field != F for c in chars):
            raise ValueError("all characters must share one local field")
        object.__setattr__(self, "chars", chars)

    @property
    def m(self) -> int:
        return len(self.chars)

    @property
    def field(self) -> LocalField:
        return self.chars[0].field

    def __getitem__(self, i: int) -> MultChar:
        """1-based access, matching the usual indexing of xi_i."""
        if not 1 <= i <= self.m:
            raise IndexError(i)
        return self.chars[i - 1]

    def real_parts(self) -> tuple:
        return tuple(char_re(c) for c in self.chars)

    def dual(self) -> InducedTuple:
        """(xi_m^{-1}, ..., xi_1^{-1})."""
        return InducedTuple(tuple(char_inv(c) for c in reversed(self.chars)))

    def central_sign(self) -> complex:
        """omega(-1) for omega the product of all xi_i."""
        v = 1
        for c in self.chars:
            v *= c.sign_value()
        return v

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "chars": [c.to_json() for c in self.chars]}

    @classmethod
    def of(cls, chars: Iterable[MultChar]) -> InducedTuple:
        return cls(tuple(chars))


@dataclass(frozen=True)
class OmegaDomain:
    lower: Fraction
    upper: Fraction
    nonempty: bool

    def contains(self, s) -> bool:
        x = complex(s).real
        return self.nonempty and float(self.lower) < x < float(self.upper)

    def to_json(self) -> dict:
        from .fieldchar import fraction_str
        return {"lower": fraction_str(self.lower), "upper": fraction_str(self.upper),
                "nonempty": self.nonempty}


@dataclass(frozen=True)
class PredicateResult:
    """Boolean verdict plus a note on what the check actually establishes."""

    value: bool
    note: str = ""

    def __bool__(self):
        return self.value


# ---------------------------------------------------------------- index sets


def all_pairs(m: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)]


def low_pairs(m: int) -> list[tuple[int, int]]:
    """1 <= i < j <= m - i."""
    return [(i, j) for i, j in all_pairs(m) if j <= m - i]


def cross_pairs(m: int) -> list[tuple[int, int]]:
    """i <= m - i < j."""
    return [(i, j) for i, j in all_pairs(m) if i <= m - i < j]


def high_pairs(m: int) -> list[tuple[int, int]]:
    """m - i < i < j."""
    return [(i, j) for i, j in all_pairs(m) if m - i < i]


def _pair_char(xi: InducedTuple, eta: MultChar, i: int, j: int) -> MultChar:
    return xi[i] * xi[j] / eta


def _gamma_product(xi, eta, psi, pairs) -> MeroFactor:
    out = MeroFactor.one()
    for i, j in pairs:
        out = out * tate_gamma(_pair_char(xi, eta, i, j), psi)
    return out


# ---------------------------------------------------------------- predicates


def is_whittaker_type(xi: InducedTuple) -> PredicateResult:
    re = xi.real_parts()
    ok = all(re[k] >= re[k + 1] for k in range(len(re) - 1))
    return PredicateResult(ok, "sufficient condition: real parts weakly decreasing; "
                               "a False result makes no claim about the generic quotient")


def is_eta_symmetric(xi: InducedTuple, eta: MultChar) -> bool:
    m = xi.m
    if m % 2:
        return False
    return all((xi[i] * xi[m + 1 - i]) == eta for i in range(1, m // 2 + 1))


def in_omega_domain(xi: InducedTuple, eta: MultChar) -> OmegaDomain:
    re = xi.real_parts()
    lo = char_re(eta) - 2 * re[0]
    hi = char_re(eta) + 1 - 2 * re[-1]
    increasing = all(re[k] < re[k + 1] for k in range(len(re) - 1))
    return OmegaDomain(lo, hi, increasing and lo < hi)


# ---------------------------------------------------------------- L, modified L, Gamma


def extsq_L(xi: InducedTuple, eta: MultChar) -> MeroFactor:
    out = MeroFactor.one()
    for i, j in all_pairs(xi.m):
        out = out * tate_L(_pair_char(xi, eta, i, j))
    return out


def extsq_eps(xi: InducedTuple, eta: MultChar, psi: AddChar) -> MeroFactor:
    out = MeroFactor.one()
    for i, j in all_pairs(xi.m):
        out = out * tate_eps(_pair_char(xi, eta, i, j), psi)
    return out


def extsq_modified_L(xi: InducedTuple, eta: MultChar, psi: AddChar) -> MeroFactor:
    """Product of gamma over 1 <= i < j <= m-i, times the full exterior-square L."""
    return _gamma_product(xi, eta, psi, low_pairs(xi.m)) * extsq_L(xi, eta)


def extsq_modified_L_alt(xi: InducedTuple, eta: MultChar) -> MeroFactor:
    """The companion expression built only from L-factors:
    prod_{i<j<=m-i} L(1-s, (xi_i xi_j)^{-1} eta) * prod_{i<=m-i<j} L(s, xi_i xi_j eta^{-1}).
    """
    out = MeroFactor.one()
    for i, j in low_pairs(xi.m):
        out = out * tate_L(char_inv(_pair_char(xi, eta, i, j))).reflect()
    for i, j in cross_pairs(xi.m):
        out = out * tate_L(_pair_char(xi, eta, i, j))
    return out


@dataclass
class Discrepancy:
    ratio: MeroFactor
    identical: bool
    sample_s: complex
    sample_ratio: complex

    def to_json(self) -> dict:
        return {"ratio": self.ratio.to_json(), "identical": self.identical,
                "s": [self.sample_s.real, self.sample_s.imag],
                "value": [self.sample_ratio.real, self.sample_ratio.imag]}


def modified_L_discrepancy(xi: InducedTuple, eta: MultChar, psi: AddChar,
                           s: complex = 0.3 + 0.7j) -> Discrepancy:
    """Compare the gamma-based and the L-only expressions of the modified L-factor."""
    ratio = extsq_modified_L(xi, eta, psi) / extsq_modified_L_alt(xi, eta)
    identical = ratio.is_exponential and abs(ratio.constant - 1) < 1e-12 and ratio.base == 1
    return Discrepancy(ratio, identical, complex(s), ratio.eval(s))


def extsq_gamma_big(xi: InducedTuple, eta: MultChar, psi: AddChar) -> tuple[MeroFactor, int]:
    """Product of gamma over i <= m-i < j and its order at s = 0."""
    if xi.m % 2:
        raise ValueError("the partial gamma product needs an even-length tuple")
    G = _gamma_product(xi, eta, psi, cross_pairs(xi.m))
    return G, G.order_at(0)


def d_xi(xi: InducedTuple, eta: MultChar, psi: AddChar | None = None) -> int:
    psi = psi or AddChar(xi.field)
    return extsq_gamma_big(xi, eta, psi)[1]


def js_sign(xi: InducedTuple, eta: MultChar) -> complex:
    """eta(-1)^{m n} with n = floor(m/2)."""
    m = xi.m
    return eta.sign_value() ** (m * (m // 2))


def js_gamma_full(xi: InducedTuple, eta: MultChar, psi: AddChar) -> MeroFactor:
    return _gamma_product(xi, eta, psi, all_pairs(xi.m)) * MeroFactor(js_sign(xi, eta))


def js_gamma_full_conj(xi: InducedTuple, eta: MultChar, psi: AddChar) -> MeroFactor:
    """Proportionality factor for the psi-bar Fourier transform variant:
    omega(-1)^{m-1} eta(-1)^n prod_{i<j} gamma(s, xi_i xi_j eta^{-1}, psi).

    It should coincide with the plain gamma product taken with psi-bar; see ``gamma_product``.
    """
    m, n = xi.m, xi.m // 2
    c = xi.central_sign() ** (m - 1) * eta.sign_value() ** n
    return _gamma_product(xi, eta, psi, all_pairs(m)) * MeroFactor(c)


def gamma_product(xi: InducedTuple, eta: MultChar, psi: AddChar, pairs=None) -> MeroFactor:
    return _gamma_product(xi, eta, psi, all_pairs(xi.m) if pairs is None else pairs)


def js_gamma_assembled(xi: InducedTuple, eta: MultChar, psi: AddChar) -> MeroFactor:
    """eps * L(1-s, dual) / L(s): the second assembly route for js_gamma_full."""
    dual_L = MeroFactor.one()
    for i, j in all_pairs(xi.m):
        dual_L = dual_L * tate_L(char_inv(_pair_char(xi, eta, i, j)))
    return (extsq_eps(xi, eta, psi) * dual_L.reflect() / extsq_L(xi, eta)
            * MeroFactor(js_sign(xi, eta)))


# ---------------------------------------------------------------- the induction-step gamma identity


def induction_gamma_identity(xi: InducedTuple, eta: MultChar, psi: AddChar, s: complex,
                             tol: float = 1e-10):
    """Numerically compare the two sides of the product identity used to pass from 2n to 2n+1."""
    from .zetaverify import VerifyReport

    m = xi.m
    if m % 2:
        raise ValueError("the identity is stated for even-length tuples")
    lhs_f = _gamma_product(xi, eta, psi, all_pairs(m))
    for i, j in low_pairs(m):
        w = char_inv(xi[m + 1 - i] * xi[m + 1 - j]) * eta
        lhs_f = lhs_f * tate_gamma(w, psi.conj()).reflect()
    rhs_pairs = [(i, j) for i, j in all_pairs(m) if j <= m + 1 - i]
    rhs_f = _gamma_product(xi, eta, psi, rhs_pairs)
    # evaluate each side term by term so cancellation is not symbolic
    lhs = _eval_product_termwise(xi, eta, psi, s, all_pairs(m), low_pairs(m))
    rhs = rhs_f.eval(s)
    return VerifyReport.build("gamma-identity", {"m": m, "s": [complex(s).real, complex(s).imag]},
                              lhs, rhs, tol, {"symbolic_match": lhs_f.atoms == rhs_f.atoms})


def _eval_product_termwise(xi, eta, psi, s, pairs, inv_pairs) -> complex:
    m = xi.m
    val = 1 + 0j
    for i, j in pairs:
        val *= tate_gamma(_pair_char(xi, eta, i, j), psi).eval(s)
    for i, j in inv_pairs:
        w = char_inv(xi[m + 1 - i] * xi[m + 1 - j]) * eta
        val *= tate_gamma(w, psi.conj()).eval(1 - s)
    return val


# ---------------------------------------------------------------- Friedberg-Jacquet factors


def fj_factors(xi: InducedTuple, chi: MultChar, psi: AddChar) -> tuple[MeroFactor, MeroFactor]:
    """(prod_{i<=n} gamma(s, xi_i chi, psi), prod_{i<=2n} L(s, xi_i chi))."""
    if xi.m % 2:
        raise ValueError("needs an even-length tuple")
    n = xi.m // 2
    mod = MeroFactor.one()
    for i in range(1, n + 1):
        mod = mod * tate_gamma(xi[i] * chi, psi)
    std = MeroFactor.one()
    for i in range(1, xi.m + 1):
        std = std * tate_L(xi[i] * chi)
    return mod, std


def tuple_from_exponents(F: LocalField, exps: Sequence, deltas: Sequence[int] | None = None) -> InducedTuple:
    """Unramified tuple |.|^{t_i} (optionally sgn^{delta_i} over R)."""
    deltas = deltas or [0] * len(exps)
    chars = []
    for t, d in zip(exps, deltas):
        if F.kind == "R":
            chars.append(MultChar(F, QI.of(t), delta=d))
        elif F.kind == "C":
            chars.append(MultChar(F, QI.of(t), N=d))
        else:
            chars.append(MultChar(F, QI.of(t)))
    return InducedTuple(tuple(chars))


__all__ = [
    "InducedTuple", "OmegaDomain", "PredicateResult", "all_pairs", "low_pairs", "cross_pairs",
    "high_pairs", "is_whittaker_type", "is_eta_symmetric", "in_omega_domain", "extsq_L",
    "extsq_eps", "extsq_modified_L", "extsq_modified_L_alt", "modified_L_discrepancy",
    "extsq_gamma_big", "d_xi", "js_sign", "js_gamma_full", "js_gamma_full_conj", "gamma_product",
    "js_gamma_assembled", "induction_gamma_identity", "fj_factors", "tuple_from_exponents",
]
