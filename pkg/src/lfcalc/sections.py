"""Explicit group elements and vectors in real principal series induced from the lower Borel.

All sections evaluate on stacks of matrices (N, m, m) and accept complex entries,
so that integrals may be deformed into the complex domain where the integrand is
analytic.  Characters of complex arguments are continued from the real half-line
containing the real part of the argument.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fieldchar import MultChar
from .factorcalc import InducedTuple


# ---------------------------------------------------------------- group elements


def antidiag(n: int) -> np.ndarray:
    return np.fliplr(np.eye(n, dtype=int))


def sigma_matrix(m: int) -> np.ndarray:
    """Permutation matrix with row i carrying its 1 in column sigma(i)."""
    n = m // 2
    perm = [2 * i - 1 for i in range(1, n + 1)] + [2 * i for i in range(1, n + 1)]
    if m % 2:
        perm.append(m)
    P = np.zeros((m, m), dtype=int)
    for i, j in enumerate(perm):
        P[i, j - 1] = 1
    return P


def tau_matrix(m: int) -> np.ndarray:
    n = m // 2
    T = np.zeros((m, m), dtype=int)
    T[:n, n:2 * n] = np.eye(n, dtype=int)
    T[n:2 * n, :n] = np.eye(n, dtype=int)
    if m % 2:
        T[m - 1, m - 1] = 1
    return T


def z_matrix(m: int) -> np.ndarray:
    n = m // 2
    Z = np.zeros((m, m), dtype=int)
    Z[:n, :n] = np.eye(n, dtype=int)
    Z[n:2 * n, n:2 * n] = antidiag(n)
    if m % 2:
        Z[n:2 * n, m - 1] = 1
        Z[m - 1, m - 1] = 1
    return Z


def gamma_matrix(n: int, prime: bool = False) -> np.ndarray:
    G = np.zeros((2 * n, 2 * n), dtype=int)
    G[:n, :n] = np.eye(n, dtype=int)
    G[:n, n:] = np.eye(n, dtype=int)
    G[n:, n:] = antidiag(n) if prime else np.eye(n, dtype=int)
    return G


@dataclass
class GroupElems:
    m: int
    sigma: np.ndarray
    tau: np.ndarray
    z: np.ndarray
    w: np.ndarray
    base_vector: tuple
    gamma: np.ndarray | None = None
    gamma_prime: np.ndarray | None = None

    def to_json(self) -> dict:
        d = {"m": self.m, "sigma": self.sigma.tolist(), "tau": self.tau.tolist(), "z": self.z.tolist(),
             "w": self.w.tolist(), "base_vector": list(self.base_vector)}
        if self.gamma is not None:
            d["gamma"] = self.gamma.tolist()
            d["gamma_prime"] = self.gamma_prime.tolist()
        return d


def group_elements(m: int) -> GroupElems:
    if m < 1:
        raise ValueError("m must be positive")
    n = m // 2
    base = (1,) * n if m % 2 == 0 else (0,) * n
    ge = GroupElems(m, sigma_matrix(m), tau_matrix(m), z_matrix(m), antidiag(m), base)
    if m % 2 == 0:
        ge.gamma = gamma_matrix(n)
        ge.gamma_prime = gamma_matrix(n, prime=True)
    return ge


# ---------------------------------------------------------------- characters on arrays


def char_array(w: MultChar, x) -> np.ndarray:
    """sgn(x)^delta |x|^t on real arrays, continued analytically for complex x."""
    x = np.asarray(x)
    if np.iscomplexobj(x):
        sign = np.where(x.real < 0, -1.0, 1.0)
    else:
        sign = np.where(x < 0, -1.0, 1.0)
    y = sign * x
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.exp(complex(w.t) * np.log(y.astype(complex)))
    if w.delta:
        val = val * sign
    return val


def abs_power(x, r: float) -> np.ndarray:
    """|x|^r continued like ``char_array``."""
    x = np.asarray(x)
    sign = np.where((x.real if np.iscomplexobj(x) else x) < 0, -1.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.exp(r * np.log((sign * x).astype(complex)))


def psi_array(psi, x) -> np.ndarray:
    """Real additive character on arrays (analytic in x)."""
    a = float(psi.a.re)
    return np.exp(2j * np.pi * a * np.asarray(x))


# ---------------------------------------------------------------- decompositions


def crout(M: np.ndarray):
    """M = L U with L lower triangular and U unit upper triangular (stacked, no pivoting)."""
    M = np.asarray(M)
    N, m, _ = M.shape
    dt = np.result_type(M.dtype, float)
    L = np.zeros((N, m, m), dtype=dt)
    U = np.zeros((N, m, m), dtype=dt)
    for k in range(m):
        U[:, k, k] = 1
    with np.errstate(divide="ignore", invalid="ignore"):
        for j in range(m):
            for i in range(j, m):
                L[:, i, j] = M[:, i, j] - np.einsum("nk,nk->n", L[:, i, :j], U[:, :j, j])
            for i in range(j + 1, m):
                U[:, j, i] = (M[:, j, i] - np.einsum("nk,nk->n", L[:, j, :j], U[:, :j, i])) / L[:, j, j]
    return L, U


def iwasawa_lower(G: np.ndarray):
    """G = B K with B lower triangular with positive diagonal and K orthogonal (real input)."""
    Q, R = np.linalg.qr(np.swapaxes(G, -1, -2))
    d = np.sign(np.diagonal(R, axis1=-2, axis2=-1))
    d = np.where(d == 0, 1.0, d)
    R = R * d[..., :, None]
    Q = Q * d[..., None, :]
    return np.swapaxes(R, -1, -2), np.swapaxes(Q, -1, -2)


def modulus_half(m: int) -> list[float]:
    """Exponents of delta^{1/2} of the lower Borel on the diagonal."""
    return [(2 * i - m - 1) / 2 for i in range(1, m + 1)]


def _borel_factor(xi: InducedTuple, diag: np.ndarray) -> np.ndarray:
    m = xi.m
    val = np.ones(diag.shape[0], dtype=complex)
    for i, r in enumerate(modulus_half(m)):
        val = val * char_array(xi.chars[i], diag[:, i]) * abs_power(diag[:, i], r)
    return val


# ---------------------------------------------------------------- sections


class Section:
    """A vector f in I(xi); ``eval`` takes matrices (N, m, m)."""

    xi: InducedTuple

    @property
    def m(self) -> int:
        return self.xi.m

    def eval(self, G) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, g) -> complex:
        return complex(self.eval(np.asarray(g)[None])[0])

    def central_character(self) -> MultChar:
        w = self.xi.chars[0]
        for c in self.xi.chars[1:]:
            w = w * c
        return w

    def dual(self) -> Section:
        return DualSection(self)

    def translate(self, k) -> Section:
        return TranslatedSection(self, np.asarray(k))

    # local behaviour along the unipotent line x -> f(u_x g); see the integrators
    unipotent_schwartz = False


def _as_stack(G) -> np.ndarray:
    G = np.asarray(G)
    return G[None] if G.ndim == 2 else G


@dataclass
class KSection(Section):
    """GL_2 section determined by its restriction to O(2).

    On rotations r_theta = [[cos, sin], [-sin, cos]] the value is sum_j c_j e^{i j theta};
    only j with the parity of delta_1 + delta_2 are allowed.
    """

    xi: InducedTuple
    coeffs: dict

    def __post_init__(self):
        if self.xi.m != 2 or self.xi.field.kind != "R":
            raise ValueError("K-sections are implemented for GL_2 over R")
        par = (self.xi.chars[0].delta + self.xi.chars[1].delta) % 2
        for j in self.coeffs:
            if (j - par) % 2:
                raise ValueError(f"harmonic {j} has the wrong parity for {self.xi}")

    @classmethod
    def spherical(cls, xi: InducedTuple) -> KSection:
        return cls(xi, {0: 1.0})

    def _harmonics(self, theta: np.ndarray) -> np.ndarray:
        val = np.zeros(theta.shape, dtype=complex)
        for j, c in self.coeffs.items():
            val += c * np.exp(1j * j * theta)
        return val

    def eval(self, G) -> np.ndarray:
        G = _as_stack(G)
        if np.iscomplexobj(G):
            if np.max(np.abs(G.imag)) > 0:
                raise ValueError("K-sections are evaluated on real matrices only")
            G = G.real
        a, b, c, d = G[:, 0, 0], G[:, 0, 1], G[:, 1, 0], G[:, 1, 1]
        # G = B K with K's first row along the first row of G
        r1 = np.hypot(a, b)
        det = a * d - b * c
        diag = np.stack([r1, np.abs(det) / r1], axis=-1)
        val = _borel_factor(self.xi, diag) * self._harmonics(np.arctan2(b, a))
        if self.xi.chars[1].delta:
            val = np.where(det < 0, -val, val)  # K = diag(1, -1) r_theta
        return val


@dataclass
class CellSection(Section):
    """Section supported on the open cell: f(b n) = xi delta^{1/2}(b) profile(n).

    ``profile`` maps upper coordinates (N, m(m-1)/2), ordered (1,2), (1,3), ..., to values;
    ``radius`` bounds the region where the profile is not negligible, and
    ``vanishes_at_origin`` records infinite-order vanishing on the small-cell boundary.
    """

    xi: InducedTuple
    profile: Callable
    radius: float = 5.0
    vanishes_at_origin: bool = False
    label: str = ""

    @property
    def unipotent_schwartz(self) -> bool:
        return True

    def eval(self, G) -> np.ndarray:
        G = _as_stack(G)
        m = self.m
        L, U = crout(G)
        diag = np.diagonal(L, axis1=1, axis2=2)
        coords = np.stack([U[:, i, j] for i in range(m) for j in range(i + 1, m)], axis=-1)
        with np.errstate(all="ignore"):
            val = _borel_factor(self.xi, diag) * self.profile(coords)
        bad = ~np.isfinite(val) | np.any(diag == 0, axis=1)
        return np.where(bad, 0, val)


@dataclass
class DualSection(Section):
    """h -> f(w ^t h^{-1}), a vector of I(xi~)."""

    base: Section

    def __post_init__(self):
        self.xi = self.base.xi.dual()
        self._w = antidiag(self.base.m).astype(float)

    def eval(self, G) -> np.ndarray:
        G = _as_stack(G)
        Ginv_t = np.swapaxes(np.linalg.inv(G), -1, -2)
        return self.base.eval(self._w @ Ginv_t)


@dataclass
class TranslatedSection(Section):
    """h -> f(h k): the right translate k.f."""

    base: Section
    k: np.ndarray

    def __post_init__(self):
        self.xi = self.base.xi

    def eval(self, G) -> np.ndarray:
        return self.base.eval(_as_stack(G) @ self.k)


# ---------------------------------------------------------------- profiles


@dataclass
class GaussianProfile:
    """prod_k exp(-pi ((u_k - c_k)/w_k)^2), analytic in u."""

    widths: tuple
    centers: tuple

    def __call__(self, U: np.ndarray) -> np.ndarray:
        val = 0
        for k, (w, c) in enumerate(zip(self.widths, self.centers)):
            val = val + ((U[:, k] - c) / w) ** 2
        return np.exp(-np.pi * val)

    @property
    def radius(self) -> float:
        return max(abs(c) + 3.5 * w for w, c in zip(self.widths, self.centers))


def bump_profile(U: np.ndarray) -> np.ndarray:
    """exp(-pi (u^2 + u^{-2})): flat at 0 and at infinity."""
    u = U[:, 0]
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        v = np.exp(-np.pi * (u * u + 1.0 / (u * u)))
    return np.where(u == 0, 0, v)


def gaussian_cell(xi: InducedTuple, widths=None, centers=None) -> CellSection:
    d = xi.m * (xi.m - 1) // 2
    widths = tuple(widths or (1.0,) * d)
    centers = tuple(centers or (0.0,) * d)
    prof = GaussianProfile(widths, centers)
    return CellSection(xi, prof, prof.radius, False, f"gaussian{widths}{centers}")


def bump_cell(xi: InducedTuple) -> CellSection:
    if xi.m != 2:
        raise ValueError("the flat bump profile is provided for GL_2")
    return CellSection(xi, bump_profile, 4.0, True, "bump")


def check_equivariance(f: Section, rng: np.random.Generator, samples: int = 8) -> float:
    """Max relative defect of f(b g) = xi delta^{1/2}(b) f(g) over random b, g."""
    m = f.m
    worst = 0.0
    for _ in range(samples):
        b = np.tril(rng.normal(size=(m, m)))
        b[np.diag_indices(m)] = rng.choice([-1, 1], size=m) * rng.uniform(0.5, 2.0, size=m)
        g = rng.normal(size=(m, m))
        lhs = f(b @ g)
        rhs = _borel_factor(f.xi, np.diag(b)[None])[0] * f(g)
        worst = max(worst, abs(lhs - rhs) / (abs(lhs) + abs(rhs) + 1e-300))
    return worst


__all__ = [
    "antidiag", "sigma_matrix", "tau_matrix", "z_matrix", "gamma_matrix", "GroupElems",
    "group_elements", "char_array", "abs_power", "psi_array", "crout", "iwasawa_lower",
    "modulus_half", "Section", "KSection", "CellSection", "DualSection", "TranslatedSection",
    "GaussianProfile", "bump_profile", "gaussian_cell", "bump_cell", "check_equivariance",
]
