"""Fourier-stable Schwartz families on k^n and the Shalika-group action.

Archimedean members are sums of terms

    c * exp(2 pi i x.w) * prod_j h_{k_j}(y_j),    y = x G + v,

in real coordinates (C^n is identified with R^{2n} as (Re z_1, Im z_1, ...)),
where h_k(y) = H_k(sqrt(2 pi) y) exp(-pi y^2) with physicists' Hermite H_k.
Non-archimedean members are sums of

    c * psi_std(x.w) * 1[x in a + Z_p^n M]

with exact rational data.  Both classes are closed under linear changes of
variable, translation, modulation and Fourier transform.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .fieldchar import (AddChar, LocalField, MultChar, QI, _frac, char_eval, char_inv,
                        frac_part, padic_abs, valuation)

SQ2PI = math.sqrt(2 * math.pi)


def hermite_coeffs(k: int) -> list[int]:
    """Integer coefficients of the physicists' Hermite polynomial H_k (low to high)."""
    prev, cur = [1], [0, 2]
    if k == 0:
        return prev
    for j in range(1, k):
        nxt = [0] * (j + 2)
        for i, c in enumerate(cur):
            nxt[i + 1] += 2 * c
        for i, c in enumerate(prev):
            nxt[i] -= 2 * j * c
        prev, cur = cur, nxt
    return cur


def hermite_function(k: int, y):
    """h_k(y) = H_k(sqrt(2 pi) y) exp(-pi y^2), vectorized, via the three-term recurrence."""
    y = np.asarray(y)
    u = SQ2PI * y
    h0 = np.ones_like(u)
    if k == 0:
        hk = h0
    else:
        h1 = 2 * u
        for j in range(1, k):
            h0, h1 = h1, 2 * u * h1 - 2 * j * h0
        hk = h1
    return hk * np.exp(-np.pi * y * y)


# ---------------------------------------------------------------- archimedean


@dataclass(frozen=True)
class ArchTerm:
    coef: complex
    k: tuple
    G: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def eval(self, X: np.ndarray) -> np.ndarray:
        """X has shape (..., D)."""
        Y = X @ self.G + self.v
        out = np.exp(2j * np.pi * (X @ self.w)) * self.coef
        for j, kj in enumerate(self.k):
            out = out * hermite_function(kj, Y[..., j])
        return out

    def lebesgue_fourier(self) -> ArchTerm:
        """Transform for int f(x) exp(2 pi i x.xi) dx."""
        Ginv = np.linalg.inv(self.G)
        det = abs(np.linalg.det(self.G))
        vGi = self.v @ Ginv
        c = self.coef / det * (1j ** (sum(self.k) % 4)) * np.exp(-2j * np.pi * (vGi @ self.w))
        return ArchTerm(complex(c), self.k, Ginv.T, self.w @ Ginv.T, -vGi)

    def affine(self, A: np.ndarray, b: np.ndarray) -> ArchTerm:
        """x -> term(x A + b)."""
        c = self.coef * np.exp(2j * np.pi * (b @ self.w))
        return ArchTerm(complex(c), self.k, A @ self.G, b @ self.G + self.v, A @ self.w)

    def modulate(self, u: np.ndarray) -> ArchTerm:
        return ArchTerm(self.coef, self.k, self.G, self.v, self.w + u)

    def scaled(self, c: complex) -> ArchTerm:
        return ArchTerm(self.coef * c, self.k, self.G, self.v, self.w)


# ---------------------------------------------------------------- p-adic


@dataclass(frozen=True)
class NATerm:
    coef: complex
    a: tuple  # center, Fractions
    M: tuple  # rows of the lattice basis, Fractions
    w: tuple  # modulation vector for psi_std

    def contains(self, x: Sequence, p: int) -> bool:
        d = tuple(_frac(xi) - ai for xi, ai in zip(x, self.a))
        z = _vec_mat(d, _mat_inv(self.M))
        return all(zi == 0 or valuation(zi, p) >= 0 for zi in z)

    def eval(self, x: Sequence, p: int) -> complex:
        if not self.contains(x, p):
            return 0j
        t = sum((_frac(xi) * wi for xi, wi in zip(x, self.w)), Fraction(0))
        return self.coef * _psi_std(t, p)

    def volume(self, p: int) -> Fraction:
        return padic_abs(_det(self.M), p)


def _psi_std(x: Fraction, p: int) -> complex:
    return cmath.exp(-2j * math.pi * float(frac_part(x, p)))


def _mat_inv(M: tuple) -> tuple:
    n = len(M)
    A = [list(map(_frac, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [x / pv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return tuple(tuple(row[n:]) for row in A)


def _det(M: tuple) -> Fraction:
    n = len(M)
    A = [list(map(_frac, row)) for row in M]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det *= A[col][col]
        for r in range(col + 1, n):
            f = A[r][col] / A[col][col]
            A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return det


def _vec_mat(v: Sequence, M: tuple) -> tuple:
    n = len(M[0])
    return tuple(sum((_frac(v[i]) * M[i][j] for i in range(len(v))), Fraction(0)) for j in range(n))


def _mat_mul(A: tuple, B: tuple) -> tuple:
    return tuple(_vec_mat(row, B) for row in A)


def _transpose(A: tuple) -> tuple:
    return tuple(zip(*A))


# ---------------------------------------------------------------- family


def _real_matrix(F: LocalField, g) -> np.ndarray:
    """Real matrix R with (x g)_real = x_real R for a k-linear map x -> x g."""
    g = np.atleast_2d(np.asarray(g, dtype=complex if F.kind == "C" else float))
    if F.kind == "R":
        return g.astype(float)
    n, m = g.shape
    R = np.zeros((2 * n, 2 * m))
    for i in range(n):
        for j in range(m):
            a, b = g[i, j].real, g[i, j].imag
            R[2 * i:2 * i + 2, 2 * j:2 * j + 2] = [[a, b], [-b, a]]
    return R


def _real_vec(F: LocalField, x) -> np.ndarray:
    if F.kind == "R":
        return np.atleast_1d(np.asarray(x, dtype=float))
    z = np.atleast_1d(np.asarray(x, dtype=complex))
    return np.stack([z.real, z.imag], axis=-1).reshape(*z.shape[:-1], -1)


def _pairing_vec(F: LocalField, u) -> np.ndarray:
    """Real vector r with psi_std(x.u) = exp(2 pi i x_real . r)."""
    if F.kind == "R":
        return np.atleast_1d(np.asarray(u, dtype=float))
    z = np.atleast_1d(np.asarray(u, dtype=complex))
    return (2 * np.stack([z.real, -z.imag], axis=-1)).reshape(-1)


@dataclass(frozen=True)
class SchwartzFn:
    field: LocalField
    n: int
    terms: tuple = ()

    # -- evaluation
    def __call__(self, x) -> complex:
        if self.field.kind == "P":
            x = tuple(x) if isinstance(x, (list, tuple)) else (x,)
            return sum((t.eval(x, self.field.prime) for t in self.terms), 0j)
        X = _real_vec(self.field, x)
        return complex(self.eval_real(X))

    def eval_real(self, X) -> np.ndarray:
        """Vectorized evaluation at real coordinates X of shape (..., D)."""
        if self.field.kind == "P":
            raise ValueError("real-coordinate evaluation needs an archimedean field")
        X = np.asarray(X, dtype=float)
        out = np.zeros(X.shape[:-1], dtype=complex)
        for t in self.terms:
            out = out + t.eval(X)
        return out

    def eval_line(self, x) -> np.ndarray:
        """Vectorized evaluation for n = 1 over R or C at an array of field elements."""
        if self.n != 1 or self.field.kind == "P":
            raise ValueError("eval_line needs an archimedean field and n = 1")
        x = np.asarray(x)
        if self.field.kind == "R":
            return self.eval_real(x[..., None].real)
        return self.eval_real(np.stack([x.real, x.imag], axis=-1))

    @property
    def real_dim(self) -> int:
        return self.n * self.field.degree

    # -- linear structure
    def __add__(self, o: SchwartzFn) -> SchwartzFn:
        if (self.field, self.n) != (o.field, o.n):
            raise ValueError("incompatible Schwartz functions")
        return SchwartzFn(self.field, self.n, self.terms + o.terms)

    def __sub__(self, o: SchwartzFn) -> SchwartzFn:
        return self + o.scaled(-1)

    def scaled(self, c) -> SchwartzFn:
        c = complex(c)
        return SchwartzFn(self.field, self.n, tuple(replace(t, coef=t.coef * c) for t in self.terms))

    __mul__ = scaled
    __rmul__ = scaled

    # -- group operations
    def precompose(self, g=None, b=None) -> SchwartzFn:
        """x -> phi(x g + b) for an invertible n x n matrix g over k."""
        F, n = self.field, self.n
        if F.kind == "P":
            G = _identity(n) if g is None else tuple(tuple(_frac(x) for x in row) for row in _as_rows(g))
            if _det(G) == 0:
                raise ValueError("non-invertible g")
            bb = tuple(Fraction(0) for _ in range(n)) if b is None else tuple(_frac(x) for x in _as_vec(b))
            Gi = _mat_inv(G)
            out = []
            for t in self.terms:
                shift = sum((bi * wi for bi, wi in zip(bb, t.w)), Fraction(0))
                a = _vec_mat(tuple(ai - bi for ai, bi in zip(t.a, bb)), Gi)
                out.append(NATerm(t.coef * _psi_std(shift, F.prime), a, _mat_mul(t.M, Gi),
                                  _vec_mat(t.w, _transpose(G))))
            return SchwartzFn(F, n, tuple(out))
        A = np.eye(self.real_dim) if g is None else _real_matrix(F, g)
        if abs(np.linalg.det(A)) == 0:
            raise ValueError("non-invertible g")
        bv = np.zeros(self.real_dim) if b is None else _real_vec(F, b).reshape(-1)
        return SchwartzFn(F, n, tuple(t.affine(A, bv) for t in self.terms))

    def translate(self, b) -> SchwartzFn:
        return self.precompose(None, b)

    def modulate(self, u, psi: AddChar | None = None) -> SchwartzFn:
        """Multiply by psi(x.u) (psi defaults to the standard character)."""
        F, n = self.field, self.n
        a = QI(1) if psi is None else psi.a
        if F.kind == "P":
            uu = tuple(a.re * _frac(x) for x in _as_vec(u))
            return SchwartzFn(F, n, tuple(
                NATerm(t.coef, t.a, t.M, tuple(wi + ui for wi, ui in zip(t.w, uu))) for t in self.terms))
        if F.kind == "R":
            r = float(a.re) * np.atleast_1d(np.asarray(u, dtype=float))
        else:
            r = _pairing_vec(F, complex(a) * np.atleast_1d(np.asarray(u, dtype=complex)))
        return SchwartzFn(F, n, tuple(t.modulate(r) for t in self.terms))

    def fourier(self, psi: AddChar) -> SchwartzFn:
        """F_psi phi(x) = int phi(y) psi(y.x) dy with the psi-self-dual measure."""
        F, n = self.field, self.n
        if psi.field != F:
            raise ValueError("field mismatch")
        a = psi.a
        if F.kind == "P":
            p = F.prime
            alpha = a.re
            half = math.sqrt(float(padic_abs(alpha, p))) ** n
            out = []
            for t in self.terms:
                c = t.coef * half * float(t.volume(p)) * _psi_std(
                    sum((x * y for x, y in zip(t.a, t.w)), Fraction(0)), p)
                Minv_T = _transpose(_mat_inv(t.M))
                out.append(NATerm(c, tuple(-x / alpha for x in t.w),
                                  tuple(tuple(x / alpha for x in row) for row in Minv_T),
                                  tuple(alpha * x for x in t.a)))
            return SchwartzFn(F, n, tuple(out))
        if F.kind == "R":
            M = float(a.re) * np.eye(n)
            mu = abs(float(a.re)) ** (n / 2)
        else:
            al, be = float(a.re), float(a.im)
            block = np.array([[2 * al, -2 * be], [-2 * be, -2 * al]])
            M = np.kron(np.eye(n), block)
            mu = (2.0 * math.sqrt(al * al + be * be)) ** n
        out = []
        for t in self.terms:
            out.append(t.lebesgue_fourier().affine(M, np.zeros(self.real_dim)).scaled(mu))
        return SchwartzFn(F, n, tuple(out))

    # -- norms
    def l2_norm_sq(self) -> float:
        """Squared L2 norm for the psi-independent standard measure (Lebesgue / vol(Z_p) = 1)."""
        if self.field.kind == "P":
            return _na_l2(self)
        return _arch_l2(self)

    def to_json(self) -> dict:
        d = {**self.field.to_json(), "n": self.n, "terms": []}
        for t in self.terms:
            if self.field.kind == "P":
                d["terms"].append({"coef": [t.coef.real, t.coef.imag],
                                   "center": [str(x) for x in t.a],
                                   "lattice": [[str(x) for x in row] for row in t.M],
                                   "w": [str(x) for x in t.w]})
            else:
                d["terms"].append({"coef": [t.coef.real, t.coef.imag], "k": list(t.k),
                                   "G": t.G.tolist(), "v": t.v.tolist(), "w": t.w.tolist()})
        return d


def _as_rows(g):
    if isinstance(g, (int, float, Fraction, complex)):
        return ((g,),)
    return tuple(tuple(r) if isinstance(r, (list, tuple)) else (r,) for r in g)


def _as_vec(b):
    if isinstance(b, (int, float, Fraction, complex)):
        return (b,)
    return tuple(b)


def _identity(n: int) -> tuple:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def _hermite_poly(k: int, u):
    h0 = np.ones_like(u)
    if k == 0:
        return h0
    h1 = 2 * u
    for j in range(1, k):
        h0, h1 = h1, 2 * u * h1 - 2 * j * h0
    return h1


def _term_inner(s: ArchTerm, t: ArchTerm) -> complex:
    """Exact int s(x) conj(t(x)) dx (Lebesgue on real coordinates).

    The Gaussian parts combine to exp(-pi (x A x^T + 2 x.b + c0)); after
    completing the square around a complex centre the remaining integrand is
    a polynomial against exp(-|y|^2), so Gauss-Hermite is exact.
    """
    D = len(s.k)
    A = s.G @ s.G.T + t.G @ t.G.T
    b = s.G @ s.v + t.G @ t.v
    c0 = s.v @ s.v + t.v @ t.v
    u = s.w - t.w
    beta = b - 1j * u
    Ainv = np.linalg.inv(A)
    x0 = -beta @ Ainv
    const = np.exp(-np.pi * (c0 - x0 @ A @ x0))
    L = np.linalg.cholesky(A)
    Linv = np.linalg.inv(L)
    K = (sum(s.k) + sum(t.k)) // 2 + 1
    y, wy = np.polynomial.hermite.hermgauss(K)
    Y = np.stack([g.reshape(-1) for g in np.meshgrid(*([y] * D), indexing="ij")], axis=-1)
    W = np.ones(Y.shape[0])
    for g in np.meshgrid(*([wy] * D), indexing="ij"):
        W = W * g.reshape(-1)
    X = x0 + (Y @ Linv.T) / math.sqrt(math.pi)
    jac = 1.0 / (abs(np.linalg.det(L)) * math.pi ** (D / 2))
    P = np.ones(X.shape[0], dtype=complex)
    Ys, Yt = X @ s.G + s.v, X @ t.G + t.v
    for j in range(D):
        P = P * _hermite_poly(s.k[j], SQ2PI * Ys[:, j]) * _hermite_poly(t.k[j], SQ2PI * Yt[:, j])
    return complex(s.coef * np.conj(t.coef) * const * jac * np.sum(W * P))


def _arch_l2(phi: SchwartzFn) -> float:
    total = 0j
    for s in phi.terms:
        for t in phi.terms:
            total += _term_inner(s, t)
    return float(total.real)


def _na_l2(phi: SchwartzFn) -> float:
    if phi.n != 1:
        raise ValueError("exact p-adic L2 norm implemented for n = 1")
    p = phi.field.prime
    total = 0j
    for s in phi.terms:
        for t in phi.terms:
            total += s.coef * t.coef.conjugate() * _na_overlap(s, t, p)
    return float(total.real)


def _na_overlap(s: NATerm, t: NATerm, p: int) -> complex:
    """int psi(x (w_s - w_t)) over the intersection of two balls (n = 1)."""
    ks = valuation(s.M[0][0], p)
    kt = valuation(t.M[0][0], p)
    big, small = (s, t) if ks <= kt else (t, s)
    kb, ksm = min(ks, kt), max(ks, kt)
    d = small.a[0] - big.a[0]
    if d != 0 and valuation(d, p) < kb:
        return 0j
    u = s.w[0] - t.w[0]
    if u != 0 and valuation(u, p) + ksm < 0:
        return 0j
    return Fraction(p) ** (-ksm) * _psi_std(small.a[0] * u, p)


# ---------------------------------------------------------------- constructors


def gaussian(F: LocalField, n: int = 1, coef=1.0) -> SchwartzFn:
    """exp(-pi |x|^2) in real coordinates (exp(-pi x^2) on R, exp(-2 pi |z|^2) on C)."""
    D = n * F.degree
    if F.kind == "P":
        return ball(F.prime, n, k=0, coef=coef)
    G = np.eye(D) * (math.sqrt(2) if F.kind == "C" else 1.0)
    return SchwartzFn(F, n, (ArchTerm(complex(coef), (0,) * D, G, np.zeros(D), np.zeros(D)),))


def hermite(F: LocalField, k: Sequence[int], coef=1.0, G=None, v=None, w=None) -> SchwartzFn:
    """Single Hermite term with multi-index k over real coordinates."""
    if F.kind == "P":
        raise ValueError("Hermite terms are archimedean")
    k = tuple(int(x) for x in k)
    D = len(k)
    if D % F.degree:
        raise ValueError("multi-index length must match the real dimension")
    n = D // F.degree
    base = math.sqrt(2) if F.kind == "C" else 1.0
    G = np.eye(D) * base if G is None else np.asarray(G, dtype=float)
    v = np.zeros(D) if v is None else np.asarray(v, dtype=float)
    w = np.zeros(D) if w is None else np.asarray(w, dtype=float)
    return SchwartzFn(F, n, (ArchTerm(complex(coef), k, G, v, w),))


def ball(p: int, n: int = 1, center=None, k: int = 0, coef=1.0) -> SchwartzFn:
    """Indicator of center + p^k Z_p^n."""
    from .fieldchar import padic
    a = tuple(Fraction(0) for _ in range(n)) if center is None else tuple(_frac(x) for x in _as_vec(center))
    pk = Fraction(p) ** k
    M = tuple(tuple(pk if i == j else Fraction(0) for j in range(n)) for i in range(n))
    return SchwartzFn(padic(p), n, (NATerm(complex(coef), a, M, tuple(Fraction(0) for _ in range(n))),))


# ---------------------------------------------------------------- Shalika action


@dataclass(frozen=True)
class ShalikaElem:
    """Factored coordinates of a Shalika element.

    m = 2n:   [[g, X g], [0, g]]
    m = 2n+1: [[g, X g, y], [0, g, 0], [0, x g, 1]]  (y column, x row)
    """

    g: np.ndarray
    X: np.ndarray
    y: np.ndarray | None = None
    x: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.g.shape[0]

    @property
    def odd(self) -> bool:
        return self.y is not None

    @property
    def m(self) -> int:
        return 2 * self.n + (1 if self.odd else 0)

    @classmethod
    def make(cls, g, X, y=None, x=None) -> ShalikaElem:
        g = np.atleast_2d(np.asarray(g))
        X = np.atleast_2d(np.asarray(X))
        if y is not None:
            y = np.atleast_1d(np.asarray(y))
            x = np.atleast_1d(np.asarray(x))
        return cls(g, X, y, x)

    def matrix(self) -> np.ndarray:
        n = self.n
        g, X = self.g, self.X
        dt = np.result_type(g, X, *(() if not self.odd else (self.x, self.y)), float)
        H = np.zeros((self.m, self.m), dtype=dt)
        H[:n, :n] = g
        H[:n, n:2 * n] = X @ g
        H[n:2 * n, n:2 * n] = g
        if self.odd:
            H[:n, 2 * n] = self.y
            H[2 * n, n:2 * n] = self.x @ g
            H[2 * n, 2 * n] = 1
        return H

    @classmethod
    def from_matrix(cls, H: np.ndarray) -> ShalikaElem:
        H = np.asarray(H)
        m = H.shape[0]
        n = m // 2
        g = H[n:2 * n, n:2 * n]
        gi = np.linalg.inv(g)
        X = H[:n, n:2 * n] @ gi
        if m % 2 == 0:
            return cls(g, X)
        y = H[:n, 2 * n]
        x = H[2 * n, n:2 * n] @ gi
        return cls(g, X, y, x)

    def __mul__(self, o: ShalikaElem) -> ShalikaElem:
        return ShalikaElem.from_matrix(self.matrix() @ o.matrix())

    def hat(self) -> ShalikaElem:
        """tau_m (h^t)^{-1} tau_m."""
        from .zetaverify import tau_matrix
        T = tau_matrix(self.m)
        return ShalikaElem.from_matrix(T @ np.linalg.inv(self.matrix()).T @ T)

    def det_g(self):
        if self.g.dtype == object:
            return _det(tuple(tuple(r) for r in self.g.tolist()))
        return complex(np.linalg.det(self.g))


def shalika_action(h: ShalikaElem, phi: SchwartzFn, eta: MultChar, psi: AddChar,
                   inverse: bool = False) -> SchwartzFn:
    """R_{varphi}(h) phi, or R_{varphi^{-1}}(h) phi when ``inverse``.

    even: eta(g) psi(tr X) phi(v g)
    odd:  eta(g) psi(tr X - x.y) psi(-v.y) phi((v + x) g)
    """
    F = phi.field
    if abs(h.det_g()) == 0:
        raise ValueError("non-invertible g")
    if h.n != phi.n:
        raise ValueError("dimension mismatch")
    e = char_inv(eta) if inverse else eta
    ps = psi.conj() if inverse else psi
    if F.kind == "P":
        G = _g_data(F, h.g)
        det = _det(G)
        tr = sum((_frac(h.X[i][i]) for i in range(h.n)), Fraction(0))
    else:
        tr = np.trace(h.X)
        det = np.linalg.det(h.g)
    const = char_eval(e, _scalar(det))
    if not h.odd:
        const *= ps(_scalar(tr))
        return phi.precompose(_g_data(F, h.g)).scaled(const)
    if F.kind == "P":
        xy = sum((_frac(a) * _frac(b) for a, b in zip(h.x, h.y)), Fraction(0))
        xg = _vec_mat(tuple(h.x), G)
    else:
        xy = np.dot(h.x, h.y)
        xg = h.x @ h.g
    const *= ps(_scalar(tr - xy))
    out = phi.precompose(_g_data(F, h.g), _vec_data(F, xg)).scaled(const)
    return out.modulate(-np.asarray(h.y), ps) if F.kind != "P" else out.modulate(
        tuple(-_frac(v) for v in h.y), ps)


def _scalar(x):
    x = np.asarray(x).reshape(()).item() if isinstance(x, np.ndarray) else x
    if isinstance(x, complex) and x.imag == 0:
        return x.real
    return x


def _g_data(F: LocalField, g):
    if F.kind == "P":
        return tuple(tuple(_frac(v) for v in row) for row in np.atleast_2d(g).tolist())
    return g


def _vec_data(F: LocalField, v):
    if F.kind == "P":
        return tuple(_frac(x) for x in np.atleast_1d(v).tolist())
    return v


__all__ = [
    "SchwartzFn", "ArchTerm", "NATerm", "ShalikaElem", "gaussian", "hermite", "ball",
    "hermite_function", "hermite_coeffs", "shalika_action",
]
