"""Zeta integrals and functional-equation verification.

Tate integrals over R, C and Q_p; Jacquet-Shalika open-orbit integrals for GL_2
and GL_3 over R; the GL_2 Jacquet integral and the torus integral against it;
Rankin-Selberg and Friedberg-Jacquet integrals for n = 1.  Every comparison
produces a ``VerifyReport``.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .factorcalc import (InducedTuple, d_xi, extsq_L, extsq_eps, in_omega_domain,
                         is_eta_symmetric, is_whittaker_type, js_gamma_full)
from .fieldchar import (AddChar, MultChar, REAL, char_inv, char_re, valuation)
from .meromorph import tate_L, tate_eps, tate_gamma
from .quadrature import QuadResult, gk_adaptive, smooth_window, tensor_gk
from .schwartz import SchwartzFn, _psi_std
from .sections import (CellSection, DualSection, GroupElems, KSection, Section, TranslatedSection,
                       _borel_factor, char_array, group_elements, psi_array, tau_matrix, z_matrix)

EPS = 1e-300
DEFAULT_MAX_POINTS = 20_000_000


class DomainError(ValueError):
    """Raised when an integral is requested outside its region of absolute convergence."""


# ---------------------------------------------------------------- reports


@dataclass
class VerifyReport:
    id: str
    params: dict
    lhs: complex
    rhs: complex
    residual: float
    tolerance: float
    diagnostics: dict = field(default_factory=dict)
    passed: bool = False

    @classmethod
    def build(cls, id: str, params: dict, lhs, rhs, tol: float, diagnostics: dict | None = None,
              converged: bool | None = None) -> VerifyReport:
        diag = dict(diagnostics or {})
        if converged is None:
            converged = bool(diag.get("converged", True))
        diag["converged"] = bool(converged)
        lhs, rhs = complex(lhs), complex(rhs)
        finite = math.isfinite(abs(lhs)) and math.isfinite(abs(rhs))
        res = abs(lhs - rhs) / (abs(lhs) + abs(rhs) + EPS) if finite else math.inf
        return cls(id, params, lhs, rhs, res, tol, diag, bool(finite and res <= tol and converged))

    def to_json(self) -> dict:
        return {"schema": "lfcalc.verify/1", "id": self.id, "params": self.params,
                "lhs": [self.lhs.real, self.lhs.imag], "rhs": [self.rhs.real, self.rhs.imag],
                "residual": self.residual, "tolerance": self.tolerance, "pass": self.passed,
                "diagnostics": _jsonable(self.diagnostics)}

    def params_hash(self) -> str:
        blob = json.dumps(_jsonable(self.params), sort_keys=True).encode()
        return hashlib.sha1(blob).hexdigest()[:12]

    def tsv_row(self) -> str:
        return "\t".join([self.id, self.params_hash(), _cfmt(self.lhs), _cfmt(self.rhs),
                          f"{self.residual:.3e}", "pass" if self.passed else "FAIL"])


TSV_HEADER = "identity\tparams\tlhs\trhs\tresidual\tpass"


def _cfmt(z: complex) -> str:
    return f"{z.real:.15g}{z.imag:+.15g}j"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, Fraction):
        return str(x)
    return x


def _merge(*qs: QuadResult) -> dict:
    return {"points": int(sum(q.points for q in qs)), "error": float(sum(q.error for q in qs)),
            "converged": all(q.converged for q in qs)}


def _cplx(s) -> list:
    s = complex(s)
    return [s.real, s.imag]


# ---------------------------------------------------------------- helpers


def _decay_radius(fn: Callable[[np.ndarray], np.ndarray], growth: float = 0.0, rel: float = 1e-17) -> float:
    """Radius beyond which |fn| * r^growth is below rel times its peak (scanned on a log grid)."""
    r = np.geomspace(1e-3, 1e4, 561)
    v = np.abs(fn(r)) * r**growth
    peak = float(v.max())
    if peak == 0:
        return 1.0
    idx = np.nonzero(v > rel * peak)[0]
    return max(1.0, 1.25 * float(r[idx.max()]))


def _line_fn(phi: SchwartzFn) -> Callable[[np.ndarray], np.ndarray]:
    return lambda r: np.abs(phi.eval_line(r)) + np.abs(phi.eval_line(-r))


def _torus_char(w: MultChar, eps: float, t: np.ndarray) -> np.ndarray:
    """w(eps e^t) computed from t, so very negative t does not underflow."""
    val = np.exp(complex(w.t) * t)
    return -val if (w.delta and eps < 0) else val


def _tail_span(decay: float, rtol: float) -> float:
    """Length L with exp(-decay L) well below rtol."""
    if decay <= 0:
        raise DomainError("integrand does not decay")
    return (math.log(1 / rtol) + 6) / decay


def neville_at_zero(xs: Sequence[float], ys: Sequence[complex]) -> complex:
    """Value at 0 of the interpolating polynomial through (xs, ys)."""
    p = [complex(y) for y in ys]
    x = list(xs)
    n = len(x)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (x[i + k] * p[i] - x[i] * p[i + 1]) / (x[i + k] - x[i])
    return p[0]


def _boxed(f, t_lo: float, t_hi: float, lows: list, highs: list, panels: list, rtol: float,
           max_points: int, core: tuple = (-4.0, 4.0), core_panels: int = 4) -> QuadResult:
    """Tensor quadrature with the first (log-radial) variable split into a core and far tails.

    Away from the core the integrand is close to an exponential in the first variable, so
    the tails get coarse grids and an absolute tolerance relative to the core value.
    """
    lo = max(t_lo, min(core[0], t_hi - 1))
    hi = min(t_hi, max(core[1], lo + 1))
    qc = tensor_gk(f, [lo] + lows, [hi] + highs, [core_panels] + panels, rtol=rtol, max_points=max_points)
    parts = [qc]
    atol = rtol * float(np.max(np.abs(qc.value)))
    for a, b in ((t_lo, lo), (hi, t_hi)):
        if b > a:
            parts.append(tensor_gk(f, [a] + lows, [b] + highs, [2] + panels, rtol=rtol, atol=atol,
                                   max_points=max_points))
    val = sum((np.asarray(q.value) for q in parts), 0)
    return QuadResult(val, sum(q.error for q in parts), sum(q.points for q in parts),
                      all(q.converged for q in parts), sum((q.dim_errors for q in parts), ()),
                      sum((q.panels for q in parts), ()))

LIMIT_NODES = (0.4, 0.3, 0.2, 0.15, 0.1, 0.075, 0.05)


# ---------------------------------------------------------------- Tate integrals


def tate_zeta(s, w: MultChar, phi: SchwartzFn, rtol: float = 1e-11) -> complex:
    """int phi(x) w(x) |x|^s d^x x (Tate's measure d^x x = c dx/|x|)."""
    return _tate(s, w, phi, rtol)[0]


def _tate(s, w: MultChar, phi: SchwartzFn, rtol: float = 1e-11):
    if phi.n != 1 or phi.field != w.field:
        raise ValueError("Tate integrals take a one-variable Schwartz function over the character's field")
    kind = w.field.kind
    s = complex(s)
    if kind == "P":
        return _tate_padic(s, w, phi), {"points": 0, "error": 0.0, "converged": True, "exact": True}
    sig = s.real + float(char_re(w))
    if sig <= 0:
        raise DomainError(f"Tate integral diverges at Re(s) = {s.real} for {w}")
    z = s + complex(w.t)
    t_lo = -_tail_span(sig, rtol)
    if kind == "R":
        R = _decay_radius(_line_fn(phi), sig)
        t_hi = math.log(R) + 1

        def f(t):
            x = np.exp(t)
            val = phi.eval_line(x) + (-1) ** w.delta * phi.eval_line(-x)
            return val * np.exp(z * t)

        q = gk_adaptive(f, t_lo, t_hi, rtol=rtol, initial=max(8, int((t_hi - t_lo) / 4)))
        return complex(q.value), q.diagnostics()

    def absfn(r):
        th = np.linspace(0, 2 * np.pi, 8, endpoint=False)
        pts = r[:, None] * np.exp(1j * th)[None, :]
        return np.max(np.abs(phi.eval_line(pts)), axis=1)

    R = _decay_radius(absfn, 2 * sig)
    u_hi = math.log(R) + 1
    u_lo = t_lo / 2

    def g(P):
        u, th = P[:, 0], P[:, 1]
        zz = np.exp(u + 1j * th)
        return 2 * phi.eval_line(zz) * np.exp(1j * w.N * th) * np.exp(2 * z * u)

    # the far tail is a plain exponential: give it its own coarse box
    mid = min(-3.0, u_hi - 4)
    # angular orthogonality can make the integral vanish exactly; measure
    # accuracy against the absolute mass so such cases still converge
    mass = tensor_gk(lambda P: np.abs(g(P)), [u_lo, 0.0], [u_hi, 2 * np.pi], panels=[4, 4], rtol=1e-3)
    l1 = abs(float(mass.value))
    atol = rtol * l1
    q1 = tensor_gk(g, [u_lo, 0.0], [mid, 2 * np.pi], panels=[4, 4], rtol=rtol, atol=atol / 2)
    q2 = tensor_gk(g, [mid, 0.0], [u_hi, 2 * np.pi], panels=[4, 4], rtol=rtol, atol=atol / 2)
    val = complex(q1.value) + complex(q2.value)
    if abs(val) <= 64 * np.finfo(float).eps * l1:
        val = 0j
    return val, _merge(q1, q2)


def _tate_padic(s: complex, w: MultChar, phi: SchwartzFn) -> complex:
    p = w.field.prime
    c = w.conductor
    x = complex(s) + complex(w.t)
    q = p ** (-x)
    total = 0j
    for term in phi.terms:
        a = term.a[0]
        m = term.M[0][0]
        wmod = term.w[0]
        k = valuation(m, p)
        va = valuation(a, p) if a != 0 else None
        vw = valuation(wmod, p) if wmod != 0 else None
        j_min = k if va is None else min(va, k)
        J = max(k, -vw if vw is not None else k, j_min) + 1
        for j in range(j_min, J):
            N = max(c, k - j, (-vw - j) if vw is not None else 0, 1)
            mod = p**N
            acc = 0j
            count = 0
            pj = Fraction(p) ** j
            for u in range(1, mod):
                if u % p == 0:
                    continue
                xv = pj * u
                d = xv - a
                if d != 0 and valuation(d, p) < k:
                    continue
                acc += w.finite_value(u) * _psi_std(xv * wmod, p)
                count += 1
            # a sum of low-order roots of unity at rounding level is an exact zero
            if abs(acc) <= 64 * count * np.finfo(float).eps:
                acc = 0j
            total += term.coef * q**j * acc / mod
        # shells j >= J: phi(p^j u) = phi(0)
        if c == 0 and (va is None or va >= k):
            phi0 = term.coef
            total += phi0 * (1 - 1 / p) * q**J / (1 - q)
    return total


def verify_tate_fe(s, w: MultChar, phi: SchwartzFn, psi: AddChar | None = None,
                   tol: float | None = None, rtol: float = 1e-11) -> VerifyReport:
    """Z(1-s, w^-1, F_psi phi)/L(1-s, w^-1) against eps(s, w, psi) Z(s, w, phi)/L(s, w)."""
    psi = psi or AddChar(w.field)
    s = complex(s)
    exact = w.field.kind == "P"
    tol = tol if tol is not None else (1e-12 if exact else 1e-8)
    winv = char_inv(w)
    rz, d1 = _tate(s, w, phi, rtol)
    lz, d2 = _tate(1 - s, winv, phi.fourier(psi), rtol)
    lhs = lz / tate_L(winv).eval(1 - s)
    rhs = tate_eps(w, psi).eval(s) * rz / tate_L(w).eval(s)
    diag = {"points": d1["points"] + d2["points"], "error": d1["error"] + d2["error"],
            "converged": d1["converged"] and d2["converged"]}
    return VerifyReport.build("tate-fe", {"field": str(w.field), "char": str(w), "s": _cplx(s)},
                              lhs, rhs, tol, diag)


# ---------------------------------------------------------------- GL_2 Jacquet integral


def _unipotent(x: np.ndarray, m: int = 2) -> np.ndarray:
    U = np.zeros((len(x), m, m), dtype=np.result_type(x, float))
    U[:, np.arange(m), np.arange(m)] = 1
    U[:, 0, 1] = x
    return U


def _check_jacquet(f: Section, regularize: bool):
    if f.m != 2:
        raise ValueError("Jacquet integrals are implemented for GL_2")
    if f.unipotent_schwartz:
        return
    a, b = (float(r) for r in f.xi.real_parts())
    if a < b:
        return
    if regularize and a - b < 1:
        return
    raise DomainError(f"Jacquet integral needs Re(xi_1) < Re(xi_2); got {a}, {b}"
                      + ("" if regularize else " (regularize=True extends this to Re(xi_1 - xi_2) < 1)"))


def whittaker_gl2(f: Section, g, psi: AddChar | None = None, *, regularize: bool = False,
                  rtol: float = 1e-11, details: bool = False):
    """W_f(g) = int f(u_x g) psi-bar(x) dx for one matrix or a stack (B, 2, 2)."""
    psi = psi or AddChar(REAL)
    _check_jacquet(f, regularize)
    G = np.asarray(g, dtype=float)
    single = G.ndim == 2
    G = G[None] if single else G
    # bounded chunks keep the (nodes x stack) arrays small when called from an outer quadrature
    vals, diags = [], []
    for c in range(0, G.shape[0], _WHITTAKER_CHUNK):
        v, d = _whittaker_chunk(f, G[c:c + _WHITTAKER_CHUNK], psi, rtol)
        vals.append(v)
        diags.append(d)
    val = np.concatenate(vals)
    out = complex(val[0]) if single else val
    if details:
        diag = {"points": sum(d["points"] for d in diags), "error": sum(d["error"] for d in diags),
                "converged": all(d["converged"] for d in diags), "mode": diags[0]["mode"]}
        return out, diag
    return out


_WHITTAKER_CHUNK = 64


def _whittaker_chunk(f: Section, G: np.ndarray, psi: AddChar, rtol: float):
    a_psi = float(psi.a.re)
    B = G.shape[0]
    if isinstance(f, CellSection) and np.all(G[:, 1, 0] == 0):
        # u_x g stays upper triangular: U_12 = (b + x d)/a is a Schwartz variable
        a, b, d = G[:, 0, 0], G[:, 0, 1], G[:, 1, 1]
        scale = np.abs(a / d)
        R = f.radius

        def integrand(u):
            x = (-b[None, :] + a[None, :] * u[:, None]) / d[None, :]
            M = np.einsum("nbij,bjk->nbik", _unipotent(x.reshape(-1)).reshape(len(u), B, 2, 2), G)
            vals = f.eval(M.reshape(-1, 2, 2)).reshape(len(u), B)
            return vals * np.conj(psi_array(psi, x)) * scale[None, :]

        panels = max(8, int(2 * R * np.max(scale) * abs(a_psi)) + 1)
        q = gk_adaptive(integrand, -R, R, rtol=rtol, initial=panels, max_intervals=200_000)
        mode = "cell"
    else:
        S = np.max(np.sum(G * G, axis=(1, 2)) / np.abs(np.linalg.det(G)))
        x0 = (30 + 10 * S) / abs(a_psi)
        sig = 4 / abs(a_psi)
        X = x0 + 8 * sig

        def integrand(x):
            M = np.einsum("nij,bjk->nbik", _unipotent(x), G)
            vals = f.eval(M.reshape(-1, 2, 2)).reshape(len(x), B)
            return vals * (np.conj(psi_array(psi, x)) * smooth_window(x, x0, sig))[:, None]

        q = gk_adaptive(integrand, -X, X, rtol=rtol, initial=int(2 * X * abs(a_psi)) + 1,
                        max_intervals=200_000)
        mode = "window"
    return np.asarray(q.value).reshape(B), {**q.diagnostics(), "mode": mode}


# ---------------------------------------------------------------- Jacquet-Shalika integrals


def _omega_guard(f: Section, eta: MultChar, s: complex):
    dom = in_omega_domain(f.xi, eta)
    if not dom.contains(complex(s).real):
        raise DomainError(f"(s, xi) = ({s}, {f.xi.real_parts()}) lies outside the convergence domain "
                          f"({dom.lower}, {dom.upper}) (nonempty: {dom.nonempty})")
    return min(complex(s).real - float(dom.lower), float(dom.upper) - complex(s).real)


def _center_exponent(f: Section, eta: MultChar, s: complex) -> float:
    return complex(s).real + sum(float(r) for r in f.xi.real_parts()) - float(char_re(eta))


def lambda_js(s, f: Section, phi: SchwartzFn, eta: MultChar | None = None, psi: AddChar | None = None,
              *, m: int | None = None, regularize: bool = False, rtol: float | None = None,
              max_points: int = DEFAULT_MAX_POINTS, details: bool = False):
    """Open-orbit integral int f(z_m h) R(h)phi(e) |h|^{s/2} dh over the Shalika group (m = 2, 3).

    The twisting data are eta^{-1} and psi-bar; the dual side of the functional equation
    is obtained by passing eta^{-1} and psi.conj().
    """
    m = m or f.m
    if m != f.m:
        raise ValueError("section size does not match m")
    eta = eta or MultChar(REAL)
    psi = psi or AddChar(REAL)
    if f.xi.field.kind != "R":
        raise ValueError("open-orbit integrals are implemented over R")
    if m == 2:
        val, q = _lambda_js2(complex(s), f, phi, eta, psi, regularize, rtol or 1e-8, max_points)
    elif m == 3:
        val, q = _lambda_js3(complex(s), f, phi, eta, psi, rtol or 1e-4, max(max_points, 60_000_000))
    else:
        raise ValueError("open-orbit integrals are implemented for m = 2, 3")
    return (val, q) if details else val


def _lambda_js2(s, f, phi, eta, psi, regularize, rtol, max_points):
    if f.unipotent_schwartz or regularize:
        e0 = _center_exponent(f, eta, s)
        if e0 <= 0:
            raise DomainError(f"center integral diverges at s = {s}")
        _check_jacquet(f, regularize)
        decay = e0
    else:
        decay = _omega_guard(f, eta, s)
    R = _decay_radius(_line_fn(phi))
    t_lo, t_hi = -_tail_span(decay, rtol), math.log(R) + 1
    a_psi = float(psi.a.re)
    einv = char_inv(eta)
    if f.unipotent_schwartz:
        Xh = f.radius
        window = None
    else:
        x0, sig = 40 / abs(a_psi), 4 / abs(a_psi)
        Xh = x0 + 8 * sig
        window = (x0, sig)

    def integrand(P):
        t, X = P[:, 0], P[:, 1]
        acc = 0
        for eps in (1.0, -1.0):
            g = eps * np.exp(t)
            H = np.zeros((len(t), 2, 2))
            H[:, 0, 0] = g
            H[:, 0, 1] = X * g
            H[:, 1, 1] = g
            acc = acc + f.eval(H) * char_array(einv, g) * phi.eval_line(g)
        val = acc * np.conj(psi_array(psi, X)) * np.exp(s * t)
        if window is not None:
            val = val * smooth_window(X, *window)
        return val

    q = _boxed(integrand, t_lo, t_hi, [-Xh], [Xh], [max(4, int(2 * Xh * abs(a_psi)) + 1)], rtol,
               max_points)
    return complex(q.value), q


def _shalika3(g, X, y, x):
    N = len(g)
    H = np.zeros((N, 3, 3), dtype=np.result_type(g, X, y, x, float))
    H[:, 0, 0] = g
    H[:, 0, 1] = X * g
    H[:, 0, 2] = y
    H[:, 1, 1] = g
    H[:, 2, 1] = x * g
    H[:, 2, 2] = 1
    return H


def _is_dual_cell(f: Section) -> bool:
    return (isinstance(f, TranslatedSection) and isinstance(f.base, DualSection)
            and isinstance(f.base.base, CellSection) and np.array_equal(f.k, tau_matrix(3)))


def _cell_value(cell: CellSection, diag: np.ndarray, n: np.ndarray) -> np.ndarray:
    return _borel_factor(cell.xi, diag) * cell.profile(n)


def chart_rhs(cell: CellSection, g, X, v, w):
    """f(z_3 h) at h(g, X, y = v g, x = w/g), from the open-cell coordinates of z_3 h."""
    diag = np.stack([g, g + w, g / (g + w)], axis=-1)
    n = np.stack([X, v, 1 / (g + w)], axis=-1)
    with np.errstate(all="ignore"):
        val = _cell_value(cell, diag, n)
    return np.where(np.isfinite(val), val, 0)


def chart_lhs(cell: CellSection, g, Xp, y, wp):
    """(tau.f~)(z_3 h) at h(g, X = Xp + x y + y, y, x = (wp - g)/g), from open-cell coordinates."""
    diag = np.stack([-1 / g, -y / g, 1 / y], axis=-1)
    n = np.stack([-Xp, -wp, -g / y], axis=-1)
    with np.errstate(all="ignore"):
        val = _cell_value(cell, diag, n)
    return np.where(np.isfinite(val), val, 0)


def shalika_matrix3(g, X, y, x) -> np.ndarray:
    """z_3 h for the odd Shalika coordinates (g, X, y, x)."""
    return z_matrix(3).astype(float)[None] @ _shalika3(g, X, y, x)


def _lambda_js3(s, f, phi, eta, psi, rtol, max_points):
    """GL_3 open-orbit integral in coordinates h(g, X, y, x), dh = d^x g dX dy dx.

    Two section shapes are supported: an open-cell section f, and tau.f~ for such f.
    Each gets a chart in which the open-cell coordinates of z_3 h become integration
    variables, and the section is evaluated from those coordinates (evaluating it on the
    matrix itself loses all precision once |g| is tiny).  For tau.f~ the slowly decaying
    y-tail is rotated into the half-plane where the additive character decays.
    """
    decay = _omega_guard(f, eta, s)
    T = _tail_span(decay, rtol)
    einv = char_inv(eta)
    Rphi = _decay_radius(_line_fn(phi))

    def weight(g, oscill, phival):
        # psi-bar written as psi_{-a} so that it continues analytically in complex y
        return (char_array(einv, g) * psi_array(psi.conj(), oscill) * phival
                * np.exp(s * np.log(np.abs(g))))

    if isinstance(f, CellSection):
        R = f.radius

        def integrand(P):
            t, X, v, w = P.T
            acc = 0
            phiw = phi.eval_line(w)
            for eps in (1.0, -1.0):
                g = eps * np.exp(t)
                acc = acc + chart_rhs(f, g, X, v, w) * weight(g, X - w * v, phiw)
            return acc

        q = _boxed(integrand, -T, T, [-R, -R, -Rphi], [R, R, Rphi], [8, 4, 4], rtol, max_points)
        return complex(q.value), q

    if not _is_dual_cell(f):
        raise ValueError("GL_3 integrals support open-cell sections and their tau-translated duals")
    cell = f.base.base
    prof = cell.profile
    w13, c13 = prof.widths[1], prof.centers[1]
    w23, c23 = prof.widths[2], prof.centers[2]
    R12 = abs(prof.centers[0]) + 3.5 * prof.widths[0]
    R13 = abs(c13) + 3.5 * w13
    R23 = abs(c23) + 6 * w23
    t_hi = min(T, math.log(Rphi + R13) + 1)
    kappa = -float(psi.a.re)  # the y-dependence is exp(2 pi i kappa y)
    sk = 1.0 if kappa > 0 else -1.0
    U = 5 / abs(kappa)

    def chart(P, region):
        t, Xp, wp, lam = P.T
        total = 0
        for eps in (1.0, -1.0):
            g = eps * np.exp(t)
            w = wp - g
            phiw = phi.eval_line(w)
            # keep |g/y| small on the rotated contour so the profile stays bounded there;
            # Y1 must be smooth in g or the radial quadrature stalls
            Y1 = np.hypot(1.0, 2 * np.abs(g) / w23 + 2 * abs(c23))
            ylo = np.abs(g) / R23
            for side in (1.0, -1.0):
                if region == "inner":
                    span = np.log(Y1) - np.log(ylo)
                    y = side * np.exp(np.log(ylo) + lam * span)
                    jac = np.abs(y) * span
                else:
                    y = side * Y1 + 1j * sk * lam * U
                    jac = 1j * sk * side * U
                total = total + chart_lhs(cell, g, Xp, y, wp) * weight(g, Xp + y, phiw) * jac / np.abs(g)
        return total

    lows, highs = [-R12, -R13, 0.0], [R12, R13, 1.0]
    q1 = _boxed(lambda P: chart(P, "inner"), -T, t_hi, lows, highs, [8, 4, 4], rtol, max_points,
                core_panels=8)
    q2 = _boxed(lambda P: chart(P, "outer"), -T, t_hi, lows, highs, [8, 4, 2], rtol, max_points)
    val = complex(q1.value) + complex(q2.value)
    q = QuadResult(val, q1.error + q2.error, q1.points + q2.points, q1.converged and q2.converged,
                   q1.dim_errors + q2.dim_errors, q1.panels + q2.panels)
    return val, q


def z_js_m2(s, f: Section, phi: SchwartzFn, eta: MultChar | None = None, psi: AddChar | None = None,
            *, regularize: bool = False, rtol: float = 1e-10, details: bool = False,
            whittaker_one: complex | None = None):
    """int W_f(diag(g, g)) eta^{-1}(g) phi(g) |g|^s d^x g with W_f the psi-Whittaker function.

    diag(g, g) is central, so W_f(diag(g, g)) = omega_f(g) W_f(1) and a single Jacquet
    integral is needed; pass it as ``whittaker_one`` to reuse it across calls.
    """
    eta = eta or MultChar(REAL)
    psi = psi or AddChar(REAL)
    _check_jacquet(f, regularize)
    e0 = _center_exponent(f, eta, complex(s))
    if e0 <= 0:
        raise DomainError(f"torus integral diverges at s = {s}")
    s = complex(s)
    einv = char_inv(eta)
    omega = f.central_character()
    R = _decay_radius(_line_fn(phi))
    t_lo, t_hi = -_tail_span(e0, rtol), math.log(R) + 1
    if whittaker_one is None:
        W1, dg = whittaker_gl2(f, np.eye(2), psi, regularize=regularize, rtol=rtol / 10, details=True)
    else:
        W1, dg = whittaker_one, {"points": 0}
    cost = {"points": dg["points"]}
    w = omega * einv

    def integrand(t):
        vals = 0
        for eps in (1.0, -1.0):
            vals = vals + _torus_char(w, eps, t) * phi.eval_line(eps * np.exp(t))
        return W1 * vals * np.exp(s * t)

    q = gk_adaptive(integrand, t_lo, t_hi, rtol=rtol, initial=max(6, int((t_hi - t_lo) / 8)))
    diag = {**q.diagnostics(), "points": q.points + cost["points"]}
    return (complex(q.value), diag) if details else complex(q.value)


# ---------------------------------------------------------------- verification: m = 2, 3


def dual_side(f: Section) -> Section:
    """tau_m . f~."""
    return TranslatedSection(DualSection(f), tau_matrix(f.m).astype(float))


def verify_js_fe(s, f: Section, phi: SchwartzFn, eta: MultChar | None = None,
                 psi: AddChar | None = None, tol: float | None = None,
                 max_points: int = DEFAULT_MAX_POINTS, rtol: float | None = None) -> VerifyReport:
    """Lambda(1-s, tau.f~, F_psi phi) against eta(-1)^{mn} prod gamma(s, xi_i xi_j eta^{-1}, psi) Lambda(s, f, phi)."""
    eta = eta or MultChar(REAL)
    psi = psi or AddChar(REAL)
    s = complex(s)
    m = f.m
    tol = tol if tol is not None else (1e-5 if m == 2 else 1e-3)
    rv, q1 = lambda_js(s, f, phi, eta, psi, rtol=rtol, max_points=max_points, details=True)
    lv, q2 = lambda_js(1 - s, dual_side(f), phi.fourier(psi), char_inv(eta), psi.conj(), rtol=rtol,
                       max_points=max_points, details=True)
    gam = js_gamma_full(f.xi, eta, psi).eval(s)
    params = {"m": m, "s": _cplx(s), "xi": [str(c) for c in f.xi.chars], "eta": str(eta)}
    return VerifyReport.build(f"js-fe-m{m}", params, lv, gam * rv, tol,
                              {**_merge(q1, q2), "lambda_s": rv, "lambda_dual": lv, "gamma": gam})


def verify_js_mf2(s, f: Section, phi: SchwartzFn, eta: MultChar | None = None, psi: AddChar | None = None,
                  tol: float = 1e-5) -> VerifyReport:
    """Lambda_JS(s, f, phi) = Z_JS(s, W_f, phi) at m = 2 (the gamma product is empty)."""
    eta = eta or MultChar(REAL)
    psi = psi or AddChar(REAL)
    lam, q = lambda_js(s, f, phi, eta, psi, details=True)
    z, dz = z_js_m2(s, f, phi, eta, psi, details=True)
    params = {"m": 2, "s": _cplx(s), "xi": [str(c) for c in f.xi.chars], "eta": str(eta)}
    diag = {"points": q.points + dz["points"], "error": q.error + dz["error"],
            "converged": q.converged and dz["converged"]}
    return VerifyReport.build("js-mf-m2", params, lam, z, tol, diag)


def verify_js_fe2_whittaker(s, f: Section, phi: SchwartzFn, eta: MultChar | None = None,
                            psi: AddChar | None = None, tol: float = 1e-5) -> VerifyReport:
    """Z(1-s, tau.W~, F_psi phi)/L(1-s, dual) against eta(-1)^2 eps(s) Z(s, W, phi)/L(s) at m = 2."""
    eta = eta or MultChar(REAL)
    psi = psi or AddChar(REAL)
    s = complex(s)
    z, d1 = z_js_m2(s, f, phi, eta, psi, details=True)
    zd, d2 = z_js_m2(1 - s, dual_side(f), phi.fourier(psi), char_inv(eta), psi.conj(), details=True)
    L = extsq_L(f.xi, eta).eval(s)
    Ld = extsq_L(f.xi.dual(), char_inv(eta)).eval(1 - s)
    eps = extsq_eps(f.xi, eta, psi).eval(s)
    sign = eta.sign_value() ** 2
    params = {"m": 2, "s": _cplx(s), "xi": [str(c) for c in f.xi.chars], "eta": str(eta)}
    diag = {"points": d1["points"] + d2["points"], "error": d1["error"] + d2["error"],
            "converged": d1["converged"] and d2["converged"]}
    return VerifyReport.build("js-fe2-whittaker", params, zd / Ld, sign * eps * z / L, tol, diag)


# ---------------------------------------------------------------- n = 1: Shalika and Friedberg-Jacquet


def lambda_rs_n1(s, f: Section, phi: SchwartzFn, eta: MultChar | None = None, rtol: float = 1e-11,
                 details: bool = False):
    """int f(z_2 diag(g, g)) phi(g) eta^{-1}(g) |g|^s d^x g; f may be a list of sections."""
    eta = eta or MultChar(REAL)
    fs = f if isinstance(f, (list, tuple)) else [f]
    s = complex(s)
    for sec in fs:
        if sec.m != 2:
            raise ValueError("the n = 1 integral needs GL_2 sections")
        if _center_exponent(sec, eta, s) <= 0:
            raise DomainError(f"integral diverges at s = {s}")
    e0 = min(_center_exponent(sec, eta, s) for sec in fs)
    einv = char_inv(eta)
    R = _decay_radius(_line_fn(phi))
    t_lo, t_hi = -_tail_span(e0, rtol), math.log(R) + 1

    # f(z_2 diag(g, g)) = omega(g) f(z_2): only the value at z_2 is needed
    z2 = z_matrix(2).astype(float)[None]
    base = np.array([complex(sec.eval(z2)[0]) for sec in fs])
    chars = [sec.central_character() * einv for sec in fs]

    def integrand(t):
        out = np.zeros((len(t), len(fs)), dtype=complex)
        for eps in (1.0, -1.0):
            phiv = phi.eval_line(eps * np.exp(t)) * np.exp(s * t)
            for b in range(len(fs)):
                out[:, b] += base[b] * _torus_char(chars[b], eps, t) * phiv
        return out

    q = gk_adaptive(integrand, t_lo, t_hi, rtol=rtol, initial=max(6, int((t_hi - t_lo) / 8)))
    val = np.asarray(q.value).reshape(len(fs))
    out = val if isinstance(f, (list, tuple)) else complex(val[0])
    return (out, q.diagnostics()) if details else out


def _order(xi: InducedTuple, eta: MultChar) -> int:
    return d_xi(xi, eta)


def rs_functional(f: Section | list, phi: SchwartzFn, eta: MultChar | None = None, nodes=LIMIT_NODES):
    """lambda'(f): the value at s = 0 of s^{d} Lambda_RS(s, f, phi), by polynomial extrapolation."""
    eta = eta or MultChar(REAL)
    fs = f if isinstance(f, (list, tuple)) else [f]
    d = _order(fs[0].xi, eta)
    ys = [np.asarray(lambda_rs_n1(sv, list(fs), phi, eta)) * sv**d for sv in nodes]
    vals = np.array([neville_at_zero(nodes, [y[b] for y in ys]) for b in range(len(fs))])
    return vals if isinstance(f, (list, tuple)) else complex(vals[0])


def shalika_functional(f: Section, phi: SchwartzFn, eta: MultChar | None = None,
                       psi: AddChar | None = None, regularize: bool = False, nodes=LIMIT_NODES) -> complex:
    """lambda(f): the value at s = 0 of s^{d} Lambda_JS(s, f, phi) (m = 2)."""
    eta = eta or MultChar(REAL)
    psi = psi or AddChar(REAL)
    d = _order(f.xi, eta)
    ys = [lambda_js(sv, f, phi, eta, psi, regularize=regularize) * sv**d for sv in nodes]
    return neville_at_zero(nodes, ys)


def z_js_normalized_at_zero(f: Section, phi: SchwartzFn, eta: MultChar | None = None,
                            psi: AddChar | None = None, regularize: bool = False,
                            nodes=LIMIT_NODES) -> complex:
    """Z_JS(s, W_f, phi)/L(s, xi_1 xi_2 eta^{-1}) continued to s = 0."""
    eta = eta or MultChar(REAL)
    psi = psi or AddChar(REAL)
    L = extsq_L(f.xi, eta)
    W1 = whittaker_gl2(f, np.eye(2), psi, regularize=regularize, rtol=1e-11)
    ys = [z_js_m2(sv, f, phi, eta, psi, regularize=regularize, whittaker_one=W1) / L.eval(sv)
          for sv in nodes]
    return neville_at_zero(nodes, ys)


def pole_log_slope(f: Section, phi: SchwartzFn, eta: MultChar | None = None, psi: AddChar | None = None,
                   s1: float = 0.1, s2: float = 0.05, regularize: bool = False) -> float:
    """d log|Lambda_JS| / d log s between s1 and s2."""
    a = abs(lambda_js(s1, f, phi, eta, psi, regularize=regularize))
    b = abs(lambda_js(s2, f, phi, eta, psi, regularize=regularize))
    return math.log(b / a) / math.log(s2 / s1)


def verify_shalika_vanishing_n1(f: Section | Sequence[Section], phi: SchwartzFn, eta: MultChar | None = None,
                                psi: AddChar | None = None, tol: float = 1e-4,
                                regularize: bool = True) -> VerifyReport:
    """For phi(0) = 0 the normalized integral at s = 0 vanishes; each f is measured against
    the scale |W_f(1)| * max|phi|."""
    eta = eta or MultChar(REAL)
    psi = psi or AddChar(REAL)
    fs = list(f) if isinstance(f, (list, tuple)) else [f]
    _shalika_guards(fs[0].xi, eta)
    if abs(phi.eval_line(np.array([0.0]))[0]) > 1e-14:
        raise ValueError("the vanishing statement needs phi(0) = 0")
    grid = np.linspace(-6, 6, 1201)
    phimax = float(np.max(np.abs(phi.eval_line(grid))))
    worst = 0.0
    vals = []
    for sec in fs:
        z0 = z_js_normalized_at_zero(sec, phi, eta, psi, regularize=regularize)
        scale = abs(whittaker_gl2(sec, np.eye(2), psi, regularize=regularize)) * phimax
        vals.append(z0)
        worst = max(worst, abs(z0) / scale)
    rep = VerifyReport.build("shalika-vanish-n1", {"count": len(fs), "eta": str(eta)},
                             worst, 0.0, tol, {"values": vals, "relative": worst})
    rep.residual = worst
    rep.passed = worst <= tol
    return rep


def _shalika_guards(xi: InducedTuple, eta: MultChar):
    if xi.m != 2:
        raise ValueError("the n = 1 statements need GL_2 data")
    if not is_eta_symmetric(xi, eta):
        raise DomainError("xi is not eta-symmetric")
    if not is_whittaker_type(xi):
        raise DomainError("xi fails the Whittaker-type condition")
    half = float(char_re(eta)) / 2
    for r in xi.real_parts():
        if abs(float(r) - half) >= 0.25:
            raise DomainError("xi is not nearly tempered relative to eta")


def gamma1() -> np.ndarray:
    return np.array([[1.0, 1.0], [0.0, 1.0]])


def lambda_fj(s, f: CellSection, chi: MultChar, phi: SchwartzFn, eta: MultChar | None = None,
              rtol: float = 1e-9, details: bool = False):
    """int lambda'(gamma_1 diag(g, 1) . f) chi(g) |g|^{s - 1/2} d^x g over the open orbit."""
    eta = eta or MultChar(REAL)
    _sharp_guard(f)
    s = complex(s)

    def integrand(t):
        out = 0
        for eps in (1.0, -1.0):
            g = eps * np.exp(t)
            secs = [f.translate(gamma1() @ np.diag([gv, 1.0])) for gv in g]
            lam = rs_functional(secs, phi, eta)
            out = out + lam * char_array(chi, g)
        return out * np.exp((s - 0.5) * t)

    span = _bump_span(f)
    q = gk_adaptive(integrand, -span, span, rtol=rtol, initial=8)
    return (complex(q.value), q.diagnostics()) if details else complex(q.value)


def z_fj(s, f: CellSection, chi: MultChar, phi: SchwartzFn, eta: MultChar | None = None,
         psi: AddChar | None = None, rtol: float = 1e-9, details: bool = False):
    """int lambda(diag(g, 1) . f) chi(g) |g|^{s - 1/2} d^x g.

    The center acts on translates of f by the central character, so the open-orbit integral
    of diag(g,1).f splits as (Tate integral of phi) x W_f(diag(g,1)); the Tate factor's
    normalized value at s = 0 is computed once by extrapolation.
    """
    eta = eta or MultChar(REAL)
    psi = psi or AddChar(REAL)
    _sharp_guard(f)
    s = complex(s)
    d = _order(f.xi, eta)
    omega = f.central_character() * char_inv(eta)
    c = neville_at_zero(LIMIT_NODES, [tate_zeta(sv, omega, phi) * sv**d for sv in LIMIT_NODES])
    sig = s.real + float(char_re(chi)) + float(char_re(f.xi.chars[0]))
    if sig <= 0:
        raise DomainError(f"Z_FJ diverges at s = {s}")
    t_lo = -_tail_span(sig, rtol)
    t_hi = math.log(80.0)

    def integrand(t):
        out = 0
        for eps in (1.0, -1.0):
            g = eps * np.exp(t)
            D = np.zeros((len(t), 2, 2))
            D[:, 0, 0] = g
            D[:, 1, 1] = 1
            W = whittaker_gl2(f, D, psi, rtol=rtol / 10)
            out = out + W * char_array(chi, g)
        return c * out * np.exp((s - 0.5) * t)

    q = gk_adaptive(integrand, t_lo, t_hi, rtol=rtol, initial=max(8, int((t_hi - t_lo) / 3)))
    return (complex(q.value), q.diagnostics()) if details else complex(q.value)


def _sharp_guard(f: Section):
    if not (isinstance(f, CellSection) and f.m == 2 and f.vanishes_at_origin):
        raise ValueError("f must be supported in the open orbit: use an open-cell section whose "
                         "profile vanishes to infinite order at 0")


def _bump_span(f: CellSection) -> float:
    """Range of log|g| outside of which f(gamma_1 diag(g,1)) is negligible."""
    r = np.exp(np.linspace(-8, 8, 1601))
    v = np.abs(f.profile(1 / r[:, None]))
    idx = np.nonzero(v > 1e-18 * v.max())[0]
    return float(max(abs(np.log(r[idx[0]])), abs(np.log(r[idx[-1]])))) + 0.5


def verify_mfsha_n1(s, f: CellSection, chi: MultChar, eta: MultChar | None = None,
                    psi: AddChar | None = None, phi: SchwartzFn | None = None,
                    tol: float = 1e-3) -> VerifyReport:
    """Lambda_FJ(s, f, chi) against gamma(s, xi_1 chi, psi) Z_FJ(s, W_f, chi)."""
    from .schwartz import gaussian

    eta = eta or MultChar(REAL)
    psi = psi or AddChar(REAL)
    phi = phi or gaussian(REAL)
    _shalika_guards(f.xi, eta)
    _sharp_guard(f)
    s = complex(s)
    lam, d1 = lambda_fj(s, f, chi, phi, eta, details=True)
    z, d2 = z_fj(s, f, chi, phi, eta, psi, details=True)
    gam = tate_gamma(f.xi.chars[0] * chi, psi).eval(s)
    params = {"n": 1, "s": _cplx(s), "xi": [str(c) for c in f.xi.chars], "chi": str(chi), "eta": str(eta)}
    diag = {"points": d1["points"] + d2["points"], "error": d1["error"] + d2["error"],
            "converged": d1["converged"] and d2["converged"], "gamma": gam}
    return VerifyReport.build("mfsha-n1", params, lam, gam * z, tol, diag)


__all__ = [
    "DomainError", "VerifyReport", "TSV_HEADER", "GroupElems", "group_elements", "tau_matrix",
    "tate_zeta", "verify_tate_fe", "whittaker_gl2", "lambda_js", "z_js_m2", "dual_side",
    "verify_js_fe", "verify_js_mf2", "verify_js_fe2_whittaker", "lambda_rs_n1", "rs_functional",
    "shalika_functional", "z_js_normalized_at_zero", "pole_log_slope", "verify_shalika_vanishing_n1",
    "lambda_fj", "z_fj", "verify_mfsha_n1", "neville_at_zero", "KSection", "CellSection",
]
