"""Command-line front end: local factors, weight combinatorics and the numeric identity checks.

Output is JSON by default, with a versioned top-level "schema" field and exact rationals
rendered as "p/q".  ``--format tsv`` gives one row per verification and ``--format value``
prints only the payload.  Exit codes: 0 success or pass, 1 failed verification, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Sequence

import numpy as np

from .branching import balanced_shifts
from .cohomweights import (InfinityType, PureWeight, character_of, critical_places, omega_exponent,
                           xi_ratio)
from .factorcalc import (InducedTuple, d_xi, extsq_L, extsq_eps, extsq_gamma_big, extsq_modified_L,
                         fj_factors, in_omega_domain, induction_gamma_identity, is_eta_symmetric,
                         is_whittaker_type)
from .fieldchar import AddChar, LocalField, MultChar, QI, fraction_str, parse_qi
from .meromorph import tate_L, tate_eps, tate_gamma

BUDGET_ENV = "LFCALC_MAX_POINTS"
OMEGA_NAMES = ("1", "i", "-1", "-i")


@dataclass
class CliConfig:
    max_points: int = 60_000_000
    tolerances: dict = field(default_factory=lambda: {
        "tate-fe": None, "js-fe": None, "js-mf": 1e-5, "mfsha": 1e-3,
        "gamma-identity": 1e-10, "shalika-vanish": 1e-4,
    })
    format: str = "json"
    seed: int = 0

    MIN_POINTS = 100_000

    def validate(self):
        if self.max_points < self.MIN_POINTS:
            raise ValueError(f"point budget must be at least {self.MIN_POINTS}")
        for k, v in self.tolerances.items():
            if v is not None and not v > 0:
                raise ValueError(f"tolerance for {k} must be positive")
        if self.format not in ("json", "tsv", "pretty", "value"):
            raise ValueError(f"unknown output format {self.format!r}")

    @classmethod
    def load(cls, path: str | None, env=os.environ) -> CliConfig:
        cfg = cls()
        if path:
            with open(path) as fh:
                data = json.load(fh)
            known = {f.name for f in fields(cls)}
            unknown = set(data) - known
            if unknown:
                raise ValueError(f"unknown config keys: {sorted(unknown)}")
            for k, v in data.items():
                if k == "tolerances":
                    cfg.tolerances = {**cfg.tolerances, **v}
                else:
                    setattr(cfg, k, v)
        if env.get(BUDGET_ENV):
            cfg.max_points = int(env[BUDGET_ENV])
        return cfg


# ---------------------------------------------------------------- parsing


def _ints(text: str) -> tuple:
    return tuple(int(x) for x in text.split(",") if x.strip())


def parse_char(F: LocalField, text: str) -> MultChar:
    """'t[:sgn][:N=k][:c=k:a=r1,r2]' with t a Gaussian rational, e.g. '1/2', '0.1:sgn', '1/3+1/2i:N=2'."""
    parts = text.split(":")
    t = parse_qi(parts[0] or "0")
    delta, N, cond, angles = 0, 0, 0, ()
    for p in parts[1:]:
        if p == "sgn":
            delta = 1
        elif p.startswith("N="):
            N = int(p[2:])
        elif p.startswith("c="):
            cond = int(p[2:])
        elif p.startswith("a="):
            angles = tuple(Fraction(x) for x in p[2:].split(","))
        else:
            raise ValueError(f"cannot parse character modifier {p!r}")
    if F.kind == "R":
        return MultChar(F, t, delta=delta)
    if F.kind == "C":
        return MultChar(F, t, N=N)
    return MultChar(F, t, conductor=cond, angles=angles)


def parse_tuple(F: LocalField, text: str) -> InducedTuple:
    """Characters separated by ';' (or plain exponents separated by ',')."""
    items = text.split(";") if ";" in text else text.split(",")
    return InducedTuple(tuple(parse_char(F, x.strip()) for x in items if x.strip()))


def parse_weight(mu: str, places: str | None) -> PureWeight:
    vecs = tuple(_ints(v) for v in mu.split(";"))
    kinds = tuple(places.split(",")) if places else ("real",) * len(vecs)
    return PureWeight(kinds, vecs)


def parse_s(text: str) -> complex:
    z = parse_qi(text)
    return complex(float(z.re), float(z.im))


# ---------------------------------------------------------------- output


def _jsonable(x):
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, QI):
        from .fieldchar import qi_json
        return qi_json(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


def emit(schema: str, payload, fmt: str, out) -> None:
    if fmt == "value":
        out.write(json.dumps(_jsonable(payload)) + "\n")
    elif fmt == "pretty":
        out.write(json.dumps({"schema": schema, "value": _jsonable(payload)}, indent=2) + "\n")
    else:
        out.write(json.dumps({"schema": schema, "value": _jsonable(payload)}, sort_keys=True) + "\n")


def _mero(m) -> dict:
    return {"factor": m.to_json(), "text": m.pretty()}


# ---------------------------------------------------------------- subcommands


def cmd_gamma(a, cfg, out):
    F = LocalField.parse(a.field)
    w = parse_char(F, a.char)
    psi = AddChar(F, parse_qi(a.psi))
    payload = {"char": str(w), "L": _mero(tate_L(w)), "eps": _mero(tate_eps(w, psi)),
               "gamma": _mero(tate_gamma(w, psi))}
    if a.s is not None:
        s = parse_s(a.s)
        payload["at"] = {"s": s, "L": tate_L(w).eval(s), "eps": tate_eps(w, psi).eval(s),
                         "gamma": tate_gamma(w, psi).eval(s)}
    emit("lfcalc.gamma/1", payload, cfg.format, out)
    return 0


def cmd_extsq(a, cfg, out):
    F = LocalField.parse(a.field)
    xi = parse_tuple(F, a.xi)
    eta = parse_char(F, a.eta)
    psi = AddChar(F)
    payload = {"L": _mero(extsq_L(xi, eta)), "eps": _mero(extsq_eps(xi, eta, psi)),
               "modified_L": _mero(extsq_modified_L(xi, eta, psi)),
               "whittaker_type": bool(is_whittaker_type(xi)), "eta_symmetric": is_eta_symmetric(xi, eta),
               "omega_domain": in_omega_domain(xi, eta)}
    if xi.m % 2 == 0:
        G, _ = extsq_gamma_big(xi, eta, psi)
        payload["Gamma"] = _mero(G)
        payload["d_xi"] = d_xi(xi, eta, psi)
    emit("lfcalc.extsq/1", payload, cfg.format, out)
    return 0


def cmd_fj(a, cfg, out):
    F = LocalField.parse(a.field)
    xi = parse_tuple(F, a.xi)
    chi = parse_char(F, a.chi)
    mod, std = fj_factors(xi, chi, AddChar(F))
    emit("lfcalc.fj-factor/1", {"modifying": _mero(mod), "standard_L": _mero(std)}, cfg.format, out)
    return 0


def _tau(a) -> InfinityType:
    quad = _ints(a.quad) if a.quad else ()
    return InfinityType(_ints(a.dchi), quad)


def cmd_critical(a, cfg, out):
    mu = parse_weight(a.mu, a.places)
    chars = character_of(_tau(a), mu.places)
    emit("lfcalc.critical/1", [fraction_str(x) for x in critical_places(mu, chars)], cfg.format, out)
    return 0


def cmd_balanced(a, cfg, out):
    mu = parse_weight(a.mu, a.places)
    emit("lfcalc.balanced/1", balanced_shifts(mu, _tau(a)), cfg.format, out)
    return 0


def cmd_omega(a, cfg, out):
    mu = parse_weight(a.mu, a.places)
    emit("lfcalc.omega/1", OMEGA_NAMES[omega_exponent(mu, _tau(a))], cfg.format, out)
    return 0


def cmd_xi(a, cfg, out):
    mu = parse_weight(a.mu, a.places)
    chi = character_of(_tau(a), mu.places)[0]
    pts = [parse_s(x) for x in a.s.split(",")]
    emit("lfcalc.xi/1", [{"s": s, "value": xi_ratio(mu, chi, s)} for s in pts], cfg.format, out)
    return 0


def cmd_elements(a, cfg, out):
    from .sections import group_elements
    emit("lfcalc.elements/1", group_elements(a.m), cfg.format, out)
    return 0


def _phi(F: LocalField, name: str):
    from .schwartz import ball, gaussian, hermite
    if F.kind == "P":
        k = int(name.split(":")[1]) if name.startswith("ball:") else 0
        return ball(F.prime, 1, None, k)
    if name == "gaussian":
        return gaussian(F)
    if name.startswith("hermite:"):
        ks = _ints(name.split(":")[1])
        return hermite(F, ks)
    raise ValueError(f"unknown test function {name!r}")


def _section(xi: InducedTuple, kind: str):
    from .sections import KSection, bump_cell, gaussian_cell
    if kind == "spherical":
        return KSection.spherical(xi)
    if kind == "gaussian":
        return gaussian_cell(xi)
    if kind == "bump":
        return bump_cell(xi)
    raise ValueError(f"unknown section {kind!r}")


def cmd_verify(a, cfg, out):
    from . import zetaverify as zv
    from .schwartz import gaussian, hermite

    F = LocalField.parse(a.field)
    tol = cfg.tolerances.get(a.identity)
    kw = {} if tol is None else {"tol": tol}
    if a.identity == "tate-fe":
        rep = zv.verify_tate_fe(parse_s(a.s), parse_char(F, a.char), _phi(F, a.phi), **kw)
    elif a.identity == "gamma-identity":
        if a.xi:
            xi = parse_tuple(F, a.xi)
        else:
            rng = np.random.default_rng(cfg.seed)
            exps = [Fraction(int(v), 20) for v in rng.integers(-6, 7, size=2 * a.n)]
            xi = InducedTuple(tuple(MultChar(F, QI.of(e)) for e in exps))
        rep = induction_gamma_identity(xi, parse_char(F, a.eta), AddChar(F), parse_s(a.s), **kw)
    else:
        if F.kind != "R":
            raise ValueError("the open-orbit identities are implemented over R")
        xi = parse_tuple(F, a.xi)
        eta = parse_char(F, a.eta)
        if a.identity == "js-fe":
            kind = a.section or ("spherical" if xi.m == 2 else "gaussian")
            rep = zv.verify_js_fe(parse_s(a.s), _section(xi, kind), _phi(F, a.phi), eta,
                                  max_points=cfg.max_points, **kw)
        elif a.identity == "js-mf":
            rep = zv.verify_js_mf2(parse_s(a.s), _section(xi, a.section or "spherical"), _phi(F, a.phi),
                                   eta, **kw)
        elif a.identity == "mfsha":
            rep = zv.verify_mfsha_n1(parse_s(a.s), _section(xi, "bump"), parse_char(F, a.chi), eta, **kw)
        elif a.identity == "shalika-vanish":
            from .sections import KSection
            phi0 = hermite(F, (2,)) + gaussian(F).scaled(2)  # 4x^2 e^{-pi x^2}
            secs = [KSection.spherical(xi), _section(xi, "gaussian")]
            rep = zv.verify_shalika_vanishing_n1(secs, phi0, eta, **kw)
        else:  # pragma: no cover - argparse restricts the choices
            raise ValueError(a.identity)
    # the test-function choice lives only on the command line; keep it in the hashed params
    if a.identity in ("tate-fe", "js-fe", "js-mf"):
        rep.params["phi"] = a.phi
    if cfg.format == "tsv":
        out.write(zv.TSV_HEADER + "\n" + rep.tsv_row() + "\n")
    elif cfg.format == "value":
        out.write(json.dumps({"pass": rep.passed, "residual": rep.residual}) + "\n")
    else:
        out.write(json.dumps(_jsonable(rep.to_json()), sort_keys=True,
                             indent=2 if cfg.format == "pretty" else None) + "\n")
    return 0 if rep.passed else 1


# ---------------------------------------------------------------- argument parser


def _weight_args(p):
    p.add_argument("--mu", required=True, help="weights, ';' between embeddings, e.g. 1,0 or 2,1;1,0")
    p.add_argument("--places", help="comma list of real/complex (default: all real)")
    p.add_argument("--dchi", required=True, help="integer exponent per embedding")
    p.add_argument("--quad", help="quadratic sign per place (+1/-1)")


def _common(defaults: bool) -> argparse.ArgumentParser:
    # accepted both before and after the subcommand; the subcommand copy must not
    # overwrite a value given earlier, hence SUPPRESS there
    p = argparse.ArgumentParser(add_help=False)
    d = None if defaults else argparse.SUPPRESS
    p.add_argument("--config", default=d, help="JSON config file (max_points, tolerances, format, seed)")
    p.add_argument("--format", default=d, choices=["json", "tsv", "pretty", "value"])
    p.add_argument("--seed", default=d, type=int)
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lfcalc", description=__doc__.splitlines()[0],
                                 parents=[_common(True)])
    common = _common(False)
    sub = ap.add_subparsers(dest="cmd", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    p = sub.add_parser("gamma", help="L, epsilon and gamma factors of a character")
    p.add_argument("--field", default="R")
    p.add_argument("--char", default="0", help="e.g. 1/2, 0.1:sgn, 1/3:N=2, 0:c=1:a=1/2")
    p.add_argument("--psi", default="1", help="additive character scale")
    p.add_argument("--s", help="also evaluate at this point")
    p.set_defaults(fn=cmd_gamma)

    p = sub.add_parser("extsq", help="exterior-square factors of an induced tuple")
    p.add_argument("--field", default="R")
    p.add_argument("--xi", required=True, help="exponents 'a,b,..' or characters 'c1;c2;..'")
    p.add_argument("--eta", default="0")
    p.set_defaults(fn=cmd_extsq)

    p = sub.add_parser("fj-factor", help="modifying factor and standard L-factor")
    p.add_argument("--field", default="R")
    p.add_argument("--xi", required=True)
    p.add_argument("--chi", default="0")
    p.set_defaults(fn=cmd_fj)

    for name, fn, help_ in (("critical", cmd_critical, "critical places 1/2 + j"),
                            ("balanced", cmd_balanced, "balanced shifts of the infinity type"),
                            ("omega", cmd_omega, "the fourth-root-of-unity constant")):
        p = sub.add_parser(name, help=help_)
        _weight_args(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("xi", help="gamma/L ratio that should be constant in s")
    _weight_args(p)
    p.add_argument("--s", default="0.3,0.7+0.2i,1.4-0.5i")
    p.set_defaults(fn=cmd_xi)

    p = sub.add_parser("elements", help="the group elements used by the integrals")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(fn=cmd_elements)

    p = sub.add_parser("verify", help="numeric identity checks")
    p.add_argument("identity", choices=["tate-fe", "js-fe", "js-mf", "mfsha", "gamma-identity",
                                        "shalika-vanish"])
    p.add_argument("--field", default="R")
    p.add_argument("--char", default="1/10+1/5i", help="tate-fe character")
    p.add_argument("--phi", default="gaussian", help="gaussian, hermite:k, or ball:k over Q_p")
    p.add_argument("--xi", help="induced tuple")
    p.add_argument("--m", type=int, help="expected tuple length")
    p.add_argument("--n", type=int, default=1, help="gamma-identity: half-length of a random tuple")
    p.add_argument("--eta", default="0")
    p.add_argument("--chi", default="0")
    p.add_argument("--s", default="1/2")
    p.add_argument("--section", choices=["spherical", "gaussian", "bump"])
    p.set_defaults(fn=cmd_verify)
    return ap


def _glue_negative_values(argv: list) -> list:
    """Turn '--xi -0.1,0,0.1' into '--xi=-0.1,0,0.1' so argparse does not read a flag."""
    out: list = []
    for tok in argv:
        if (out and out[-1].startswith("--") and "=" not in out[-1] and len(tok) > 1
                and tok[0] == "-" and (tok[1].isdigit() or tok[1] == ".")):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = CliConfig.load(a.config)
        if a.format:
            cfg.format = a.format
        if a.seed is not None:
            cfg.seed = a.seed
        cfg.validate()
        if a.cmd == "verify":
            if a.identity not in ("tate-fe", "gamma-identity") and not a.xi:
                ap.error("--xi is required for this identity")
            if a.m is not None and a.xi and len(parse_tuple(LocalField.parse(a.field), a.xi).chars) != a.m:
                raise ValueError(f"--xi does not have length {a.m}")
        return a.fn(a, cfg, out)
    except SystemExit as e:
        return int(e.code or 0)
    except (ValueError, KeyError, OSError) as e:
        print(f"lfcalc: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
