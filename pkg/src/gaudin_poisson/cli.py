"""Command-line harness: ``analyze``, ``skew-inverse`` and ``verify <suite>``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from . import brackets as br
from . import realg
from .braiding import (Braiding, NotSkewInvertible, ValidationFailed, analyze, braiding_from_json,
                       check_rtrace_lemma, diagonal_twist, generic_twist_factors, make_braiding)
from .reports import CheckReport
from .scalar import rational_str
from .tensorops import LegOperator

PRESETS = ("flip", "diag-twist", "dj-hecke")
SUITES = ("jacobi", "trace-involution", "gaudin", "braided-gaudin", "re-iso", "rtrace-lemma", "taylor",
          "remark1-negative")


class InputError(ValueError):
    pass


@dataclass
class SuiteConfig:
    suite: str
    n: int = 2
    sites: Optional[int] = None
    poles: Optional[List[Fraction]] = None
    r: int = 1
    q: Fraction = Fraction(2)
    hbar: Fraction = Fraction(1)
    preset: Optional[str] = None
    braiding_file: Optional[str] = None
    twist_file: Optional[str] = None
    bracket: str = "local"
    pow_max: Optional[int] = None
    der_max: Optional[int] = None
    degree_bound: int = 2
    seed: int = 0
    fmt: str = "text"
    sign: int = 1
    extra: Dict = field(default_factory=dict)

    def validate(self):
        if self.n < 1:
            raise InputError("--n must be >= 1")
        if self.r < 1:
            raise InputError("--r must be >= 1")
        if self.poles is not None:
            if self.sites is not None and self.sites != len(self.poles):
                raise InputError(f"--sites {self.sites} disagrees with {len(self.poles)} poles")
            if len(set(self.poles)) != len(self.poles):
                raise InputError("poles must be pairwise distinct")
        for name in ("pow_max", "der_max"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise InputError(f"--{name.replace('_', '-')} must be >= 0")

    def pole_list(self) -> List[Fraction]:
        if self.poles is not None:
            return self.poles
        return [Fraction(p) for p in range(self.sites or 2)]


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _poles(text: str) -> List[Fraction]:
    return [_fraction(t) for t in text.split(",") if t.strip()]


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}")


def build_braiding(cfg: SuiteConfig, default: str = "flip") -> Braiding:
    if cfg.braiding_file:
        return braiding_from_json(_load_json(cfg.braiding_file))
    if cfg.twist_file:
        data = _load_json(cfg.twist_file)
        factors = data["factors"] if isinstance(data, dict) else data
        return make_braiding("diagonal_twist", factors=[[Fraction(str(x)) for x in row] for row in factors])
    preset = cfg.preset or default
    if preset == "flip":
        return make_braiding("flip", cfg.n)
    if preset == "diag-twist":
        return make_braiding("diagonal_twist", factors=generic_twist_factors(cfg.n))
    if preset == "dj-hecke":
        return make_braiding("dj_hecke", cfg.n, cfg.q)
    raise InputError(f"unknown preset {preset!r}")


def expect_failure(rep: CheckReport, name: str) -> CheckReport:
    """A negative control passes when the wrapped check fails with a witness."""
    params = dict(rep.params)
    params["rejected_with"] = rep.witness
    ok = rep.status == "fail" and bool(rep.witness)
    return CheckReport(name, params, "pass" if ok else "fail",
                       None if ok else "the check was expected to fail but passed", rep.elapsed_ms)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def _twist(cfg: SuiteConfig) -> Braiding:
    B = build_braiding(cfg, "diag-twist")
    if not B.kind.is_involutive:
        raise InputError("braided suites need an involutive braiding")
    return B


def suite_jacobi(cfg: SuiteConfig) -> List[CheckReport]:
    d = 2 if cfg.der_max is None else cfg.der_max
    if cfg.bracket == "local":
        spec = br.BracketSpec("local_gaudin", cfg.n, cfg.r, sign=cfg.sign)
    elif cfg.bracket == "current":
        spec = br.BracketSpec("lie_poisson_current", cfg.n, cfg.r, sign=cfg.sign)
    else:
        spec = br.BracketSpec("braided_local", cfg.n, cfg.r, _twist(cfg), sign=cfg.sign)
    out = [br.check_jacobi(spec, d), br.check_antisymmetry(spec, d)]
    if cfg.bracket != "current":
        out += [br.check_grading(spec, d), br.check_derivation_compatibility(spec, max(d, 1))]
    if spec.braided:
        out.append(br.check_braided_axioms(spec, min(d, 1), seed=cfg.seed))
    return out


def suite_trace_involution(cfg: SuiteConfig) -> List[CheckReport]:
    p = 3 if cfg.pow_max is None else cfg.pow_max
    d = 0 if cfg.der_max is None else cfg.der_max
    if cfg.bracket == "braided":
        spec = br.BracketSpec("braided_local", cfg.n, cfg.r, _twist(cfg), sign=cfg.sign)
        return [br.check_trace_involution(spec, p, d), br.check_power_bracket(spec, min(p, 3))]
    spec = br.BracketSpec("local_gaudin", cfg.n, cfg.r, sign=cfg.sign)
    return [br.check_trace_involution(spec, p, d), br.check_power_bracket(spec, min(p, 3))]


def suite_gaudin(cfg: SuiteConfig) -> List[CheckReport]:
    poles = cfg.pole_list()
    p = 2 if cfg.pow_max is None else cfg.pow_max
    config = br.GaudinConfig(cfg.n, tuple(poles), cfg.r)
    out = [br.check_hamiltonian_commutativity(config), br.check_specialization(config)]
    if cfg.r == 1:
        out.append(br.check_global_trace_involution(config, p))
    return out


def suite_braided_gaudin(cfg: SuiteConfig) -> List[CheckReport]:
    B = _twist(cfg)
    config = br.GaudinConfig(B.dim, tuple(cfg.pole_list()), cfg.r, include_constant_C=False)
    return [br.check_specialization(config, B), br.check_hamiltonian_commutativity(config, B),
            br.check_braided_commutativity(B), br.check_rtrace_cyclic(B)]


def suite_re_iso(cfg: SuiteConfig) -> List[CheckReport]:
    B = build_braiding(cfg, "dj-hecke")
    out = [realg.check_relation_spans(B), realg.check_braided_lie(B)]
    if B.kind.is_hecke:
        out.append(realg.check_change_map(B, None, cfg.hbar))
        out.append(realg.check_coproduct(B, None, cfg.degree_bound, cfg.hbar))
    else:
        rels = realg.rea_relations(B, cfg.r, 1) if B.name != "flip" else realg.re_relations(B, cfg.hbar)
        out.append(realg.check_coproduct(B, None, cfg.degree_bound, cfg.hbar, rels))
    return out


def suite_rtrace_lemma(cfg: SuiteConfig) -> List[CheckReport]:
    B = build_braiding(cfg, "dj-hecke")
    out = [check_rtrace_lemma(B, 5, cfg.seed)]
    if B.kind.is_involutive:
        out.append(br.check_rtrace_cyclic(B))
    return out


def suite_taylor(cfg: SuiteConfig) -> List[CheckReport]:
    order = 6 if cfg.der_max is None else cfg.der_max
    out = [br.check_taylor_equivalence(br.BracketSpec("global_gaudin", cfg.n, 1, sign=cfg.sign), order),
           br.check_taylor_equivalence(br.BracketSpec("global_order2", cfg.n, 2, sign=cfg.sign), order)]
    if cfg.preset == "diag-twist" or cfg.twist_file:
        B = _twist(cfg)
        for r in (1, 2):
            out.append(br.check_taylor_equivalence(br.BracketSpec("braided_global", B.dim, r, B, sign=cfg.sign),
                                                   order))
    bad = br.BracketSpec("global_gaudin", cfg.n, 1, alpha=br.perturbed_alpha(1, 1, 0), sign=cfg.sign)
    out.append(expect_failure(br.check_taylor_equivalence(bad, order), "taylor_perturbed_rejected"))
    return out


def suite_current_negative(cfg: SuiteConfig) -> List[CheckReport]:
    spec = br.BracketSpec("lie_poisson_current", cfg.n, sign=cfg.sign)
    d = 2 if cfg.der_max is None else cfg.der_max
    return [br.check_jacobi(spec, min(d, 1)),
            expect_failure(br.check_derivation_compatibility(spec, max(d, 1)), "current_bracket_derivation_rejected")]


SUITE_RUNNERS: Dict[str, Callable[[SuiteConfig], List[CheckReport]]] = {
    "jacobi": suite_jacobi,
    "trace-involution": suite_trace_involution,
    "gaudin": suite_gaudin,
    "braided-gaudin": suite_braided_gaudin,
    "re-iso": suite_re_iso,
    "rtrace-lemma": suite_rtrace_lemma,
    "taylor": suite_taylor,
    "remark1-negative": suite_current_negative,
}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_braiding_flags(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--q", type=_fraction, default=Fraction(2))
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("--braiding", dest="braiding_file")
    p.add_argument("--twist", dest="twist_file")
    p.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaudin-poisson", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", help="Yang-Baxter check and classification of a braiding")
    _add_braiding_flags(a)
    s = sub.add_parser("skew-inverse", help="skew-inverse Psi and the operators B, C")
    _add_braiding_flags(s)
    v = sub.add_parser("verify", help="run a named check suite")
    v.add_argument("suite", choices=SUITES)
    _add_braiding_flags(v)
    v.add_argument("--sites", type=int)
    v.add_argument("--poles", type=_poles)
    v.add_argument("--r", type=int, default=1)
    v.add_argument("--hbar", type=_fraction, default=Fraction(1))
    v.add_argument("--bracket", choices=("local", "current", "braided"), default="local")
    v.add_argument("--pow-max", type=int)
    v.add_argument("--der-max", type=int)
    v.add_argument("--degree-bound", type=int, default=2)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--classical-sign", action="store_true")
    return parser


def _config(ns) -> SuiteConfig:
    cfg = SuiteConfig(getattr(ns, "suite", ns.command), n=ns.n, q=ns.q, preset=ns.preset,
                      braiding_file=ns.braiding_file, twist_file=ns.twist_file, fmt=ns.fmt)
    if ns.command == "verify":
        cfg.sites, cfg.poles, cfg.r, cfg.hbar = ns.sites, ns.poles, ns.r, ns.hbar
        cfg.bracket, cfg.pow_max, cfg.der_max = ns.bracket, ns.pow_max, ns.der_max
        cfg.degree_bound, cfg.seed = ns.degree_bound, ns.seed
        cfg.sign = -1 if ns.classical_sign else 1
    cfg.validate()
    return cfg


def _emit(obj: dict, text: str, fmt: str):
    print(json.dumps(obj, sort_keys=True) if fmt == "json" else text)


def _matrix_text(m) -> str:
    return "\n".join("  " + " ".join(rational_str(x) for x in row) for row in m)


def run(argv: Optional[List[str]] = None) -> int:
    parser = make_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(ns)
        if ns.command == "analyze":
            # a file is analyzed as a raw operator so that non-braidings get a witness
            if cfg.braiding_file:
                rep = analyze(LegOperator.from_json(_load_json(cfg.braiding_file)))
            else:
                rep = analyze(build_braiding(cfg, "flip"))
            d = rep.to_dict()
            text = f"ybe: {str(rep.ybe).lower()}, {rep.classification}"
            if rep.witness:
                text += f"\n    witness: {rep.witness}"
            _emit(d, text, cfg.fmt)
            return 0 if rep.ybe else 1
        if ns.command == "skew-inverse":
            B = build_braiding(cfg, "flip")
            try:
                sk = B.skew
            except NotSkewInvertible as exc:
                print(f"not skew-invertible: {exc}", file=sys.stderr)
                return 1
            d = {"psi": sk.psi.to_json(), "B": [[str(x) for x in r] for r in sk.b_op],
                 "C": [[str(x) for x in r] for r in sk.c_op]}
            _emit(d, f"B =\n{_matrix_text(sk.b_op)}\nC =\n{_matrix_text(sk.c_op)}", cfg.fmt)
            return 0
        reports = sorted(SUITE_RUNNERS[cfg.suite](cfg), key=lambda r: r.check)
    except (InputError, ValidationFailed, br.UnsupportedKind, br.DuplicatePoles, realg.NotHecke,
            realg.BoundTooSmall, NotSkewInvertible, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for rep in reports:
        print(rep.to_json() if cfg.fmt == "json" else str(rep))
    return 0 if all(r.passed for r in reports) else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
