"""Acceptance criteria 1-10: exact assertions, one summary line per criterion.

Each criterion collects named sub-checks; a sub-check passes only with an exact
zero residue (or, for negative controls, a failure carrying a witness).  The
summary line also reports wall time against the criterion's budget.
"""
import math
import time
from fractions import Fraction

import pytest

from gaudin_poisson.braiding import (GENERAL, INVOLUTIVE, analyze, check_rtrace_lemma, classify, diagonal_twist,
                                     dj_hecke, flip_braiding, quadratic_relation, r_trace_leg, skew_inverse)
from gaudin_poisson.brackets import (BracketSpec, GaudinConfig, check_derivation_compatibility,
                                     check_global_trace_involution, check_hamiltonian_commutativity, check_jacobi,
                                     check_rtrace_cyclic, check_specialization, check_taylor_equivalence,
                                     check_trace_involution, perturbed_alpha)
from gaudin_poisson.realg import (braided_lie_constants, check_change_map, check_coproduct, check_relation_spans,
                                  rea_relations)
from gaudin_poisson.scalar import alpha_coeff, beta_coeff
from gaudin_poisson.tensorops import LegOperator, embed_leg, flip, partial_trace

RESULTS = {}

TWIST2 = diagonal_twist([[1, 2], [Fraction(1, 2), 1]])
TWIST3 = diagonal_twist([[1, 2, 3], [Fraction(1, 2), 1, Fraction(1, 5)], [Fraction(1, 3), 5, 1]])
INVOLUTIVE_PRESETS = [flip_braiding(2), flip_braiding(3), TWIST2, TWIST3]
HECKE_PRESETS = [dj_hecke(2, 2), dj_hecke(3, 2)]


class Criterion:
    def __init__(self, number, budget_s):
        self.number = number
        self.budget = budget_s
        self.failures = []
        self.count = 0

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def check(self, name, ok, witness=None):
        self.count += 1
        if not ok:
            self.failures.append(f"{name}: {witness}" if witness else name)

    def report(self, name, rep):
        self.check(name, rep.passed, rep.witness)

    def negative(self, name, rep):
        self.check(name, not rep.passed and bool(rep.witness), "expected a failure with a witness")

    def __exit__(self, *exc):
        elapsed = time.perf_counter() - self.t0
        if exc[0] is not None:
            self.failures.append(f"error: {exc[1]!r}")
        if elapsed > self.budget:
            self.failures.append(f"took {elapsed:.1f} s, budget {self.budget} s")
        RESULTS[self.number] = (not self.failures, self.count, elapsed, self.budget, self.failures)
        assert not self.failures, "; ".join(self.failures)


def test_criterion_01_coefficient_identities():
    with Criterion(1, 1) as c:
        c.check("alpha symmetry", all(alpha_coeff(r, k, l) == alpha_coeff(r, l, k)
                                      for r in range(1, 5) for k in range(11) for l in range(11)))
        c.check("beta cyclic invariance", all(
            beta_coeff(r, k, l, m) == beta_coeff(r, l, m, k) == beta_coeff(r, m, k, l)
            for r in range(1, 5) for k in range(9) for l in range(9) for m in range(9)))
        c.check("order-two scalar identity", all(
            alpha_coeff(2, k, 0) / math.factorial(k)
            == Fraction(1, math.factorial(k + 2)) - Fraction(2, math.factorial(k + 3)) for k in range(21)))


def test_criterion_02_taylor_equivalence():
    with Criterion(2, 5) as c:
        c.report("global r=1 vs local family", check_taylor_equivalence(BracketSpec("global_gaudin", 2), 6))
        c.report("global r=2 vs local family", check_taylor_equivalence(BracketSpec("global_order2", 2), 6))


def test_criterion_03_jacobi():
    with Criterion(3, 60) as c:
        for r in (1, 2, 3):
            c.report(f"local_gaudin r={r}", check_jacobi(BracketSpec("local_gaudin", 2, r), k_max=2))
        for r in (1, 2):
            c.report(f"braided_local twist n=2 r={r}", check_jacobi(BracketSpec("braided_local", 2, r, TWIST2),
                                                                    k_max=2))
        c.report("braided_local twist n=3 r=1", check_jacobi(BracketSpec("braided_local", 3, 1, TWIST3), k_max=1))


def test_criterion_04_trace_involution():
    with Criterion(4, 180) as c:
        for r in (1, 2):
            for n in (2, 3):
                c.report(f"local_gaudin r={r} n={n}",
                         check_trace_involution(BracketSpec("local_gaudin", n, r), pow_max=3))
        c.report("derivative traces m=1,2", check_trace_involution(BracketSpec("local_gaudin", 2, 1), pow_max=2,
                                                                   ders=[1, 2]))
        c.report("braided Tr^R twist n=2", check_trace_involution(BracketSpec("braided_local", 2, 1, TWIST2), 2))
        c.report("braided Tr^R twist n=3", check_trace_involution(BracketSpec("braided_local", 3, 1, TWIST3), 2))


def test_criterion_05_gaudin():
    with Criterion(5, 120) as c:
        poles = (0, 1, 2)
        C = ((Fraction(3, 2), 0), (0, Fraction(-2, 7)))
        c.report("Hamiltonians commute, scalar C",
                 check_hamiltonian_commutativity(GaudinConfig(2, poles, c_matrix=C)))
        c.report("Hamiltonians commute, symbolic C", check_hamiltonian_commutativity(GaudinConfig(2, poles)))
        for r in (1, 2):
            c.report(f"specialization r={r}", check_specialization(GaudinConfig(2, poles, r)))
        c.report("global trace involution k,l<=3",
                 check_global_trace_involution(GaudinConfig(2, poles), pow_max=3))


def test_criterion_06_braided_gaudin():
    with Criterion(6, 60) as c:
        for poles in ((0, 1), (0, 1, 2)):
            cfg = GaudinConfig(2, poles, include_constant_C=False)
            c.report(f"braided specialization N={len(poles)}", check_specialization(cfg, TWIST2))
            c.report(f"braided Hamiltonians N={len(poles)}", check_hamiltonian_commutativity(cfg, TWIST2))
        c.report("braided Hamiltonians twist n=3", check_hamiltonian_commutativity(
            GaudinConfig(3, (0, 1), include_constant_C=False), TWIST3))


def test_criterion_07_braiding_toolkit():
    with Criterion(7, 30) as c:
        for B in INVOLUTIVE_PRESETS:
            rep = analyze(B)
            c.check(f"{B.name} n={B.dim} YBE and involutive", rep.ybe and rep.classification == INVOLUTIVE,
                    rep.witness)
        for B in HECKE_PRESETS:
            R = B.matrix
            I = LegOperator.identity(B.dim, 2)
            hecke = (R - I.scale(2)) @ (R + I.scale(Fraction(1, 2)))
            c.check(f"dj_hecke n={B.dim} YBE", analyze(B).ybe)
            c.check(f"dj_hecke n={B.dim} Hecke identity", all(x == 0 for row in hecke.entries for x in row))
        for B in INVOLUTIVE_PRESETS + HECKE_PRESETS:
            sk = skew_inverse(B)
            P = flip(B.dim)
            c.check(f"{B.name} n={B.dim} skew identity 1",
                    partial_trace(embed_leg(B.matrix, 1, 3) @ embed_leg(sk.psi, 2, 3), 2) == P)
            c.check(f"{B.name} n={B.dim} skew identity 2",
                    partial_trace(embed_leg(sk.psi, 1, 3) @ embed_leg(B.matrix, 2, 3), 2) == P)
            c.check(f"{B.name} n={B.dim} Tr^R_2 R = I",
                    r_trace_leg(sk.c_op, B.mat, 2) == LegOperator.identity(B.dim))
            c.report(f"{B.name} n={B.dim} R-trace lemma", check_rtrace_lemma(B, samples=5, seed=0))
        c.report("Tr^R cyclic twist n=2", check_rtrace_cyclic(TWIST2))
        c.report("Tr^R cyclic twist n=3", check_rtrace_cyclic(TWIST3))


def test_criterion_08_rw_symmetry():
    with Criterion(8, 10) as c:
        for B in INVOLUTIVE_PRESETS:
            I = LegOperator.identity(B.dim ** 2, 2)
            c.check(f"{B.name} n={B.dim} R_W = Q", B.rw == B.q_op)
            c.check(f"{B.name} n={B.dim} R_W^2 = I", B.rw @ B.rw == I)
        for B in HECKE_PRESETS:
            c.check(f"dj_hecke n={B.dim} R_W YBE", analyze(B.rw).ybe)
            c.check(f"dj_hecke n={B.dim} R_W not a symmetry",
                    quadratic_relation(B.rw) is None and classify(B.rw) == GENERAL)


def test_criterion_09_re_algebra():
    with Criterion(9, 120) as c:
        c.report("change map dj_hecke(2,2) hbar=1", check_change_map(dj_hecke(2, 2), hbar=1))
        for B in INVOLUTIVE_PRESETS:
            c.report(f"{B.name} n={B.dim} relation spans equal", check_relation_spans(B, expect_equal=True))
        for B in HECKE_PRESETS:
            c.report(f"dj_hecke n={B.dim} relation spans differ", check_relation_spans(B, expect_equal=False))
        c.report("coproduct flip", check_coproduct(flip_braiding(2), hbar=1))
        c.report("coproduct twist REA", check_coproduct(TWIST2, relations=rea_relations(TWIST2, 1, 1)))
        c.report("coproduct dj_hecke", check_coproduct(dj_hecke(2, 2), hbar=1))
        scalars = set()
        for B in INVOLUTIVE_PRESETS + HECKE_PRESETS:
            res = braided_lie_constants(B)
            c.check(f"{B.name} n={B.dim} braided Jacobi", res.jacobi)
            c.check(f"{B.name} n={B.dim} braided skew-symmetry", res.skew_symmetry)
            scalars.add((res.cross_scalar, res.cross_transposed_B))
        c.check("cross-check scalar consistent", len(scalars) == 1 and None not in next(iter(scalars)),
                f"scalars {scalars}")


def test_criterion_10_negative_controls():
    with Criterion(10, 60) as c:
        c.negative("current bracket vs derivations",
                   check_derivation_compatibility(BracketSpec("lie_poisson_current", 2)))
        c.negative("perturbed alpha table, Taylor", check_taylor_equivalence(
            BracketSpec("global_gaudin", 2, alpha=perturbed_alpha(1, 1, 0)), 6))
        c.negative("perturbed alpha table r=2, Taylor", check_taylor_equivalence(
            BracketSpec("global_order2", 2, alpha=perturbed_alpha(2, 0, 1)), 6))
        for r in (1, 2):
            c.negative(f"wrong exponent {r + 1} for r={r}",
                       check_specialization(GaudinConfig(2, (0, 1), r), exponent=r + 1))
