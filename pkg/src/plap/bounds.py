"""Norm inequalities on the Dirichlet space, lambda thresholds, regimes.

The seven inequality constants (a.1)-(a.7) relate power sums of u over the
interior (or of pairwise differences over all vertices) to powers of the
Euclidean norm.  The thresholds lambda1, lambda2, lambda3(gamma), the minimal
annulus radius gamma0 and the admissible spike height t0(lambda) are closed
formulas in the instance constants; which existence/multiplicity regime
applies is read off from the exponent relations and the thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .calculus import DirichletFunction, norm
from .errors import DomainError, DegenerateExponent, GammaTooSmall
from .model import InstanceConstants, ProblemSpec

_ITEMS = ("a1", "a2", "a3", "a4", "a5", "a6", "a7")

# Comparisons between two float evaluations of a true inequality may be off
# by a few ulp at equality cases; allow that much and no more.
_FP_SLACK = 1e-12


def inequality_bound(which: str, c: InstanceConstants, m: float | None = None):
    """Constant(s) of the named inequality.

    a1/a2/a3/a7 return a single constant K: the bound reads lhs <= K ||u||^m
    (a3: >=; a7: lhs <= K ||u||).  a4/a5/a6 return a pair (K1, K2): the bound
    reads lhs >= K1 ||u||^(p-) - K2 (a4) or lhs <= K1 ||u||^(pbar+/p+) + K2.
    """
    if which not in _ITEMS:
        raise DomainError(f"unknown inequality {which!r}")
    S, dS, Sbar = c.n_interior, c.n_boundary, c.n_vertices
    if which in ("a1", "a2", "a3"):
        if m is None:
            raise DomainError(f"{which} needs the exponent m")
        lo = 1.0 if which == "a1" else 2.0
        if m < lo:
            raise DomainError(f"{which} requires m >= {lo:g}, got m = {m}")
    if which == "a1":
        return float(S)
    if which == "a2":
        return 2.0 ** m * Sbar * S
    if which == "a3":
        return 2.0 ** (-m / 2.0) * dS ** (m / 2.0) * Sbar ** (1.0 - m)
    if which == "a4":
        pm = c.p_minus
        return (2.0 ** (-pm / 2.0) * dS ** (pm / 2.0) * Sbar ** (1.0 - pm), float(S))
    if which == "a5":
        return (c.max_weight * 2.0 ** c.pbar_plus * Sbar * S, c.max_weight * Sbar ** 2)
    if which == "a6":
        return (float(S), float(S))
    return math.sqrt(Sbar)  # a7


def check_inequality(
    which: str, spec: ProblemSpec, u: DirichletFunction, m: float | None = None
) -> tuple[float, float, bool]:
    """Evaluate both sides of the named inequality for this u.

    Returns (lhs, rhs, holds); "holds" allows a 1e-12 relative rounding slack.
    """
    from .model import instance_constants

    c = instance_constants(spec)
    g = spec.graph
    ui = u.values[: g.n_interior]
    nu = norm(u)

    def all_pair_diffs() -> np.ndarray:
        return np.abs(u.values[None, :] - u.values[:, None])

    if which == "a1":
        K = inequality_bound(which, c, m)
        lhs = float(np.sum(np.abs(ui) ** m))
        rhs = K * nu ** m
        upper = True
    elif which == "a2":
        K = inequality_bound(which, c, m)
        lhs = float(np.sum(all_pair_diffs() ** m))
        rhs = K * nu ** m
        upper = True
    elif which == "a3":
        K = inequality_bound(which, c, m)
        lhs = float(np.sum(np.abs(ui) ** m))
        rhs = K * nu ** m
        upper = False
    elif which == "a4":
        K1, K2 = inequality_bound(which, c)
        lhs = float(np.sum(np.abs(ui) ** spec.p.interior()))
        rhs = K1 * nu ** c.p_minus - K2
        upper = False
    elif which == "a5":
        K1, K2 = inequality_bound(which, c)
        diffs = all_pair_diffs()
        lhs = float(np.sum(diffs ** spec.p.values[:, None] * spec.graph.weights))
        rhs = K1 * nu ** c.pbar_plus + K2
        upper = True
    elif which == "a6":
        K1, K2 = inequality_bound(which, c)
        lhs = float(np.sum(np.abs(ui) ** spec.p.interior()))
        rhs = K1 * nu ** c.p_plus + K2
        upper = True
    elif which == "a7":
        K = inequality_bound(which, c)
        lhs = float(np.max(np.abs(ui)))
        rhs = K * nu
        upper = True
    else:
        raise DomainError(f"unknown inequality {which!r}")

    slack = _FP_SLACK * (1.0 + abs(lhs) + abs(rhs))
    holds = lhs <= rhs + slack if upper else lhs >= rhs - slack
    return lhs, rhs, bool(holds)


@dataclass(frozen=True)
class LambdaThresholds:
    """Closed-form parameter thresholds of an instance.

    lambda3 and t0 stay parametric (they depend on gamma resp. lambda); call
    the methods of the same name.
    """

    lambda1: float
    lambda2: float
    gamma0: float
    omega_radius: float
    constants: InstanceConstants

    def lambda3(self, gamma: float) -> float:
        c = self.constants
        if gamma <= self.gamma0:
            raise GammaTooSmall(f"gamma = {gamma:g} must exceed gamma0 = {self.gamma0:.6g}")
        S, dS, Sbar = c.n_interior, c.n_boundary, c.n_vertices
        pm = c.p_minus
        # q_minus is factored out of the difference: the two numerator terms
        # can involve huge q against O(1) geometry factors.
        core = 2.0 ** (-pm / 2.0) * dS ** (pm / 2.0) * Sbar ** (1.0 - pm) * gamma ** pm - S
        num = c.q_minus * core
        den = (c.phi2_max * gamma ** c.m2_plus + c.phi2_max
               + c.psi2_max * math.sqrt(Sbar) * gamma) * S
        return num / den

    def t0(self, lam: float) -> float:
        c = self.constants
        if c.p_minus == c.m1_plus:
            raise DegenerateExponent("t0 is undefined when p^- equals m1^+")
        S, dS = c.n_interior, c.n_boundary
        num = 2.0 * lam * (c.phi1_min / c.m1_plus + c.psi1_min) * c.p_minus
        den = c.max_weight * (2 * S + dS - 1) + 2.0 * c.q_plus
        return min(1.0, (num / den) ** (1.0 / (c.p_minus - c.m1_plus)))


def lambda_thresholds(c: InstanceConstants, gamma: float | None = None) -> LambdaThresholds:
    """Compute lambda1, lambda2, gamma0 and the omega radius.

    Raises DomainError when the instance has no growth envelope, and
    GammaTooSmall when a gamma <= gamma0 is supplied.
    """
    if not c.has_envelope:
        raise DomainError("thresholds need a growth envelope on the nonlinearity")
    S, dS, Sbar = c.n_interior, c.n_boundary, c.n_vertices
    pm, pp = c.p_minus, c.p_plus
    lambda1 = (c.q_minus / pp) * 2.0 ** (-pm / 2.0) * dS ** (pm / 2.0) * Sbar ** (1.0 - pm) \
        / ((c.phi2_max / c.m2_minus + c.psi2_max * math.sqrt(Sbar)) * S)
    lambda2 = (c.q_minus / pp) * 2.0 ** (-pp / 2.0) * dS ** (pp / 2.0) \
        * Sbar ** (1.0 - pp) * Sbar ** (-pp / 2.0) \
        / ((c.phi2_max / c.m2_minus * Sbar ** (-c.m2_minus / 2.0) + c.psi2_max) * S)
    gamma0 = math.sqrt(2.0) * math.sqrt(dS) * Sbar
    th = LambdaThresholds(
        lambda1=lambda1, lambda2=lambda2, gamma0=gamma0,
        omega_radius=Sbar ** (-0.5), constants=c,
    )
    if gamma is not None and gamma <= gamma0:
        raise GammaTooSmall(f"gamma = {gamma:g} must exceed gamma0 = {gamma0:.6g}")
    return th


class RegimeTag(str, Enum):
    DIRECT_ALL_LAMBDA = "DirectAllLambda"
    DIRECT_BOUNDED = "DirectBounded"
    EKELAND = "Ekeland"
    TWO_SOLUTIONS = "TwoSolutions"
    TWO_SOLUTIONS_KKT = "TwoSolutionsKKT"


@dataclass(frozen=True)
class Regime:
    tags: frozenset[RegimeTag]

    def has(self, tag: RegimeTag) -> bool:
        return tag in self.tags

    def sorted_names(self) -> list[str]:
        return sorted(t.value for t in self.tags)

    @property
    def promises_solution(self) -> bool:
        return bool(self.tags)


def classify_regime(
    c: InstanceConstants, lam: float, gamma: float | None = None
) -> Regime:
    """Which existence/multiplicity statements apply to (constants, lambda, gamma).

    Tags are independent; several may hold at once.  Instances without a
    growth envelope get the empty tag set.
    """
    if lam <= 0:
        raise DomainError("lambda must be positive")
    tags: set[RegimeTag] = set()
    if not c.has_envelope:
        return Regime(frozenset())
    th = lambda_thresholds(c)
    if c.m2_plus < c.p_minus:
        tags.add(RegimeTag.DIRECT_ALL_LAMBDA)
    if c.m2_plus == c.p_minus and lam < th.lambda1:
        tags.add(RegimeTag.DIRECT_BOUNDED)
    if c.p_minus != c.m1_plus and lam < th.lambda2:
        tags.add(RegimeTag.EKELAND)
    if c.m1_minus > c.pbar_plus and lam < th.lambda2:
        tags.add(RegimeTag.TWO_SOLUTIONS)
    if gamma is not None and c.m1_minus > c.pbar_plus:
        if gamma > th.gamma0 and lam < th.lambda3(gamma):
            tags.add(RegimeTag.TWO_SOLUTIONS_KKT)
    return Regime(frozenset(tags))
