"""Problem data: exponent field, potential, nonlinearity, growth envelope.

A full instance bundles a graph, a per-vertex exponent p >= 2, a strictly
positive interior potential q, a nonlinearity f(x, t) defined for t >= 0
together with a two-sided power growth envelope, and the source strength
lambda > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DomainError, InvariantError, NegativeArgument, QuadratureFailure
from .graphs import Graph, VertexId


def _vertex_array(
    graph: Graph, data, labels: Sequence[VertexId], what: str
) -> np.ndarray:
    """Accept a scalar, a sequence in vertex order, or a label->value map."""
    if isinstance(data, Mapping):
        missing = [v for v in labels if v not in data]
        if missing:
            raise InvariantError(f"{what}: no value for vertices {missing}")
        extra = [k for k in data if k not in labels]
        if extra:
            raise InvariantError(f"{what}: unknown vertices {extra}")
        return np.array([float(data[v]) for v in labels])
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 0:
        return np.full(len(labels), float(arr))
    if arr.shape != (len(labels),):
        raise InvariantError(f"{what}: expected {len(labels)} values, got shape {arr.shape}")
    return arr.copy()


@dataclass(frozen=True)
class ExponentField:
    """p: vertex -> [2, inf).  Extrema are cached over S and over all of S-bar."""

    graph: Graph
    values: np.ndarray

    def __post_init__(self):
        vals = _vertex_array(self.graph, self.values, self.graph.vertices, "p")
        bad = [v for v, pv in zip(self.graph.vertices, vals) if pv < 2.0]
        if bad:
            raise InvariantError(
                f"p({bad[0]}) = {vals[self.graph.index_of(bad[0])]:g} violates p: S-bar -> [2, inf)"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, graph: Graph, p: float) -> "ExponentField":
        return cls(graph, np.full(graph.n_vertices, float(p)))

    @property
    def p_minus(self) -> float:
        return float(self.values[: self.graph.n_interior].min())

    @property
    def p_plus(self) -> float:
        return float(self.values[: self.graph.n_interior].max())

    @property
    def pbar_minus(self) -> float:
        return float(self.values.min())

    @property
    def pbar_plus(self) -> float:
        return float(self.values.max())

    def interior(self) -> np.ndarray:
        return self.values[: self.graph.n_interior]


@dataclass(frozen=True)
class Potential:
    """q: interior vertex -> (0, inf)."""

    graph: Graph
    values: np.ndarray

    def __post_init__(self):
        vals = _vertex_array(self.graph, self.values, self.graph.interior, "q")
        bad = [v for v, qv in zip(self.graph.interior, vals) if qv <= 0.0]
        if bad:
            raise InvariantError(
                f"q({bad[0]}) <= 0 violates q: S -> (0, inf)"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, graph: Graph, q: float) -> "Potential":
        return cls(graph, np.full(graph.n_interior, float(q)))

    @property
    def q_minus(self) -> float:
        return float(self.values.min())

    @property
    def q_plus(self) -> float:
        return float(self.values.max())


@dataclass(frozen=True)
class GrowthEnvelope:
    """Two-sided power bounds on f over the interior:

        psi1(x) + phi1(x) t^(m1(x)-1)  <=  f(x, t)  <=  phi2(x) t^(m2(x)-1) + psi2(x)

    for all t >= 0, with m1, m2 >= 2 and phi/psi strictly positive.
    """

    graph: Graph
    m1: np.ndarray
    m2: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    psi1: np.ndarray
    psi2: np.ndarray

    def __post_init__(self):
        labels = self.graph.interior
        for name in ("m1", "m2", "phi1", "phi2", "psi1", "psi2"):
            arr = _vertex_array(self.graph, getattr(self, name), labels, name)
            lo = 2.0 if name in ("m1", "m2") else 0.0
            if name in ("m1", "m2"):
                if np.any(arr < lo):
                    raise InvariantError(f"{name} must be >= 2 everywhere")
            elif np.any(arr <= 0.0):
                raise InvariantError(f"{name} must be strictly positive")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def m1_minus(self) -> float:
        return float(self.m1.min())

    @property
    def m1_plus(self) -> float:
        return float(self.m1.max())

    @property
    def m2_minus(self) -> float:
        return float(self.m2.min())

    @property
    def m2_plus(self) -> float:
        return float(self.m2.max())

    @property
    def phi1_min(self) -> float:
        return float(self.phi1.min())

    @property
    def phi2_max(self) -> float:
        return float(self.phi2.max())

    @property
    def psi1_min(self) -> float:
        return float(self.psi1.min())

    @property
    def psi2_max(self) -> float:
        return float(self.psi2.max())


def _adaptive_simpson(fgrid: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                      tol: float = 1e-10, max_depth: int = 40) -> float:
    """Adaptive Simpson with interval bisection.

    Intervals are refined breadth first so every level needs one vectorized
    integrand evaluation; descent loops call this thousands of times.
    """
    if a == b:
        return 0.0
    f0, fm, f2 = (float(v) for v in fgrid(np.array([a, 0.5 * (a + b), b])))
    whole = (b - a) / 6.0 * (f0 + 4.0 * fm + f2)
    if not math.isfinite(whole):
        raise QuadratureFailure(f"non-finite integrand on [{a:g}, {b:g}]")
    # Pure absolute tolerance is unreachable in double precision once the
    # integral itself is large; allow relative slack at ~1e-13 of the value.
    eps = max(tol, 1e-13 * abs(whole))
    total = 0.0
    pending = [(a, b, f0, fm, f2, whole, eps)]
    for depth in range(max_depth + 1):
        if not pending:
            return total
        xs = []
        for x0, x2, *_ in pending:
            xm = 0.5 * (x0 + x2)
            xs.append(0.5 * (x0 + xm))
            xs.append(0.5 * (xm + x2))
        fv = fgrid(np.asarray(xs))
        nxt = []
        for k, (x0, x2, g0, g1, g2, S, e) in enumerate(pending):
            xm = 0.5 * (x0 + x2)
            fl, fr = float(fv[2 * k]), float(fv[2 * k + 1])
            left = (xm - x0) / 6.0 * (g0 + 4.0 * fl + g1)
            right = (x2 - xm) / 6.0 * (g1 + 4.0 * fr + g2)
            delta = left + right - S
            if not math.isfinite(delta):
                raise QuadratureFailure(f"non-finite integrand on [{x0:g}, {x2:g}]")
            if abs(delta) <= 15.0 * e:
                total += left + right + delta / 15.0
            else:
                half = 0.5 * e
                xl = 0.5 * (x0 + xm)
                xr = 0.5 * (xm + x2)
                nxt.append((x0, xm, g0, fl, g1, left, half))
                nxt.append((xm, x2, g1, fr, g2, right, half))
        pending = nxt
    raise QuadratureFailure(
        f"tolerance {tol:g} not reached at depth {max_depth} on [{a:g}, {b:g}]"
    )


class Nonlinearity:
    """Base class: f(x, t) for interior x and t >= 0, plus its primitive F.

    Subclasses provide ``_rate`` / ``_rate_grid`` and optionally a closed-form
    ``_primitive``; otherwise F falls back to adaptive quadrature.
    """

    kind = "custom"

    def __init__(self, graph: Graph, envelope: GrowthEnvelope | None):
        self.graph = graph
        self.envelope = envelope

    # -- scalar evaluation ----------------------------------------------

    def _rate(self, i: int, t: float) -> float:
        raise NotImplementedError

    def _primitive(self, i: int, t: float) -> float:
        return _adaptive_simpson(lambda ts: self._rate_grid(i, ts), 0.0, t)

    def _rate_grid(self, i: int, ts: np.ndarray) -> np.ndarray:
        return np.array([self._rate(i, float(t)) for t in ts])

    # -- vector evaluation over the interior ------------------------------

    def rate_vector(self, t: np.ndarray) -> np.ndarray:
        return np.array([self._rate(i, float(ti)) for i, ti in enumerate(t)])

    def primitive_vector(self, t: np.ndarray) -> np.ndarray:
        return np.array([self._primitive(i, float(ti)) for i, ti in enumerate(t)])

    def _interior_index(self, x: VertexId) -> int:
        i = self.graph.index_of(x)
        if i >= self.graph.n_interior:
            raise DomainError(f"nonlinearity is defined on interior vertices only, got {x!r}")
        return i


class PowerPlus(Nonlinearity):
    """f(x, t) = phi(x) t^(m(x)-1) + psi(x).

    phi = 0 is tolerated as a plain test fixture (constant source); such
    instances carry no growth envelope, so the threshold/regime machinery
    rejects them.
    """

    kind = "power_plus"

    def __init__(self, graph: Graph, phi, m, psi):
        labels = graph.interior
        self.phi = _vertex_array(graph, phi, labels, "phi")
        self.m = _vertex_array(graph, m, labels, "m")
        self.psi = _vertex_array(graph, psi, labels, "psi")
        if np.any(self.m < 2.0):
            raise InvariantError("m must be >= 2 everywhere")
        if np.any(self.phi < 0.0) or np.any(self.psi <= 0.0):
            raise InvariantError("need phi >= 0 and psi > 0")
        envelope = None
        if np.all(self.phi > 0.0):
            envelope = GrowthEnvelope(
                graph, m1=self.m, m2=self.m, phi1=self.phi, phi2=self.phi,
                psi1=self.psi, psi2=self.psi,
            )
        super().__init__(graph, envelope)

    def _rate(self, i, t):
        return float(self.phi[i]) * t ** (float(self.m[i]) - 1.0) + float(self.psi[i])

    def _rate_grid(self, i, ts):
        return self.phi[i] * ts ** (self.m[i] - 1.0) + self.psi[i]

    def _primitive(self, i, t):
        m = float(self.m[i])
        return float(self.phi[i]) / m * t ** m + float(self.psi[i]) * t

    def rate_vector(self, t):
        return self.phi * t ** (self.m - 1.0) + self.psi

    def primitive_vector(self, t):
        return self.phi / self.m * t ** self.m + self.psi * t


class ArctanPower(Nonlinearity):
    """Smooth benchmark nonlinearity with arctan-modulated power growth:

        f(x, t) = (t+1)^(1 - exp(-t^2) + m(x)) * ((2/pi) arctan t + phi(x))
                  + |sin t| + psi(x) + 1.

    Positive for all t >= 0 whenever phi, psi > 0.  The attached envelope is
    derived from the chain of elementary bounds
        psi+1 + phi t^(m-1)  <=  f  <=  2^m (1+phi) t^(m+1) + 2^m (1+phi) + psi + 2,
    i.e. m1 = m, m2 = m + 2, phi2 = 2^m (1+phi), psi2 = 2^m (1+phi) + psi + 2.
    """

    kind = "arctan_power"

    def __init__(self, graph: Graph, m, phi, psi):
        labels = graph.interior
        self.m = _vertex_array(graph, m, labels, "m")
        self.phi = _vertex_array(graph, phi, labels, "phi")
        self.psi = _vertex_array(graph, psi, labels, "psi")
        if np.any(self.m < 2.0):
            raise InvariantError("m must be >= 2 everywhere")
        if np.any(self.phi <= 0.0) or np.any(self.psi <= 0.0):
            raise InvariantError("need phi > 0 and psi > 0")
        bulk = 2.0 ** self.m * (1.0 + self.phi)
        envelope = GrowthEnvelope(
            graph, m1=self.m, m2=self.m + 2.0, phi1=self.phi, phi2=bulk,
            psi1=self.psi + 1.0, psi2=bulk + self.psi + 2.0,
        )
        super().__init__(graph, envelope)

    def _rate(self, i, t):
        m, phi, psi = float(self.m[i]), float(self.phi[i]), float(self.psi[i])
        expo = 1.0 - math.exp(-t * t) + m
        return (t + 1.0) ** expo * ((2.0 / math.pi) * math.atan(t) + phi) \
            + abs(math.sin(t)) + psi + 1.0

    def _rate_grid(self, i, ts):
        m, phi, psi = self.m[i], self.phi[i], self.psi[i]
        expo = 1.0 - np.exp(-ts * ts) + m
        return (ts + 1.0) ** expo * ((2.0 / np.pi) * np.arctan(ts) + phi) \
            + np.abs(np.sin(ts)) + psi + 1.0


class CustomNonlinearity(Nonlinearity):
    """Wrap an arbitrary callable f(label, t); primitive by quadrature."""

    kind = "custom"

    def __init__(self, graph: Graph, fn: Callable[[VertexId, float], float],
                 envelope: GrowthEnvelope | None = None,
                 primitive_fn: Callable[[VertexId, float], float] | None = None):
        super().__init__(graph, envelope)
        self._fn = fn
        self._primitive_fn = primitive_fn

    def _rate(self, i, t):
        return float(self._fn(self.graph.vertices[i], t))

    def _primitive(self, i, t):
        if self._primitive_fn is not None:
            return float(self._primitive_fn(self.graph.vertices[i], t))
        return super()._primitive(i, t)


def eval_f(n: Nonlinearity, x: VertexId, t: float) -> float:
    """f(x, t) for t >= 0."""
    if t < 0:
        raise NegativeArgument(f"f is only defined for t >= 0, got t = {t}")
    return n._rate(n._interior_index(x), float(t))


def primitive_F(n: Nonlinearity, x: VertexId, t: float) -> float:
    """F(x, t) = integral of f(x, .) from 0 to t, for t >= 0."""
    if t < 0:
        raise NegativeArgument(f"F is only defined for t >= 0, got t = {t}")
    if t == 0:
        return 0.0
    return n._primitive(n._interior_index(x), float(t))


@dataclass
class EnvelopeViolation:
    which: str  # "f_lower" | "f_upper" | "F_lower" | "F_upper"
    vertex: VertexId
    t: float
    value: float
    bound: float


@dataclass
class EnvelopeReport:
    grid: np.ndarray
    violations: list[EnvelopeViolation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def default_envelope_grid(scale: float = 1.0, points: int = 512) -> np.ndarray:
    grid = np.linspace(0.0, 10.0 * (1.0 + scale), points)
    grid[0] = 0.0
    return grid


def check_envelope(n: Nonlinearity, grid=None) -> EnvelopeReport:
    """Verify the declared growth envelope of ``n`` on a nonnegative grid.

    The pointwise bounds on f are checked at every grid point; the integrated
    bounds on F (which follow from the pointwise ones) are spot-checked on a
    coarser subgrid since F may require quadrature.
    """
    if n.envelope is None:
        raise DomainError("nonlinearity declares no growth envelope")
    env = n.envelope
    grid = default_envelope_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise DomainError("empty grid")
    if np.any(grid < 0):
        raise DomainError("grid points must be >= 0")
    report = EnvelopeReport(grid=grid)
    f_slack = 1e-12
    F_slack = 1e-8  # absorbs quadrature tolerance
    sub = grid[::8] if grid.size > 16 else grid
    for i, x in enumerate(n.graph.interior):
        fvals = n._rate_grid(i, grid)
        lower = env.psi1[i] + env.phi1[i] * grid ** (env.m1[i] - 1.0)
        upper = env.phi2[i] * grid ** (env.m2[i] - 1.0) + env.psi2[i]
        for t, fv, lo, up in zip(grid, fvals, lower, upper):
            if fv < lo - f_slack * (1.0 + abs(lo)):
                report.violations.append(EnvelopeViolation("f_lower", x, float(t), float(fv), float(lo)))
            if fv > up + f_slack * (1.0 + abs(up)):
                report.violations.append(EnvelopeViolation("f_upper", x, float(t), float(fv), float(up)))
        for t in sub:
            t = float(t)
            Fv = n._primitive(i, t)
            lo = float(env.psi1[i] * t + env.phi1[i] / env.m1[i] * t ** env.m1[i])
            up = float(env.phi2[i] / env.m2[i] * t ** env.m2[i] + env.psi2[i] * t)
            if Fv < lo - F_slack * (1.0 + abs(lo)):
                report.violations.append(EnvelopeViolation("F_lower", x, t, Fv, lo))
            if Fv > up + F_slack * (1.0 + abs(up)):
                report.violations.append(EnvelopeViolation("F_upper", x, t, Fv, up))
    return report


@dataclass(frozen=True)
class ProblemSpec:
    """A complete instance: graph, exponents, potential, nonlinearity, lambda."""

    graph: Graph
    p: ExponentField
    q: Potential
    f: Nonlinearity
    lam: float

    def __post_init__(self):
        if self.lam <= 0:
            raise InvariantError(f"lambda must be > 0, got {self.lam}")
        for part, name in ((self.p, "p"), (self.q, "q"), (self.f, "f")):
            if part.graph is not self.graph:
                raise InvariantError(f"{name} is bound to a different graph")

    @cached_property
    def _p_rows(self) -> np.ndarray:
        rows, _, _ = self.graph.ordered_pairs
        return self.p.values[rows]


@dataclass(frozen=True)
class InstanceConstants:
    """All scalar constants the threshold formulas consume."""

    n_interior: int
    n_boundary: int
    n_vertices: int
    max_weight: float
    p_minus: float
    p_plus: float
    pbar_minus: float
    pbar_plus: float
    q_minus: float
    q_plus: float
    m1_minus: float | None = None
    m1_plus: float | None = None
    m2_minus: float | None = None
    m2_plus: float | None = None
    phi1_min: float | None = None
    phi2_max: float | None = None
    psi1_min: float | None = None
    psi2_max: float | None = None

    @property
    def has_envelope(self) -> bool:
        return self.m1_minus is not None


def instance_constants(spec: ProblemSpec) -> InstanceConstants:
    """Collect cardinalities, weight/exponent/potential/envelope extrema."""
    g, p, q, env = spec.graph, spec.p, spec.q, spec.f.envelope
    kw = {}
    if env is not None:
        kw = dict(
            m1_minus=env.m1_minus, m1_plus=env.m1_plus,
            m2_minus=env.m2_minus, m2_plus=env.m2_plus,
            phi1_min=env.phi1_min, phi2_max=env.phi2_max,
            psi1_min=env.psi1_min, psi2_max=env.psi2_max,
        )
    return InstanceConstants(
        n_interior=g.n_interior, n_boundary=g.n_boundary, n_vertices=g.n_vertices,
        max_weight=g.max_weight(),
        p_minus=p.p_minus, p_plus=p.p_plus,
        pbar_minus=p.pbar_minus, pbar_plus=p.pbar_plus,
        q_minus=q.q_minus, q_plus=q.q_plus,
        **kw,
    )
