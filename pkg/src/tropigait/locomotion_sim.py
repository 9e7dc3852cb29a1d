"""Discrete-event trajectory engine over gait system matrices.

A state stacks the n latest touchdown times on the n latest liftoff times;
one step is x(k) = A (x) x(k-1). Plans chain gait segments (the system
matrix is rebuilt at each boundary) and may postpone events: a disturbance
(k, i, d) delays event i of step k by d, folded into the step as an extra
oplus-input so downstream same-step constraints propagate through A0*.
Delays only ever push events later; advancing an event would silently break
the recursion's lower bounds and is rejected.

The verifier re-checks every step against the defining synchronization
equations (with any recorded disturbance inputs on the right-hand side), so
a trajectory edited after the fact fails even though a disturbed one passes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from tropigait import _backend
from tropigait.errors import (
    DimensionMismatch,
    NonMonotoneTrajectory,
    ValidationError,
)
from tropigait.gait_model import (
    Gait,
    GaitParams,
    build_P_Q,
    closed_form_eigenpair,
    gait_to_config,
    system_matrix,
    validate_gait,
)
from tropigait.maxplus_core import (
    EPSILON,
    MaxPlusMatrix,
    entries_close,
    is_epsilon,
    kleene_star,
    tolerance,
)


@dataclass(frozen=True)
class EventState:
    """Step counter plus the n touchdown and n liftoff times."""

    k: int
    t: np.ndarray
    l: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=np.float64).reshape(-1)
        l = np.asarray(self.l, dtype=np.float64).reshape(-1)
        if t.shape != l.shape:
            raise DimensionMismatch("touchdown and liftoff counts differ")
        t.setflags(write=False)
        l.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "l", l)

    @classmethod
    def from_vector(cls, k: int, vec) -> "EventState":
        vec = np.asarray(vec, dtype=np.float64).reshape(-1)
        if vec.size % 2:
            raise DimensionMismatch("state vectors stack t on l, so need even size")
        n = vec.size // 2
        return cls(k, vec[:n], vec[n:])

    @property
    def n(self) -> int:
        return self.t.size

    def vector(self) -> np.ndarray:
        return np.concatenate([self.t, self.l])

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.t).all() and np.isfinite(self.l).all())


@dataclass(frozen=True)
class Segment:
    gait: Gait
    params: GaitParams
    steps: int


@dataclass(frozen=True)
class Disturbance:
    """Postpone state entry ``index`` (0-based into [t l]) of step ``step``
    by ``delay`` time units."""

    step: int
    index: int
    delay: float


@dataclass
class SimulationPlan:
    segments: list
    disturbances: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.segments[0].gait.n

    @property
    def total_steps(self) -> int:
        return sum(seg.steps for seg in self.segments)

    def validate(self) -> None:
        if not self.segments:
            raise ValidationError("a plan needs at least one segment")
        n = self.segments[0].gait.n
        for seg in self.segments:
            validate_gait(seg.gait)
            if seg.gait.n != n:
                raise ValidationError("all segments must share the leg count")
            if not isinstance(seg.steps, int) or seg.steps < 0:
                raise ValidationError("segment steps must be a nonnegative integer")
        total = self.total_steps
        for d in self.disturbances:
            if d.delay < 0:
                raise ValidationError(
                    f"delay {d.delay} would advance an event; delays must be >= 0"
                )
            if not 1 <= d.step <= total:
                raise ValidationError(f"disturbance step {d.step} outside 1..{total}")
            if not 0 <= d.index < 2 * n:
                raise ValidationError(
                    f"disturbance index {d.index} outside 0..{2 * n - 1}"
                )


@dataclass
class Trajectory:
    """States plus the segment layout and any disturbance inputs applied."""

    states: list
    segments: list  # (Segment, index of its first produced state)
    inputs: dict  # step k -> oplus-input vector u(k), only disturbed steps

    @property
    def n(self) -> int:
        return self.states[0].n

    def to_csv(self) -> str:
        n = self.n
        header = ["k"] + [f"t{i}" for i in range(1, n + 1)] + [
            f"l{i}" for i in range(1, n + 1)
        ]
        lines = [",".join(header)]
        for s in self.states:
            cells = [str(s.k)] + [f"{v:.12g}" for v in s.t] + [f"{v:.12g}" for v in s.l]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        def enc(v):
            return "-inf" if is_epsilon(v) else float(v)

        return {
            "n": self.n,
            "states": [
                {"k": s.k, "t": [float(v) for v in s.t], "l": [float(v) for v in s.l]}
                for s in self.states
            ],
            "segments": [
                {
                    **gait_to_config(seg.gait, seg.params),
                    "steps": seg.steps,
                    "first_step": start,
                }
                for seg, start in self.segments
            ],
            "inputs": {
                str(k): [enc(v) for v in u] for k, u in sorted(self.inputs.items())
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def step(a: MaxPlusMatrix, x: EventState) -> EventState:
    """One application of the system matrix: x' = A (x) x, k+1."""
    a = MaxPlusMatrix(a)
    vec = x.vector()
    if a.cols != vec.size or not a.is_square:
        raise DimensionMismatch(
            f"system matrix {a.shape} does not act on a state of {vec.size}"
        )
    out = _backend.mul(a.asarray(), vec.reshape(-1, 1)).reshape(-1)
    return EventState.from_vector(x.k + 1, out)


def _initial_state(plan: SimulationPlan, x0) -> EventState:
    n = plan.n
    if x0 is None or (isinstance(x0, str) and x0 == "eigenvector"):
        seg = plan.segments[0]
        _, v = closed_form_eigenpair(seg.gait, seg.params)
        return EventState.from_vector(0, v.asarray().reshape(-1))
    if isinstance(x0, str) and x0 == "zeros":
        return EventState.from_vector(0, np.zeros(2 * n))
    if isinstance(x0, str):
        raise ValidationError(f"unknown initial-state mode {x0!r}")
    state = x0 if isinstance(x0, EventState) else EventState.from_vector(0, x0)
    if state.n != n:
        raise DimensionMismatch(
            f"initial state has {state.n} legs, plan has {n}"
        )
    if not state.is_finite():
        raise ValidationError("initial state must be finite")
    return EventState(0, state.t, state.l)


def simulate(plan: SimulationPlan, x0=None) -> Trajectory:
    """Run the plan from x0 (default: the first segment's eigenvector, i.e.
    start in steady state; "zeros" for transient studies)."""
    plan.validate()
    state = _initial_state(plan, x0)
    states = [state]
    inputs: dict[int, np.ndarray] = {}
    by_step: dict[int, list[Disturbance]] = {}
    for d in plan.disturbances:
        by_step.setdefault(d.step, []).append(d)
    segments = []
    k = 0
    for seg in plan.segments:
        mats = system_matrix(seg.gait, seg.params)
        a = mats.A.asarray()
        a0_star = kleene_star(mats.A0).asarray()
        segments.append((seg, len(states)))
        for _ in range(seg.steps):
            k += 1
            prev = states[-1].vector().reshape(-1, 1)
            nominal = _backend.mul(a, prev).reshape(-1)
            if k in by_step:
                u = np.full(2 * seg.gait.n, EPSILON)
                for d in by_step[k]:
                    u[d.index] = max(u[d.index], nominal[d.index] + d.delay)
                pushed = _backend.mul(a0_star, u.reshape(-1, 1)).reshape(-1)
                nominal = np.maximum(nominal, pushed)
                inputs[k] = u
            states.append(EventState.from_vector(k, nominal))
    return Trajectory(states, segments, inputs)


def _states_of(traj) -> list:
    return traj.states if isinstance(traj, Trajectory) else list(traj)


def detect_steady_state(traj, lam: float, tol: float | None = None):
    """Smallest step k with x(j+1) = lambda (x) x(j) for every remaining j;
    None if even the final pair disagrees."""
    states = _states_of(traj)
    tol = tolerance() if tol is None else tol
    last = len(states) - 1
    if last < 1:
        return None
    i = last - 1
    while i >= 0 and entries_close(
        states[i + 1].vector(), states[i].vector() + float(lam), tol
    ):
        i -= 1
    if i == last - 1:
        return None
    return states[i + 1].k


@dataclass(frozen=True)
class LegSchedule:
    """Per-leg stance and swing intervals, ready for rasterization."""

    leg_count: int
    stance: tuple  # per leg: ((start, end), ...)
    swing: tuple

    def to_dict(self) -> dict:
        return {
            "legs": [
                {
                    "leg": i + 1,
                    "stance": [[a, b] for (a, b) in self.stance[i]],
                    "swing": [[a, b] for (a, b) in self.swing[i]],
                }
                for i in range(self.leg_count)
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def span(self) -> tuple[float, float]:
        starts = [iv[0] for leg in (self.stance + self.swing) for iv in leg]
        ends = [iv[1] for leg in (self.stance + self.swing) for iv in leg]
        return min(starts), max(ends)


def extract_schedule(traj, params: GaitParams) -> LegSchedule:
    """Assemble intervals from consecutive events: leg i swings over
    [l_i(k), t_i(k)] and stands over [t_i(k), l_i(k+1)]."""
    states = _states_of(traj)
    if not states:
        raise ValidationError("cannot extract a schedule from an empty trajectory")
    n = states[0].n
    t = np.stack([s.t for s in states])
    l = np.stack([s.l for s in states])
    tol = tolerance()
    for series, kind in ((t, "touchdown"), (l, "liftoff")):
        drops = np.diff(series, axis=0) < -tol
        if drops.any():
            where = np.argwhere(drops)[0]
            raise NonMonotoneTrajectory(
                f"{kind} times of leg {where[1] + 1} decrease at step {where[0] + 1}"
            )
    stance = []
    swing = []
    for i in range(n):
        leg_swing = []
        leg_stance = []
        for k in range(len(states)):
            if l[k, i] > t[k, i] + tol:
                raise NonMonotoneTrajectory(
                    f"liftoff after touchdown within step {k} on leg {i + 1}"
                )
            leg_swing.append((float(l[k, i]), float(t[k, i])))
            if k + 1 < len(states):
                if t[k, i] > l[k + 1, i] + tol:
                    raise NonMonotoneTrajectory(
                        f"stance of leg {i + 1} at step {k} has negative length"
                    )
                leg_stance.append((float(t[k, i]), float(l[k + 1, i])))
        swing.append(tuple(leg_swing))
        stance.append(tuple(leg_stance))
    return LegSchedule(n, tuple(stance), tuple(swing))


@dataclass(frozen=True)
class Violation:
    step: int
    kind: str
    detail: str

    def to_dict(self) -> dict:
        return {"step": self.step, "kind": self.kind, "detail": self.detail}


@dataclass
class ScheduleReport:
    checked_steps: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "checked_steps": self.checked_steps,
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _verify_segment(states, inputs, g, params, tol, violations):
    n = g.n
    p, q = build_P_Q(g, params)
    pa, qa = p.asarray(), q.asarray()
    checked = 0
    for pos in range(1, len(states)):
        prev, cur = states[pos - 1], states[pos]
        k = cur.k
        u = inputs.get(k)
        u_t = u[:n] if u is not None else np.full(n, EPSILON)
        u_l = u[n:] if u is not None else np.full(n, EPSILON)
        t_rhs = np.maximum(params.tau_f + cur.l, u_t)
        for i in range(n):
            if not _close(cur.t[i], t_rhs[i], tol):
                violations.append(
                    Violation(
                        k,
                        "touchdown",
                        f"t{i + 1}({k}) = {cur.t[i]:g}, expected "
                        f"tau_f + l{i + 1}({k}) = {t_rhs[i]:g}",
                    )
                )
        l_rhs = np.maximum.reduce(
            [
                params.tau_g + prev.t,
                _backend.mul(pa, cur.t.reshape(-1, 1)).reshape(-1),
                _backend.mul(qa, prev.t.reshape(-1, 1)).reshape(-1),
                prev.l,
                u_l,
            ]
        )
        for i in range(n):
            if not _close(cur.l[i], l_rhs[i], tol):
                violations.append(
                    Violation(
                        k,
                        "liftoff",
                        f"l{i + 1}({k}) = {cur.l[i]:g}, expected synchronization "
                        f"bound {l_rhs[i]:g}",
                    )
                )
        for j in range(g.m - 1):
            floor = params.tau_delta + max(cur.t[qq - 1] for qq in g.groups[j])
            for qq in g.groups[j + 1]:
                if cur.l[qq - 1] < floor - tol:
                    violations.append(
                        Violation(
                            k,
                            "double-stance",
                            f"l{qq}({k}) = {cur.l[qq - 1]:g} ends the overlap "
                            f"before {floor:g}",
                        )
                    )
        floor = params.tau_delta + max(prev.t[qq - 1] for qq in g.groups[-1])
        for qq in g.groups[0]:
            if cur.l[qq - 1] < floor - tol:
                violations.append(
                    Violation(
                        k,
                        "double-stance",
                        f"l{qq}({k}) = {cur.l[qq - 1]:g} ends the wrap-around "
                        f"overlap before {floor:g}",
                    )
                )
        checked += 1
    return checked


def _close(a: float, b: float, tol: float) -> bool:
    if is_epsilon(a) or is_epsilon(b):
        return is_epsilon(a) and is_epsilon(b)
    return abs(a - b) <= tol


def verify_schedule(traj, g: Gait | None = None, params: GaitParams | None = None,
                    tol: float | None = None) -> ScheduleReport:
    """Check each step against the defining equations

        t(k) = tau_f (x) l(k)                          (oplus any input)
        l(k) = tau_g t(k-1) oplus P t(k) oplus Q t(k-1) oplus l(k-1)

    plus the double-stance overlap bounds, and report violations with step
    and leg indices. With no explicit gait, a Trajectory's own segment
    records are used."""
    tol = tolerance() if tol is None else tol
    violations: list[Violation] = []
    checked = 0
    if g is not None:
        if params is None:
            raise ValidationError("params are required when a gait is given")
        states = _states_of(traj)
        inputs = traj.inputs if isinstance(traj, Trajectory) else {}
        checked = _verify_segment(states, inputs, g, params, tol, violations)
    else:
        if not isinstance(traj, Trajectory):
            raise ValidationError(
                "a bare state list needs an explicit gait and params"
            )
        for seg, start in traj.segments:
            states = traj.states[start - 1 : start + seg.steps]
            checked += _verify_segment(
                states, traj.inputs, seg.gait, seg.params, tol, violations
            )
    return ScheduleReport(checked, violations)
