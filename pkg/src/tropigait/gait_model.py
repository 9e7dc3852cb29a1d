"""Gaits as ordered leg-group partitions, and the max-plus machinery
built on them.

A gait on n legs is an ordered partition l_1 < ... < l_m of {1..n}: all legs
of a group touch down together, and a group may lift off only once the
previous group has been on the ground for the double-stance time tau_delta.
From a gait and its timing parameters (tau_f swing, tau_g stance, tau_delta
double stance) the module constructs the synchronization matrices P and Q,
the one-step system matrix A = A0* (x) A1 on stacked touchdown/liftoff
times, and its permutation-normalized form A_bar.

For normal gaits (flattened order increasing) everything has a closed form:
the structural blocks Delta, Delta', V; the system matrix written in those
blocks; the eigenvalue

    lambda = max(m * (tau_f + tau_delta), tau_f + tau_g)

with its eigenvector; and the powers A_bar**r for r >= 2, which advance by
lambda per extra step. Two derived time scales recur: ``group_lag``
(tau_f + tau_delta), the steady-state delay between consecutive groups'
touchdowns, and ``cycle_min`` (tau_f + tau_g), the shortest cycle a single
leg can sustain.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from tropigait.errors import (
    AssumptionA1Violated,
    AssumptionA2Violated,
    BadExponent,
    BadIndex,
    NotNormalGait,
    NotPartition,
    ParseError,
    RunningGaitWarning,
)
from tropigait.maxplus_core import EPSILON, MaxPlusMatrix, kleene_star


@dataclass(frozen=True)
class Gait:
    """Ordered partition of leg indices 1..n; group order is significant,
    and so is the order inside a group (two orderings of the same set are
    different gaits that normalize to the same normal gait)."""

    n: int
    groups: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, n: int, groups) -> "Gait":
        return cls(int(n), tuple(tuple(int(q) for q in grp) for grp in groups))

    @property
    def m(self) -> int:
        return len(self.groups)

    def __str__(self) -> str:
        return "<".join("{" + ",".join(str(q) for q in grp) + "}" for grp in self.groups)


@dataclass(frozen=True)
class GaitParams:
    """Swing, stance, and double-stance durations."""

    tau_f: float
    tau_g: float
    tau_delta: float

    @property
    def group_lag(self) -> float:
        """tau_f + tau_delta: touchdown-to-touchdown lag between groups."""
        return self.tau_f + self.tau_delta

    @property
    def cycle_min(self) -> float:
        """tau_f + tau_g: shortest sustainable single-leg cycle."""
        return self.tau_f + self.tau_g

    def to_dict(self) -> dict:
        return {
            "tau_f": self.tau_f,
            "tau_g": self.tau_g,
            "tau_delta": self.tau_delta,
        }


def validate_gait(g: Gait) -> None:
    """Check the partition invariants; raises NotPartition or BadIndex."""
    if g.m == 0:
        raise NotPartition("a gait needs at least one group")
    seen: set[int] = set()
    count = 0
    for grp in g.groups:
        if len(grp) == 0:
            raise NotPartition("empty groups are not allowed")
        for q in grp:
            if not isinstance(q, int) or isinstance(q, bool):
                raise BadIndex(f"leg index must be an integer, got {q!r}")
            if q < 1 or q > g.n:
                raise BadIndex(f"leg index {q} outside 1..{g.n}")
            if q in seen:
                raise NotPartition(f"leg {q} appears more than once")
            seen.add(q)
            count += 1
    if count != g.n:
        missing = sorted(set(range(1, g.n + 1)) - seen)
        raise NotPartition(f"legs {missing} are missing from the gait")


def flat(g: Gait) -> tuple[int, ...]:
    """Concatenation of the groups in order."""
    return tuple(q for grp in g.groups for q in grp)


def is_normal(g: Gait) -> bool:
    """True iff the flattened leg order is strictly increasing."""
    f = flat(g)
    return all(a < b for a, b in zip(f, f[1:]))


def normalized(g: Gait) -> Gait:
    """The normal gait with the same group sizes (legs relabeled in order)."""
    sizes = [len(grp) for grp in g.groups]
    groups = []
    start = 1
    for s in sizes:
        groups.append(tuple(range(start, start + s)))
        start += s
    return Gait(g.n, tuple(groups))


def similarity_matrix(g: Gait) -> tuple[MaxPlusMatrix, MaxPlusMatrix]:
    """(C_bar, C): the permutation with [C_bar]_ij = e iff flat(g)_i = j,
    and its two-block copy C = blockdiag(C_bar, C_bar)."""
    n = g.n
    f = flat(g)
    c_bar = np.full((n, n), EPSILON)
    for i, leg in enumerate(f):
        c_bar[i, leg - 1] = 0.0
    c = np.full((2 * n, 2 * n), EPSILON)
    c[:n, :n] = c_bar
    c[n:, n:] = c_bar
    return MaxPlusMatrix(c_bar), MaxPlusMatrix(c)


def build_P_Q(g: Gait, params: GaitParams) -> tuple[MaxPlusMatrix, MaxPlusMatrix]:
    """P couples each group's liftoff to the previous group's touchdown in
    the same step; Q couples the first group to the last group's touchdown
    of the previous step. Both carry tau_delta on their finite entries."""
    n = g.n
    p = np.full((n, n), EPSILON)
    q = np.full((n, n), EPSILON)
    for j in range(g.m - 1):
        for row in g.groups[j + 1]:
            for col in g.groups[j]:
                p[row - 1, col - 1] = params.tau_delta
    for row in g.groups[0]:
        for col in g.groups[-1]:
            q[row - 1, col - 1] = params.tau_delta
    return MaxPlusMatrix(p), MaxPlusMatrix(q)


def _block2(tl, tr, bl, br) -> MaxPlusMatrix:
    top = np.hstack([np.asarray(tl, dtype=float), np.asarray(tr, dtype=float)])
    bottom = np.hstack([np.asarray(bl, dtype=float), np.asarray(br, dtype=float)])
    return MaxPlusMatrix(np.vstack([top, bottom]))


def build_A0_A1(g: Gait, params: GaitParams) -> tuple[MaxPlusMatrix, MaxPlusMatrix]:
    """The implicit (same-step) part A0 and the explicit (previous-step)
    part A1 of the event recursion x(k) = A0 x(k) oplus A1 x(k-1)."""
    if params.tau_delta < 0:
        warnings.warn(
            "tau_delta < 0: running gait, steady-state guarantees void",
            RunningGaitWarning,
            stacklevel=2,
        )
    if not (params.tau_f > 0 and params.tau_g > 0):
        warnings.warn(
            "tau_f and tau_g should be strictly positive",
            UserWarning,
            stacklevel=2,
        )
    n = g.n
    p, q = build_P_Q(g, params)
    z = np.full((n, n), EPSILON)
    eye = MaxPlusMatrix.identity(n).asarray()
    a0 = _block2(z, eye + params.tau_f, p.asarray(), z)
    a1 = _block2(eye, z, np.maximum(eye + params.tau_g, q.asarray()), eye)
    return a0, a1


@dataclass(frozen=True)
class GaitMatrices:
    gait: Gait
    params: GaitParams
    P: MaxPlusMatrix
    Q: MaxPlusMatrix
    C_bar: MaxPlusMatrix
    C: MaxPlusMatrix
    A0: MaxPlusMatrix
    A1: MaxPlusMatrix
    A: MaxPlusMatrix
    A_bar: MaxPlusMatrix

    def named(self) -> dict:
        return {
            "P": self.P,
            "Q": self.Q,
            "C_bar": self.C_bar,
            "C": self.C,
            "A0": self.A0,
            "A1": self.A1,
            "A": self.A,
            "A_bar": self.A_bar,
        }


def system_matrix(g: Gait, params: GaitParams) -> GaitMatrices:
    """Construct A = A0* (x) A1 and its normalized form A_bar = C A C^T.

    A0* always exists here: P is nilpotent for any valid gait, so A0 has an
    acyclic precedence graph and the star cannot diverge.
    """
    validate_gait(g)
    a0, a1 = build_A0_A1(g, params)
    p, q = build_P_Q(g, params)
    c_bar, c = similarity_matrix(g)
    a = kleene_star(a0).otimes(a1)
    a_bar = c.otimes(a).otimes(c.transpose())
    return GaitMatrices(g, params, p, q, c_bar, c, a0, a1, a, a_bar)


def check_assumptions(g: Gait, params: GaitParams) -> tuple[bool, bool]:
    """(A1, A2): positive swing and stance; cycle_min <= m * group_lag."""
    a1 = params.tau_f > 0 and params.tau_g > 0
    a2 = params.cycle_min <= g.m * params.group_lag
    return a1, a2


@dataclass(frozen=True)
class StructuralBlocks:
    """The three n x n blocks every normal-gait quantity is built from."""

    Delta: MaxPlusMatrix
    DeltaPrime: MaxPlusMatrix
    V: MaxPlusMatrix


def structural_blocks(g: Gait, params: GaitParams) -> StructuralBlocks:
    """Delta, Delta', V for a normal gait, from their explicit block forms.

    With sizes n_1..n_m and lag T = tau_f + tau_delta, block (i, j) of:
      Delta  is I for i = j, (i-j)T on a full block for i > j, epsilon above;
      Delta' is (tau_delta + (i-j-1)T) on a full block for i > j, else epsilon;
      V      is epsilon except the last block column, tau_delta + (i-1)T.

    Delta also equals kleene_star(tau_f (x) P_bar); that identity is left to
    the test suite so the two routes stay independent.
    """
    validate_gait(g)
    if not is_normal(g):
        raise NotNormalGait(f"structural blocks need a normal gait, got {g}")
    n = g.n
    lag = params.group_lag
    sizes = [len(grp) for grp in g.groups]
    offs = np.concatenate([[0], np.cumsum(sizes)])
    delta = np.full((n, n), EPSILON)
    delta_prime = np.full((n, n), EPSILON)
    v = np.full((n, n), EPSILON)
    m = g.m
    for i in range(m):
        ri, rj = offs[i], offs[i + 1]
        np.fill_diagonal(delta[ri:rj, ri:rj], 0.0)
        for j in range(i):
            ci, cj = offs[j], offs[j + 1]
            delta[ri:rj, ci:cj] = (i - j) * lag
            delta_prime[ri:rj, ci:cj] = params.tau_delta + (i - j - 1) * lag
        v[ri:rj, offs[m - 1] : offs[m]] = params.tau_delta + i * lag
    return StructuralBlocks(
        MaxPlusMatrix(delta), MaxPlusMatrix(delta_prime), MaxPlusMatrix(v)
    )


def closed_form_system_matrix(g: Gait, params: GaitParams) -> MaxPlusMatrix:
    """A_bar of a normal gait assembled from the structural blocks:
    [[tau_f (tau_g Delta oplus V), tau_f Delta], [tau_g Delta oplus V, Delta]].
    """
    blocks = structural_blocks(g, params)
    delta = blocks.Delta.asarray()
    v = blocks.V.asarray()
    lower_left = np.maximum(params.tau_g + delta, v)
    return _block2(
        params.tau_f + lower_left,
        params.tau_f + delta,
        lower_left,
        delta,
    )


def closed_form_eigenpair(g: Gait, params: GaitParams) -> tuple[float, MaxPlusMatrix]:
    """lambda = max(m * group_lag, cycle_min) and its eigenvector: a leg in
    group j touches down at tau_f + (j-1) * group_lag and lifts off at
    (j-1) * group_lag. Valid for any gait, normal or not."""
    validate_gait(g)
    a1, _ = check_assumptions(g, params)
    if not a1:
        raise AssumptionA1Violated(
            f"needs tau_f > 0 and tau_g > 0, got ({params.tau_f}, {params.tau_g})"
        )
    lam = max(g.m * params.group_lag, params.cycle_min)
    n = g.n
    vec = np.empty(2 * n)
    for j, grp in enumerate(g.groups):
        for q in grp:
            vec[q - 1] = params.tau_f + j * params.group_lag
            vec[q - 1 + n] = j * params.group_lag
    return float(lam), MaxPlusMatrix.column(vec)


def closed_form_power(g: Gait, params: GaitParams, r: int) -> MaxPlusMatrix:
    """A_bar**r for a normal gait under assumption A2, assembled from the
    blocks: each extra step past r = 2 is a plain lambda shift."""
    if not isinstance(r, (int, np.integer)) or r < 2:
        raise BadExponent(f"closed-form powers need an integer r >= 2, got {r!r}")
    blocks = structural_blocks(g, params)
    _, a2 = check_assumptions(g, params)
    if not a2:
        raise AssumptionA2Violated(
            f"needs cycle_min <= m * group_lag, got {params.cycle_min} > "
            f"{g.m * params.group_lag}"
        )
    lam = g.m * params.group_lag
    delta = MaxPlusMatrix(blocks.Delta)
    v = MaxPlusMatrix(blocks.V)
    vd = v.otimes(delta).asarray()
    lower_left = np.maximum(
        (r - 2) * lam + params.tau_f + params.tau_g + vd,
        (r - 1) * lam + v.asarray(),
    )
    lower_right = (r - 2) * lam + params.tau_f + vd
    return _block2(
        params.tau_f + lower_left,
        params.tau_f + lower_right,
        lower_left,
        lower_right,
    )


def gait_to_config(g: Gait, params: GaitParams) -> dict:
    return {
        "n": g.n,
        "gait": [list(grp) for grp in g.groups],
        "tau_f": params.tau_f,
        "tau_g": params.tau_g,
        "tau_delta": params.tau_delta,
    }


def gait_from_config(obj: dict) -> tuple[Gait, GaitParams]:
    """Parse {"n":..., "gait":[[...]...], "tau_f":..., "tau_g":...,
    "tau_delta":...}; the gait is validated, the parameters are not."""
    if not isinstance(obj, dict):
        raise ParseError("gait config must be a JSON object")
    try:
        n = obj["n"]
        groups = obj["gait"]
        params = GaitParams(
            float(obj["tau_f"]), float(obj["tau_g"]), float(obj["tau_delta"])
        )
    except KeyError as missing:
        raise ParseError(f"gait config is missing key {missing}") from None
    except (TypeError, ValueError):
        raise ParseError("gait config timing values must be numbers") from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"n must be a positive integer, got {n!r}")
    if not isinstance(groups, list) or not all(isinstance(grp, list) for grp in groups):
        raise ParseError("gait must be a list of leg-index lists")
    g = Gait.of(n, groups)
    validate_gait(g)
    return g, params


def parse_gait_dsl(text: str) -> Gait:
    """Parse "{1,4}<{2,3}" style gait strings; '<' separates the groups in
    order. Whitespace-insensitive; n is the total number of legs named."""
    pos = 0
    length = len(text)

    def skip_ws():
        nonlocal pos
        while pos < length and text[pos].isspace():
            pos += 1

    def expect(ch: str):
        nonlocal pos
        skip_ws()
        if pos >= length or text[pos] != ch:
            raise ParseError(f"expected {ch!r}", pos)
        pos += 1

    def number() -> int:
        nonlocal pos
        skip_ws()
        start = pos
        while pos < length and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise ParseError("expected a leg index", pos)
        return int(text[start:pos])

    groups: list[tuple[int, ...]] = []
    while True:
        expect("{")
        grp: list[int] = []
        skip_ws()
        if pos < length and text[pos] == "}":
            pos += 1
        else:
            while True:
                grp.append(number())
                skip_ws()
                if pos < length and text[pos] == ",":
                    pos += 1
                    continue
                expect("}")
                break
        groups.append(tuple(grp))
        skip_ws()
        if pos < length and text[pos] == "<":
            pos += 1
            continue
        break
    skip_ws()
    if pos != length:
        raise ParseError(f"unexpected trailing text {text[pos:]!r}", pos)
    n = max((q for grp in groups for q in grp), default=0)
    g = Gait(n, tuple(groups))
    validate_gait(g)
    return g


def enumerate_gaits(n: int):
    """Yield every gait on n legs as an ordered set partition with sorted
    groups (3, 13, 75, 541, 4683 gaits for n = 2..6)."""
    legs = tuple(range(1, n + 1))

    def rec(remaining: tuple[int, ...]):
        if not remaining:
            yield ()
            return
        for size in range(1, len(remaining) + 1):
            for grp in itertools.combinations(remaining, size):
                rest = tuple(q for q in remaining if q not in grp)
                for tail in rec(rest):
                    yield (grp,) + tail

    for groups in rec(legs):
        yield Gait(n, groups)
