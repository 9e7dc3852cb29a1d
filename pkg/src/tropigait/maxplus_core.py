"""The max-plus semiring: scalars, dense matrices, powers, star, ordering.

Values live in (R u {epsilon}, oplus, otimes) with oplus = max and
otimes = +. The additive zero epsilon is represented by IEEE -inf, whose
arithmetic under max and + is exact: max(-inf, x) = x and -inf + x = -inf
for every finite x, with no overflow path. The multiplicative identity is
e = 0.

Matrices are immutable float64 arrays. Equality is exact; ``close_to`` and
the verification helpers take a tolerance (default 1e-9, overridable via the
TG_TOLERANCE environment variable) for non-integer data.
"""

from __future__ import annotations

import json
import math
import os

import numpy as np

from tropigait import _backend
from tropigait.errors import (
    BadExponent,
    DimensionMismatch,
    NegativePowerOfEpsilon,
    NotSquare,
    ParseError,
    PositiveCircuit,
    ValidationError,
)

EPSILON = float("-inf")
E = 0.0
DEFAULT_TOLERANCE = 1e-9

# Scalars are plain floats; -inf is the canonical epsilon.
MaxPlusScalar = float


def tolerance() -> float:
    """Comparison tolerance: TG_TOLERANCE env var, else 1e-9."""
    raw = os.environ.get("TG_TOLERANCE")
    if raw is None:
        return DEFAULT_TOLERANCE
    try:
        value = float(raw)
    except ValueError:
        raise ValidationError(f"TG_TOLERANCE must be a number, got {raw!r}") from None
    if not (value >= 0.0):
        raise ValidationError("TG_TOLERANCE must be nonnegative")
    return value


def is_epsilon(x) -> bool:
    return x == EPSILON


def oplus(a, b) -> float:
    """a oplus b = max(a, b); epsilon is the neutral element."""
    return float(max(a, b))


def otimes(a, b) -> float:
    """a otimes b = a + b; epsilon is absorbing."""
    return float(a) + float(b)


def mpow_scalar(x, r) -> float:
    """x to the otimes-power r, i.e. r*x for finite x.

    epsilon**0 = e by definition; epsilon**r = epsilon for r > 0 and is
    undefined for r < 0. The exponent may be any real.
    """
    if is_epsilon(x):
        if r < 0:
            raise NegativePowerOfEpsilon(
                f"epsilon ** {r} is undefined for negative exponents"
            )
        return E if r == 0 else EPSILON
    return float(r) * float(x)


def _encode_scalar(v: float):
    return "-inf" if is_epsilon(v) else (int(v) if float(v).is_integer() else float(v))


def _decode_scalar(v) -> float:
    if v == "-inf":
        return EPSILON
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"matrix entry must be a number or \"-inf\", got {v!r}")
    out = float(v)
    if math.isnan(out) or out == math.inf:
        raise ParseError(f"matrix entry must be finite or -inf, got {v!r}")
    return out


def entries_close(x: np.ndarray, y: np.ndarray, tol: float) -> bool:
    """Entrywise agreement: epsilon matches epsilon, finite within tol."""
    xi = np.isneginf(x)
    yi = np.isneginf(y)
    if not np.array_equal(xi, yi):
        return False
    finite = ~xi
    return bool(np.all(np.abs(x[finite] - y[finite]) <= tol))


class MaxPlusMatrix:
    """Immutable dense matrix over the max-plus semiring."""

    __slots__ = ("_a",)

    def __init__(self, entries):
        if isinstance(entries, MaxPlusMatrix):
            self._a = entries._a
            return
        a = np.array(entries, dtype=np.float64, order="C")
        if a.ndim != 2:
            raise DimensionMismatch(
                f"matrix data must be two-dimensional, got ndim={a.ndim}"
            )
        if a.shape[0] == 0 or a.shape[1] == 0:
            raise DimensionMismatch("matrix dimensions must be positive")
        if np.isnan(a).any() or np.isposinf(a).any():
            raise ValidationError("entries must be real numbers or -inf")
        a.setflags(write=False)
        self._a = a

    # -- construction -----------------------------------------------------

    @classmethod
    def _wrap(cls, a: np.ndarray) -> "MaxPlusMatrix":
        m = object.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.float64)
        a.setflags(write=False)
        m._a = a
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "MaxPlusMatrix":
        """Z: the all-epsilon matrix, neutral for oplus, absorbing for otimes."""
        cols = rows if cols is None else cols
        return cls._wrap(np.full((rows, cols), EPSILON))

    @classmethod
    def identity(cls, n: int) -> "MaxPlusMatrix":
        """I: e on the diagonal, epsilon elsewhere."""
        a = np.full((n, n), EPSILON)
        np.fill_diagonal(a, E)
        return cls._wrap(a)

    @classmethod
    def ones(cls, rows: int, cols: int | None = None) -> "MaxPlusMatrix":
        """E: every entry e = 0."""
        cols = rows if cols is None else cols
        return cls._wrap(np.full((rows, cols), E))

    @classmethod
    def column(cls, values) -> "MaxPlusMatrix":
        return cls(np.reshape(np.asarray(values, dtype=np.float64), (-1, 1)))

    @classmethod
    def row(cls, values) -> "MaxPlusMatrix":
        return cls(np.reshape(np.asarray(values, dtype=np.float64), (1, -1)))

    # -- shape ------------------------------------------------------------

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def asarray(self) -> np.ndarray:
        """Read-only float64 view of the entries."""
        return self._a

    def __getitem__(self, idx):
        return self._a[idx]

    def transpose(self) -> "MaxPlusMatrix":
        return MaxPlusMatrix._wrap(self._a.T)

    def _require_square(self):
        if not self.is_square:
            raise NotSquare(f"matrix is {self.rows}x{self.cols}")

    # -- semiring operations ----------------------------------------------

    def oplus(self, other: "MaxPlusMatrix") -> "MaxPlusMatrix":
        other = MaxPlusMatrix(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return MaxPlusMatrix._wrap(np.maximum(self._a, other._a))

    def otimes(self, other) -> "MaxPlusMatrix":
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.scale(other)
        other = MaxPlusMatrix(other)
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.shape} by {other.shape}"
            )
        return MaxPlusMatrix._wrap(_backend.mul(self._a, other._a))

    def scale(self, alpha) -> "MaxPlusMatrix":
        """alpha otimes A: add the scalar to every entry."""
        return MaxPlusMatrix._wrap(self._a + float(alpha))

    def power(self, p: int) -> "MaxPlusMatrix":
        """p-fold otimes-product; A**0 = I."""
        self._require_square()
        if not isinstance(p, (int, np.integer)) or p < 0:
            raise BadExponent(f"matrix power needs a nonnegative integer, got {p!r}")
        result = MaxPlusMatrix.identity(self.rows)
        base = self
        p = int(p)
        while p:
            if p & 1:
                result = result.otimes(base)
            p >>= 1
            if p:
                base = base.otimes(base)
        return result

    def star(self) -> "MaxPlusMatrix":
        """Kleene star A* = oplus of A**p over p = 0..n-1.

        Computed by repeated squaring of (I oplus A) to an exponent of at
        least n-1. Raises PositiveCircuit when the precedence graph has a
        circuit of strictly positive weight (the series diverges); detection
        checks the diagonal of A+ = A otimes A*.
        """
        self._require_square()
        n = self.rows
        s = np.maximum(self._a, MaxPlusMatrix.identity(n)._a)
        e = 1
        while e < n - 1:
            s = _backend.mul(s, s)
            e *= 2
        diag = np.diagonal(_backend.mul(self._a, s))
        if np.any(diag > tolerance()):
            raise PositiveCircuit(
                "a circuit of strictly positive weight exists; the star diverges"
            )
        return MaxPlusMatrix._wrap(s)

    def plus(self) -> "MaxPlusMatrix":
        """A+ = A otimes A*."""
        return self.otimes(self.star())

    # -- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MaxPlusMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def close_to(self, other: "MaxPlusMatrix", tol: float | None = None) -> bool:
        other = MaxPlusMatrix(other)
        if self.shape != other.shape:
            return False
        return entries_close(self._a, other._a, tolerance() if tol is None else tol)

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [_encode_scalar(v) for v in self._a.ravel()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj) -> "MaxPlusMatrix":
        if not isinstance(obj, dict):
            raise ParseError("matrix JSON must be an object")
        try:
            rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
        except KeyError as missing:
            raise ParseError(f"matrix JSON is missing key {missing}") from None
        if not isinstance(rows, int) or not isinstance(cols, int):
            raise ParseError("rows and cols must be integers")
        if not isinstance(entries, list) or len(entries) != rows * cols:
            raise ParseError("entries must list exactly rows*cols values")
        data = np.array([_decode_scalar(v) for v in entries]).reshape(rows, cols)
        return cls(data)

    @classmethod
    def from_json(cls, text: str) -> "MaxPlusMatrix":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as err:
            raise ParseError(f"invalid JSON: {err}") from None
        return cls.from_dict(obj)

    def pretty(self, eps_symbol: str = ".") -> str:
        """Aligned text grid with a placeholder for epsilon entries."""
        cells = [
            [eps_symbol if is_epsilon(v) else f"{v:g}" for v in row]
            for row in self._a
        ]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)

    def __repr__(self) -> str:
        return f"MaxPlusMatrix({self.rows}x{self.cols})"


# -- module-level operation names ------------------------------------------


def mat_oplus(a: MaxPlusMatrix, b: MaxPlusMatrix) -> MaxPlusMatrix:
    return MaxPlusMatrix(a).oplus(b)


def mat_otimes(a, c) -> MaxPlusMatrix:
    """Matrix product, or scalar broadcast when either operand is a number."""
    if isinstance(a, (int, float, np.floating, np.integer)):
        return MaxPlusMatrix(c).scale(a)
    return MaxPlusMatrix(a).otimes(c)


def mat_power(a: MaxPlusMatrix, p: int) -> MaxPlusMatrix:
    return MaxPlusMatrix(a).power(p)


def kleene_star(a: MaxPlusMatrix) -> MaxPlusMatrix:
    return MaxPlusMatrix(a).star()


def overcomes(a: MaxPlusMatrix, b: MaxPlusMatrix) -> bool:
    """True iff A oplus B = A, i.e. A dominates B entrywise."""
    a = MaxPlusMatrix(a)
    b = MaxPlusMatrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot compare {a.shape} and {b.shape}")
    return bool(np.all(a._a >= b._a))


def is_nilpotent(a: MaxPlusMatrix) -> tuple[bool, int | None]:
    """(True, least p0 <= n with A**p0 = Z) for nilpotent A, else (False, None)."""
    a = MaxPlusMatrix(a)
    a._require_square()
    z = np.isneginf
    cur = a._a
    for p0 in range(1, a.rows + 1):
        if z(cur).all():
            return True, p0
        cur = _backend.mul(cur, a._a)
    return False, None


def solve_affine(a: MaxPlusMatrix, b) -> MaxPlusMatrix:
    """The least solution x = A* otimes b of x = A otimes x oplus b."""
    a = MaxPlusMatrix(a)
    a._require_square()
    b = b if isinstance(b, MaxPlusMatrix) else MaxPlusMatrix.column(b)
    if b.cols != 1 or b.rows != a.rows:
        raise DimensionMismatch(
            f"right-hand side must be a {a.rows}-row column, got {b.shape}"
        )
    return a.star().otimes(b)
