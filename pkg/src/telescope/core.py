"""Samples, sliding windows, weight schemes and truncation depth."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Sample:
    """One time series: ``values`` has shape ``(n, d)``.

    When ``alphabet`` is given the sample is discrete: values are integer
    codes and every one of them must belong to the alphabet.
    """

    values: np.ndarray
    alphabet: Optional[tuple] = None
    id: str = ""

    def __post_init__(self):
        if self.alphabet is not None:
            alphabet = tuple(sorted({int(a) for a in self.alphabet}))
            values = np.asarray(self.values)
            if values.size and not np.all(np.equal(np.mod(values, 1), 0)):
                raise ValueError("discrete sample values must be integer codes")
            values = np.array(values, dtype=np.int64)
        else:
            alphabet = None
            values = np.array(self.values, dtype=np.float64)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        if values.ndim != 2 or values.shape[1] < 1:
            raise ValueError("sample values must be a sequence of fixed-length points")
        if values.shape[0] < 1:
            raise ValueError("sample must contain at least one point")
        if alphabet is not None and not np.isin(values, alphabet).all():
            raise ValueError("sample value outside its alphabet")
        if alphabet is None and not np.all(np.isfinite(values)):
            raise ValueError("sample values must be finite")
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "id", str(self.id))

    @classmethod
    def discrete(cls, values, alphabet: Optional[Sequence[int]] = None, id: str = "") -> "Sample":
        """Build a discrete sample; a string is read as one digit symbol per step.

        The alphabet defaults to the set of observed codes.
        """
        if isinstance(values, str):
            values = [int(c) for c in values]
        arr = np.asarray(values)
        if alphabet is None:
            alphabet = tuple(np.unique(arr).tolist())
        return cls(arr, alphabet=tuple(alphabet), id=id)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def is_discrete(self) -> bool:
        return self.alphabet is not None

    def __eq__(self, other):
        if not isinstance(other, Sample):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.values.shape == other.values.shape
            and bool(np.array_equal(self.values, other.values))
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class WindowSet:
    """The weighted two-class problem behind one telescope summand.

    ``class1`` holds the length-``k`` windows of the first sample and
    ``class0`` those of the second, each flattened time-major to ``k*d``
    coordinates.
    """

    class1: np.ndarray
    class0: np.ndarray
    weight1: float
    weight0: float
    k: int
    alphabet: Optional[tuple] = None

    @property
    def dim(self) -> int:
        return self.class1.shape[1]

    def swapped(self) -> "WindowSet":
        return WindowSet(self.class0, self.class1, self.weight0, self.weight1, self.k, self.alphabet)


def sliding_windows(values: np.ndarray, k: int) -> np.ndarray:
    """All ``n-k+1`` windows of an ``(n, d)`` array as rows of length ``k*d``."""
    n, d = values.shape
    if k < 1:
        raise ValueError("invalid order")
    if k > n:
        raise ValueError("window longer than sample")
    view = sliding_window_view(values, (k, d))
    return np.ascontiguousarray(view.reshape(n - k + 1, k * d))


def extract_windows(x: Sample, y: Sample, k: int) -> WindowSet:
    if k < 1:
        raise ValueError("invalid order")
    if x.dim != y.dim:
        raise ValueError("incompatible samples")
    if k > min(len(x), len(y)):
        raise ValueError("window longer than sample")
    alphabet = None
    if x.is_discrete and y.is_discrete:
        alphabet = tuple(sorted(set(x.alphabet) | set(y.alphabet)))
    c1 = _frozen(sliding_windows(x.values, k))
    c0 = _frozen(sliding_windows(y.values, k))
    return WindowSet(c1, c0, 1.0 / c1.shape[0], 1.0 / c0.shape[0], k, alphabet)


@dataclass(frozen=True)
class WeightScheme:
    """Summable positive weights ``w_k`` for the telescope sum.

    ``custom`` lists are finite; orders past the end of the list get weight 0,
    which truncates the sum there.
    """

    kind: str = "inverse-square"
    values: tuple = field(default=())

    KINDS = ("inverse-square", "geometric", "custom")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown weight scheme {self.kind!r}")
        if self.kind == "custom":
            vals = tuple(float(v) for v in self.values)
            if not vals or any(not (v > 0 and math.isfinite(v)) for v in vals):
                raise ValueError("custom weights must be a non-empty list of positive numbers")
            object.__setattr__(self, "values", vals)

    @classmethod
    def inverse_square(cls) -> "WeightScheme":
        return cls("inverse-square")

    @classmethod
    def geometric(cls) -> "WeightScheme":
        return cls("geometric")

    @classmethod
    def custom(cls, values: Sequence[float]) -> "WeightScheme":
        return cls("custom", tuple(values))

    def __call__(self, k: int) -> float:
        return weight(self, k)


def weight(scheme: WeightScheme, k: int) -> float:
    if k <= 0:
        raise ValueError("invalid order")
    if scheme.kind == "inverse-square":
        return 1.0 / (k * k)
    if scheme.kind == "geometric":
        return math.ldexp(1.0, -k)
    return scheme.values[k - 1] if k <= len(scheme.values) else 0.0


@dataclass(frozen=True)
class DepthPolicy:
    """How many summands to evaluate for samples whose shorter length is ``l``."""

    kind: str = "log-length"
    parameter: Optional[int] = None

    KINDS = ("log-length", "full", "fixed")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown depth policy {self.kind!r}")
        if self.kind == "fixed" and (self.parameter is None or int(self.parameter) < 1):
            raise ValueError("fixed depth needs a positive integer parameter")

    @classmethod
    def log_length(cls) -> "DepthPolicy":
        return cls("log-length")

    @classmethod
    def full(cls) -> "DepthPolicy":
        return cls("full")

    @classmethod
    def fixed(cls, k: int) -> "DepthPolicy":
        return cls("fixed", int(k))

    def __call__(self, l: int) -> int:
        return depth(self, l)


def depth(policy: DepthPolicy, l: int) -> int:
    if l < 1:
        raise ValueError("sample length must be positive")
    if policy.kind == "log-length":
        return min(l, max(1, math.floor(math.log(l))))
    if policy.kind == "full":
        return l
    return min(int(policy.parameter), l)
