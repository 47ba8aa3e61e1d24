"""Model compact sets in C^n and convergent families of them.

Every set knows how to test membership up to a tolerance, draw random
points, lay down a deterministic evaluation grid, project arbitrary points
onto itself, and (where classical theory provides one) hand out a
distinguished near-extremal point configuration.  Products of
one-dimensional sets cover the multivariate cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

MEMBERSHIP_TOL = 1e-9

Point = np.ndarray  # shape (dim,), complex


def as_point(z, dim: int) -> Point:
    arr = np.atleast_1d(np.asarray(z, dtype=complex)).reshape(-1)
    if arr.shape[0] != dim:
        raise ValueError(f"point has dimension {arr.shape[0]}, set has dimension {dim}")
    return arr


class CompactSet:
    """Base class; concrete sets implement the geometry hooks."""

    dim: int = 1

    @property
    def is_real(self) -> bool:
        """True iff the set lies in R^n inside C^n."""
        return False

    def contains(self, z, tol: float = MEMBERSHIP_TOL) -> bool:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """(count, dim) random points of the set."""
        raise NotImplementedError

    def grid(self, per_axis: int) -> np.ndarray:
        """Deterministic covering grid, (total, dim); total grows like per_axis^dim."""
        raise NotImplementedError

    def project(self, z) -> Point:
        """Nearest point of the set (used by local refinement)."""
        raise NotImplementedError

    def reference_points(self, count: int) -> np.ndarray | None:
        """A classical near-extremal configuration of the given size, if known."""
        return None


@dataclass(frozen=True)
class Interval(CompactSet):
    """Real segment [a, b] viewed inside C."""

    a: float
    b: float
    dim: int = field(default=1, init=False)

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if not self.a < self.b:
            raise ValueError(f"need a < b, got [{self.a}, {self.b}]")

    @property
    def is_real(self) -> bool:
        return True

    def contains(self, z, tol: float = MEMBERSHIP_TOL) -> bool:
        w = as_point(z, 1)[0]
        return abs(w.imag) <= tol and self.a - tol <= w.real <= self.b + tol

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.uniform(self.a, self.b, size=(count, 1)).astype(complex)

    def grid(self, per_axis: int) -> np.ndarray:
        return np.linspace(self.a, self.b, per_axis, dtype=complex).reshape(-1, 1)

    def project(self, z) -> Point:
        w = as_point(z, 1)[0]
        return np.array([complex(min(max(w.real, self.a), self.b))])

    def reference_points(self, count: int) -> np.ndarray | None:
        if count < 1:
            return None
        return gauss_lobatto_points(count, self.a, self.b).astype(complex).reshape(-1, 1)


def gauss_lobatto_points(count: int, a: float = -1.0, b: float = 1.0) -> np.ndarray:
    """count Gauss-Lobatto nodes on [a, b]: endpoints plus extrema of P_{count-1}."""
    if count == 1:
        inner = np.array([0.0])
        return (a + b) / 2 + (b - a) / 2 * inner
    if count == 2:
        nodes = np.array([-1.0, 1.0])
    else:
        from numpy.polynomial import legendre

        coeffs = np.zeros(count)
        coeffs[-1] = 1.0
        inner = legendre.legroots(legendre.legder(coeffs))
        nodes = np.concatenate(([-1.0], inner, [1.0]))
    return (a + b) / 2 + (b - a) / 2 * nodes


@dataclass(frozen=True)
class Circle(CompactSet):
    """Circle |z - center| = radius."""

    center: complex = 0j
    radius: float = 1.0
    dim: int = field(default=1, init=False)

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def contains(self, z, tol: float = MEMBERSHIP_TOL) -> bool:
        w = as_point(z, 1)[0]
        return abs(abs(w - self.center) - self.radius) <= tol

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        theta = rng.uniform(0.0, 2 * math.pi, size=count)
        return (self.center + self.radius * np.exp(1j * theta)).reshape(-1, 1)

    def grid(self, per_axis: int) -> np.ndarray:
        theta = np.linspace(0.0, 2 * math.pi, per_axis, endpoint=False)
        return (self.center + self.radius * np.exp(1j * theta)).reshape(-1, 1)

    def project(self, z) -> Point:
        w = as_point(z, 1)[0]
        d = w - self.center
        if abs(d) == 0.0:
            return np.array([self.center + self.radius])
        return np.array([self.center + self.radius * d / abs(d)])

    def reference_points(self, count: int) -> np.ndarray | None:
        if count < 1:
            return None
        theta = 2 * math.pi * np.arange(count) / count
        return (self.center + self.radius * np.exp(1j * theta)).reshape(-1, 1)


@dataclass(frozen=True)
class Disk(CompactSet):
    """Closed disk |z - center| <= radius."""

    center: complex = 0j
    radius: float = 1.0
    dim: int = field(default=1, init=False)

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def contains(self, z, tol: float = MEMBERSHIP_TOL) -> bool:
        w = as_point(z, 1)[0]
        return abs(w - self.center) <= self.radius + tol

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        # area-uniform: radius via sqrt of a uniform variate
        r = self.radius * np.sqrt(rng.uniform(0.0, 1.0, size=count))
        theta = rng.uniform(0.0, 2 * math.pi, size=count)
        return (self.center + r * np.exp(1j * theta)).reshape(-1, 1)

    def grid(self, per_axis: int) -> np.ndarray:
        # concentric rings, boundary included; extremal problems live there anyway
        rings = max(2, per_axis // 8)
        pts = [np.array([self.center])]
        for q in range(1, rings + 1):
            r = self.radius * q / rings
            m = max(6, int(round(per_axis * q / rings)))
            theta = np.linspace(0.0, 2 * math.pi, m, endpoint=False)
            pts.append(self.center + r * np.exp(1j * theta))
        return np.concatenate(pts).reshape(-1, 1)

    def project(self, z) -> Point:
        w = as_point(z, 1)[0]
        d = w - self.center
        if abs(d) <= self.radius:
            return np.array([w])
        return np.array([self.center + self.radius * d / abs(d)])

    def reference_points(self, count: int) -> np.ndarray | None:
        # sup-norm extremal configurations sit on the boundary circle
        return Circle(self.center, self.radius).reference_points(count)


@dataclass(frozen=True)
class Box(CompactSet):
    """Cartesian product of real segments, one per complex coordinate."""

    bounds: tuple[tuple[float, float], ...]

    def __post_init__(self):
        clean = tuple((float(a), float(b)) for a, b in self.bounds)
        object.__setattr__(self, "bounds", clean)
        for a, b in clean:
            if not a < b:
                raise ValueError(f"need a < b per axis, got [{a}, {b}]")
        object.__setattr__(self, "dim", len(clean))

    @property
    def is_real(self) -> bool:
        return True

    def contains(self, z, tol: float = MEMBERSHIP_TOL) -> bool:
        w = as_point(z, self.dim)
        for (a, b), v in zip(self.bounds, w):
            if abs(v.imag) > tol or not (a - tol <= v.real <= b + tol):
                return False
        return True

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        cols = [rng.uniform(a, b, size=count) for a, b in self.bounds]
        return np.stack(cols, axis=1).astype(complex)

    def grid(self, per_axis: int) -> np.ndarray:
        axes = [np.linspace(a, b, per_axis) for a, b in self.bounds]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=1).astype(complex)

    def project(self, z) -> Point:
        w = as_point(z, self.dim)
        out = np.empty(self.dim, dtype=complex)
        for i, ((a, b), v) in enumerate(zip(self.bounds, w)):
            out[i] = complex(min(max(v.real, a), b))
        return out

    def reference_points(self, count: int) -> np.ndarray | None:
        return None


@dataclass(frozen=True)
class ProductSet(CompactSet):
    """Product of one-dimensional sets; coordinates are independent."""

    factors: tuple[CompactSet, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            if f.dim != 1:
                raise ValueError("product factors must be one-dimensional")
        object.__setattr__(self, "dim", len(self.factors))

    @property
    def is_real(self) -> bool:
        return all(f.is_real for f in self.factors)

    def contains(self, z, tol: float = MEMBERSHIP_TOL) -> bool:
        w = as_point(z, self.dim)
        return all(f.contains(v, tol) for f, v in zip(self.factors, w))

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        cols = [f.sample(rng, count).reshape(-1) for f in self.factors]
        return np.stack(cols, axis=1)

    def grid(self, per_axis: int) -> np.ndarray:
        axes = [f.grid(per_axis).reshape(-1) for f in self.factors]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=1)

    def project(self, z) -> Point:
        w = as_point(z, self.dim)
        return np.array([f.project(v)[0] for f, v in zip(self.factors, w)])

    def reference_points(self, count: int) -> np.ndarray | None:
        return None


@dataclass(frozen=True)
class FiniteSet(CompactSet):
    """Finite point set; supports of discrete measures and brute-force tests."""

    points: tuple[tuple[complex, ...], ...]

    def __post_init__(self):
        clean = tuple(tuple(complex(v) for v in p) for p in self.points)
        object.__setattr__(self, "points", clean)
        if not clean:
            raise ValueError("need at least one point")
        dims = {len(p) for p in clean}
        if len(dims) != 1:
            raise ValueError("points have mixed dimensions")
        object.__setattr__(self, "dim", dims.pop())

    @property
    def is_real(self) -> bool:
        return all(v.imag == 0.0 for p in self.points for v in p)

    def _array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=complex)

    def contains(self, z, tol: float = MEMBERSHIP_TOL) -> bool:
        w = as_point(z, self.dim)
        d = np.abs(self._array() - w[None, :]).max(axis=1)
        return bool(d.min() <= tol)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        arr = self._array()
        idx = rng.integers(0, arr.shape[0], size=count)
        return arr[idx]

    def grid(self, per_axis: int) -> np.ndarray:
        return self._array()

    def project(self, z) -> Point:
        w = as_point(z, self.dim)
        arr = self._array()
        d = np.abs(arr - w[None, :]).max(axis=1)
        return arr[int(np.argmin(d))]

    def reference_points(self, count: int) -> np.ndarray | None:
        arr = self._array()
        return arr if arr.shape[0] >= count else None


@dataclass(frozen=True)
class CompactFamily:
    """Sequence of compact sets K_1, K_2, ... approaching a limit set.

    direction is "outer" (nested decreasing onto the limit), "inner"
    (nested increasing inside it), or "constant".
    """

    label: str
    direction: str
    limit: CompactSet
    member_fn: Callable[[int], CompactSet]

    def member(self, j: int) -> CompactSet:
        if j < 1:
            raise ValueError("family index starts at 1")
        return self.member_fn(j)


def interval_family(
    a: float, b: float, side: str = "outer", rate: float = 1.0
) -> CompactFamily:
    """Interval neighborhoods of [a, b] closing in at speed j^-rate.

    side "outer" gives [a - j^-rate, b + j^-rate]; side "inner" gives
    [a + j^-rate, b - j^-rate] and rejects indices that would collapse the
    interval.  rate = 1 is the harmonic schedule (outer j = 2 around
    [-1, 1] is [-1.5, 1.5]); larger rates close in faster.
    """
    if side not in ("outer", "inner"):
        raise ValueError(f"side must be 'outer' or 'inner', got {side!r}")
    if rate <= 0:
        raise ValueError("rate must be positive")

    def member(j: int) -> CompactSet:
        eps = float(j) ** (-rate)
        if side == "outer":
            return Interval(a - eps, b + eps)
        if b - a <= 2 * eps:
            raise ValueError(
                f"inner member j={j} degenerates: width {b - a} <= {2 * eps}"
            )
        return Interval(a + eps, b - eps)

    label = f"interval[{a},{b}] {side} j^-{rate}"
    return CompactFamily(label, side, Interval(a, b), member)


def constant_family(base: CompactSet) -> CompactFamily:
    return CompactFamily("constant", "constant", base, lambda j: base)
