"""Coefficient germs of analytic functionals and their Hankel quantities.

A functional is handled through the sequence a_k indexed by multi-indices:
its values on the monomial basis.  Sources are measure moments, explicit
tables, or numerical contour integration of a germ that decays at infinity
(coefficients are read off a torus grid by an inverse FFT; the quadrature
error falls off geometrically in the grid size).  From the coefficients the
package builds the Hankel-type determinants H_i = det(a_{k(a)+k(b)}) and
the normalized quantities D_i = |H_i|^(1/(2 l_s(i))), whose comparison
against diameter estimates is the point of the whole exercise.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from .linalg import LogDet, exact_logdet, logdet
from .measures import DiscreteMeasure, Measure
from .multiindex import MultiIndex, count_at_most, degree_counts, enumeration_for
from .vandermonde import vdm_value


@dataclass(frozen=True)
class GermCoefficients:
    """Coefficient source: a float route and an optional exact route."""

    dim: int
    label: str
    fn: Callable[[MultiIndex], complex]
    exact_fn: Callable[[MultiIndex], Fraction | None] | None = None

    def coeff(self, k) -> complex:
        return self.fn(self._check(k))

    def coeff_fraction(self, k) -> Fraction | None:
        if self.exact_fn is None:
            return None
        return self.exact_fn(self._check(k))

    def _check(self, k) -> MultiIndex:
        if isinstance(k, (int, np.integer)):
            k = (int(k),)
        k = tuple(int(v) for v in k)
        if len(k) != self.dim or any(v < 0 for v in k):
            raise ValueError(f"bad multi-index {k} for dimension {self.dim}")
        return k


def coeffs_from_measure(measure: Measure, label: str = "moments") -> GermCoefficients:
    """The moment sequence of a measure, exact when the measure is."""
    return GermCoefficients(
        dim=measure.dim,
        label=label,
        fn=functools.cache(measure.moment),
        exact_fn=functools.cache(measure.moment_fraction),
    )


def coeffs_from_table(
    dim: int,
    table: Mapping[MultiIndex, complex | Fraction],
    label: str = "table",
) -> GermCoefficients:
    """Coefficients from an explicit finite table; missing entries are errors."""
    clean: dict[MultiIndex, complex] = {}
    exact: dict[MultiIndex, Fraction] = {}
    rational = True
    for key, val in table.items():
        k = (key,) if isinstance(key, (int, np.integer)) else tuple(int(v) for v in key)
        clean[k] = complex(val)
        if rational and isinstance(val, (int, Fraction)):
            exact[k] = Fraction(val)
        elif rational and isinstance(val, float):
            exact[k] = Fraction(val)
        else:
            rational = False

    def fn(k: MultiIndex) -> complex:
        if k not in clean:
            raise ValueError(f"coefficient table has no entry for {k}")
        return clean[k]

    exact_fn = None
    if rational:

        def exact_fn(k: MultiIndex) -> Fraction | None:
            return exact.get(k)

    return GermCoefficients(dim=dim, label=label, fn=fn, exact_fn=exact_fn)


def coeffs_from_contour(
    germ: Callable[..., np.ndarray],
    dim: int = 1,
    radius: float = 1.0,
    grid_size: int = 64,
    label: str = "contour",
) -> GermCoefficients:
    """Recover coefficients of a germ vanishing at infinity from torus values.

    The germ is the function sum_k a_k / z^(k+1) (per axis in several
    variables), sampled on the torus of the given radius at grid_size
    points per axis.  The trapezoid rule on each circle is exact up to
    aliasing, so coefficients with every component below grid_size - 1 come
    out with an error on the order of (c/radius)^grid_size, c being the
    decay radius of the coefficients.  Aliased indices raise.
    """
    if grid_size < 4:
        raise ValueError("grid_size must be at least 4")
    if radius <= 0:
        raise ValueError("radius must be positive")
    theta = 2.0 * math.pi * np.arange(grid_size) / grid_size
    ring = radius * np.exp(1j * theta)
    axes = np.meshgrid(*([ring] * dim), indexing="ij")
    values = np.asarray(germ(*axes), dtype=complex)
    if values.shape != axes[0].shape:
        raise ValueError("germ must evaluate elementwise on the grid")
    spectrum = np.fft.ifftn(values)

    def fn(k: MultiIndex) -> complex:
        if any(v + 1 >= grid_size for v in k):
            raise ValueError(
                f"index {k} exceeds the contour resolution (grid_size {grid_size})"
            )
        idx = tuple(v + 1 for v in k)
        return complex(spectrum[idx]) * radius ** (sum(k) + len(k))

    return GermCoefficients(dim=dim, label=label, fn=fn, exact_fn=None)


@dataclass(frozen=True)
class HankelMatrix:
    """H_i with entries a_{k(a)+k(b)}, plus an exact copy when available."""

    size: int
    matrix: np.ndarray
    exact: tuple[tuple[Fraction, ...], ...] | None

    def logdet(self) -> LogDet:
        if self.exact is not None:
            return exact_logdet(self.exact)
        return logdet(self.matrix)


def hankel_matrix(germ: GermCoefficients, size: int) -> HankelMatrix:
    """The size-by-size Hankel-type matrix of the coefficient sequence."""
    if size < 1:
        raise ValueError("size must be positive")
    idx = enumeration_for(germ.dim).prefix(size)
    sums = [
        [tuple(x + y for x, y in zip(idx[a], idx[b])) for b in range(size)]
        for a in range(size)
    ]
    exact_rows: list[tuple[Fraction, ...]] | None = []
    for a in range(size):
        row = []
        for b in range(size):
            f = germ.coeff_fraction(sums[a][b])
            if f is None:
                exact_rows = None
                break
            row.append(f)
        if exact_rows is None:
            break
        exact_rows.append(tuple(row))
    if exact_rows is not None:
        mat = np.array([[float(v) for v in row] for row in exact_rows], dtype=complex)
        return HankelMatrix(size, mat, tuple(exact_rows))
    mat = np.array(
        [[germ.coeff(sums[a][b]) for b in range(size)] for a in range(size)],
        dtype=complex,
    )
    return HankelMatrix(size, mat, None)


def hankel_logdet(germ: GermCoefficients, size: int) -> LogDet:
    return hankel_matrix(germ, size).logdet()


@dataclass(frozen=True)
class PolyaTerm:
    """One step of the normalized determinant sequence."""

    index: int
    degree: int
    degree_sum: int
    hankel: LogDet
    quantity: float | None

    @property
    def defined(self) -> bool:
        return self.quantity is not None


def polya_term(germ: GermCoefficients, index: int) -> PolyaTerm:
    """D_index = |H_index|^(1 / (2 l_s)), s the degree of the index-th monomial.

    At index 1 the normalizing degree sum is zero, so the quantity is
    undefined and reported as None.
    """
    enum = enumeration_for(germ.dim)
    s = enum.degree_of(index)
    counts = degree_counts(germ.dim, s)
    ld = hankel_logdet(germ, index)
    if counts.degree_sum == 0:
        return PolyaTerm(index, s, 0, ld, None)
    if ld.is_zero:
        quantity = 0.0
    else:
        quantity = math.exp(ld.log_abs / (2.0 * counts.degree_sum))
    return PolyaTerm(index, s, counts.degree_sum, ld, quantity)


@dataclass(frozen=True)
class HankelSequenceReport:
    """D_i for i = 1..i_max, with the complete-degree subsequence split out."""

    dim: int
    terms: tuple[PolyaTerm, ...]
    diagonal: tuple[PolyaTerm, ...]

    def max_quantity(self) -> float | None:
        vals = [t.quantity for t in self.terms if t.quantity is not None]
        return max(vals) if vals else None


def polya_sequence(germ: GermCoefficients, max_index: int) -> HankelSequenceReport:
    """The full D_i sequence up to max_index; no limit value is claimed."""
    if max_index < 1:
        raise ValueError("max_index must be positive")
    terms = tuple(polya_term(germ, i) for i in range(1, max_index + 1))
    enum = enumeration_for(germ.dim)
    diagonal = tuple(
        t for t in terms if t.index == count_at_most(germ.dim, enum.degree_of(t.index))
    )
    return HankelSequenceReport(germ.dim, terms, diagonal)


def polya_quantity(germ: GermCoefficients, s: int) -> PolyaTerm:
    """The term at the full degree-s basis, index m_s."""
    if s < 1:
        raise ValueError("degree must be at least 1")
    return polya_term(germ, count_at_most(germ.dim, s))


MAX_ORACLE_ATOMS = 4
MAX_ORACLE_SIZE = 3


def iterated_functional_oracle(measure: DiscreteMeasure, size: int) -> float:
    """Apply the functional once per variable to the squared determinant.

    For a discrete measure this is the exact weighted sum of V(config)^2
    (the plain square, not the squared modulus) over all atom tuples; its
    absolute value equals size! times |H_size| of the moment sequence.
    Deliberately brute force, hence the tight size limits.
    """
    if not isinstance(measure, DiscreteMeasure):
        raise TypeError("the brute-force route needs a discrete measure")
    atoms = measure.atom_array()
    nat = atoms.shape[0]
    if nat > MAX_ORACLE_ATOMS or size > MAX_ORACLE_SIZE:
        raise ValueError(
            f"brute-force oracle limited to {MAX_ORACLE_ATOMS} atoms and "
            f"size {MAX_ORACLE_SIZE}, got {nat} atoms at size {size}"
        )
    if size < 1:
        raise ValueError("size must be positive")
    weights = [complex(float(w)) for w in measure.weights]
    total = 0j
    for tup in itertools.product(range(nat), repeat=size):
        w = 1 + 0j
        for t in tup:
            w *= weights[t]
        v = vdm_value(atoms[list(tup)])
        total += w * v * v
    return abs(total)
