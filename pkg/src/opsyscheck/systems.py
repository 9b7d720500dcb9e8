"""Block-structured subspaces of 2n x 2n matrices and their elements.

Five subspaces appear throughout the checks, named by the shape of their
2x2 block pattern over M_n:

* scalar-diagonal:          [[a I, B], [C, d I]]      complex, B and C free
* transpose-paired:         [[a I, C], [C^t, b I]]    real
* transpose-paired-complex: [[a I, C], [C^t, b I]]    complex span of the same shape
* free-corner:              [[A, b I], [c I, d I]]    complex, A free
* free-corner-real:         [[A, b I], [c I, d I]]    real

Each carries a typed element class with exact embed/extract round-trips,
membership tests, seeded random sampling, and a closed-form positivity
criterion with a matching eigenvalue oracle for the four lemma-covered
shapes.
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np

from .linalg import (
    DimensionMismatchError,
    FieldMismatchError,
    as_square,
    block2x2,
    blocks2x2,
    hermiticity_defect,
    is_psd,
    operator_norm,
)

MEMBERSHIP_TOL = 1e-10


class DomainViolationError(ValueError):
    """A matrix or element lies outside the subspace a routine requires."""


class UnsupportedSystemError(ValueError):
    """The requested operation is not defined for this subspace."""


class Field(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self):
        return np.float64 if self is Field.REAL else np.complex128


class SystemKind(enum.Enum):
    SCALAR_DIAGONAL = ("scalar-diagonal", Field.COMPLEX)
    TRANSPOSE_PAIRED = ("transpose-paired", Field.REAL)
    TRANSPOSE_PAIRED_COMPLEX = ("transpose-paired-complex", Field.COMPLEX)
    FREE_CORNER = ("free-corner", Field.COMPLEX)
    FREE_CORNER_REAL = ("free-corner-real", Field.REAL)

    def __init__(self, token: str, field: Field):
        self.token = token
        self.field = field


PAIRED_KINDS = (SystemKind.TRANSPOSE_PAIRED, SystemKind.TRANSPOSE_PAIRED_COMPLEX)
CORNER_KINDS = (SystemKind.FREE_CORNER, SystemKind.FREE_CORNER_REAL)
LEMMA_KINDS = PAIRED_KINDS + CORNER_KINDS


@dataclasses.dataclass(frozen=True)
class SystemId:
    """A subspace kind together with the block size n."""

    kind: SystemKind
    n: int

    def __post_init__(self):
        if not isinstance(self.kind, SystemKind):
            raise TypeError(f"kind must be a SystemKind, got {self.kind!r}")
        if self.n < 1:
            raise DimensionMismatchError(f"block size must be positive, got {self.n}")

    @property
    def field(self) -> Field:
        return self.kind.field

    @property
    def ambient_order(self) -> int:
        return 2 * self.n


def _coerce_scalar(x, field: Field, name: str):
    z = complex(x)
    if field is Field.REAL:
        if z.imag != 0.0:
            raise FieldMismatchError(f"scalar {name} must be real, got {z}")
        return float(z.real)
    return z


def _coerce_block(X, field: Field, n: int, name: str) -> np.ndarray:
    A = np.asarray(X)
    if A.shape != (n, n):
        raise DimensionMismatchError(f"block {name} must be {n}x{n}, got {A.shape}")
    if field is Field.REAL:
        if A.dtype.kind == "c":
            if np.abs(A.imag).max() != 0.0:
                raise FieldMismatchError(f"block {name} must be real")
            A = A.real
        return np.array(A, dtype=np.float64)
    return np.array(A, dtype=np.complex128)


@dataclasses.dataclass(frozen=True, eq=False)
class ScalarDiagonalElement:
    """Element of the scalar-diagonal system: [[a I, B], [C, d I]]."""

    system: SystemId
    a: complex
    d: complex
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        if self.system.kind is not SystemKind.SCALAR_DIAGONAL:
            raise UnsupportedSystemError(f"wrong system kind {self.system.kind}")
        n = self.system.n
        object.__setattr__(self, "a", _coerce_scalar(self.a, Field.COMPLEX, "a"))
        object.__setattr__(self, "d", _coerce_scalar(self.d, Field.COMPLEX, "d"))
        object.__setattr__(self, "B", _coerce_block(self.B, Field.COMPLEX, n, "B"))
        object.__setattr__(self, "C", _coerce_block(self.C, Field.COMPLEX, n, "C"))


@dataclasses.dataclass(frozen=True, eq=False)
class PairedCornerElement:
    """Element of a transpose-paired system: [[a I, C], [C^t, b I]]."""

    system: SystemId
    a: complex
    b: complex
    C: np.ndarray

    def __post_init__(self):
        if self.system.kind not in PAIRED_KINDS:
            raise UnsupportedSystemError(f"wrong system kind {self.system.kind}")
        f = self.system.field
        n = self.system.n
        object.__setattr__(self, "a", _coerce_scalar(self.a, f, "a"))
        object.__setattr__(self, "b", _coerce_scalar(self.b, f, "b"))
        object.__setattr__(self, "C", _coerce_block(self.C, f, n, "C"))


@dataclasses.dataclass(frozen=True, eq=False)
class FreeCornerElement:
    """Element of a free-corner system: [[A, b I], [c I, d I]]."""

    system: SystemId
    A: np.ndarray
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if self.system.kind not in CORNER_KINDS:
            raise UnsupportedSystemError(f"wrong system kind {self.system.kind}")
        f = self.system.field
        n = self.system.n
        object.__setattr__(self, "A", _coerce_block(self.A, f, n, "A"))
        object.__setattr__(self, "b", _coerce_scalar(self.b, f, "b"))
        object.__setattr__(self, "c", _coerce_scalar(self.c, f, "c"))
        object.__setattr__(self, "d", _coerce_scalar(self.d, f, "d"))


SystemElement = ScalarDiagonalElement | PairedCornerElement | FreeCornerElement


def identity_element(s: SystemId) -> SystemElement:
    """The element whose embedding is the 2n x 2n identity."""
    n = s.n
    dt = s.field.dtype
    Z = np.zeros((n, n), dtype=dt)
    if s.kind is SystemKind.SCALAR_DIAGONAL:
        return ScalarDiagonalElement(s, 1.0, 1.0, Z, Z.copy())
    if s.kind in PAIRED_KINDS:
        return PairedCornerElement(s, 1.0, 1.0, Z)
    return FreeCornerElement(s, np.eye(n, dtype=dt), 0.0, 0.0, 1.0)


def embed(e: SystemElement) -> np.ndarray:
    """The 2n x 2n matrix an element stands for."""
    s = e.system
    n = s.n
    dt = s.field.dtype
    I = np.eye(n, dtype=dt)
    if isinstance(e, ScalarDiagonalElement):
        return block2x2(e.a * I, e.B, e.C, e.d * I)
    if isinstance(e, PairedCornerElement):
        return block2x2(e.a * I, e.C, e.C.T, e.b * I)
    return block2x2(e.A, e.b * I, e.c * I, e.d * I)


def _is_scalar_block(X: np.ndarray, tol: float) -> bool:
    n = X.shape[0]
    return bool(np.abs(X - X[0, 0] * np.eye(n)).max() <= tol)


def contains(s: SystemId, M, tol: float = MEMBERSHIP_TOL) -> bool:
    """Whether a matrix lies in the subspace, entrywise within ``tol``."""
    A = as_square(M)
    if A.shape[0] != 2 * s.n:
        return False
    if s.field is Field.REAL and A.dtype.kind == "c":
        if np.abs(A.imag).max() > tol:
            return False
        A = A.real
    A11, A12, A21, A22 = blocks2x2(A)
    if s.kind is SystemKind.SCALAR_DIAGONAL:
        return _is_scalar_block(A11, tol) and _is_scalar_block(A22, tol)
    if s.kind in PAIRED_KINDS:
        return (
            _is_scalar_block(A11, tol)
            and _is_scalar_block(A22, tol)
            and bool(np.abs(A21 - A12.T).max() <= tol)
        )
    return (
        _is_scalar_block(A12, tol)
        and _is_scalar_block(A21, tol)
        and _is_scalar_block(A22, tol)
    )


def extract(s: SystemId, M, tol: float = MEMBERSHIP_TOL) -> SystemElement:
    """Read an element back off its embedding.

    Scalars are taken from single matrix entries (never from averages), so
    embed(extract(s, embed(e))) reproduces the matrix bit for bit.
    """
    if not contains(s, M, tol):
        raise DomainViolationError(f"matrix is not in {s.kind.token} at tol {tol}")
    A = as_square(M)
    if s.field is Field.REAL and A.dtype.kind == "c":
        A = A.real
    A11, A12, A21, A22 = blocks2x2(A)
    if s.kind is SystemKind.SCALAR_DIAGONAL:
        return ScalarDiagonalElement(s, A11[0, 0], A22[0, 0], A12, A21)
    if s.kind in PAIRED_KINDS:
        return PairedCornerElement(s, A11[0, 0], A22[0, 0], A12)
    return FreeCornerElement(s, A11, A12[0, 0], A21[0, 0], A22[0, 0])


def _draw_element(s: SystemId, rng: np.random.Generator, scale: float) -> SystemElement:
    n = s.n
    cplx = s.field is Field.COMPLEX

    def scalar():
        if cplx:
            return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))
        return float(rng.uniform(-scale, scale))

    def blk():
        # entry standard deviation scale/sqrt(n), split across parts when complex
        if cplx:
            sd = scale / math.sqrt(2 * n)
            return rng.normal(0.0, sd, (n, n)) + 1j * rng.normal(0.0, sd, (n, n))
        return rng.normal(0.0, scale / math.sqrt(n), (n, n))

    if s.kind is SystemKind.SCALAR_DIAGONAL:
        return ScalarDiagonalElement(s, scalar(), scalar(), blk(), blk())
    if s.kind in PAIRED_KINDS:
        return PairedCornerElement(s, scalar(), scalar(), blk())
    return FreeCornerElement(s, blk(), scalar(), scalar(), scalar())


def random_element(s: SystemId, rng_seed: int, scale: float = 1.0) -> SystemElement:
    """Seeded generic element: scalars uniform in [-scale, scale] (per part),
    blocks with i.i.d. entries of standard deviation scale/sqrt(n)."""
    return _draw_element(s, np.random.default_rng(rng_seed), scale)


def _draw_positive(s: SystemId, rng: np.random.Generator) -> SystemElement:
    n = s.n
    if s.kind is SystemKind.SCALAR_DIAGONAL:
        raise UnsupportedSystemError(
            "no positivity criterion is wired for the scalar-diagonal system"
        )
    if s.kind in PAIRED_KINDS:
        # corner norm capped by sqrt(ab); a tenth of draws pin a or b to 0,
        # which forces C = 0
        a = 0.0 if rng.random() < 0.1 else float(rng.uniform(0.05, 2.0))
        b = 0.0 if rng.random() < 0.1 else float(rng.uniform(0.05, 2.0))
        if a * b == 0.0:
            C = np.zeros((n, n))
        else:
            G = rng.normal(size=(n, n))
            nG = operator_norm(G)
            cap = math.sqrt(a * b)
            C = G * (rng.uniform(0.0, 1.0) * cap / max(nG, 1e-300))
        e: SystemElement = PairedCornerElement(s, a, b, C)
    else:
        G = (
            rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            if s.field is Field.COMPLEX
            else rng.normal(size=(n, n))
        )
        A = G @ G.conj().T / n
        d = 0.0 if rng.random() < 0.1 else float(rng.uniform(0.05, 2.0))
        if d == 0.0:
            b = 0.0 if s.field is Field.REAL else 0j
        else:
            lam_min = max(float(np.linalg.eigvalsh(A)[0]), 0.0)
            r = rng.uniform(0.0, 1.0) * math.sqrt(d * lam_min)
            if s.field is Field.COMPLEX:
                theta = rng.uniform(0.0, 2.0 * math.pi)
                b = r * complex(math.cos(theta), math.sin(theta))
            else:
                b = r if rng.random() < 0.5 else -r
        e = FreeCornerElement(s, A, b, np.conj(b), d)
    verdict = is_psd(embed(e), tol=1e-9)
    if not verdict.is_psd:
        raise AssertionError(
            f"positive sampler produced min eigenvalue {verdict.min_eigenvalue:.3e}"
        )
    return e


def random_positive_element(s: SystemId, rng_seed: int) -> SystemElement:
    """Seeded PSD element of a lemma-covered system, verified before return."""
    return _draw_positive(s, np.random.default_rng(rng_seed))


def is_positive_by_criterion(e: SystemElement, tol: float = 1e-7) -> bool:
    """Closed-form positivity test for the four lemma-covered systems.

    Paired shape: nonneg scalars with ||C|| <= sqrt(ab); when ab <= tol^2 the
    corner must vanish (||C|| <= tol).  Free-corner shape: A PSD, d >= 0,
    c = conj(b), and d A >= |b|^2 I; when d <= tol this degenerates to
    |b| <= tol with A PSD.  Complex variants must additionally be
    self-adjoint within tol.
    """
    if isinstance(e, ScalarDiagonalElement):
        raise UnsupportedSystemError(
            "no positivity criterion is wired for the scalar-diagonal system"
        )
    if isinstance(e, PairedCornerElement):
        a, b, C = complex(e.a), complex(e.b), e.C
        if e.system.field is Field.COMPLEX:
            if abs(a.imag) > tol or abs(b.imag) > tol:
                return False
            if np.abs(C.imag).max() > tol:
                return False
        ar, br = a.real, b.real
        if ar < -tol or br < -tol:
            return False
        norm_c = operator_norm(C.real if np.iscomplexobj(C) else C)
        ab = max(ar, 0.0) * max(br, 0.0)
        if ab <= tol * tol:
            return norm_c <= tol
        return norm_c <= math.sqrt(ab) + tol
    # free-corner shape
    A, b, c, d = e.A, complex(e.b), complex(e.c), complex(e.d)
    if abs(c - np.conj(b)) > tol:
        return False
    if hermiticity_defect(A) > tol:
        return False
    if abs(d.imag) > tol:
        return False
    dr = d.real
    if dr < -tol:
        return False
    H = (A + A.conj().T) / 2.0
    lam_min = float(np.linalg.eigvalsh(H)[0])
    if lam_min < -tol:
        return False
    if dr <= tol:
        return abs(b) <= tol
    return dr * lam_min >= abs(b) ** 2 - tol


def boundary_margin(e: SystemElement) -> float:
    """Distance of an element from the decision boundaries of the criterion.

    Used to filter random draws before comparing the criterion against the
    eigenvalue oracle: both can legitimately flip within a tolerance of the
    boundary.  Hermiticity defects contribute only when nonzero (an exactly
    self-adjoint element is not near the self-adjointness boundary).
    """
    def herm_margin(vals):
        live = [v for v in vals if v > 1e-12]
        return min(live) if live else math.inf

    if isinstance(e, ScalarDiagonalElement):
        raise UnsupportedSystemError(
            "no positivity criterion is wired for the scalar-diagonal system"
        )
    if isinstance(e, PairedCornerElement):
        a, b, C = complex(e.a), complex(e.b), e.C
        parts = [abs(a.real), abs(b.real)]
        if a.real > 0 and b.real > 0:
            norm_c = operator_norm(C.real if np.iscomplexobj(C) else C)
            parts.append(abs(math.sqrt(a.real * b.real) - norm_c))
        hm = herm_margin([abs(a.imag), abs(b.imag), float(np.abs(C.imag).max()) if np.iscomplexobj(C) else 0.0])
        return min(min(parts), hm)
    A, b, c, d = e.A, complex(e.b), complex(e.c), complex(e.d)
    hm = herm_margin([abs(c - np.conj(b)), hermiticity_defect(A), abs(d.imag)])
    H = (A + A.conj().T) / 2.0
    lam_min = float(np.linalg.eigvalsh(H)[0])
    parts = [abs(lam_min), abs(d.real)]
    if d.real > 0 and lam_min > 0:
        parts.append(abs(d.real * lam_min - abs(b) ** 2))
    return min(min(parts), hm)
