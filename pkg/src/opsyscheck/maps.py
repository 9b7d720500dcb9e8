"""The six block-transpose maps and their numerical checks.

Each map acts on 2x2 block matrices by transposing some blocks:

* quarter-transpose (token "phi"): both off-diagonal blocks are transposed
  and scaled by 1/4; domain scalar-diagonal.
* offdiag-swap (token "upsilon"): off-diagonal blocks transposed; domain
  transpose-paired, real.
* offdiag-swap-complex (token "upsilon-prime"): complex-linear extension of
  the same rule to the complex span.
* corner-transpose (token "gamma"): upper-left block transposed; domain
  free-corner.
* block-transpose (token "psi-transpose"): every block transposed; defined
  on the full complex algebra.  Restricted to any of the four domains above
  (without the 1/4 scaling) it reproduces the corresponding map, which is
  why it appears as the forced extension candidate.
* corner-transpose-full (token "psi-real-ext"): upper-left block transposed,
  defined on the full real algebra.

Checks: structure (unital, self-adjointness, linearity), positivity on
seeded PSD inputs, multi-start norm estimation, a closed-form norm bound for
the complex swap, Kadison-Schwarz defects for forced extension candidates,
and the singular-value invariance when the two scalar corners of a
free-corner element trade places.
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np
import scipy.optimize

from .linalg import (
    as_square,
    blocks2x2,
    char_poly_block_eval,
    hermiticity_defect,
    is_psd,
    matrix_unit,
    operator_norm,
)
from .systems import (
    DomainViolationError,
    Field,
    FreeCornerElement,
    PairedCornerElement,
    ScalarDiagonalElement,
    SystemElement,
    SystemId,
    SystemKind,
    _draw_element,
    _draw_positive,
    contains,
    embed,
    identity_element,
)


class PreconditionError(ValueError):
    """An input violates a documented precondition of the routine."""


class MapKind(enum.Enum):
    QUARTER_TRANSPOSE = ("phi", SystemKind.SCALAR_DIAGONAL, Field.COMPLEX)
    OFFDIAG_SWAP = ("upsilon", SystemKind.TRANSPOSE_PAIRED, Field.REAL)
    OFFDIAG_SWAP_COMPLEX = (
        "upsilon-prime",
        SystemKind.TRANSPOSE_PAIRED_COMPLEX,
        Field.COMPLEX,
    )
    CORNER_TRANSPOSE = ("gamma", SystemKind.FREE_CORNER, Field.COMPLEX)
    BLOCK_TRANSPOSE = ("psi-transpose", None, Field.COMPLEX)
    CORNER_TRANSPOSE_FULL = ("psi-real-ext", None, Field.REAL)

    def __init__(self, token: str, domain_kind, field: Field):
        self.token = token
        self.domain_kind = domain_kind
        self.field = field


MAP_KIND_BY_TOKEN = {k.token: k for k in MapKind}


@dataclasses.dataclass(frozen=True)
class MapId:
    """A map kind at a fixed block size n."""

    kind: MapKind
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"block size must be positive, got {self.n}")

    @property
    def field(self) -> Field:
        return self.kind.field

    @property
    def domain(self) -> SystemId | None:
        if self.kind.domain_kind is None:
            return None
        return SystemId(self.kind.domain_kind, self.n)


def block_transpose(M) -> np.ndarray:
    """Transpose each of the four blocks in place."""
    A, B, C, D = blocks2x2(M)
    return np.block([[A.T, B.T], [C.T, D.T]])


def _opnorm(M: np.ndarray) -> float:
    # hot-loop spectral norm; same SVD path as operator_norm without coercion
    return float(np.linalg.svd(M, compute_uv=False)[0])


def _blockwise(kind: MapKind, M: np.ndarray) -> np.ndarray:
    n = M.shape[0] // 2
    out = M.copy()
    if kind is MapKind.QUARTER_TRANSPOSE:
        out[:n, n:] = M[:n, n:].T / 4.0
        out[n:, :n] = M[n:, :n].T / 4.0
    elif kind in (MapKind.OFFDIAG_SWAP, MapKind.OFFDIAG_SWAP_COMPLEX):
        out[:n, n:] = M[:n, n:].T
        out[n:, :n] = M[n:, :n].T
    elif kind in (MapKind.CORNER_TRANSPOSE, MapKind.CORNER_TRANSPOSE_FULL):
        out[:n, :n] = M[:n, :n].T
    else:
        out[:n, :n] = M[:n, :n].T
        out[:n, n:] = M[:n, n:].T
        out[n:, :n] = M[n:, :n].T
        out[n:, n:] = M[n:, n:].T
    return out


def apply(m: MapId, x, tol: float = 1e-10):
    """Apply a map to an element of its domain or to a matrix.

    Elements come back as elements, matrices as matrices.  Matrices are
    membership-checked against the domain first (full-algebra maps only
    check the field), raising DomainViolationError on failure.
    """
    if isinstance(x, (ScalarDiagonalElement, PairedCornerElement, FreeCornerElement)):
        return _apply_element(m, x)
    M = as_square(x)
    dom = m.domain
    if M.shape[0] != 2 * m.n:
        raise DomainViolationError(
            f"matrix order {M.shape[0]} does not match map order {2 * m.n}"
        )
    if dom is not None:
        if not contains(dom, M, tol):
            raise DomainViolationError(f"matrix is not in {dom.kind.token} at tol {tol}")
    elif m.field is Field.REAL and M.dtype.kind == "c":
        if np.abs(M.imag).max() > tol:
            raise DomainViolationError("real-algebra map applied to a complex matrix")
        M = M.real
    return _blockwise(m.kind, M)


def _apply_element(m: MapId, e: SystemElement) -> SystemElement:
    dom = m.domain
    if dom is None or e.system != dom:
        raise DomainViolationError(
            f"element of {e.system.kind.token} (n={e.system.n}) is not in the domain"
            f" of {m.kind.token} at n={m.n}"
        )
    if isinstance(e, ScalarDiagonalElement):
        return ScalarDiagonalElement(dom, e.a, e.d, e.B.T / 4.0, e.C.T / 4.0)
    if isinstance(e, PairedCornerElement):
        return PairedCornerElement(dom, e.a, e.b, e.C.T)
    return FreeCornerElement(dom, e.A.T, e.b, e.c, e.d)


def _random_full_matrix(n: int, field: Field, rng: np.random.Generator) -> np.ndarray:
    if field is Field.COMPLEX:
        return (
            rng.normal(size=(2 * n, 2 * n)) + 1j * rng.normal(size=(2 * n, 2 * n))
        ) / math.sqrt(4 * n)
    return rng.normal(size=(2 * n, 2 * n)) / math.sqrt(2 * n)


def _random_domain_matrix(m: MapId, rng: np.random.Generator) -> np.ndarray:
    dom = m.domain
    if dom is None:
        return _random_full_matrix(m.n, m.field, rng)
    return embed(_draw_element(dom, rng, 1.0))


@dataclasses.dataclass(frozen=True)
class StructuralReport:
    """Residuals for unitality, self-adjointness and linearity."""

    trials: int
    unital_residual: float
    self_adjoint_worst: float
    self_adjoint_failures: int
    linear_worst: float
    linear_failures: int
    passed: bool


def check_structural(m: MapId, trials: int = 25, rng_seed: int = 0, tol: float = 1e-9) -> StructuralReport:
    """Verify the map is unital, self-adjointness-preserving and linear.

    Self-adjointness means apply(M*) = apply(M)* over the complex field and
    apply(M^t) = apply(M)^t over the real field.  Failures are counted and
    reported, never raised.
    """
    rng = np.random.default_rng(rng_seed)
    n2 = 2 * m.n
    I = np.eye(n2, dtype=m.field.dtype)
    unital_residual = float(np.abs(apply(m, I) - I).max())

    sa_worst = 0.0
    sa_fail = 0
    lin_worst = 0.0
    lin_fail = 0
    for _ in range(trials):
        M = _random_domain_matrix(m, rng)
        if m.field is Field.COMPLEX:
            r = float(np.abs(apply(m, M.conj().T) - apply(m, M).conj().T).max())
        else:
            r = float(np.abs(apply(m, M.T) - apply(m, M).T).max())
        sa_worst = max(sa_worst, r)
        if r > tol:
            sa_fail += 1

        N = _random_domain_matrix(m, rng)
        if m.field is Field.COMPLEX:
            alpha = complex(rng.normal(), rng.normal())
            beta = complex(rng.normal(), rng.normal())
        else:
            alpha = float(rng.normal())
            beta = float(rng.normal())
        r = float(
            np.abs(apply(m, alpha * M + beta * N) - (alpha * apply(m, M) + beta * apply(m, N))).max()
        )
        lin_worst = max(lin_worst, r)
        if r > tol:
            lin_fail += 1

    passed = unital_residual <= tol and sa_fail == 0 and lin_fail == 0
    return StructuralReport(
        trials=trials,
        unital_residual=unital_residual,
        self_adjoint_worst=sa_worst,
        self_adjoint_failures=sa_fail,
        linear_worst=lin_worst,
        linear_failures=lin_fail,
        passed=passed,
    )


def corner_witness(n: int) -> np.ndarray:
    """Rank-one PSD matrix vv* with v = e1 (+) e2, written in 2x2 block form.

    Its blockwise transpose has an eigenvalue of exactly -1, which is the
    closing violation in the corner-transpose certificate and the seeded
    counterexample for the full block transpose.  Requires n >= 2.
    """
    if n < 2:
        raise ValueError(f"corner witness needs n >= 2, got {n}")
    v = np.zeros(2 * n, dtype=np.complex128)
    v[0] = 1.0
    v[n + 1] = 1.0
    return np.outer(v, v.conj())


def _draw_positive_scalar_diagonal(s: SystemId, rng: np.random.Generator) -> ScalarDiagonalElement:
    """PSD element of the scalar-diagonal system: [[aI, B], [B*, dI]] is PSD
    iff a, d >= 0 and ||B|| <= sqrt(ad)."""
    n = s.n
    a = 0.0 if rng.random() < 0.1 else float(rng.uniform(0.05, 2.0))
    d = 0.0 if rng.random() < 0.1 else float(rng.uniform(0.05, 2.0))
    if a * d == 0.0:
        B = np.zeros((n, n), dtype=np.complex128)
    else:
        G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        B = G * (rng.uniform(0.0, 1.0) * math.sqrt(a * d) / max(operator_norm(G), 1e-300))
    return ScalarDiagonalElement(s, a, d, B, B.conj().T)


def _random_psd_full(n: int, field: Field, rng: np.random.Generator, trial: int) -> np.ndarray:
    n2 = 2 * n
    if trial % 2 == 0:
        if field is Field.COMPLEX:
            v = rng.normal(size=n2) + 1j * rng.normal(size=n2)
        else:
            v = rng.normal(size=n2)
        nv = float(np.real(np.vdot(v, v)))
        return np.outer(v, v.conj()) / max(nv, 1e-300)
    G = _random_full_matrix(n, field, rng)
    return G @ G.conj().T


def _positive_sample(m: MapId, rng: np.random.Generator, trial: int) -> np.ndarray:
    kind = m.kind
    if kind is MapKind.QUARTER_TRANSPOSE:
        return embed(_draw_positive_scalar_diagonal(m.domain, rng))
    if kind in (MapKind.OFFDIAG_SWAP, MapKind.OFFDIAG_SWAP_COMPLEX, MapKind.CORNER_TRANSPOSE):
        return embed(_draw_positive(m.domain, rng))
    if kind is MapKind.BLOCK_TRANSPOSE and trial == 0 and m.n >= 2:
        return corner_witness(m.n)
    return _random_psd_full(m.n, m.field, rng, trial)


@dataclasses.dataclass(frozen=True)
class PositivityViolation:
    trial: int
    input: np.ndarray
    output: np.ndarray
    min_eigenvalue: float
    hermiticity_defect: float


@dataclasses.dataclass(frozen=True)
class PositivityReport:
    trials: int
    violation_count: int
    violations: tuple[PositivityViolation, ...]
    min_output_eigenvalue: float


_MAX_STORED_VIOLATIONS = 16


def check_positivity_preserving(
    m: MapId, trials: int = 1000, rng_seed: int = 0, tol: float = 1e-7
) -> PositivityReport:
    """Push seeded PSD inputs through the map and eigencheck the outputs.

    The first trial for the full block transpose (n >= 2) is the corner
    witness, so its violation is found deterministically.  At most 16
    violations are stored; all are counted.
    """
    rng = np.random.default_rng(rng_seed)
    violations: list[PositivityViolation] = []
    count = 0
    min_out = math.inf
    for t in range(trials):
        S = _positive_sample(m, rng, t)
        out = apply(m, S)
        verdict = is_psd(out, tol)
        min_out = min(min_out, verdict.min_eigenvalue)
        if not verdict.is_psd:
            count += 1
            if len(violations) < _MAX_STORED_VIOLATIONS:
                violations.append(
                    PositivityViolation(
                        trial=t,
                        input=S,
                        output=out,
                        min_eigenvalue=verdict.min_eigenvalue,
                        hermiticity_defect=verdict.hermiticity_defect,
                    )
                )
    return PositivityReport(
        trials=trials,
        violation_count=count,
        violations=tuple(violations),
        min_output_eigenvalue=float(min_out),
    )


class NormStrategy(enum.Enum):
    SAMPLING = "sampling"
    CLOSED_FORM = "closed-form"
    WITNESS_ONLY = "witness-only"


@dataclasses.dataclass(frozen=True)
class NormEstimate:
    """Certified-from-below norm estimate with a unit-norm witness."""

    lower_bound: float
    upper_bound: float | None
    witness: np.ndarray
    strategy: NormStrategy


_CLOSED_FORM_UPPER = {
    MapKind.QUARTER_TRANSPOSE: 1.0,
    MapKind.OFFDIAG_SWAP: 1.0,
    MapKind.OFFDIAG_SWAP_COMPLEX: 2.0 / math.sqrt(3.0),
    MapKind.CORNER_TRANSPOSE: 1.0,
}


def _param_dim(m: MapId) -> int:
    n = m.n
    if m.kind is MapKind.QUARTER_TRANSPOSE:
        return 4 + 4 * n * n
    if m.kind is MapKind.OFFDIAG_SWAP:
        return 2 + n * n
    if m.kind is MapKind.OFFDIAG_SWAP_COMPLEX:
        return 4 + 2 * n * n
    if m.kind is MapKind.CORNER_TRANSPOSE:
        return 6 + 2 * n * n
    if m.kind is MapKind.BLOCK_TRANSPOSE:
        return 2 * 4 * n * n
    return 4 * n * n


def _params_to_matrix(m: MapId, x: np.ndarray) -> np.ndarray:
    n = m.n
    kind = m.kind
    nn = n * n
    if kind is MapKind.QUARTER_TRANSPOSE:
        out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        np.fill_diagonal(out[:n, :n], complex(x[0], x[1]))
        np.fill_diagonal(out[n:, n:], complex(x[2], x[3]))
        out[:n, n:] = (x[4 : 4 + nn] + 1j * x[4 + nn : 4 + 2 * nn]).reshape(n, n)
        out[n:, :n] = (x[4 + 2 * nn : 4 + 3 * nn] + 1j * x[4 + 3 * nn :]).reshape(n, n)
        return out
    if kind is MapKind.OFFDIAG_SWAP:
        out = np.zeros((2 * n, 2 * n))
        np.fill_diagonal(out[:n, :n], float(x[0]))
        np.fill_diagonal(out[n:, n:], float(x[1]))
        C = x[2:].reshape(n, n)
        out[:n, n:] = C
        out[n:, :n] = C.T
        return out
    if kind is MapKind.OFFDIAG_SWAP_COMPLEX:
        out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        np.fill_diagonal(out[:n, :n], complex(x[0], x[1]))
        np.fill_diagonal(out[n:, n:], complex(x[2], x[3]))
        C = (x[4 : 4 + nn] + 1j * x[4 + nn :]).reshape(n, n)
        out[:n, n:] = C
        out[n:, :n] = C.T
        return out
    if kind is MapKind.CORNER_TRANSPOSE:
        out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        np.fill_diagonal(out[:n, n:], complex(x[0], x[1]))
        np.fill_diagonal(out[n:, :n], complex(x[2], x[3]))
        np.fill_diagonal(out[n:, n:], complex(x[4], x[5]))
        out[:n, :n] = (x[6 : 6 + nn] + 1j * x[6 + nn :]).reshape(n, n)
        return out
    if kind is MapKind.BLOCK_TRANSPOSE:
        half = 4 * nn
        return (x[:half] + 1j * x[half:]).reshape(2 * n, 2 * n)
    return x.reshape(2 * n, 2 * n)


def _structured_starts(m: MapId) -> list[np.ndarray]:
    n = m.n
    starts = [_matrix_to_params(m, np.eye(2 * n, dtype=m.field.dtype))]
    if m.kind is MapKind.OFFDIAG_SWAP_COMPLEX:
        # the corner witness of the norm proposition, padded to size n
        C = np.zeros((n, n), dtype=np.complex128)
        C[0, 0] = 1.0
        if n >= 2:
            C[1, 0] = 1.0j
        I = np.eye(n, dtype=np.complex128)
        Z = np.zeros((n, n), dtype=np.complex128)
        starts.append(_matrix_to_params(m, np.block([[I, C], [C.T, Z]])))
    if m.kind is MapKind.BLOCK_TRANSPOSE and n >= 2:
        starts.append(_matrix_to_params(m, block_transpose(corner_witness(n))))
    return starts


def _matrix_to_params(m: MapId, M: np.ndarray) -> np.ndarray:
    n = m.n
    kind = m.kind
    M = M.astype(m.field.dtype, copy=False)
    A, B, C, D = blocks2x2(M)
    if kind is MapKind.QUARTER_TRANSPOSE:
        return np.concatenate(
            [
                [A[0, 0].real, A[0, 0].imag, D[0, 0].real, D[0, 0].imag],
                B.real.ravel(),
                B.imag.ravel(),
                C.real.ravel(),
                C.imag.ravel(),
            ]
        )
    if kind is MapKind.OFFDIAG_SWAP:
        return np.concatenate([[A[0, 0], D[0, 0]], B.ravel()])
    if kind is MapKind.OFFDIAG_SWAP_COMPLEX:
        return np.concatenate(
            [
                [A[0, 0].real, A[0, 0].imag, D[0, 0].real, D[0, 0].imag],
                B.real.ravel(),
                B.imag.ravel(),
            ]
        )
    if kind is MapKind.CORNER_TRANSPOSE:
        return np.concatenate(
            [
                [
                    B[0, 0].real,
                    B[0, 0].imag,
                    C[0, 0].real,
                    C[0, 0].imag,
                    D[0, 0].real,
                    D[0, 0].imag,
                ],
                A.real.ravel(),
                A.imag.ravel(),
            ]
        )
    if kind is MapKind.BLOCK_TRANSPOSE:
        return np.concatenate([M.real.ravel(), M.imag.ravel()])
    return M.ravel().astype(np.float64)


def estimate_map_norm(
    m: MapId, restarts: int = 50, rng_seed: int = 0, maxiter: int = 500
) -> NormEstimate:
    """Multi-start simplex search for the operator norm of the map.

    The objective is the scale-invariant ratio ||map(e)|| / ||e|| over a real
    parameterization of the domain; every evaluated ratio is tracked, so the
    returned lower bound is the best value seen anywhere, renormalized
    through the stored witness.  The first start is the identity; maps with
    a known extremal configuration get it as a second start; the remaining
    starts are seeded Gaussian draws.
    """
    dim = _param_dim(m)
    best = {"val": -1.0, "params": None}

    def ratio(x: np.ndarray) -> float:
        M = _params_to_matrix(m, x)
        nm = _opnorm(M)
        if nm < 1e-9:
            return 0.0
        r = _opnorm(_blockwise(m.kind, M)) / nm
        if r > best["val"]:
            best["val"] = r
            best["params"] = x.copy()
        return r

    # structured starts always run; random restarts fill the remaining budget
    starts = _structured_starts(m)
    for k in range(len(starts), restarts):
        rng = np.random.default_rng([rng_seed, k])
        starts.append(rng.normal(size=dim))
    for x0 in starts:
        scipy.optimize.minimize(
            lambda x: -ratio(x),
            x0,
            method="Nelder-Mead",
            options={"maxiter": maxiter, "fatol": 1e-10, "xatol": 1e-10},
        )
    W = _params_to_matrix(m, best["params"])
    W = W / operator_norm(W)
    lower = operator_norm(_blockwise(m.kind, W))
    upper = _CLOSED_FORM_UPPER.get(m.kind)
    strategy = NormStrategy.CLOSED_FORM if upper is not None else NormStrategy.WITNESS_ONLY
    return NormEstimate(lower_bound=lower, upper_bound=upper, witness=W, strategy=strategy)


def offdiag_swap_norm_bound(a, b, C, tol: float = 1e-9) -> float:
    """Closed-form upper bound (|a| + |b| + sqrt((|b|-|a|)^2 + 4||C||^2)) / 2
    on the image norm under the complex off-diagonal swap.

    Requires the embedded element [[aI, C], [C^t, bI]] to have norm at most
    1 + tol.  The formula is symmetric in |a| and |b|, so it also covers the
    element with the two scalars traded.
    """
    C = as_square(np.asarray(C, dtype=np.complex128), "C")
    n = C.shape[0]
    a = complex(a)
    b = complex(b)
    I = np.eye(n, dtype=np.complex128)
    M = np.block([[a * I, C], [C.T, b * I]])
    nM = operator_norm(M)
    if nM > 1.0 + tol:
        raise PreconditionError(f"element norm {nM:.6f} exceeds 1 + {tol:.1e}")
    nC = operator_norm(C)
    return 0.5 * (abs(a) + abs(b) + math.sqrt((abs(b) - abs(a)) ** 2 + 4.0 * nC * nC))


def swap_bound_domination(n: int, samples: int = 10_000, rng_seed: int = 0) -> float:
    """Smallest margin of the closed-form bound over the true image norm.

    Draws seeded elements of the complex paired system, rescales each to
    norm at most 1, and returns min(bound - ||image||) across the draws.
    A nonnegative return (within roundoff) means the bound dominated every
    sample.
    """
    s = SystemId(SystemKind.TRANSPOSE_PAIRED_COMPLEX, n)
    m = MapId(MapKind.OFFDIAG_SWAP_COMPLEX, n)
    rng = np.random.default_rng(rng_seed)
    worst = math.inf
    for t in range(samples):
        e = _draw_element(s, rng, 1.0)
        M = embed(e)
        nm = _opnorm(M)
        if nm < 1e-12:
            continue
        # scale to the unit ball, brushing the boundary on half the draws
        factor = 1.0 if t % 2 == 0 else float(rng.uniform(0.1, 1.0))
        scale = factor / nm
        a, b, C = e.a * scale, e.b * scale, e.C * scale
        bound = offdiag_swap_norm_bound(a, b, C)
        image = _opnorm(_blockwise(m.kind, M * scale))
        worst = min(worst, bound - image)
    return float(worst)


def _trace_average_diagonal(M: np.ndarray) -> np.ndarray:
    """Conditional-expectation step: diagonal blocks averaged to (tr/n) I."""
    A, B, C, D = blocks2x2(M)
    n = A.shape[0]
    I = np.eye(n, dtype=M.dtype)
    return np.block([[np.trace(A) / n * I, B], [C, np.trace(D) / n * I]])


@dataclasses.dataclass(frozen=True)
class SchwarzReport:
    """Minimum eigenvalue of candidate(M^2) - map(M)^2 on a self-adjoint M."""

    defect_min_eigenvalue: float
    holds: bool
    candidate: str


def kadison_schwarz_check(m: MapId, x, tol: float = 1e-9) -> SchwarzReport:
    """Schwarz-inequality defect for a map's forced extension candidate.

    M^2 leaves the domain of the restricted maps, so the check evaluates a
    candidate extension there: the blockwise transpose for the four
    transpose-family maps it restricts to, and for the quarter-transpose the
    composition with the trace-averaging compression onto scalar-diagonal
    form.  Full-algebra maps are their own candidate.  The defect matrix is
    candidate(M^2) - (map(M))^2; the inequality holds when its smallest
    eigenvalue is >= -tol.
    """
    M = embed(x) if isinstance(
        x, (ScalarDiagonalElement, PairedCornerElement, FreeCornerElement)
    ) else as_square(x)
    dom = m.domain
    if M.shape[0] != 2 * m.n:
        raise DomainViolationError("matrix order does not match the map")
    if dom is not None and not contains(dom, M):
        raise DomainViolationError(f"matrix is not in {dom.kind.token}")
    if hermiticity_defect(M) > 1e-8:
        raise PreconditionError("Schwarz check needs a self-adjoint input")
    Msq = M @ M
    if m.kind is MapKind.QUARTER_TRANSPOSE:
        evaluated = _blockwise(m.kind, _trace_average_diagonal(Msq))
        candidate = "trace-averaged-compression"
    elif dom is not None:
        evaluated = block_transpose(Msq)
        candidate = "blockwise-transpose"
    else:
        evaluated = _blockwise(m.kind, Msq)
        candidate = "map-itself"
    FM = _blockwise(m.kind, M)
    delta = evaluated - FM @ FM
    H = (delta + delta.conj().T) / 2.0
    dmin = float(np.linalg.eigvalsh(H)[0])
    return SchwarzReport(defect_min_eigenvalue=dmin, holds=dmin >= -tol, candidate=candidate)


def corner_square_identities(A, c, d) -> float:
    """Residual of the three block-square displays for M = [[A, cbar I], [c I, d I]].

    For self-adjoint A, real d and complex c, checks entrywise that

        M^2            = [[A^2 + |c|^2 I, cbar (A + d I)], [c (A + d I), (|c|^2 + d^2) I]]
        blockT(M^2)    = the same with A and (A + d I) transposed
        (blockT(M))^2  = the same expression built from A^t

    and returns the largest deviation across the three.
    """
    A = as_square(np.asarray(A, dtype=np.complex128), "A")
    if hermiticity_defect(A) > 1e-12:
        raise PreconditionError("A must be self-adjoint")
    c = complex(c)
    d = float(d)
    n = A.shape[0]
    I = np.eye(n, dtype=np.complex128)
    M = np.block([[A, np.conj(c) * I], [c * I, d * I]])

    def square_display(X: np.ndarray) -> np.ndarray:
        return np.block(
            [
                [X @ X + abs(c) ** 2 * I, np.conj(c) * (X + d * I)],
                [c * (X + d * I), (abs(c) ** 2 + d * d) * I],
            ]
        )

    r1 = float(np.abs(M @ M - square_display(A)).max())
    bt_sq = block_transpose(M @ M)
    display_bt = np.block(
        [
            [(A @ A).T + abs(c) ** 2 * I, np.conj(c) * (A.T + d * I)],
            [c * (A.T + d * I), (abs(c) ** 2 + d * d) * I],
        ]
    )
    r2 = float(np.abs(bt_sq - display_bt).max())
    BTM = block_transpose(M)
    r3 = float(np.abs(BTM @ BTM - square_display(A.T)).max())
    return max(r1, r2, r3)


def swap_bc_singular_check(n: int, trials: int = 1000, rng_seed: int = 0) -> float:
    """Largest deviation between the sorted singular values of
    [[A, bI], [cI, dI]] and [[A, cI], [bI, dI]] over seeded random draws."""
    rng = np.random.default_rng(rng_seed)
    worst = 0.0
    I = np.eye(n, dtype=np.complex128)
    for _ in range(trials):
        A = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2 * n)
        b, c, d = (complex(rng.normal(), rng.normal()) / math.sqrt(2) for _ in range(3))
        M = np.block([[A, b * I], [c * I, d * I]])
        N = np.block([[A, c * I], [b * I, d * I]])
        dev = float(np.abs(np.linalg.svd(M, compute_uv=False) - np.linalg.svd(N, compute_uv=False)).max())
        worst = max(worst, dev)
    return worst


def char_poly_swap_check(
    n: int, instances: int = 25, lambdas: int = 20, rng_seed: int = 0
) -> float:
    """Relative agreement of char_poly evaluations under the b-c swap.

    For each instance, compares det(M*M - lam I) against det(N*N - lam I)
    directly, and the reduced n x n evaluation against the direct 2n x 2n
    determinant, at ``lambdas`` random complex points.  Returns the largest
    relative deviation.
    """
    rng = np.random.default_rng(rng_seed)
    worst = 0.0
    I = np.eye(n, dtype=np.complex128)
    I2n = np.eye(2 * n, dtype=np.complex128)
    for _ in range(instances):
        A = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2 * n)
        b, c, d = (complex(rng.normal(), rng.normal()) / math.sqrt(2) for _ in range(3))
        M = np.block([[A, b * I], [c * I, d * I]])
        N = np.block([[A, c * I], [b * I, d * I]])
        GM = M.conj().T @ M
        GN = N.conj().T @ N
        for _ in range(lambdas):
            lam = complex(rng.normal(), rng.normal())
            pM = complex(np.linalg.det(GM - lam * I2n))
            pN = complex(np.linalg.det(GN - lam * I2n))
            pR = char_poly_block_eval(A, b, c, d, lam)
            scale = max(abs(pM), abs(pN), 1e-30)
            worst = max(worst, abs(pM - pN) / scale, abs(pR - pM) / scale)
    return worst


def quarter_transpose_witness_norm(n: int) -> float:
    """Norm of the amplified off-diagonal quarter transpose on its standard
    entangled witness; equals n/4, crossing 1 strictly between n=4 and n=5."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    Y = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            Y += np.kron(matrix_unit(n, i + 1, j + 1), matrix_unit(n, i + 1, j + 1))
    return operator_norm(Y / 4.0)


def complex_swap_witness() -> tuple[np.ndarray, np.ndarray]:
    """The norm-ratio witness of the complex off-diagonal swap at n = 2.

    Returns (M, N) with N the image of M: ||M|| = sqrt(3), ||N|| = 2, so the
    ratio attains 2/sqrt(3).
    """
    M = np.array(
        [
            [1, 0, 1, 0],
            [0, 1, 1j, 0],
            [1, 1j, 0, 0],
            [0, 0, 0, 0],
        ],
        dtype=np.complex128,
    )
    N = np.array(
        [
            [1, 0, 1, 1j],
            [0, 1, 0, 0],
            [1, 0, 0, 0],
            [1j, 0, 0, 0],
        ],
        dtype=np.complex128,
    )
    return M, N
