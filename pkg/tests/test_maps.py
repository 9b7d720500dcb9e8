"""Unit tests for the six block maps: action, norms, positivity, identities."""

import math

import numpy as np
import pytest

from opsyscheck import (
    DomainViolationError,
    MapId,
    MapKind,
    NormStrategy,
    PreconditionError,
    SystemId,
    SystemKind,
    apply,
    block_transpose,
    char_poly_swap_check,
    check_positivity_preserving,
    check_structural,
    complex_swap_witness,
    corner_square_identities,
    corner_witness,
    embed,
    estimate_map_norm,
    hermitian_eigenvalues,
    kadison_schwarz_check,
    offdiag_swap_norm_bound,
    operator_norm,
    quarter_transpose_witness_norm,
    random_element,
    random_positive_element,
    swap_bc_singular_check,
    swap_bound_domination,
)

ALL_MAPS = list(MapKind)
POSITIVE_MAPS = [
    MapKind.QUARTER_TRANSPOSE,
    MapKind.OFFDIAG_SWAP,
    MapKind.OFFDIAG_SWAP_COMPLEX,
    MapKind.CORNER_TRANSPOSE,
    MapKind.CORNER_TRANSPOSE_FULL,
]


def test_map_tokens():
    assert {m.token for m in ALL_MAPS} == {
        "phi",
        "upsilon",
        "upsilon-prime",
        "gamma",
        "psi-transpose",
        "psi-real-ext",
    }
    assert MapKind.QUARTER_TRANSPOSE.domain_kind is SystemKind.SCALAR_DIAGONAL
    assert MapKind.BLOCK_TRANSPOSE.domain_kind is None
    assert MapId(MapKind.OFFDIAG_SWAP, 3).domain == SystemId(SystemKind.TRANSPOSE_PAIRED, 3)
    assert MapId(MapKind.BLOCK_TRANSPOSE, 3).domain is None


def test_block_transpose_involution():
    rng = np.random.default_rng(0)
    M = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    assert np.array_equal(block_transpose(block_transpose(M)), M)


def test_golden_pair_frozen_values():
    """The 4 x 4 witness pair: spectra {0,0,3,3} -> {0,1,1,4}, norms sqrt(3) -> 2."""
    M, N = complex_swap_witness()
    assert M.shape == (4, 4) and N.shape == (4, 4)
    expect_M = np.array(
        [
            [1, 0, 1, 0],
            [0, 1, 1j, 0],
            [1, 1j, 0, 0],
            [0, 0, 0, 0],
        ],
        dtype=np.complex128,
    )
    assert np.array_equal(M, expect_M)
    eig_in = np.sort(np.linalg.eigvalsh(M.conj().T @ M))
    eig_out = np.sort(np.linalg.eigvalsh(N.conj().T @ N))
    assert np.abs(eig_in - np.array([0.0, 0.0, 3.0, 3.0])).max() < 1e-10
    assert np.abs(eig_out - np.array([0.0, 1.0, 1.0, 4.0])).max() < 1e-10
    assert abs(operator_norm(M) - math.sqrt(3.0)) < 1e-12
    assert abs(operator_norm(N) - 2.0) < 1e-12


def test_golden_pair_is_the_map_image():
    M, N = complex_swap_witness()
    out = apply(MapId(MapKind.OFFDIAG_SWAP_COMPLEX, 2), M)
    assert np.array_equal(out, N)


@pytest.mark.parametrize("kind", ALL_MAPS)
def test_apply_element_matches_matrix_action(kind):
    """Applying to an element then embedding equals acting on the embedding."""
    n = 3
    m = MapId(kind, n)
    if m.domain is None:
        return
    for seed in range(10):
        e = random_element(m.domain, rng_seed=seed)
        out_elem = apply(m, e)
        assert np.array_equal(embed(out_elem), apply(m, embed(e)))


def test_apply_membership_gate():
    m = MapId(MapKind.QUARTER_TRANSPOSE, 2)
    with pytest.raises(DomainViolationError):
        apply(m, np.arange(16.0).reshape(4, 4))
    m_real = MapId(MapKind.CORNER_TRANSPOSE_FULL, 2)
    with pytest.raises(DomainViolationError):
        apply(m_real, 1j * np.eye(4))


def test_quarter_transpose_scales_corners():
    m = MapId(MapKind.QUARTER_TRANSPOSE, 2)
    e = random_element(SystemId(SystemKind.SCALAR_DIAGONAL, 2), rng_seed=5)
    out = apply(m, e)
    assert np.array_equal(out.B, e.B.T / 4.0)
    assert np.array_equal(out.C, e.C.T / 4.0)
    assert out.a == e.a and out.d == e.d


def test_swap_maps_are_involutions_on_domain():
    for kind in (MapKind.OFFDIAG_SWAP, MapKind.OFFDIAG_SWAP_COMPLEX, MapKind.CORNER_TRANSPOSE):
        m = MapId(kind, 3)
        for seed in range(5):
            M = embed(random_element(m.domain, rng_seed=seed))
            assert np.array_equal(apply(m, apply(m, M)), M)


@pytest.mark.parametrize("kind", ALL_MAPS)
def test_structural_checks_pass(kind):
    rep = check_structural(MapId(kind, 3), trials=25, rng_seed=0)
    assert rep.passed
    assert rep.unital_residual == 0.0
    assert rep.self_adjoint_failures == 0
    assert rep.linear_failures == 0
    assert rep.linear_worst < 1e-9


def test_corner_witness_spectra():
    W = corner_witness(2)
    assert np.abs(hermitian_eigenvalues(W) - np.array([0.0, 0.0, 0.0, 2.0])).max() < 1e-12
    out = block_transpose(W)
    assert np.abs(hermitian_eigenvalues(out) - np.array([-1.0, 1.0, 1.0, 1.0])).max() < 1e-12
    with pytest.raises(ValueError):
        corner_witness(1)


@pytest.mark.parametrize("kind", POSITIVE_MAPS)
def test_positivity_preserved(kind):
    rep = check_positivity_preserving(MapId(kind, 3), trials=250, rng_seed=0)
    assert rep.violations == ()
    assert rep.trials == 250


def test_block_transpose_violates_positivity():
    rep = check_positivity_preserving(MapId(MapKind.BLOCK_TRANSPOSE, 2), trials=50, rng_seed=0)
    assert len(rep.violations) >= 1
    first = rep.violations[0]
    # the corner witness is probed first and its image has eigenvalue -1
    assert first.trial == 0
    assert abs(first.min_eigenvalue + 1.0) < 1e-10
    assert rep.min_output_eigenvalue <= -1.0 + 1e-10


def test_positivity_report_caps_stored_witnesses():
    rep = check_positivity_preserving(MapId(MapKind.BLOCK_TRANSPOSE, 2), trials=400, rng_seed=0)
    assert rep.violation_count > len(rep.violations)
    assert len(rep.violations) <= 16


@pytest.mark.parametrize(
    "kind,n,expected",
    [
        (MapKind.QUARTER_TRANSPOSE, 2, 1.0),
        (MapKind.OFFDIAG_SWAP, 2, 1.0),
        (MapKind.OFFDIAG_SWAP_COMPLEX, 2, 2.0 / math.sqrt(3.0)),
        (MapKind.CORNER_TRANSPOSE, 2, 1.0),
    ],
)
def test_norm_estimates_hit_closed_forms(kind, n, expected):
    est = estimate_map_norm(MapId(kind, n), restarts=8, rng_seed=0)
    assert abs(est.lower_bound - expected) < 1e-7
    assert est.strategy is NormStrategy.CLOSED_FORM
    assert est.upper_bound is not None
    assert est.lower_bound <= est.upper_bound + 1e-9


def test_norm_estimate_witness_invariants():
    est = estimate_map_norm(MapId(MapKind.OFFDIAG_SWAP_COMPLEX, 2), restarts=6, rng_seed=0)
    W = est.witness
    assert abs(operator_norm(W) - 1.0) < 1e-9
    img = apply(MapId(MapKind.OFFDIAG_SWAP_COMPLEX, 2), W)
    assert abs(operator_norm(img) - est.lower_bound) < 1e-9


def test_block_transpose_norm_reaches_two():
    est = estimate_map_norm(MapId(MapKind.BLOCK_TRANSPOSE, 2), restarts=6, rng_seed=0)
    assert est.lower_bound >= 2.0 - 1e-9
    assert est.strategy is NormStrategy.WITNESS_ONLY
    assert est.upper_bound is None


def test_swap_bound_at_the_witness():
    # the witness has scalar parts a = 1, b = 0; normalize by its norm sqrt(3)
    M, N = complex_swap_witness()
    root3 = math.sqrt(3.0)
    bound = offdiag_swap_norm_bound(1.0 / root3, 0.0, M[:2, 2:] / root3)
    # at the extremal element the bound is attained
    assert abs(bound - 2.0 / root3) < 1e-12
    assert abs(operator_norm(N) / operator_norm(M) - 2.0 / root3) < 1e-12


def test_swap_bound_requires_unit_ball():
    with pytest.raises(PreconditionError):
        offdiag_swap_norm_bound(2.0, 0.0, np.zeros((2, 2)))


def test_swap_bound_dominates_sampled_norms():
    worst = swap_bound_domination(2, samples=1500, rng_seed=0)
    assert worst >= -1e-9


def test_swap_bc_singular_values():
    for n in (1, 3):
        assert swap_bc_singular_check(n, trials=100, rng_seed=0) <= 1e-9


def test_char_poly_agreement():
    dev = char_poly_swap_check(3, instances=10, lambdas=10, rng_seed=0)
    assert dev <= 1e-8


def test_quarter_transpose_witness_norm_values():
    """The amplification witness gives n/4 and crosses 1 between n = 4 and 5."""
    for n in range(1, 7):
        assert abs(quarter_transpose_witness_norm(n) - n / 4.0) < 1e-10
    assert quarter_transpose_witness_norm(4) <= 1.0 + 1e-10
    assert quarter_transpose_witness_norm(5) > 1.0 + 1e-2


def test_kadison_schwarz_block_transpose():
    """On embedded corner elements the defect vanishes; generically it breaks."""
    m = MapId(MapKind.BLOCK_TRANSPOSE, 3)
    s = SystemId(SystemKind.FREE_CORNER, 3)
    rng = np.random.default_rng(0)
    for seed in range(8):
        e = random_element(s, rng_seed=seed)
        A = (e.A + e.A.conj().T) / 2.0
        c = complex(rng.normal(), rng.normal())
        sa = type(e)(s, A, np.conj(c), c, float(rng.normal()))
        rep = kadison_schwarz_check(m, embed(sa))
        assert rep.candidate == "map-itself"
        assert abs(rep.defect_min_eigenvalue) < 1e-12
    broke = False
    for _ in range(10):
        G = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        H = (G + G.conj().T) / 2.0
        if not kadison_schwarz_check(m, H).holds:
            broke = True
            break
    assert broke  # the unrestricted transpose is not a Schwarz map


def test_kadison_schwarz_gamma_elements():
    m = MapId(MapKind.CORNER_TRANSPOSE, 3)
    s = SystemId(SystemKind.FREE_CORNER, 3)
    rng = np.random.default_rng(1)
    for seed in range(10):
        e = random_element(s, rng_seed=seed)
        A = (e.A + e.A.conj().T) / 2.0
        c = complex(rng.normal(), rng.normal())
        sa = type(e)(s, A, np.conj(c), c, float(rng.normal()))
        rep = kadison_schwarz_check(m, sa)
        assert rep.candidate == "blockwise-transpose"
        assert rep.defect_min_eigenvalue >= -1e-10


def test_kadison_schwarz_quarter_map_holds_small_n():
    m = MapId(MapKind.QUARTER_TRANSPOSE, 3)
    s = SystemId(SystemKind.SCALAR_DIAGONAL, 3)
    for seed in range(10):
        e = random_element(s, rng_seed=seed)
        sa = type(e)(
            s,
            float(np.real(e.a)),
            float(np.real(e.d)),
            e.B,
            e.B.conj().T,
        )
        rep = kadison_schwarz_check(m, sa)
        assert rep.candidate == "trace-averaged-compression"
        assert rep.holds


def test_kadison_schwarz_quarter_map_breaks_at_17():
    """The trace-averaged candidate stops dominating once n exceeds 16."""
    n = 17
    m = MapId(MapKind.QUARTER_TRANSPOSE, n)
    s = SystemId(SystemKind.SCALAR_DIAGONAL, n)
    B = np.zeros((n, n), dtype=np.complex128)
    B[0, 1] = 1.0
    e = type(random_element(s, rng_seed=0))(s, 0.5, 0.5, B, B.conj().T)
    rep = kadison_schwarz_check(m, e)
    expected = 1.0 / n - 1.0 / 16.0
    assert rep.defect_min_eigenvalue < -1e-6
    assert abs(rep.defect_min_eigenvalue - expected) < 1e-9


def test_kadison_schwarz_rejects_non_self_adjoint():
    m = MapId(MapKind.BLOCK_TRANSPOSE, 2)
    with pytest.raises(PreconditionError):
        kadison_schwarz_check(m, np.triu(np.ones((4, 4))))


def test_corner_square_identities_random():
    rng = np.random.default_rng(2)
    for _ in range(10):
        G = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        A = (G + G.conj().T) / 2.0
        residual = corner_square_identities(A, complex(rng.normal(), rng.normal()), rng.normal())
        assert residual < 1e-12


def test_corner_square_identities_precondition():
    with pytest.raises(PreconditionError):
        corner_square_identities(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0, 1.0)


def test_positive_images_of_positive_elements():
    """Spot check: each paired or corner map sends sampled PSD in to PSD out."""
    for kind in (MapKind.OFFDIAG_SWAP, MapKind.OFFDIAG_SWAP_COMPLEX, MapKind.CORNER_TRANSPOSE):
        m = MapId(kind, 2)
        for seed in range(20):
            e = random_positive_element(m.domain, rng_seed=seed)
            out = embed(apply(m, e))
            assert hermitian_eigenvalues(out)[0] >= -1e-9
