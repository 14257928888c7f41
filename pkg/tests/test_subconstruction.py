"""Dimension-prescribing subconstructions and the window check."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from moranlab import (
    DomainError,
    GeneralModel,
    HEISENBERG,
    MultiplicativeModel,
    StratificationData,
    SubTree,
    beta_minus,
    beta_plus,
    cantor_branch_sequence,
    carnot_branch_sequence,
    carnot_cmsc_verify,
    heisenberg_F_map,
    heisenberg_system,
    verify_cmsc,
)
from moranlab.spaces import heisenberg_gauge, heisenberg_inverse, heisenberg_multiply
from moranlab.words import Alphabet

T_STAR = math.log(2) / math.log(3)


# -- stratifications and the beta functions ------------------------------------


def test_heisenberg_stratification():
    assert HEISENBERG.layer_dims == (2, 1)
    assert HEISENBERG.steps == 2
    assert HEISENBERG.topological_dim == 3
    assert HEISENBERG.homogeneous_dim == 4


def test_stratification_validation():
    with pytest.raises(DomainError):
        StratificationData(())
    with pytest.raises(DomainError):
        StratificationData((2, 0))


def test_beta_values_on_the_heisenberg_group():
    assert (beta_minus(HEISENBERG, 2.5), beta_plus(HEISENBERG, 2.5)) == (3.0, 3.5)
    assert (beta_minus(HEISENBERG, 1.5), beta_plus(HEISENBERG, 1.5)) == (1.5, 2.5)
    assert (beta_minus(HEISENBERG, 3.0), beta_plus(HEISENBERG, 3.0)) == (4.0, 4.0)
    assert beta_plus(HEISENBERG, 0.5) == 1.0


def test_beta_range_validation():
    with pytest.raises(DomainError):
        beta_minus(HEISENBERG, 0.0)
    with pytest.raises(DomainError):
        beta_plus(HEISENBERG, 3.5)


layer_lists = st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=4)


@given(layers=layer_lists, frac=st.floats(min_value=1e-3, max_value=1.0))
def test_beta_minus_never_exceeds_beta_plus(layers, frac):
    strat = StratificationData(tuple(layers))
    alpha = frac * strat.topological_dim
    lo, hi = beta_minus(strat, alpha), beta_plus(strat, alpha)
    assert lo <= hi + 1e-12
    assert alpha - 1e-12 <= lo  # each Euclidean unit costs at least weight 1
    assert hi <= strat.homogeneous_dim + 1e-12


def test_beta_endpoints_hit_the_homogeneous_dimension():
    for layers in ((2, 1), (1, 1, 2), (3,)):
        strat = StratificationData(layers)
        n = strat.topological_dim
        assert beta_minus(strat, n) == strat.homogeneous_dim
        assert beta_plus(strat, n) == strat.homogeneous_dim


# -- ternary greedy sequence ---------------------------------------------------


def test_cantor_sequence_examples():
    assert cantor_branch_sequence(0.4, 5).branch_counts == (2, 1, 2, 1, 2)
    assert cantor_branch_sequence(0.01, 6).branch_counts == (2, 1, 1, 1, 1, 1)
    assert cantor_branch_sequence(0.63, 8).branch_counts == (2, 1, 2, 2, 2, 2, 2, 2)


def test_cantor_sequence_traps_the_level_product():
    """The greedy rule keeps 3^(-t n) * count(n) inside [1/2, 2]."""
    for t in (0.1, 0.4, 0.6):
        tree = cantor_branch_sequence(t, 20)
        count = 1
        for n, b in enumerate(tree.branch_counts, start=1):
            count *= b
            assert 0.5 <= count * 3.0 ** (-t * n) <= 2.0


def test_cantor_sequence_range_checks():
    with pytest.raises(DomainError):
        cantor_branch_sequence(0.0, 5)
    with pytest.raises(DomainError):
        cantor_branch_sequence(T_STAR, 5)
    with pytest.raises(DomainError):
        cantor_branch_sequence(0.4, 0)


# -- the window check -------------------------------------------------------------


def ternary_model():
    return MultiplicativeModel((1 / 3, 1 / 3, 1 / 3))


def test_window_holds_for_the_greedy_subtree():
    report = verify_cmsc(ternary_model(), cantor_branch_sequence(0.4, 10), 0.4, 4.0, 10)
    assert report.holds
    assert report.c_witnessed == pytest.approx(1.86859640942, rel=1e-10)
    assert report.ratio_min == pytest.approx(0.535161041173, rel=1e-10)
    assert report.ratio_max == pytest.approx(16 / 9, rel=1e-12)
    assert report.witness_low == (((0,), 3))
    assert report.witness_high == ((0, 0, 0, 0), 5)
    data = report.to_json()
    assert data["holds"] is True
    assert data["witness_high"] == {"word": "0-0-0-0", "n": 5}


def test_window_ratios_are_flat_on_the_full_tree():
    """Keeping every branch at t* makes all suffix sums exactly 1."""
    model = MultiplicativeModel((1 / 3, 1 / 3))
    report = verify_cmsc(model, SubTree((2,) * 8), T_STAR, 2.0, 8)
    assert report.holds
    assert report.ratio_min == pytest.approx(1.0, abs=1e-12)
    assert report.ratio_max == pytest.approx(1.0, abs=1e-12)


def test_window_fails_for_a_starved_subtree():
    model = MultiplicativeModel((1 / 3, 1 / 3))
    report = verify_cmsc(model, SubTree((1,) * 10), T_STAR, 4.0, 10)
    assert not report.holds
    assert report.ratio_min < 1 / 4
    assert report.witness_low[1] == 10  # deepest suffix is the worst


def test_window_enumerating_path_matches_the_closed_form():
    fast = verify_cmsc(ternary_model(), cantor_branch_sequence(0.4, 8), 0.4, 4.0, 8)
    gen = GeneralModel(ternary_model().log_diam, Alphabet(3))
    slow = verify_cmsc(gen, cantor_branch_sequence(0.4, 8), 0.4, 4.0, 8)
    assert slow.holds == fast.holds
    assert slow.c_witnessed == pytest.approx(fast.c_witnessed, rel=1e-12)
    assert slow.ratio_max == pytest.approx(fast.ratio_max, rel=1e-12)


def test_window_argument_validation():
    model = ternary_model()
    tree = cantor_branch_sequence(0.4, 10)
    with pytest.raises(DomainError):
        verify_cmsc(model, tree, 0.4, 1.0, 10)  # C must exceed 1
    with pytest.raises(DomainError):
        verify_cmsc(model, tree, 0.4, 4.0, 1)  # depth too small
    with pytest.raises(DomainError):
        verify_cmsc(model, SubTree((2, 2)), 0.4, 4.0, 10)  # shallow subtree


# -- Carnot sequences ----------------------------------------------------------------


def test_carnot_sequence_examples():
    assert carnot_branch_sequence(HEISENBERG, 2.5, 8) == (2, 1, 1, 2, 1, 2, 1, 2)
    assert carnot_branch_sequence(HEISENBERG, Fraction(1, 100), 6) == (
        2, 1, 1, 1, 1, 1,
    )


def test_carnot_sequence_rational_comparisons_are_exact():
    # the rule compares 2^(twos * m) with 2^(step * (l+1)(alpha - lower));
    # exact fractions and their float doubles must decide identically.
    exact = carnot_branch_sequence(HEISENBERG, Fraction(5, 2), 8)
    assert exact == carnot_branch_sequence(HEISENBERG, 2.5, 8)


def test_carnot_top_breakpoint_warns_and_keeps_everything():
    for alpha in (3, 3.0):
        with pytest.warns(UserWarning):
            seq = carnot_branch_sequence(HEISENBERG, alpha, 7)
        assert seq == (2,) * 7


def test_carnot_sequence_validation():
    with pytest.raises(DomainError):
        carnot_branch_sequence(HEISENBERG, 0.0, 5)
    with pytest.raises(DomainError):
        carnot_branch_sequence(HEISENBERG, 4.0, 5)
    with pytest.raises(DomainError):
        carnot_branch_sequence(HEISENBERG, 2.5, 0)


def test_carnot_window_check_across_the_breakpoints():
    report = carnot_cmsc_verify(HEISENBERG, 1.3, 15)
    assert report.holds
    assert report.t == pytest.approx(1.3)
    assert report.c_declared == 16.0
    assert report.c_witnessed == pytest.approx(3.73213, abs=1e-5)

    report = carnot_cmsc_verify(HEISENBERG, 2.5, 15)
    assert report.holds
    assert report.t == pytest.approx(3.0)  # beta_minus(2.5)
    assert report.c_witnessed == pytest.approx(4.0, rel=1e-12)

    report = carnot_cmsc_verify(HEISENBERG, 3.0, 15)
    assert report.holds
    assert report.t == pytest.approx(4.0)
    assert report.c_witnessed == pytest.approx(1.0, abs=1e-12)
    assert "top breakpoint" in report.note


def test_carnot_window_alpha_range():
    with pytest.raises(DomainError):
        carnot_cmsc_verify(HEISENBERG, 0.0, 10)
    with pytest.raises(DomainError):
        carnot_cmsc_verify(HEISENBERG, 3.5, 10)


# -- Heisenberg halving maps -----------------------------------------------------------


def test_F_map_anchor_validation():
    with pytest.raises(DomainError):
        heisenberg_F_map([(0, 0, 0), (0,)])
    with pytest.raises(DomainError):
        heisenberg_F_map([(0, 2), (0,)])  # horizontal coords live in {0, 1}
    with pytest.raises(DomainError):
        heisenberg_F_map([(0, 0), (4,)])  # vertical coord lives in {0..3}


def test_F_map_fixes_its_anchor_and_dilates_at_the_identity():
    F = heisenberg_F_map([(1, 0), (2,)])
    assert F.apply((1.0, 0.0, 2.0)) == (1.0, 0.0, 2.0)
    F0 = heisenberg_F_map([(0, 0), (0,)])
    assert F0.apply((2.0, 0.0, 0.0)) == (1.0, 0.0, 0.0)
    assert F0.apply((0.0, 0.0, 2.0)) == (0.0, 0.0, 0.5)


def test_F_map_halves_the_gauge_distance():
    F = heisenberg_F_map([(1, 1), (3,)])
    pairs = [
        ((0.3, -0.7, 1.1), (-0.2, 0.4, -0.9)),
        ((1.5, 0.0, 0.0), (0.0, 1.5, 2.0)),
    ]
    for p, q in pairs:
        d = heisenberg_gauge(heisenberg_multiply(heisenberg_inverse(p), q))
        dF = heisenberg_gauge(
            heisenberg_multiply(heisenberg_inverse(F.apply(p)), F.apply(q))
        )
        assert dF == pytest.approx(0.5 * d, rel=1e-12)


def test_heisenberg_system_layout():
    system = heisenberg_system()
    assert len(system.maps) == 16
    assert len(system.seed_points) == 16
    assert system.seed_points[:4] == (
        (0.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (1.0, 0.0, 0.0),
        (1.0, 1.0, 0.0),
    )
    for m, seed in zip(system.maps, system.seed_points):
        assert m.apply(seed) == seed
