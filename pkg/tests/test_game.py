import random

import pytest

from barter.game import (
    Action,
    BilateralView,
    EquilibriumProfile,
    bilateral_views,
    build_matrix,
    cooperation_viable,
    pure_equilibria,
)
from barter.model import Agent, FrustrationState, ValidationError

A, I = Action.ALLURE, Action.IGNORE
MUTUAL = EquilibriumProfile(A, A)
APART = EquilibriumProfile(I, I)


def brute_equilibria(matrix):
    """Independent check: list best responses explicitly."""
    out = set()
    for r in (A, I):
        for c in (A, I):
            other_r = I if r is A else A
            other_c = I if c is A else A
            if matrix[(other_r, c)][0] > matrix[(r, c)][0]:
                continue
            if matrix[(r, other_c)][1] > matrix[(r, c)][1]:
                continue
            out.add((r, c))
    return out


def test_build_matrix_cells():
    m = build_matrix(BilateralView(0.8, 0.1, 0.5), BilateralView(0.6, 0.2, 0.5))
    assert m.as_rows() == [(0.8, 0.6), (0.05, 0.2), (0.1, 0.1), (0.1, 0.2)]


def test_symmetric_at_beta():
    m = build_matrix(BilateralView(0.3, 0.3, 0.5), BilateralView(0.3, 0.3, 0.5))
    assert m[(A, A)] == (0.3, 0.3)


def test_gamma_one_rejected():
    with pytest.raises(ValidationError):
        BilateralView(0.5, 0.1, 1.0)


def test_two_equilibria():
    m = build_matrix(BilateralView(0.8, 0.1, 0.5), BilateralView(0.6, 0.2, 0.5))
    assert pure_equilibria(m) == {MUTUAL, APART}


def test_only_ignore_when_below_beta():
    m = build_matrix(BilateralView(0.05, 0.1, 0.5), BilateralView(0.6, 0.2, 0.5))
    assert pure_equilibria(m) == {APART}


def test_weak_boundary_keeps_both():
    m = build_matrix(BilateralView(0.1, 0.1, 0.5), BilateralView(0.6, 0.2, 0.5))
    assert pure_equilibria(m) == {MUTUAL, APART}


def test_matches_brute_force_and_never_miscoordinates():
    rng = random.Random(2024)
    for _ in range(2000):
        views = [
            BilateralView(rng.uniform(1e-9, 1.0), rng.uniform(1e-6, 0.999999), rng.uniform(1e-6, 0.999999))
            for _ in range(2)
        ]
        m = build_matrix(*views)
        eq = pure_equilibria(m)
        assert {(p.row, p.col) for p in eq} == brute_equilibria(m)
        assert eq <= {MUTUAL, APART}
        assert APART in eq
        assert (MUTUAL in eq) == (views[0].satisfaction >= views[0].beta and views[1].satisfaction >= views[1].beta)


def seesaw(i, x=1.0, **kw):
    return Agent(i, (x,), (x,), kw.get("alpha", 1.0), kw.get("beta", 0.1), kw.get("gamma", 0.5))


def test_viable_identical_seesaws():
    assert cooperation_viable(seesaw(1), seesaw(2), FrustrationState(1), FrustrationState(2))


def test_not_viable_beyond_radius():
    # radius for alpha=1, beta=0.1 is sqrt(ln 10) ~ 1.517
    a, b = seesaw(1, 0.0), seesaw(2, 2.0)
    assert not cooperation_viable(a, b, FrustrationState(1), FrustrationState(2))
    assert cooperation_viable(a, seesaw(2, 1.5), FrustrationState(1), FrustrationState(2))


def test_not_viable_at_exact_reservation():
    import math

    a = Agent(1, (0.0,), (1.0,), 1.0, math.exp(-1), 0.5)
    b = Agent(2, (0.0,), (1.0,), 1.0, math.exp(-1), 0.5)
    assert not cooperation_viable(a, b, FrustrationState(1), FrustrationState(2))


def test_bilateral_views_fold_in_frustration():
    a, b = seesaw(1), seesaw(2)
    rv, cv = bilateral_views(a, b, FrustrationState(1, 2), FrustrationState(2, 0))
    assert rv.beta == pytest.approx(0.025)
    assert cv.beta == 0.1
    assert rv.satisfaction == 1.0
