"""The bilateral allure/ignore game between two agents."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

from .model import (
    Agent,
    FrustrationState,
    ValidationError,
    acceptable,
    reservation,
    satisfaction,
)


class Action(enum.Enum):
    ALLURE = "allure"
    IGNORE = "ignore"


class EquilibriumProfile(NamedTuple):
    row: Action
    col: Action


@dataclass(frozen=True)
class BilateralView:
    """One player's side of the game.

    ``satisfaction`` is what the player gets from the other's offer; ``beta``
    is its current stand-alone level (already scaled by earlier frustration)
    and ``gamma`` the penalty for alluring a player who ignores it.
    """

    satisfaction: float
    beta: float
    gamma: float

    def __post_init__(self):
        if not 0 < self.satisfaction <= 1:
            raise ValidationError(f"satisfaction must lie in (0, 1], got {self.satisfaction}")
        if not 0 < self.beta < 1:
            raise ValidationError(f"beta must lie in (0, 1), got {self.beta}")
        if not 0 < self.gamma < 1:
            raise ValidationError(f"gamma must lie in (0, 1), got {self.gamma}")


@dataclass(frozen=True)
class SatisfactionMatrix2x2:
    """cells[(row_action, col_action)] = (row payoff, col payoff)."""

    cells: dict

    def __getitem__(self, profile: tuple[Action, Action]) -> tuple[float, float]:
        return self.cells[profile]

    def as_rows(self) -> list[tuple[float, float]]:
        """Cells in (AA, AI, IA, II) order."""
        A, I = Action.ALLURE, Action.IGNORE
        return [self.cells[(A, A)], self.cells[(A, I)], self.cells[(I, A)], self.cells[(I, I)]]


def build_matrix(row: BilateralView, col: BilateralView) -> SatisfactionMatrix2x2:
    A, I = Action.ALLURE, Action.IGNORE
    return SatisfactionMatrix2x2(
        {
            (A, A): (row.satisfaction, col.satisfaction),
            (A, I): (row.beta * row.gamma, col.beta),
            (I, A): (row.beta, col.beta * col.gamma),
            (I, I): (row.beta, col.beta),
        }
    )


def pure_equilibria(matrix: SatisfactionMatrix2x2) -> frozenset[EquilibriumProfile]:
    """Profiles where no player strictly gains by switching its own action."""
    found = set()
    for r in Action:
        for c in Action:
            row_pay, col_pay = matrix[(r, c)]
            row_best = all(matrix[(alt, c)][0] <= row_pay for alt in Action)
            col_best = all(matrix[(r, alt)][1] <= col_pay for alt in Action)
            if row_best and col_best:
                found.add(EquilibriumProfile(r, c))
    return frozenset(found)


def bilateral_views(
    a: Agent, b: Agent, fa: FrustrationState, fb: FrustrationState
) -> tuple[BilateralView, BilateralView]:
    """Views for a pair, with each side's accumulated frustration folded into beta."""
    return (
        BilateralView(satisfaction(a, b.offer), reservation(a, fa), a.gamma),
        BilateralView(satisfaction(b, a.offer), reservation(b, fb), b.gamma),
    )


def cooperation_viable(a: Agent, b: Agent, fa: FrustrationState, fb: FrustrationState) -> bool:
    return acceptable(a, b.offer, fa) and acceptable(b, a.offer, fb)
