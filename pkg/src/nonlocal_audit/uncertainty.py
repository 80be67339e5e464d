"""Fine-grained uncertainty relations induced by a game on one party's system.

Conditioning on the steering party's input-output pair (x, a) turns the game
expression into one operator per pair on the steered party's space,

    U(x,a) = sum_{y,b} pi_B(y|x) V(a,b|x,y) Pi^y_b ,

whose top eigenvalue xi bounds the pi-weighted sum of outcome probabilities
over all states. States attaining xi span the top eigenspace ("maximally
certain" states).

Two scales are reported for each relation. ``xi`` is the canonical value,
lambda_max of the pi-weighted operator above. ``xi_normalized`` divides by
the pi-mass of the inputs that actually participate (those with a non-zero
predicate row), which is the scale on which a trivial relation reads
exactly 1; for relations where every input participates the two coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product

import numpy as np

from .errors import DimensionMismatchError
from .games import GameSpec, swap_parties
from .hermitian import eig_hermitian
from .quantum import ProjectiveMeasurement

TRIVIAL_ATOL = 1e-9


class Side(Enum):
    """Which party steers; relations live on the other party's system."""

    ALICE_STEERS_BOB = "alice_steers_bob"
    BOB_STEERS_ALICE = "bob_steers_alice"


@dataclass(frozen=True)
class FineGrainedRelation:
    """One uncertainty relation, for one (input, output) pair of the steering party.

    ``pair`` is (x, a) when Alice steers and (y, b) when Bob steers.
    ``certain_space`` holds an orthonormal basis (columns) of the top
    eigenspace of ``operator``. ``trivial`` is only meaningful for binary
    predicates and is None for weighted games.
    """

    side: Side
    pair: tuple[int, int]
    operator: np.ndarray
    xi: float
    weight_mass: float
    xi_normalized: float
    certain_space: np.ndarray
    degenerate: bool
    trivial: bool | None


def _relations_steered_side(
    spec: GameSpec, side: Side, remote_meas: tuple[ProjectiveMeasurement, ...]
) -> list[FineGrainedRelation]:
    # spec is already oriented so that the steering party is "Alice".
    if len(remote_meas) != spec.n_y:
        raise DimensionMismatchError(
            f"expected {spec.n_y} measurements for the steered party, got {len(remote_meas)}"
        )
    for m in remote_meas:
        if m.n_outcomes != spec.n_b:
            raise DimensionMismatchError(
                f"measurement has {m.n_outcomes} outcomes, game expects {spec.n_b}"
            )
    dim = remote_meas[0].dim
    relations = []
    for x, a in product(range(spec.n_x), range(spec.n_a)):
        pi_y = spec.pi_b_given_x(x)
        op = np.zeros((dim, dim), dtype=complex)
        mass = 0.0
        for y in range(spec.n_y):
            row = spec.predicate[x, y, a, :]
            if row.max() > 0.0:
                mass += pi_y[y]
            for b in range(spec.n_b):
                w = pi_y[y] * row[b]
                if w != 0.0:
                    op += w * remote_meas[y].projectors[b]
        eig = eig_hermitian(op)
        xi = eig.max_eigenvalue
        basis, degenerate = eig.top_eigenspace()
        mass = float(mass)
        xi_norm = float(xi / mass) if mass > 0.0 else 0.0
        trivial = (
            bool(abs(xi_norm - 1.0) <= TRIVIAL_ATOL) if spec.binary_predicate else None
        )
        relations.append(
            FineGrainedRelation(
                side=side,
                pair=(x, a),
                operator=op,
                xi=xi,
                weight_mass=mass,
                xi_normalized=xi_norm,
                certain_space=basis,
                degenerate=degenerate,
                trivial=trivial,
            )
        )
    return relations


def fine_grained_relations(
    spec: GameSpec, side: Side, remote_meas: tuple[ProjectiveMeasurement, ...]
) -> list[FineGrainedRelation]:
    """All relations for one steering direction, ordered lexicographically by pair.

    ``remote_meas`` are the steered party's measurements: Bob's when Alice
    steers, Alice's when Bob steers.
    """
    if side is Side.ALICE_STEERS_BOB:
        return _relations_steered_side(spec, side, remote_meas)
    return _relations_steered_side(swap_parties(spec), side, remote_meas)


def maximally_certain(rel: FineGrainedRelation) -> tuple[np.ndarray, bool]:
    """Orthonormal basis of the states attaining xi, and a degeneracy flag."""
    return rel.certain_space, rel.degenerate
