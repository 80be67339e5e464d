"""Quantum strategies and values for two-party games.

Covers the planar-qubit measurement family for 2-input/2-output games
(sufficient for extremal quantum correlations in that scenario), Bell
operator construction, eigenvalue-based two-angle optimization, exact
closed-form optima for the catalog games ``g1`` and ``g2``, and the fixed
qutrit strategy for ``cglmp``.

For fixed measurements the best state is the top eigenvector of the Bell
operator, so the planar search space is just the two free angles
(alpha_1, beta_1); the first angle of each party is pinned to zero by local
unitary freedom.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import (
    DimensionMismatchError,
    NotPlanarApplicableError,
    UnknownGameError,
)
from .games import GameSpec, builtin_game
from .hermitian import EigenSystem, eig_hermitian, kron

PROJECTOR_ATOL = 1e-10
STATE_NORM_ATOL = 1e-12

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_GRID_CHUNK_ROWS = 16


@dataclass(frozen=True)
class ProjectiveMeasurement:
    """One projector per output; projectors are Hermitian, idempotent, complete."""

    projectors: tuple[np.ndarray, ...]

    @property
    def n_outcomes(self) -> int:
        return len(self.projectors)

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    def validate(self, atol: float = PROJECTOR_ATOL) -> list[str]:
        violations = []
        d = self.dim
        total = np.zeros((d, d), dtype=complex)
        for k, p in enumerate(self.projectors):
            if p.shape != (d, d):
                violations.append(f"projector {k}: shape {p.shape} != ({d}, {d})")
                continue
            if np.abs(p - p.conj().T).max() > atol:
                violations.append(f"projector {k}: not Hermitian")
            if np.linalg.norm(p @ p - p) > atol:
                violations.append(f"projector {k}: not idempotent")
            total += p
        if np.linalg.norm(total - np.eye(d)) > atol:
            violations.append("projectors do not sum to the identity")
        return violations


@dataclass(frozen=True)
class PlanarAngles:
    """Phase angles of the off-diagonal qubit observables, first angle fixed to 0."""

    alpha: tuple[float, ...]
    beta: tuple[float, ...]

    def __post_init__(self):
        if self.alpha[0] != 0.0 or self.beta[0] != 0.0:
            raise ValueError("the first angle of each party is fixed to 0")
        for t in (*self.alpha, *self.beta):
            if not -math.pi <= t <= math.pi:
                raise ValueError(f"angle {t} outside [-pi, pi]")


@dataclass(frozen=True)
class QuantumStrategy:
    """Shared pure state plus one projective measurement per input per party."""

    d_a: int
    d_b: int
    state: np.ndarray
    meas_a: tuple[ProjectiveMeasurement, ...]
    meas_b: tuple[ProjectiveMeasurement, ...]

    def validate(self) -> list[str]:
        violations = []
        if self.state.shape != (self.d_a * self.d_b,):
            violations.append(
                f"state: shape {self.state.shape} != ({self.d_a * self.d_b},)"
            )
        elif abs(np.linalg.norm(self.state) - 1.0) > STATE_NORM_ATOL:
            violations.append("state: not normalized")
        for label, mset, d in (("A", self.meas_a, self.d_a), ("B", self.meas_b, self.d_b)):
            for i, m in enumerate(mset):
                if m.dim != d:
                    violations.append(f"measurement {label}[{i}]: dim {m.dim} != {d}")
                violations.extend(f"{label}[{i}]: {v}" for v in m.validate())
        return violations

    def density(self) -> np.ndarray:
        return np.outer(self.state, self.state.conj())


@dataclass(frozen=True)
class OptimalSolution:
    """Best strategy found for a game, with the value and diagnostics.

    ``residual`` is the value of the game's closed-form characteristic
    polynomial at the solution (only for games that have one, else None).
    """

    strategy: QuantumStrategy
    value: float
    angles: PlanarAngles | None
    residual: float | None


def swap_strategy(strategy: QuantumStrategy) -> QuantumStrategy:
    """The same strategy with the parties exchanged."""
    state = strategy.state.reshape(strategy.d_a, strategy.d_b).T.reshape(-1)
    return QuantumStrategy(
        d_a=strategy.d_b,
        d_b=strategy.d_a,
        state=state,
        meas_a=strategy.meas_b,
        meas_b=strategy.meas_a,
    )


def planar_measurement(theta: float) -> ProjectiveMeasurement:
    """Eigenprojectors of the observable [[0, e^{i theta}], [e^{-i theta}, 0]].

    Output 0 is the +1 eigenprojector |v+><v+| with v+ = (e^{i theta}, 1)/sqrt(2).
    """
    plus = np.array([np.exp(1j * theta), 1.0]) / math.sqrt(2.0)
    minus = np.array([np.exp(1j * theta), -1.0]) / math.sqrt(2.0)
    return ProjectiveMeasurement(
        projectors=(np.outer(plus, plus.conj()), np.outer(minus, minus.conj()))
    )


def planar_measurements(
    angles: PlanarAngles,
) -> tuple[tuple[ProjectiveMeasurement, ...], tuple[ProjectiveMeasurement, ...]]:
    meas_a = tuple(planar_measurement(t) for t in angles.alpha)
    meas_b = tuple(planar_measurement(t) for t in angles.beta)
    return meas_a, meas_b


def bell_operator(
    spec: GameSpec,
    meas_a: tuple[ProjectiveMeasurement, ...],
    meas_b: tuple[ProjectiveMeasurement, ...],
) -> np.ndarray:
    """B = sum_{x,y} pi(x,y) sum_{a,b} V(a,b|x,y) Pi^x_a (x) Pi^y_b."""
    if len(meas_a) != spec.n_x or len(meas_b) != spec.n_y:
        raise DimensionMismatchError("one measurement per input is required")
    if any(m.n_outcomes != spec.n_a for m in meas_a) or any(
        m.n_outcomes != spec.n_b for m in meas_b
    ):
        raise DimensionMismatchError("measurement outcome counts do not match the game")
    d = meas_a[0].dim * meas_b[0].dim
    op = np.zeros((d, d), dtype=complex)
    for x, y, a, b in product(range(spec.n_x), range(spec.n_y), range(spec.n_a), range(spec.n_b)):
        w = spec.input_dist[x, y] * spec.predicate[x, y, a, b]
        if w != 0.0:
            op += w * kron(meas_a[x].projectors[a], meas_b[y].projectors[b])
    return op


def correlation_table(spec: GameSpec, strategy: QuantumStrategy) -> np.ndarray:
    """P(a,b|x,y) = <psi| Pi^x_a (x) Pi^y_b |psi>, indexed [x, y, a, b]."""
    if len(strategy.meas_a) != spec.n_x or len(strategy.meas_b) != spec.n_y:
        raise DimensionMismatchError("one measurement per input is required")
    psi = strategy.state
    table = np.zeros((spec.n_x, spec.n_y, spec.n_a, spec.n_b))
    for x, y, a, b in product(range(spec.n_x), range(spec.n_y), range(spec.n_a), range(spec.n_b)):
        op = kron(strategy.meas_a[x].projectors[a], strategy.meas_b[y].projectors[b])
        table[x, y, a, b] = float(np.real(psi.conj() @ op @ psi))
    return table


def quantum_game_value(spec: GameSpec, strategy: QuantumStrategy) -> float:
    """sum_{x,y} pi(x,y) sum_{a,b} V(a,b|x,y) P(a,b|x,y) for this strategy."""
    table = correlation_table(spec, strategy)
    return float(np.sum(spec.input_dist[:, :, None, None] * spec.predicate * table))


def scaled_bell_charpoly_g1(lam: float, alpha1: float, beta1: float) -> float:
    """Characteristic polynomial of 4*B(g1) in the planar family, at (lam, angles).

    Zero exactly when lam is an eigenvalue of the input-distribution-scaled
    Bell operator for measurement phases (0, alpha1) and (0, beta1).
    """
    return (
        2.0 * lam * (-19.0 + lam * (33.0 + 4.0 * lam * (lam - 5.0)))
        + 2.0
        * (lam - 2.0)
        * (lam - 1.0)
        * (math.cos(alpha1) - 2.0 * math.cos(alpha1 / 2.0) ** 2 * math.cos(beta1))
        + 4.0
        - math.sin(alpha1) ** 2 * math.sin(beta1) ** 2
    )


def scaled_bell_charpoly_g2(lam: float, alpha1: float, beta1: float) -> float:
    """Characteristic polynomial of 4*B(g2) in the planar family, at (lam, angles)."""
    return (
        lam * (-30.0 + lam * (33.0 + 2.0 * lam * (lam - 7.0)))
        + 9.0
        - math.sin(alpha1) ** 2 * math.sin(beta1) ** 2
        + (lam - 3.0)
        * (lam - 1.0)
        * (
            math.cos(alpha1)
            - math.cos(alpha1) * math.cos(beta1)
            + math.cos(beta1)
        )
    )


_CHARPOLYS = {"g1": scaled_bell_charpoly_g1, "g2": scaled_bell_charpoly_g2}


def closed_form_angles(game_id: str) -> tuple[float, float]:
    """Exact optimal planar angles (alpha1, beta1) for g1 or g2."""
    if game_id == "g1":
        alpha1 = 2.0 * math.atan(math.sqrt((5.0 + math.sqrt(13.0)) / 6.0))
        return alpha1, alpha1 - math.pi
    if game_id == "g2":
        eta = ((43.0 + 9.0 * math.sqrt(29.0)) / 2.0) ** (1.0 / 3.0)
        alpha1 = 2.0 * math.atan(math.sqrt((eta * eta + 2.0 * eta - 5.0) / (3.0 * eta)))
        return alpha1, alpha1
    raise UnknownGameError(f"no closed-form optimum for {game_id!r}")


def _planar_solution(spec: GameSpec, alpha1: float, beta1: float) -> tuple[QuantumStrategy, float, EigenSystem]:
    angles = PlanarAngles(alpha=(0.0, alpha1), beta=(0.0, beta1))
    meas_a, meas_b = planar_measurements(angles)
    op = bell_operator(spec, meas_a, meas_b)
    eig = eig_hermitian(op)
    strategy = QuantumStrategy(
        d_a=2, d_b=2, state=eig.max_eigenvector, meas_a=meas_a, meas_b=meas_b
    )
    return strategy, eig.max_eigenvalue, eig


def closed_form_optimum(game_id: str) -> OptimalSolution:
    """Exact-radical optimal strategy for g1 or g2.

    The state is the top eigenvector of the resulting Bell operator and the
    residual is the closed-form characteristic polynomial evaluated at
    4x the value (the scaled operator's eigenvalue).
    """
    alpha1, beta1 = closed_form_angles(game_id)
    spec = builtin_game(game_id)
    strategy, value, _ = _planar_solution(spec, alpha1, beta1)
    residual = _CHARPOLYS[game_id](4.0 * value, alpha1, beta1)
    return OptimalSolution(
        strategy=strategy,
        value=value,
        angles=PlanarAngles(alpha=(0.0, alpha1), beta=(0.0, beta1)),
        residual=float(residual),
    )


# ---------------------------------------------------------------------------
# Planar two-angle optimization
# ---------------------------------------------------------------------------


def _worker_count() -> int:
    raw = os.environ.get("NONLOCAL_AUDIT_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = min(os.cpu_count() or 1, 8)
    return n


def _planar_projector_stacks(thetas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Stacked rank-1 projectors (G,2,2) for outputs 0 and 1 at each angle."""
    g = thetas.shape[0]
    phase = np.exp(1j * thetas)
    plus = np.stack([phase, np.ones(g)], axis=1) / math.sqrt(2.0)
    minus = np.stack([phase, -np.ones(g)], axis=1) / math.sqrt(2.0)
    p0 = np.einsum("gi,gj->gij", plus, plus.conj())
    p1 = np.einsum("gi,gj->gij", minus, minus.conj())
    return p0, p1


def _grid_lambda_max(spec: GameSpec, thetas: np.ndarray, workers: int) -> np.ndarray:
    """lambda_max(B(alpha1, beta1)) on the full angle grid, shape (G, G).

    Uses LAPACK's batched Hermitian eigenvalues as a fast path; the final
    reported solution is recomputed with the cyclic Jacobi kernel. Results
    are independent of the worker count: the grid is split into fixed row
    chunks and each cell is solved in isolation.
    """
    g = thetas.shape[0]
    zero0, zero1 = _planar_projector_stacks(np.zeros(1))
    fixed = (np.broadcast_to(zero0[0], (g, 2, 2)), np.broadcast_to(zero1[0], (g, 2, 2)))
    varying = _planar_projector_stacks(thetas)
    proj_a = {0: fixed, 1: varying}
    proj_b = {0: fixed, 1: varying}

    terms = [
        (x, y, a, b, spec.input_dist[x, y] * spec.predicate[x, y, a, b])
        for x, y, a, b in product(range(2), range(2), range(2), range(2))
        if spec.input_dist[x, y] * spec.predicate[x, y, a, b] != 0.0
    ]

    row_chunks = [
        np.arange(start, min(start + _GRID_CHUNK_ROWS, g))
        for start in range(0, g, _GRID_CHUNK_ROWS)
    ]

    def solve_rows(rows: np.ndarray) -> np.ndarray:
        ops = np.zeros((rows.shape[0], g, 2, 2, 2, 2), dtype=complex)
        for x, y, a, b, w in terms:
            pa = proj_a[x][a][rows]
            pb = proj_b[y][b]
            ops += w * np.einsum("gij,hkl->ghikjl", pa, pb)
        flat = ops.reshape(rows.shape[0] * g, 4, 4)
        return np.linalg.eigvalsh(flat)[:, -1].reshape(rows.shape[0], g)

    values = np.empty((g, g))
    if workers <= 1:
        for rows in row_chunks:
            values[rows[0] : rows[-1] + 1] = solve_rows(rows)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for rows, block in zip(row_chunks, pool.map(solve_rows, row_chunks)):
                values[rows[0] : rows[-1] + 1] = block
    return values


def _lambda_max_fast(spec: GameSpec, alpha1: float, beta1: float) -> float:
    """Objective for the local refinement; matches the Jacobi kernel to 1e-12."""
    meas_a = (planar_measurement(0.0), planar_measurement(alpha1))
    meas_b = (planar_measurement(0.0), planar_measurement(beta1))
    return float(np.linalg.eigvalsh(bell_operator(spec, meas_a, meas_b))[-1])


def _golden_max(f, lo: float, hi: float, tol: float = 1e-10) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    mid = 0.5 * (a + b)
    return mid, f(mid)


def refine_planar(
    spec: GameSpec,
    alpha1: float,
    beta1: float,
    halfwidth: float,
    step_tol: float = 1e-10,
    max_rounds: int = 60,
) -> tuple[float, float, float]:
    """Coordinate-wise golden-section ascent of lambda_max from a start point.

    Alternates one golden search per coordinate until neither angle moves by
    more than ``step_tol``. Returns (alpha1, beta1, value).
    """
    value = _lambda_max_fast(spec, alpha1, beta1)
    width = halfwidth
    for _ in range(max_rounds):
        new_a, _ = _golden_max(
            lambda t: _lambda_max_fast(spec, t, beta1), alpha1 - width, alpha1 + width, step_tol
        )
        new_b, value = _golden_max(
            lambda t: _lambda_max_fast(spec, new_a, t), beta1 - width, beta1 + width, step_tol
        )
        moved = max(abs(new_a - alpha1), abs(new_b - beta1))
        alpha1, beta1 = new_a, new_b
        if moved < step_tol:
            break
        width = max(2.0 * moved, 1e-8)
    return alpha1, beta1, value


def _wrap_angle(t: float) -> float:
    wrapped = math.remainder(t, 2.0 * math.pi)
    # math.remainder returns values in [-pi, pi]; pin the -pi representative to pi
    # so reported angles stay inside the closed interval deterministically.
    if wrapped == -math.pi:
        wrapped = math.pi
    return wrapped


def optimize_planar(
    spec: GameSpec, grid_points: int = 721, refine_iters: int = 60
) -> OptimalSolution:
    """Grid-plus-golden-section maximization of lambda_max over (alpha1, beta1).

    Scans a uniform ``grid_points`` x ``grid_points`` grid over [-pi, pi]^2,
    then refines the best cell by alternating golden-section searches.
    Flipping the sign of either party's angle conjugates that party by the
    X gate and preserves the spectrum, so optima come in sign quadruples;
    the representative with alpha1 >= 0 and beta1 >= 0 is reported. Only
    2-input/2-output games are supported.
    """
    if not (spec.n_x == 2 and spec.n_y == 2 and spec.n_a == 2 and spec.n_b == 2):
        raise NotPlanarApplicableError(
            f"game {spec.id!r} is {spec.n_x}x{spec.n_y} inputs / "
            f"{spec.n_a}x{spec.n_b} outputs; the planar family covers 2x2x2x2"
        )
    if grid_points < 64:
        raise ValueError("grid_points must be at least 64")

    thetas = np.linspace(-math.pi, math.pi, grid_points)
    values = _grid_lambda_max(spec, thetas, _worker_count())
    flat_index = int(np.argmax(values))  # first occurrence = lexicographic tie-break
    i, j = divmod(flat_index, grid_points)
    step = 2.0 * math.pi / (grid_points - 1)

    alpha1, beta1, _ = refine_planar(
        spec, float(thetas[i]), float(thetas[j]), halfwidth=step, max_rounds=refine_iters
    )
    alpha1 = _wrap_angle(alpha1)
    beta1 = _wrap_angle(beta1)
    # sign flips of either angle are local X conjugations; pick the
    # non-negative representative of each
    if alpha1 < 0.0:
        alpha1 = -alpha1
    if beta1 < 0.0:
        beta1 = -beta1

    strategy, value, _ = _planar_solution(spec, alpha1, beta1)
    charpoly = _CHARPOLYS.get(spec.id)
    residual = float(charpoly(4.0 * value, alpha1, beta1)) if charpoly else None
    return OptimalSolution(
        strategy=strategy,
        value=value,
        angles=PlanarAngles(alpha=(0.0, alpha1), beta=(0.0, beta1)),
        residual=residual,
    )


# ---------------------------------------------------------------------------
# Fixed qutrit strategy for the weighted three-outcome catalog game
# ---------------------------------------------------------------------------


def cglmp_strategy() -> QuantumStrategy:
    """The known optimal qutrit strategy for the catalog game ``cglmp``.

    State (|00> + kappa |11> + |22>)/sqrt(2 + kappa^2) with
    kappa = (sqrt(11) - sqrt(3))/2, and phase-twisted Fourier bases with
    Alice phases (0, pi/3) and Bob phases (-pi/6, pi/6).
    """
    omega = np.exp(2j * math.pi / 3.0)
    kappa = (math.sqrt(11.0) - math.sqrt(3.0)) / 2.0

    state = np.zeros(9, dtype=complex)
    state[0] = 1.0
    state[4] = kappa
    state[8] = 1.0
    state /= np.linalg.norm(state)

    k = np.arange(3)

    def alice_meas(phase_angle: float) -> ProjectiveMeasurement:
        projectors = []
        for a in range(3):
            vec = omega ** (a * k) * np.exp(1j * k * phase_angle)
            projectors.append(np.outer(vec, vec.conj()) / 3.0)
        return ProjectiveMeasurement(projectors=tuple(projectors))

    def bob_meas(phase_angle: float) -> ProjectiveMeasurement:
        projectors = []
        for b in range(3):
            vec = omega ** (-b * k) * np.exp(1j * k * phase_angle)
            projectors.append(np.outer(vec, vec.conj()) / 3.0)
        return ProjectiveMeasurement(projectors=tuple(projectors))

    return QuantumStrategy(
        d_a=3,
        d_b=3,
        state=state,
        meas_a=(alice_meas(0.0), alice_meas(math.pi / 3.0)),
        meas_b=(bob_meas(-math.pi / 6.0), bob_meas(math.pi / 6.0)),
    )
