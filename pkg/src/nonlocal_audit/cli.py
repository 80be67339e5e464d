"""Command-line front end.

Exit codes: 0 success, 1 internal numeric failure, 2 usage or input error.
The worker count for the planar grid scan is capped by the environment
variable NONLOCAL_AUDIT_THREADS (0 = auto).
"""

from __future__ import annotations

import argparse
import sys

from .classical import classical_value
from .errors import (
    NonlocalAuditError,
    NotHermitianError,
    NotPlanarApplicableError,
    NotSquareError,
    ParseError,
    TooLargeError,
    UnknownGameError,
    ValidationError,
)
from .games import catalog, swap_parties
from .quantum import cglmp_strategy, closed_form_optimum, optimize_planar, quantum_game_value
from .report import (
    CLOSED_FORM_IDS,
    AnalysisOptions,
    best_known_solution,
    matches_catalog,
    render_report,
    resolve_game,
    run_analyze,
)
from .steering import correspondence_verdict
from .uncertainty import Side, fine_grained_relations

USAGE_ERRORS = (
    UnknownGameError,
    ParseError,
    ValidationError,
    TooLargeError,
    NotPlanarApplicableError,
)


def _cmd_list_games(_args) -> int:
    entries = catalog()
    width = max(len(game_id) for game_id in entries)
    for game_id, entry in entries.items():
        print(f"{game_id:<{width}}  {entry.provenance}")
    return 0


def _cmd_classical(args) -> int:
    spec, _ = resolve_game(args.game)
    value, maximizers = classical_value(spec)
    print(f"game {spec.id!r}: omega_c = {value:.12g} (normalized)")
    if spec.is_uniform():
        print(f"raw sum over input pairs: {value * spec.n_x * spec.n_y:.12g}")
    print(f"{len(maximizers)} maximizing deterministic strategies:")
    for s in maximizers:
        print(f"  f_a = {list(s.f_a)}  f_b = {list(s.f_b)}")
    return 0


def _cmd_quantum(args) -> int:
    spec, _ = resolve_game(args.game)
    if args.closed_form:
        if not (spec.id in CLOSED_FORM_IDS and matches_catalog(spec, spec.id)):
            raise UnknownGameError(
                f"--closed-form applies to the catalog games g1 and g2, not {spec.id!r}"
            )
        solution = closed_form_optimum(spec.id)
        method = "closed_form"
    elif matches_catalog(spec, "cglmp"):
        strategy = cglmp_strategy()
        value = quantum_game_value(spec, strategy)
        print(f"game 'cglmp': fixed catalog strategy, value = {value:.12g} (normalized), "
              f"raw sum = {4 * value:.12g}")
        _print_state(strategy.state)
        return 0
    else:
        solution = optimize_planar(spec, grid_points=args.grid)
        method = "planar_grid"
    print(f"game {spec.id!r}: omega_q = {solution.value:.12g} (normalized) [{method}]")
    if spec.is_uniform():
        print(f"raw sum over input pairs: {solution.value * spec.n_x * spec.n_y:.12g}")
    if solution.angles is not None:
        print(f"alpha = {[f'{t:.9g}' for t in solution.angles.alpha]}")
        print(f"beta  = {[f'{t:.9g}' for t in solution.angles.beta]}")
    if solution.residual is not None:
        print(f"characteristic-polynomial residual: {solution.residual:.3e}")
    _print_state(solution.strategy.state)
    return 0


def _print_state(state) -> None:
    print("state amplitudes:")
    for k, amp in enumerate(state):
        print(f"  |{k}> : {amp.real:+.9f} {amp.imag:+.9f}i")


def _cmd_uncertainty(args) -> int:
    spec, _ = resolve_game(args.game)
    options = AnalysisOptions(grid_points=args.grid)
    _, solution = best_known_solution(spec, options)
    side = Side.ALICE_STEERS_BOB if args.side == "alice" else Side.BOB_STEERS_ALICE
    meas = solution.strategy.meas_b if side is Side.ALICE_STEERS_BOB else solution.strategy.meas_a
    relations = fine_grained_relations(spec, side, meas)
    steered = "Bob" if side is Side.ALICE_STEERS_BOB else "Alice"
    print(f"game {spec.id!r}, side {side.value}: relations on {steered}'s system")
    oriented = spec if side is Side.ALICE_STEERS_BOB else swap_parties(spec)
    for rel in relations:
        x, a = rel.pair
        weights = []
        pi_y = oriented.pi_b_given_x(x)
        for y in range(oriented.n_y):
            for b in range(oriented.n_b):
                w = pi_y[y] * oriented.predicate[x, y, a, b]
                if w != 0.0:
                    weights.append(f"{w:.6g}*P({b}|{y})")
        flag = " [trivial]" if rel.trivial else ""
        print(f"  pair ({x},{a}): sum = {' + '.join(weights) if weights else '0'}")
        print(
            f"    xi = {rel.xi:.12g} (canonical)  "
            f"{rel.xi_normalized:.12g} (per unit input mass {rel.weight_mass:.6g}){flag}"
        )
        for k in range(rel.certain_space.shape[1]):
            vec = rel.certain_space[:, k]
            amps = "  ".join(f"{v.real:+.6f}{v.imag:+.6f}i" for v in vec)
            print(f"    certain state {k}: {amps}")
    return 0


def _cmd_steer(args) -> int:
    spec, _ = resolve_game(args.game)
    options = AnalysisOptions(grid_points=args.grid)
    _, solution = best_known_solution(spec, options)
    report = correspondence_verdict(spec, solution.strategy)
    for title, verdicts in (
        ("Alice steers Bob:", report.verdicts_alice),
        ("Bob steers Alice:", report.verdicts_bob),
    ):
        print(title)
        print("  pair    p           xi          achieved    gap         verdict")
        for v in verdicts:
            status = "vacuous" if v.vacuous else ("saturated" if v.saturated else "not saturated")
            print(
                f"  ({v.pair[0]},{v.pair[1]})   {v.probability:.6f}    {v.xi:.6f}    "
                f"{v.achieved:.6f}    {v.gap:.6f}    {status}"
            )
    print(
        f"certain-state assemblage deviation: {report.ns_deviation:.6f} "
        f"({'passes' if report.ns_passes else 'fails'} no-signaling)"
    )
    print(f"correspondence_holds: {report.correspondence_holds}")
    return 0


def _cmd_analyze(args) -> int:
    options = AnalysisOptions(
        grid_points=args.grid,
        closed_form=None if args.closed_form is None else args.closed_form,
    )
    run = run_analyze(args.game, options)
    text = render_report(run, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"report written to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonlocal-audit",
        description=(
            "Classical and quantum values of two-party non-local games, the "
            "fine-grained uncertainty relations they induce, steered "
            "assemblages, and the correspondence verdict between them."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list-games", help="print catalog ids and provenance").set_defaults(
        func=_cmd_list_games
    )

    p = sub.add_parser("classical", help="exact classical value by enumeration")
    p.add_argument("game", help="catalog id or JSON game file")
    p.set_defaults(func=_cmd_classical)

    p = sub.add_parser("quantum", help="quantum value (planar grid or closed form)")
    p.add_argument("game")
    p.add_argument("--grid", type=int, default=721, help="grid points per angle axis")
    p.add_argument("--closed-form", action="store_true", help="use the exact closed form")
    p.set_defaults(func=_cmd_quantum)

    p = sub.add_parser("uncertainty", help="fine-grained relations for one side")
    p.add_argument("game")
    p.add_argument("--side", choices=("alice", "bob"), required=True,
                   help="which party steers (relations live on the other system)")
    p.add_argument("--grid", type=int, default=721)
    p.set_defaults(func=_cmd_uncertainty)

    p = sub.add_parser("steer", help="saturation verdicts and no-signaling check")
    p.add_argument("game")
    p.add_argument("--grid", type=int, default=721)
    p.set_defaults(func=_cmd_steer)

    p = sub.add_parser("analyze", help="full report (classical, quantum, steering, verdict)")
    p.add_argument("game")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write the report to a file")
    p.add_argument("--grid", type=int, default=721)
    p.add_argument("--closed-form", action=argparse.BooleanOptionalAction, default=None,
                   help="force the closed form on or off (default: auto)")
    p.set_defaults(func=_cmd_analyze)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NotHermitianError, NotSquareError, NonlocalAuditError) as exc:
        print(f"internal numeric failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
