"""Command-line front end.

Exit codes: 0 on success, 1 for invalid input, 2 when a size/render guard
refuses the request.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import statistics
import sys
from pathlib import Path

import numpy as np

from . import oracle as orc
from . import scenarios
from .engine import EngineConfig, Outcome, run_to_completion
from .game import Action, bilateral_views, build_matrix, pure_equilibria
from .model import FrustrationState, ValidationError, as_percent
from .scenarios import ScenarioSpec
from .serialization import (
    dumps_result,
    dumps_scenario,
    load_scenario,
    outcome_csv,
    result_document,
    welfare_to_dict,
)
from .strategies import GreedyTopK, RandomAmongBest, strategy_from_name
from .svg import RenderGuardError, render_svg

EXIT_OK, EXIT_VALIDATION, EXIT_GUARD = 0, 1, 2

SWEEP_PARAMETERS = ("alpha", "beta", "gamma", "k")


def _override_config(config: EngineConfig, args) -> EngineConfig:
    changes = {}
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "max_rounds", None) is not None:
        changes["max_rounds"] = args.max_rounds
    strategy = getattr(args, "strategy", None)
    k = getattr(args, "k", None)
    if strategy is not None:
        changes["default_strategy"] = strategy_from_name(strategy, k)
    elif k is not None:
        changes["default_strategy"] = GreedyTopK(k)
    return dataclasses.replace(config, **changes) if changes else config


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def summary_table(spec: ScenarioSpec, outcome: Outcome) -> str:
    lines = [
        f"scenario {spec.name}: {len(outcome.matching)} matches, "
        f"{len(outcome.unmatched)} unmatched, {outcome.rounds_executed} rounds ({outcome.termination})",
        f"{'agent':>8} {'partner':>8} {'satisfaction %':>15} {'m':>4}",
    ]
    name = lambda i: spec.labels.get(i, str(i))  # noqa: E731
    for i, s in outcome.satisfaction.items():
        p = outcome.partner[i]
        lines.append(
            f"{name(i):>8} {'-' if p is None else name(p):>8} {as_percent(s):>15.4f} {outcome.frustration[i]:>4}"
        )
    return "\n".join(lines) + "\n"


def cmd_run(args) -> int:
    spec, config = load_scenario(args.scenario)
    config = _override_config(config, args)
    outcome = run_to_completion(spec.agents, config)
    if args.format == "csv":
        text = outcome_csv(outcome, spec.labels)
    else:
        text = dumps_result(result_document(spec, config, outcome))
    _emit(text, args.out)
    (sys.stdout if args.out else sys.stderr).write(summary_table(spec, outcome))
    return EXIT_OK


def oracle_comparison(spec: ScenarioSpec, outcome: Outcome, objective: str) -> dict:
    best = orc.max_welfare_matching(spec.agents, objective)
    engine = orc.welfare(outcome.matching, spec.agents, objective)
    return {
        "objective": objective,
        "note": "static welfare: unmatched agents count their beta (m = 0)",
        "optimum": welfare_to_dict(best),
        "engine": welfare_to_dict(engine),
        "gap": best.value - engine.value,
        "blocking_pairs": [list(p) for p in orc.blocking_pairs(outcome.matching, spec.agents)],
        "individually_rational": orc.is_individually_rational(outcome.matching, spec.agents),
        "individually_rational_at_confirmation": orc.is_individually_rational(
            outcome.matching, spec.agents, outcome.reservation_at_match
        ),
    }


def cmd_oracle(args) -> int:
    spec, config = load_scenario(args.scenario)
    config = _override_config(config, args)
    if len(spec.agents) > orc.MAX_ORACLE_AGENTS:
        raise orc.OracleSizeError(
            f"exhaustive search is limited to {orc.MAX_ORACLE_AGENTS} agents, got {len(spec.agents)}"
        )
    outcome = run_to_completion(spec.agents, config)
    cmp = oracle_comparison(spec, outcome, args.objective)
    _emit(dumps_result(result_document(spec, config, outcome, cmp)), args.out)
    report = sys.stdout if args.out else sys.stderr
    report.write(summary_table(spec, outcome))
    report.write(
        f"oracle ({args.objective}): optimum {cmp['optimum']['matching']} value {cmp['optimum']['total' if args.objective == orc.UTILITARIAN else 'minimum']:.6f}; "
        f"gap {cmp['gap']:.6f}; blocking pairs {len(cmp['blocking_pairs'])}; "
        f"IR (beta) {cmp['individually_rational']}\n"
    )
    return EXIT_OK


def sweep_grid(parameter: str, lo: float, hi: float, steps: int) -> list:
    if parameter not in SWEEP_PARAMETERS:
        raise ValidationError(f"cannot sweep {parameter!r}; choose from {SWEEP_PARAMETERS}")
    if steps < 2:
        raise ValidationError(f"a sweep needs at least 2 steps, got {steps}")
    if not lo <= hi:
        raise ValidationError(f"empty range [{lo}, {hi}]")
    if parameter == "alpha" and not lo > 0:
        raise ValidationError("alpha must stay > 0")
    if parameter in ("beta", "gamma") and not (0 < lo and hi < 1):
        raise ValidationError(f"{parameter} must stay inside (0, 1)")
    grid = np.linspace(lo, hi, steps).tolist()
    if parameter == "k":
        if lo < 1:
            raise ValidationError("k must stay >= 1")
        return [int(round(v)) for v in grid]
    return grid


def sweep(spec: ScenarioSpec, config: EngineConfig, parameter: str, lo: float, hi: float, steps: int) -> list[dict]:
    rows = []
    for index, value in enumerate(sweep_grid(parameter, lo, hi, steps)):
        cfg = dataclasses.replace(config, seed=(config.seed + index) % 2**64)
        agents = spec.agents
        if parameter == "k":
            if isinstance(config.default_strategy, RandomAmongBest):
                raise ValidationError("k only applies to greedy_top_k")
            cfg = dataclasses.replace(cfg, default_strategy=GreedyTopK(value))
        else:
            agents = [dataclasses.replace(a, **{parameter: value}) for a in agents]
        out = run_to_completion(agents, cfg)
        sats = list(out.satisfaction.values())
        rows.append(
            {
                parameter: value,
                "seed": cfg.seed,
                "matches": len(out.matching),
                "mean_satisfaction": statistics.fmean(sats) if sats else math.nan,
                "min_satisfaction": min(sats) if sats else math.nan,
                "mean_m": statistics.fmean(out.frustration.values()) if sats else math.nan,
                "blocking_pairs": len(orc.blocking_pairs(out.matching, agents))
                if len(agents) <= orc.MAX_ORACLE_AGENTS
                else "",
            }
        )
    return rows


def cmd_sweep(args) -> int:
    spec, config = load_scenario(args.scenario)
    config = _override_config(config, args)
    rows = sweep(spec, config, args.parameter, args.range[0], args.range[1], args.steps)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    spec, config = load_scenario(args.scenario)
    dims = {a.dimension for a in spec.agents}
    if dims and max(dims) > 2:
        raise RenderGuardError(f"can only draw 1-D or 2-D populations (got d={max(dims)}); projection is out of scope")
    outcome = None
    if args.with_outcome:
        outcome = run_to_completion(spec.agents, _override_config(config, args))
    _emit(render_svg(spec.agents, outcome, spec.labels), args.out)
    return EXIT_OK


def cmd_game(args) -> int:
    spec, _ = load_scenario(args.scenario)
    a, b = spec.agent(args.row), spec.agent(args.col)
    rv, cv = bilateral_views(a, b, FrustrationState(a.id, args.m_row), FrustrationState(b.id, args.m_col))
    matrix = build_matrix(rv, cv)
    eq = pure_equilibria(matrix)
    print(f"row agent {a.id} vs column agent {b.id} (payoffs row, col)")
    for r in Action:
        cells = "  ".join(f"{c.value}: ({matrix[(r, c)][0]:.6g}, {matrix[(r, c)][1]:.6g})" for c in Action)
        print(f"  {r.value:>6} | {cells}")
    print("pure equilibria:", ", ".join(f"({p.row.value}, {p.col.value})" for p in sorted(eq, key=lambda p: (p.row.value, p.col.value))))
    return EXIT_OK


def build_scenario(args) -> ScenarioSpec:
    name = args.name
    if name == "seesaw_uniform":
        return scenarios.seesaw_uniform(args.n, args.weight, args.alpha or 1.0, args.beta or 0.1, args.gamma or 0.5)
    if name == "seesaw_line":
        return scenarios.seesaw_line(
            args.positions or (0.0, 7.0, 11.0, 18.0), args.alpha or 0.04, args.beta or 0.001, args.gamma or 0.1
        )
    if name == "cycling_ring":
        return scenarios.cycling_ring(args.alpha or 1.0, args.beta or 0.01, args.gamma or 0.5)
    if name == "bipartite":
        return scenarios.bipartite_case(
            args.case, tuple(args.sizes), args.alpha or 1.0, args.beta or 0.1, args.gamma or 0.5
        )
    if name == "random":
        return scenarios.random_population(args.n, args.d, args.population_seed)
    raise ValidationError(f"unknown built-in scenario {name!r}; choose from {sorted(scenarios.BUILTINS)}")


def cmd_export(args) -> int:
    spec = build_scenario(args)
    config = EngineConfig()
    if spec.name == "cycling_ring":
        config = EngineConfig(default_strategy=GreedyTopK(2))
    config = _override_config(config, args)
    _emit(dumps_scenario(spec, config), args.out)
    return EXIT_OK


def _engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help="override the scenario's seed")
    p.add_argument("--max-rounds", type=int, dest="max_rounds")
    p.add_argument("--k", type=int, help="allure at most k partners (greedy_top_k)")
    p.add_argument("--strategy", choices=["greedy_top_k", "random_among_best"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="barter", description="Barter double auction simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the auction on a scenario file")
    p.add_argument("scenario")
    _engine_flags(p)
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle", help="compare the auction against brute force")
    p.add_argument("scenario")
    _engine_flags(p)
    p.add_argument("--objective", choices=list(orc.OBJECTIVES), default=orc.UTILITARIAN)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sweep", help="rerun a scenario over a parameter grid")
    p.add_argument("scenario")
    _engine_flags(p)
    p.add_argument("--parameter", required=True, choices=list(SWEEP_PARAMETERS))
    p.add_argument("--range", nargs=2, type=float, required=True, metavar=("LO", "HI"))
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("render", help="draw demands and offers as SVG")
    p.add_argument("scenario")
    _engine_flags(p)
    p.add_argument("--with-outcome", action="store_true", help="also run the auction and draw matches")
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("export-scenario", help="write a built-in scenario file")
    p.add_argument("name", choices=sorted(scenarios.BUILTINS))
    _engine_flags(p)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--population-seed", type=int, default=0)
    p.add_argument("--weight", type=float, default=1.0)
    p.add_argument("--positions", type=float, nargs="+")
    p.add_argument("--case", choices=list(scenarios.BIPARTITE_CASES), default="match")
    p.add_argument("--sizes", type=int, nargs=2, default=[3, 3])
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("game", help="print the bilateral satisfaction matrix of two agents")
    p.add_argument("scenario")
    p.add_argument("row", type=int)
    p.add_argument("col", type=int)
    p.add_argument("--m-row", type=int, default=0)
    p.add_argument("--m-col", type=int, default=0)
    p.set_defaults(func=cmd_game)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (orc.OracleSizeError, RenderGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValidationError, LookupError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
