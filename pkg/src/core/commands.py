"""
Command handlers for the run workflow.

Each handler takes the resolved RunConfig and the validated bodies and
returns a CommandResult; formatting is left to the format node. Handlers may
raise the library errors, which compute_node maps to exit codes.
"""

from typing import Callable, Dict, List

import numpy as np

from geometry.body import hausdorff
from geometry.demo_action import is_small, remark_envelopes, remark_table
from geometry.ellipsoid import containment_bounds, lowner_bounds
from geometry.orbit import bm_distance, net_profile, quotient_distance, slice_net
from geometry.sampling import random_corpus, random_group_element, random_orthogonal
from geometry.slicing import (
    check_slice_axioms,
    in_john_slice,
    john_position,
    slicing_map_john,
    slicing_map_lowner,
)
from models.demo_models import DemoSlice, SliceKind
from models.geometry_models import Ellipsoid, SymBody
from models.run_models import Command, CommandResult, ResultTable, RunConfig
from utils.formatters import matrix_table

Handler = Callable[[RunConfig, List[SymBody]], CommandResult]

AUDIT_GROUP_ELEMENTS = 50
AUDIT_ORTHOGONAL = 10
NET_EPS_FACTORS = (0.5, 1.0, 2.0)
SMALLNESS_PROBES = ((0.0, 1.0), (1.0, 0.0), (2.0, 3.0))


def _john(config: RunConfig, bodies: List[SymBody]) -> CommandResult:
    bounds = containment_bounds(bodies[0], config.eps)
    M = bounds.inner.M
    return CommandResult(
        payload={"M": M, "outer_factor": bounds.outer_factor},
        tables=[matrix_table("M", M)],
        figure=(bodies[0], [bounds.inner]),
    )


def _lowner(config: RunConfig, bodies: List[SymBody]) -> CommandResult:
    bounds = lowner_bounds(bodies[0], config.eps)
    M = bounds.outer.M
    return CommandResult(
        payload={"M": M, "inner_factor": bounds.inner_factor},
        tables=[matrix_table("M", M)],
        figure=(bodies[0], [bounds.outer]),
    )


def _john_position(config: RunConfig, bodies: List[SymBody]) -> CommandResult:
    J = john_position(bodies[0], config.eps)
    return CommandResult(
        payload=J.to_dict(),
        tables=[matrix_table("g", J.gens)],
        figure=(J, [Ellipsoid.unit_ball(J.n)]),
    )


def _slice_map(config: RunConfig, bodies: List[SymBody]) -> CommandResult:
    P = slicing_map_john(bodies[0], config.eps).P
    Q = slicing_map_lowner(bodies[0], config.eps).P
    return CommandResult(
        payload={"P": P, "lowner_P": Q},
        tables=[matrix_table("P", P), matrix_table("lowner_P", Q)],
    )


def _scalar(name: str, value: float) -> CommandResult:
    return CommandResult(payload={name: value}, tables=[ResultTable(header=[name], rows=[[value]])])


def _hausdorff(config: RunConfig, bodies: List[SymBody]) -> CommandResult:
    return _scalar("hausdorff", hausdorff(bodies[0], bodies[1], m=config.samples))


def _bm_dist(config: RunConfig, bodies: List[SymBody]) -> CommandResult:
    value = bm_distance(
        bodies[0], bodies[1], n_angles=config.samples, eps=config.eps,
        seed=config.seed, workers=config.workers,
    )
    return _scalar("bm_distance", value)


def _quotient_dist(config: RunConfig, bodies: List[SymBody]) -> CommandResult:
    value = quotient_distance(
        bodies[0], bodies[1], n_angles=config.samples, eps=config.eps,
        seed=config.seed, workers=config.workers,
    )
    return _scalar("quotient_distance", value)


def _slice_audit(config: RunConfig, bodies: List[SymBody]) -> CommandResult:
    """J(n) membership audited on the inputs and their John positions."""
    n = bodies[0].n
    rng = np.random.default_rng(config.seed)
    group = [random_group_element(n, rng) for _ in range(AUDIT_GROUP_ELEMENTS)]
    group += [random_orthogonal(n, rng) for _ in range(AUDIT_ORTHOGONAL)]
    samples = list(bodies) + [john_position(A, config.eps) for A in bodies]

    report = check_slice_axioms(
        lambda A: in_john_slice(A, config.eps),
        samples,
        group,
        normalizer=lambda A: john_position(A, config.eps),
        workers=config.workers,
        seed=config.seed,
    )
    payload = report.to_dict()
    payload["passed"] = report.passed
    summary = ResultTable(
        header=["axiom", "passed"],
        rows=[[key, value] for key, value in payload.items() if key.startswith("axiom_")],
    )
    witnesses = ResultTable(
        header=["violation"],
        rows=[[violation] for _, violation in report.disjointness_witnesses],
    )
    return CommandResult(payload=payload, tables=[summary, witnesses])


def _demo_remark(config: RunConfig, bodies: List[SymBody]) -> CommandResult:
    rows = remark_table()
    envelopes = remark_envelopes()
    smallness = {
        kind.value: is_small(DemoSlice(kind), SMALLNESS_PROBES, workers=config.workers).small
        for kind in (SliceKind.CIRCLE, SliceKind.HYPERBOLA)
    }

    columns = ["k", "x", "y", "f_S", "k_inv_sqrt"]
    table = ResultTable(header=columns, rows=[[row[c] for c in columns] for row in rows])
    env_table = ResultTable(
        header=["transporter", "lam_min", "lam_max", "unbounded_below", "unbounded_above", "exact"],
        rows=[
            [name, e.lam_min, e.lam_max, e.unbounded_below, e.unbounded_above, e.exact]
            for name, e in envelopes.items()
        ],
    )
    payload = {
        "rows": rows,
        "limit_at_axis": 1.0,
        "envelopes": {name: e.to_dict() for name, e in envelopes.items()},
        "small": smallness,
    }
    return CommandResult(payload=payload, tables=[table, env_table])


def _net(config: RunConfig, bodies: List[SymBody]) -> CommandResult:
    """Greedy net over John positions of the inputs, or of a generated corpus."""
    source = bodies or random_corpus(config.n, config.count, config.seed)
    samples = [john_position(A, config.eps) for A in source]
    report = slice_net(samples, config.net_eps, seed=config.seed, workers=config.workers)
    profile = net_profile(
        samples, [config.net_eps * f for f in NET_EPS_FACTORS], seed=config.seed, workers=config.workers
    )
    payload = report.to_dict()
    payload["profile"] = [{"eps": e, "centers": c} for e, c in profile]
    return CommandResult(
        payload=payload,
        tables=[ResultTable(header=["eps", "centers"], rows=[list(p) for p in profile])],
    )


def _gen(config: RunConfig, bodies: List[SymBody]) -> CommandResult:
    corpus = random_corpus(config.n, config.count, config.seed)
    return CommandResult(payload={"bodies": [A.to_dict() for A in corpus]})


COMMAND_HANDLERS: Dict[Command, Handler] = {
    Command.JOHN: _john,
    Command.LOWNER: _lowner,
    Command.JOHN_POSITION: _john_position,
    Command.SLICE_MAP: _slice_map,
    Command.HAUSDORFF: _hausdorff,
    Command.BM_DIST: _bm_dist,
    Command.QUOTIENT_DIST: _quotient_dist,
    Command.SLICE_AUDIT: _slice_audit,
    Command.DEMO_REMARK: _demo_remark,
    Command.NET: _net,
    Command.GEN: _gen,
}
