"""Command-line interface.

Subcommands: count, sweep, multtable, cluster, blocks, orderstats,
identities, report. Artifacts are CSV (header row, '.' decimal) or JSON
(one document, with {"version", "command", "seed"} metadata); identical
configurations produce byte-identical output. Exit codes: 0 success,
1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from . import blocks as blocks_mod
from . import cluster as cluster_mod
from . import factor as factor_mod
from . import identities as ident_mod
from . import orderstats as os_mod
from . import window as window_mod
from .errors import DivlabError

SCHEMA_VERSION = "v1"

# ASCII bytes of "D1V150R5" ("DIVISORS" in leetspeak) as a big-endian
# 64-bit integer; the fixed default seed for every randomized subcommand.
DEFAULT_SEED = int.from_bytes(b"D1V150R5", "big")  # 0x4431563135305235

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2


def parse_count(text: str) -> int:
    """Exact integer from decimal or scientific notation ('1e6' -> 1000000)."""
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    n = int(d)
    if n != d:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return n


def parse_geom(text: str) -> tuple[float, float, int]:
    """Parse lo:hi:steps into a geometric grid description."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected lo:hi:steps, got {text!r}")
    lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if not 0 < lo <= hi or steps < 1:
        raise argparse.ArgumentTypeError(f"bad geometric grid {text!r}")
    return lo, hi, steps


def _default_threads() -> int:
    env = os.environ.get("DIVLAB_THREADS")
    return int(env) if env else 1


@dataclass
class RunConfig:
    """Resolved invocation: subcommand, numeric parameters, output target."""

    command: str
    params: dict
    seed: int = DEFAULT_SEED
    threads: int = 1
    chunk: int = os_mod.DEFAULT_CHUNK
    out: str | None = None
    format: str = "csv"
    lines: list[str] = field(default_factory=list)


def _emit(config: RunConfig, text: str) -> None:
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_doc(config: RunConfig, payload: dict) -> str:
    doc = {"version": SCHEMA_VERSION, "command": config.command, "seed": config.seed}
    doc.update(payload)
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _csv_doc(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
        buf.write("\n")
    return buf.getvalue()


def cmd_count(config: RunConfig) -> int:
    p = config.params
    q = window_mod.WindowQuery(p["x"], p["y"], p["z"])
    h = window_mod.count_window(q)
    if config.out:
        if config.format == "json":
            _emit(config, _json_doc(config, {"x": q.x, "y": q.y, "z": q.z, "h": h}))
        else:
            _emit(config, _csv_doc(["x", "y", "z", "h"], [[q.x, q.y, q.z, h]]))
    else:
        print(h)
    return EXIT_OK


def cmd_sweep(config: RunConfig) -> int:
    p = config.params
    lo, hi, steps = p["y_geom"]
    x = p["x"]
    ys = [lo * (hi / lo) ** (i / (steps - 1)) for i in range(steps)] if steps > 1 else [lo]
    rows = []
    points = []
    for y in ys:
        d = window_mod.normalized_density(x, y)
        rows.append([x, d.y, d.h, d.rho])
        points.append({"x": x, "y": d.y, "h": d.h, "rho": d.rho})
    if config.format == "json":
        _emit(config, _json_doc(config, {"points": points}))
    else:
        _emit(config, _csv_doc(["x", "y", "h", "rho"], rows))
    return EXIT_OK


def cmd_multtable(config: RunConfig) -> int:
    x = config.params["x"]
    rep = window_mod.sandwich_check(x)
    payload = {
        "x": x,
        "a_x": rep.a_x,
        "sandwich_lower": rep.lower,
        "sandwich_upper": rep.upper,
        "holds": rep.holds,
    }
    if config.format == "json":
        _emit(config, _json_doc(config, payload))
    else:
        _emit(
            config,
            _csv_doc(
                ["x", "a_x", "sandwich_lower", "sandwich_upper", "holds"],
                [[x, rep.a_x, rep.lower, rep.upper, rep.holds]],
            ),
        )
    return EXIT_OK if rep.holds else EXIT_VERIFY_FAIL


def cmd_cluster(config: RunConfig) -> int:
    p = config.params
    a_max, P, Q = p["a_max"], p.get("P"), p.get("Q") or 1
    table = factor_mod.sieve_primes(max(2, a_max))
    rows = []
    if P is not None:
        stream = (
            f
            for f in factor_mod.squarefree_smooth_stream(P, a_max, table)
            if f.n >= Q
        )
    else:
        stream = (factor_mod.factorize(a, table) for a in range(Q, a_max + 1))
    for f in stream:
        st = cluster_mod.cluster_set(f)
        rows.append([st.a, st.tau, st.L, st.W])
    if config.format == "json":
        payload = {
            "rows": [
                {"a": a, "tau": t, "L": L, "W": w} for a, t, L, w in rows
            ]
        }
        _emit(config, _json_doc(config, payload))
    else:
        _emit(config, _csv_doc(["a", "tau", "L", "W"], rows))
    return EXIT_OK


def cmd_blocks(config: RunConfig) -> int:
    p = config.params
    part = blocks_mod.build_partition(p["P"], weight_alpha=p.get("alpha") or 0.0)
    rows = []
    for j, lam, s in zip(part.indices(), part.lambdas, part.block_sums):
        rows.append([j, lam, s, math.log2(math.log(lam)) - j])
    if config.format == "json":
        payload = {
            "rows": [
                {"j": j, "lambda_j": lam, "block_sum": s, "log2_log_lambda_minus_j": d}
                for j, lam, s, d in rows
            ]
        }
        _emit(config, _json_doc(config, payload))
    else:
        _emit(
            config,
            _csv_doc(["j", "lambda_j", "block_sum", "log2_log_lambda_minus_j"], rows),
        )
    return EXIT_OK


def cmd_orderstats(config: RunConfig) -> int:
    p = config.params
    k, u, v = p["k"], p["u"], p["v"]
    bound = os_mod.Boundary.from_uv(k, u, v)
    q = os_mod.q_exact(bound)
    mc = os_mod.q_mc(bound, p["samples"], config.seed, config.chunk)
    w = u + v - k
    ratio = q * k / ((u + 1) * (w + 1) ** 2) if u >= 0 and w >= 0 else None
    payload = {
        "k": k,
        "u": u,
        "v": v,
        "q_exact": q,
        "q_mc": mc.mean,
        "stderr": mc.stderr,
        "ratio_lemmaQ": ratio,
    }
    _emit(config, _json_doc(config, payload))
    return EXIT_OK


def _identity_suite(kmax: int) -> list[dict]:
    checks: list[dict] = []
    grid = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3), Fraction(5)]
    abel_ok = all(
        ident_mod.abel_identity(t, a, b).equal
        for t in range(1, kmax + 1)
        for a in grid
        for b in grid
    )
    checks.append({"name": f"abel_identity_t_le_{kmax}", "equal": abel_ok})
    for k in range(1, min(kmax, ident_mod.S_ZERO_K_MAX) + 1):
        ok = all(ident_mod.s_zero_sum(k, M).equal for M in (1, 2, 5))
        checks.append({"name": f"composition_sum_k{k}", "equal": ok})
    cyc = ident_mod.cycle_sum_check([Fraction(2), Fraction(1, 2)])
    checks.append({"name": "cycle_sum_unit_product", "equal": cyc.value == 1})
    f_ok = all(
        ident_mod.f_of_b(ident_mod.CompositionVec(1, b)) >= Fraction(1, 2)
        for k in range(1, min(kmax, 6) + 1)
        for b in ident_mod.compositions(k, k)
    )
    checks.append({"name": "f_of_b_lower_bound", "equal": f_ok})
    comb_ok = all(
        ident_mod.combsum_check(t, a, b).holds
        for t in range(2, kmax + 1)
        for a in (-1, 0, 1, 2)
        for b in (0, 1, 3)
    )
    checks.append({"name": "constrained_sum_bound", "equal": comb_ok})
    return checks


def cmd_identities(config: RunConfig) -> int:
    kmax = config.params.get("kmax") or 6
    checks = _identity_suite(kmax)
    all_ok = all(c["equal"] for c in checks)
    _emit(config, _json_doc(config, {"kmax": kmax, "checks": checks, "all_equal": all_ok}))
    return EXIT_OK if all_ok else EXIT_VERIFY_FAIL


def cmd_report(config: RunConfig) -> int:
    results: list[dict] = []

    def check(name: str, ok: bool, detail) -> None:
        results.append({"name": name, "pass": bool(ok), "detail": detail})

    q1 = window_mod.WindowQuery(100, 3, 6)
    q2 = window_mod.WindowQuery(20, 2, 4)
    check("count_window_spot", window_mod.count_window(q1) == 46
          and window_mod.count_window(q2) == 10,
          {"H(100,3,6)": window_mod.count_window(q1),
           "H(20,2,4)": window_mod.count_window(q2)})

    agree = all(
        window_mod.count_window(window_mod.WindowQuery(x, y, 2 * y))
        == window_mod.count_window_oracle(window_mod.WindowQuery(x, y, 2 * y))
        for x in (500, 1234, 4999)
        for y in range(1, math.isqrt(x))
    )
    check("count_window_oracle_agree", agree, {"x_grid": [500, 1234, 4999]})

    sandwiches = {x: window_mod.sandwich_check(x).holds for x in (16, 400, 10**4)}
    check("multiplication_table_sandwich", all(sandwiches.values()), sandwiches)
    check("mult_table_spot", window_mod.mult_table_count(9) == 6
          and window_mod.mult_table_count(16) == 9,
          {"A(9)": window_mod.mult_table_count(9),
           "A(16)": window_mod.mult_table_count(16)})

    table = factor_mod.sieve_primes(4000)
    s6 = cluster_mod.cluster_set(factor_mod.factorize(6, table))
    check("cluster_spot", abs(s6.L - (math.log(2) + math.log(6))) < 1e-12
          and s6.W == 10, {"L(6)": s6.L, "W(6)": s6.W})
    lemma_ok = all(
        cluster_mod.lemmaL_check(factor_mod.factorize(a, table)).holds
        for a in range(1, 2001)
    )
    check("lemmaL_a_le_2000", lemma_ok, {})
    lw = cluster_mod.aggregate_LW(range(1, 200), table)
    check("aggregate_LW", lw.holds,
          {"sum_L": lw.sum_L, "sum_tau": lw.sum_tau, "sum_W": lw.sum_W})

    part = blocks_mod.build_partition(200)
    check("prime_blocks", part.lambdas[:3] == (2, 7, 131),
          {"lambdas": list(part.lambdas[:3])})

    ident = _identity_suite(6)
    check("identities", all(c["equal"] for c in ident), ident)

    grid_ok = True
    worst = 0.0
    for k in range(1, 6):
        for u in range(0, k + 2):
            for v in range(1, k + 3):
                b = os_mod.Boundary.from_uv(k, u, v)
                diff = abs(os_mod.q_exact(b) - float(os_mod.q_oracle(b)))
                worst = max(worst, diff)
                grid_ok = grid_ok and diff <= 1e-12
    check("orderstats_exact_vs_oracle", grid_ok, {"worst_abs_diff": worst})

    mc = os_mod.q_mc(os_mod.Boundary.from_uv(2, 1, 2), 10**5, config.seed, config.chunk)
    check("orderstats_mc", abs(mc.mean - 0.75) <= 4 * mc.stderr + 1e-9,
          {"mean": mc.mean, "stderr": mc.stderr})

    all_ok = all(r["pass"] for r in results)
    _emit(config, _json_doc(config, {"checks": results, "all_pass": all_ok}))
    return EXIT_OK if all_ok else EXIT_VERIFY_FAIL


_COMMANDS = {
    "count": cmd_count,
    "sweep": cmd_sweep,
    "multtable": cmd_multtable,
    "cluster": cmd_cluster,
    "blocks": cmd_blocks,
    "orderstats": cmd_orderstats,
    "identities": cmd_identities,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="divlab",
        description="Divisor-window counts, clustering measures, prime blocks, "
        "order-statistic barriers, and exact identity checks.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=parse_count, default=DEFAULT_SEED)
        p.add_argument("--threads", type=int, default=_default_threads(),
                       help="accepted for config compatibility; execution is "
                       "serial and worker-count independent")
        p.add_argument("--chunk", type=parse_count, default=os_mod.DEFAULT_CHUNK)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("count", help="H(x,y,z): integers <= x with a divisor in (y,z]")
    p.add_argument("--x", type=parse_count, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--z", type=float, required=True)
    common(p)

    p = sub.add_parser("sweep", help="normalized density over a geometric y grid")
    p.add_argument("--x", type=parse_count, required=True)
    p.add_argument("--y-geom", dest="y_geom", type=parse_geom, required=True,
                   metavar="lo:hi:steps")
    common(p)

    p = sub.add_parser("multtable", help="A(x) and its sandwich bounds")
    p.add_argument("--x", type=parse_count, required=True)
    common(p)

    p = sub.add_parser("cluster", help="per-integer clustering stats a,tau,L,W")
    p.add_argument("--a-max", dest="a_max", type=parse_count, required=True)
    p.add_argument("--P", type=parse_count, default=None,
                   help="restrict to squarefree P-smooth integers")
    p.add_argument("--Q", type=parse_count, default=1)
    common(p)

    p = sub.add_parser("blocks", help="greedy prime-block boundaries")
    p.add_argument("--P", type=parse_count, required=True, help="sieve limit")
    p.add_argument("--alpha", type=float, default=0.0,
                   help="reciprocal weight exponent (0 for the plain blocks)")
    common(p)

    p = sub.add_parser("orderstats", help="barrier probability for (k,u,v)")
    p.add_argument("--k", type=parse_count, required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--samples", type=parse_count, default=10**5)
    common(p)

    p = sub.add_parser("identities", help="exact combinatorial identity suite")
    p.add_argument("--kmax", type=parse_count, default=6)
    common(p)

    p = sub.add_parser("report", help="full desk-scale verification battery")
    common(p)
    return ap


def execute(config: RunConfig) -> int:
    return _COMMANDS[config.command](config)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    params = {
        k: v
        for k, v in vars(ns).items()
        if k not in {"command", "seed", "threads", "chunk", "out", "format"}
    }
    if ns.threads < 1:
        ap.error("--threads must be >= 1")
    config = RunConfig(
        command=ns.command,
        params=params,
        seed=ns.seed,
        threads=ns.threads,
        chunk=ns.chunk,
        out=ns.out,
        format=ns.format,
    )
    try:
        return execute(config)
    except DivlabError as exc:
        print(f"divlab {ns.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
