"""Command-line front end.

Subcommands: ``molien``, ``reconstruct``, ``labels``, ``invariants``,
``verify`` and ``cgmatrix``. Reports are JSON (default) or plain text.
Integers that may not fit in 64 bits are written as decimal strings.

Exit codes: 0 on success, 1 if any verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

from . import invariants as inv
from .molienweyl import (
    ELL1_DENOMINATOR,
    FULL,
    GAMMA0,
    GAMMA1,
    Q0,
    char_poly_check,
    gamma0_series,
    gamma1_series,
    molien_series,
    random_pairs,
    su2_label_table,
)
from .seriesring import (
    IntPolynomial,
    eval_at_one,
    is_palindromic,
    read_coefficients,
    reconstruct_numerator,
)
from .wigner import cg_block_check, cg_columns, cg_matrix_exact, cg_rows, random_euler

log = logging.getLogger("wreathmolien")

MAX_ORDER = 130
THREADS_ENV = "WREATHMOLIEN_THREADS"

DEFAULT_TOLERANCES = {
    "charpoly": 1e-8,
    "blocks": 1e-9,
    "invariance": 1e-8,
    "tau": 1e-8,
    "identities": 1e-8,
}

SUITES = ("series", "charpoly", "blocks", "invariance", "identities", "rank")


@dataclass
class RunConfig:
    command: str
    ell: int = 2
    order: int | None = None
    seed: int = 20240101
    samples: int = 100
    group: str = FULL
    which: str = "p0"
    max_dim: int = 33
    degree: int = 4
    suite: str = "all"
    identity_table: str = "reference"
    j1: int = 2
    j2: int = 2
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output: str | None = None
    format: str = "json"
    max_order: int = MAX_ORDER

    def validate(self) -> None:
        if self.order is not None and not 0 <= self.order <= self.max_order:
            raise ValueError(f"order must be in 0..{self.max_order}")
        if self.ell not in (1, 2):
            raise ValueError("ell must be 1 or 2")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def read_config_file(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{n}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _apply_overrides(cfg: RunConfig, values: dict[str, str]) -> RunConfig:
    changes = {}
    tolerances = dict(cfg.tolerances)
    for key, raw in values.items():
        if key.startswith("tol_") or key.startswith("tolerance."):
            tolerances[key.split("_", 1)[-1].split(".", 1)[-1]] = float(raw)
            continue
        if key not in RunConfig.__dataclass_fields__ or key in ("command", "tolerances"):
            raise ValueError(f"unknown config key {key!r}")
        current = getattr(cfg, key)
        if isinstance(current, bool):
            changes[key] = raw.lower() in ("1", "true", "yes")
        elif isinstance(current, int) or key == "order":
            changes[key] = int(raw)
        else:
            changes[key] = raw
    return replace(cfg, tolerances=tolerances, **changes)


def golden_path(name: str):
    return resources.files("wreathmolien") / "data" / name


def load_golden(name: str) -> list[int]:
    with resources.as_file(golden_path(name)) as p:
        return read_coefficients(p)


def _strs(xs) -> list[str]:
    return [str(int(x)) for x in xs]


def _check(name: str, samples: int, residual: float, tolerance: float, **extra) -> dict:
    return {"name": name, "samples": samples, "max_residual": float(residual),
            "tolerance": tolerance, "passed": bool(residual < tolerance), **extra}


# -- commands ---------------------------------------------------------------

def cmd_molien(cfg: RunConfig) -> tuple[dict, bool]:
    order = 20 if cfg.order is None else cfg.order
    s = molien_series(cfg.group, cfg.ell, order)
    return {"group": cfg.group, "ell": cfg.ell, "order": order,
            "coefficients": _strs(s.as_ints())}, True


RECONSTRUCTIONS = {
    # which: (ell, coset, denominator, numerator degree, palindrome sign, golden file)
    "p0": (2, GAMMA0, Q0, 113, 1, "p0.txt"),
    "p1": (2, GAMMA1, Q0, 113, -1, "p1.txt"),
    "ell1": (1, GAMMA0, ELL1_DENOMINATOR, 0, 1, None),
}


def reconstruct(which: str, order: int | None = None) -> dict:
    ell, coset, q, deg, sign, golden = RECONSTRUCTIONS[which]
    order = deg + 7 if order is None else order
    series_fn = gamma0_series if coset == GAMMA0 else gamma1_series
    p = reconstruct_numerator(series_fn(ell, order), q, deg)
    report = {
        "which": which, "ell": ell, "coset": coset, "order": order,
        "denominator_degrees": q.degrees, "numerator_degree": p.degree,
        "numerator": _strs(p.coeffs), "palindrome_sign": sign,
        "palindromic": is_palindromic(p, sign, deg), "value_at_one": str(eval_at_one(p)),
    }
    ok = report["palindromic"]
    if golden is not None:
        expected = IntPolynomial(load_golden(golden))
        mismatch = next((k for k in range(max(len(expected.coeffs), len(p.coeffs)))
                         if expected[k] != p[k]), None)
        report["golden_match"] = mismatch is None
        report["first_mismatch"] = mismatch
        ok = ok and mismatch is None
    if which == "ell1":
        p1 = reconstruct_numerator(gamma1_series(ell, order), q, deg)
        report["gamma1_numerator"] = _strs(p1.coeffs)
        ok = ok and p.coeffs == (1,) and p1.coeffs == (1,)
    return report, ok


def cmd_reconstruct(cfg: RunConfig) -> tuple[dict, bool]:
    return reconstruct(cfg.which, cfg.order)


def secondary_count(order: int = 120) -> int:
    p0 = reconstruct_numerator(gamma0_series(2, order), Q0, 113)
    p1 = reconstruct_numerator(gamma1_series(2, order), Q0, 113)
    return eval_at_one((p0 + p1).exact_div(2))


def cmd_labels(cfg: RunConfig) -> tuple[dict, bool]:
    table = su2_label_table(cfg.max_dim)
    return {"max_dim": cfg.max_dim, "labels": [
        {"dim": n, "pairs": [[str(a), str(b)] for a, b in pairs]} for n, pairs in table
    ]}, True


def _degree_functions(degree: int) -> list[tuple[str, Callable]]:
    if degree == 2:
        return [("I2", inv.inv2)]
    if degree == 3:
        return [("I3", inv.inv3)]
    if degree == 4:
        out = []
        for kind, j, jp in inv.quartic_candidates("all13"):
            fn = {"d": inv.inv4, "sym": inv.inv4_sym, "skew": inv.inv4_skew}[kind]
            name = {"d": f"I4({j},{jp})", "sym": f"I4[{j},{jp}]", "skew": f"I4{{{j},{jp}}}"}[kind]
            out.append((name, lambda s, fn=fn, j=j, jp=jp: fn(s, j, jp)))
        return out
    raise ValueError("degree must be 2, 3 or 4")


def cmd_invariants(cfg: RunConfig) -> tuple[dict, bool]:
    fns = _degree_functions(cfg.degree)
    rng = np.random.default_rng(cfg.seed)
    values = []
    for _ in range(cfg.samples):
        s = inv.random_order_tensor(2, rng)
        values.append([fn(s) for _, fn in fns])
    arr = np.array(values)
    rank = inv.numerical_rank(arr) if cfg.samples >= len(fns) else None
    tau_cols = [i for i, (name, _) in enumerate(fns) if not name.startswith("I4{")]
    tau_rank = inv.numerical_rank(arr[:, tau_cols]) if rank is not None else None
    g0 = gamma0_series(2, cfg.degree).as_ints()[cfg.degree]
    full = molien_series(FULL, 2, cfg.degree).as_ints()[cfg.degree]
    report = {"degree": cfg.degree, "seed": cfg.seed, "samples": cfg.samples,
              "invariants": [n for n, _ in fns], "values": values,
              "rank": rank, "tau_invariant_rank": tau_rank,
              "molien_gamma0": g0, "molien_full": full}
    ok = rank is None or (rank == g0 and tau_rank == full)
    return report, ok


def suite_series(cfg: RunConfig) -> list[dict]:
    order = min(20 if cfg.order is None else cfg.order, 20)
    checks = []
    for name, fn, ell, golden in (
        ("series.ell1.gamma0", gamma0_series, 1, "ell1_gamma0.txt"),
        ("series.ell1.gamma1", gamma1_series, 1, "ell1_gamma0.txt"),
        ("series.ell2.gamma0", gamma0_series, 2, "ell2_gamma0.txt"),
        ("series.ell2.gamma1", gamma1_series, 2, "ell2_gamma1.txt"),
        ("series.ell2.full", lambda e, o: molien_series(FULL, e, o), 2, "ell2_full.txt"),
    ):
        expected = load_golden(golden)
        n = min(order, len(expected) - 1)
        got = fn(ell, n).as_ints()
        bad = sum(a != b for a, b in zip(got, expected))
        checks.append(_check(name, n + 1, bad, 0.5))
    return checks


def suite_charpoly(cfg: RunConfig) -> list[dict]:
    tol = cfg.tolerances["charpoly"]
    checks = []
    for ell in (1, 2):
        for coset in (GAMMA0, GAMMA1):
            pairs = random_pairs(cfg.samples, [cfg.seed, ell, coset == GAMMA1])
            for t in (0.2, 0.5):
                err = char_poly_check(ell, coset, pairs, t)
                checks.append(_check(f"charpoly.ell{ell}.{coset}.t{t}", cfg.samples, err, tol))
    return checks


def suite_blocks(cfg: RunConfig) -> list[dict]:
    rng = np.random.default_rng([cfg.seed, 7])
    rots = [random_euler(rng) for _ in range(20)]
    return [_check(f"blocks.{j1}x{j2}", len(rots), cg_block_check(j1, j2, rots),
                   cfg.tolerances["blocks"]) for j1, j2 in ((2, 2), (1, 2))]


def _all_invariants() -> list[tuple[str, Callable]]:
    return _degree_functions(2) + _degree_functions(3) + _degree_functions(4)


def suite_invariance(cfg: RunConfig) -> list[dict]:
    rng = np.random.default_rng([cfg.seed, 11])
    fns = _all_invariants()
    worst = {name: 0.0 for name, _ in fns}
    worst_tau = {name: 0.0 for name, _ in fns}
    for _ in range(cfg.samples):
        s = inv.random_order_tensor(2, rng)
        moved = inv.act_gamma0(random_euler(rng), random_euler(rng), s)
        flipped = inv.act_tau(s)
        for name, fn in fns:
            v = fn(s)
            scale = max(1.0, abs(v))
            worst[name] = max(worst[name], abs(fn(moved) - v) / scale)
            parity = -1.0 if name.startswith("I4{") else 1.0
            worst_tau[name] = max(worst_tau[name], abs(fn(flipped) - parity * v) / scale)
    checks = [_check(f"invariance.gamma0.{n}", cfg.samples, worst[n],
                     cfg.tolerances["invariance"]) for n, _ in fns]
    checks += [_check(f"invariance.tau.{n}", cfg.samples, worst_tau[n],
                      cfg.tolerances["tau"]) for n, _ in fns]
    return checks


def suite_identities(cfg: RunConfig) -> list[dict]:
    table = (inv.QUARTIC_IDENTITIES if cfg.identity_table == "reference"
             else inv.CORRECTED_QUARTIC_IDENTITIES)
    rng = np.random.default_rng([cfg.seed, 13])
    worst = [0.0] * len(table)
    for _ in range(cfg.samples):
        s = inv.random_order_tensor(2, rng)
        for i, (res, big) in enumerate(inv.verify_identities(s, table)):
            worst[i] = max(worst[i], res / big if big else res)
    return [_check(f"identities.{cfg.identity_table}.{i + 1}", cfg.samples, w,
                   cfg.tolerances["identities"]) for i, w in enumerate(worst)]


def suite_rank(cfg: RunConfig) -> list[dict]:
    n = max(cfg.samples, 20)
    checks = []
    for subset, expected in (("all13", 5), ("tau_invariant", 4)):
        for k, seed in enumerate((cfg.seed, cfg.seed + 1)):
            try:
                r = inv.degree4_rank(n, [seed, 17], subset)
            except inv.RankUnstable:
                r = -1
            checks.append(_check(f"rank.{subset}.seed{k}", n, abs(r - expected), 0.5,
                                 rank=r, expected=expected))
    return checks


SUITE_FUNCTIONS = {
    "series": suite_series,
    "charpoly": suite_charpoly,
    "blocks": suite_blocks,
    "invariance": suite_invariance,
    "identities": suite_identities,
    "rank": suite_rank,
}


def cmd_verify(cfg: RunConfig) -> tuple[dict, bool]:
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    threads = max(1, int(os.environ.get(THREADS_ENV, "1")))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda n: SUITE_FUNCTIONS[n](cfg), names))
    checks = [c for group in results for c in group]
    ok = all(c["passed"] for c in checks)
    return {"suite": cfg.suite, "seed": cfg.seed, "samples": cfg.samples,
            "checks": checks, "passed": ok}, ok


def cmd_cgmatrix(cfg: RunConfig) -> tuple[dict, bool]:
    mat = cg_matrix_exact(cfg.j1, cfg.j2)
    return {"j1": cfg.j1, "j2": cfg.j2,
            "rows": [[j, m] for j, m in cg_rows(cfg.j1, cfg.j2)],
            "columns": [[a, b] for a, b in cg_columns(cfg.j1, cfg.j2)],
            "entries": [[c.to_json() for c in row] for row in mat]}, True


COMMANDS = {
    "molien": cmd_molien,
    "reconstruct": cmd_reconstruct,
    "labels": cmd_labels,
    "invariants": cmd_invariants,
    "verify": cmd_verify,
    "cgmatrix": cmd_cgmatrix,
}


# -- plumbing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of 'key = value' lines overriding defaults")
    common.add_argument("--format", choices=("json", "text"))
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                        help="override a verification tolerance")
    common.add_argument("--seed", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--order", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="wreathmolien", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    m = sub.add_parser("molien", parents=[common], help="Molien series coefficients")
    m.add_argument("--group", choices=(GAMMA0, GAMMA1, FULL))
    m.add_argument("--ell", type=int, choices=(1, 2))
    r = sub.add_parser("reconstruct", parents=[common], help="numerator over a known denominator")
    r.add_argument("--which", choices=tuple(RECONSTRUCTIONS))
    lab = sub.add_parser("labels", parents=[common], help="SU(2) x SU(2) labels by dimension")
    lab.add_argument("--max-dim", dest="max_dim", type=int)
    i = sub.add_parser("invariants", parents=[common], help="evaluate explicit invariants")
    i.add_argument("--degree", type=int, choices=(2, 3, 4))
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", choices=SUITES + ("all",))
    v.add_argument("--identity-table", dest="identity_table", choices=("reference", "corrected"))
    c = sub.add_parser("cgmatrix", parents=[common], help="dump the exact CG matrix")
    c.add_argument("--j1", type=int)
    c.add_argument("--j2", type=int)
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if args.config:
        cfg = _apply_overrides(cfg, read_config_file(args.config))
    flags = {k: str(v) for k, v in vars(args).items()
             if v is not None and k not in ("command", "config", "tol", "verbose")}
    for item in args.tol:
        name, _, value = item.partition("=")
        flags[f"tol_{name}"] = value
    cfg = _apply_overrides(cfg, flags)
    cfg.validate()
    return cfg


def render_text(report: dict) -> str:
    if "checks" in report:
        lines = [f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}  "
                 f"max_residual={c['max_residual']:.3e}  tol={c['tolerance']:.1e}"
                 for c in report["checks"]]
        lines.append("ALL PASS" if report["passed"] else "SOME CHECKS FAILED")
        return "\n".join(lines)
    if "coefficients" in report:
        return " ".join(report["coefficients"])
    return "\n".join(f"{k}: {v}" for k, v in report.items())


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"wreathmolien: error: {exc}", file=sys.stderr)
        return 2
    log.info("running %s", cfg.command)
    report, ok = COMMANDS[cfg.command](cfg)
    text = (json.dumps(report, indent=1, sort_keys=True) if cfg.format == "json"
            else render_text(report))
    if cfg.output:
        Path(cfg.output).write_text(text + "\n")
    else:
        print(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
