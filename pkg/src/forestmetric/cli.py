"""Command-line front end.

Subcommands ``compute``, ``perturb``, ``oracle``, ``limits`` and
``resistance`` read an edge-list file and print JSON, CSV or plain text.
Output depends only on (input, flags, seed).

Exit codes: 0 ok, 1 property violation, 2 usage or domain error, 3 I/O or
unreadable input.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import oracle
from .errors import DomainError, ParseError, PropertyViolation, SizeGuardError
from .forest_kernel import DEFAULT_TOL, accessibility_matrix, validate_doubly_stochastic
from .graph_model import WeightedMultigraph, alpha_scale, read_edge_list
from .metrics import cumulative_weight_matrix, diameter, profile_identities
from .perturbation import (
    EdgeDelta,
    ForestState,
    apply_edge_delta,
    endpoint_reciprocal_identity,
    increment_formulas_check,
    predict,
    profile_ratio,
    proportionality_check,
    reciprocity_metamorphic_check,
)
from .resistance_limits import (
    alpha_extension_identity_check,
    limit_large_alpha,
    limit_small_alpha,
    resistance_distance_matrix,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
MAX_DUMP_N = 6


class _Violation(Exception):
    """Raised after output has been written, to select exit code 1."""


@dataclass
class RunConfig:
    input: Path
    command: str
    alpha: Fraction | None = None
    alpha_grid: list = field(default_factory=list)
    fmt: str = "json"
    tol: float = DEFAULT_TOL
    seed: int | None = None
    samples: int | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.alpha is not None and self.alpha <= 0:
            raise DomainError("alpha must be positive")
        if any(a <= 0 for a in self.alpha_grid):
            raise DomainError("alpha must be positive")
        if not self.tol > 0:
            raise DomainError("tolerance must be positive")
        if self.samples is not None and self.samples < 1:
            raise DomainError("samples must be at least 1")

    @property
    def alpha_float(self) -> float:
        return float(self.alpha)


# ---------------------------------------------------------------------------
# Formatting
# ---------------------------------------------------------------------------


def num(x):
    """Float rounded to 12 significant digits; NaN becomes None and infinity the string ``"inf"``."""
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.12g}") + 0.0  # folds -0.0


def text_num(x) -> str:
    v = num(x)
    return "nan" if v is None else (v if isinstance(v, str) else f"{v:.12g}")


def sci(x: float) -> str:
    """Compact scientific notation: ``0.0e0``, ``1.2e-10``."""
    mant, exp = f"{x:.1e}".split("e")
    return f"{mant}e{int(exp)}"


def labelled(mat: np.ndarray, labels) -> dict:
    return {str(a): {str(b): num(mat[i, j]) for j, b in enumerate(labels)} for i, a in enumerate(labels)}


def text_matrix(name: str, mat: np.ndarray, labels) -> str:
    cells = [[text_num(x) for x in row] for row in mat]
    width = max([len(c) for row in cells for c in row] + [len(str(x)) for x in labels] + [1])
    head = " " * 4 + " ".join(str(x).rjust(width) for x in labels)
    rows = [f"{str(a):>3} " + " ".join(c.rjust(width) for c in row) for a, row in zip(labels, cells)]
    return "\n".join([f"{name}:", head, *rows])


def write_csv(path: Path, mat: np.ndarray, labels) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["vertex", *labels])
        for a, row in zip(labels, mat):
            out.writerow([a, *[text_num(x) for x in row]])


def emit(payload: dict, fmt: str, text: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def vertex_labels(g: WeightedMultigraph) -> list[int]:
    return list(range(1, g.n + 1))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_compute(cfg: RunConfig, g: WeightedMultigraph) -> None:
    state = ForestState.of(g, cfg.alpha_float)
    labels = vertex_labels(g)
    theta = cumulative_weight_matrix(state.rho)
    check = validate_doubly_stochastic(state.q, cfg.tol)
    mats = {"Q": state.q.q, "d": state.d.d, "rho": state.rho.d, "theta": theta}
    diam = {"forest": num(diameter(state.d)), "adjusted_forest": num(diameter(state.rho))}
    validation = {k: num(v) for k, v in check.measures.items()} | {"passed": bool(check.passed)}
    if check.warnings:
        validation["warnings"] = check.warnings

    if cfg.fmt == "csv":
        prefix = cfg.extra.get("out") or cfg.input.stem
        written = []
        for kind, mat in mats.items():
            path = Path(f"{prefix}_{kind}.csv")
            write_csv(path, mat, labels)
            written.append(str(path))
        print("\n".join(written))
        print(f"diameter forest={diam['forest']} adjusted_forest={diam['adjusted_forest']}")
    else:
        payload = {"alpha": num(cfg.alpha_float), "n": g.n}
        payload |= {kind: labelled(mat, labels) for kind, mat in mats.items()}
        payload |= {"diameter": diam, "validation": validation}
        text = "\n\n".join(
            [f"alpha = {text_num(cfg.alpha_float)}, n = {g.n}"]
            + [text_matrix(kind, mat, labels) for kind, mat in mats.items()]
            + [f"diameter: forest {diam['forest']}, adjusted_forest {diam['adjusted_forest']}",
               "doubly stochastic: " + ("pass" if check.passed else "FAIL " + check.detail)]
        )
        emit(payload, cfg.fmt, text)
    for w in check.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if not check.passed:
        print(f"doubly-stochastic defect: {check.detail}", file=sys.stderr)
        raise _Violation


def cmd_perturb(cfg: RunConfig, g: WeightedMultigraph) -> None:
    k, t = cfg.extra["edge"]
    delta = EdgeDelta(k, t, cfg.extra["eps"])
    alpha = cfg.alpha_float
    before = ForestState.of(g, alpha)
    after = ForestState.of(apply_edge_delta(g, delta), alpha)
    pred = predict(before, delta)
    defects = {
        "q": float(np.max(np.abs(pred.dq - (after.q.q - before.q.q)))),
        "d": float(np.max(np.abs(pred.dd - (after.d.d - before.d.d)))),
        "rho": float(np.max(np.abs(pred.drho - (after.rho.d - before.rho.d)))),
    }
    checks = {}
    checks["update_vs_recompute"] = {
        "passed": bool(max(defects.values()) <= max(cfg.tol, 1e-8)),
        **{k_: num(v) for k_, v in defects.items()},
    }
    rep = endpoint_reciprocal_identity(before.rho, after.rho, delta, cfg.tol)
    checks["endpoint_reciprocal"] = {"passed": bool(rep.passed), **{k_: num(v) for k_, v in rep.measures.items()}}
    try:
        chain = profile_ratio(before, after, k, t, delta.eps, cfg.tol)
        checks["profile_ratio"] = {
            "passed": True,
            "ratio": num(chain.ratio),
            "skipped_tau": chain.skipped_tau,
            "skipped_pi": chain.skipped_pi,
        }
    except PropertyViolation as exc:
        checks["profile_ratio"] = {"passed": False, "detail": str(exc)}
    for name, fn in (("proportionality", proportionality_check), ("increment_formulas", increment_formulas_check)):
        arg = (k, t) if name == "proportionality" else (delta,)
        rep = fn(before, after, *arg, tol=cfg.tol, strict=False)
        checks[name] = {"passed": bool(rep.passed), **{k_: num(v) for k_, v in rep.measures.items()}}
    ids = profile_identities(before.q, before.d, k, t)
    checks["profile_identities"] = {"passed": bool(max(ids.values()) <= cfg.tol), **{k_: num(v) for k_, v in ids.items()}}
    if cfg.extra.get("round_trip"):
        rep = reciprocity_metamorphic_check(g, delta, alpha, tol=1e-10, strict=False)
        checks["round_trip"] = {"passed": bool(rep.passed), **{k_: num(v) for k_, v in rep.measures.items()}}

    labels = vertex_labels(g)
    payload = {
        "alpha": num(alpha),
        "edge": [k, t],
        "eps": num(delta.eps),
        "dq_kt": num(pred.dq[k - 1, t - 1]),
        "ratio": num(pred.ratio),
        "max_abs_predicted_minus_recomputed": {k_: num(v) for k_, v in defects.items()},
        "predicted": {"dq": labelled(pred.dq, labels), "dd": labelled(pred.dd, labels), "drho": labelled(pred.drho, labels)},
        "checks": checks,
    }
    lines = [
        f"alpha = {text_num(alpha)}, edge ({k}, {t}), eps = {text_num(delta.eps)}",
        f"dq[{k},{t}] = {text_num(pred.dq[k - 1, t - 1])}",
        f"ratio d'_kt/d_kt = {text_num(pred.ratio)}",
        "max |predicted - recomputed|: " + ", ".join(f"{k_} {sci(v)}" for k_, v in defects.items()),
        text_matrix("predicted dq", pred.dq, labels),
        text_matrix("predicted drho", pred.drho, labels),
    ]
    lines += [f"{name}: {'pass' if c['passed'] else 'FAIL'}" for name, c in checks.items()]
    emit(payload, cfg.fmt, "\n".join(lines))
    if not all(c["passed"] for c in checks.values()):
        raise _Violation


def cmd_oracle(cfg: RunConfig, g: WeightedMultigraph) -> None:
    i, j = cfg.extra["pair"]
    for v in (i, j):
        if not 1 <= v <= g.n:
            raise DomainError(f"vertex {v} outside 1..{g.n}")
    exact_q = oracle.accessibility_matrix_exact(g, cfg.alpha)
    q_ij = exact_q[i - 1][j - 1]
    d_ij = (exact_q[i - 1][i - 1] + exact_q[j - 1][j - 1] - exact_q[i - 1][j - 1] - exact_q[j - 1][i - 1]) / 2
    kernel = accessibility_matrix(g, cfg.alpha_float).q
    exact_f = np.array(exact_q, dtype=float).reshape(g.n, g.n)
    raw = float(np.max(np.abs(exact_f - kernel))) if g.n else 0.0
    # compared at the 12 significant digits the kernel is printed with
    shown = np.vectorize(num, otypes=[float])(kernel) if g.n else kernel
    defect = float(np.max(np.abs(exact_f - shown))) if g.n else 0.0
    payload = {
        "alpha": str(cfg.alpha),
        "pair": [i, j],
        "q": str(q_ij),
        "d": str(d_ij),
        "kernel_defect": num(defect),
        "kernel_defect_raw": num(raw),
    }
    text = f"q{i}{j} = {q_ij}, d{i}{j} = {d_ij}, kernel defect {sci(defect)}"
    if cfg.samples is not None:
        mc = oracle.simulate_connection_model(g, cfg.alpha, i, j, cfg.samples, cfg.seed)
        payload["monte_carlo"] = {
            "estimate": num(mc.estimate),
            "stderr": num(mc.stderr),
            "samples": mc.samples,
            "seed": mc.seed,
        }
        text += f"\nMonte Carlo d{i}{j} ~ {text_num(mc.estimate)} +/- {text_num(mc.stderr)} ({mc.samples} samples, seed {mc.seed})"
    dump = cfg.extra.get("dump_forests")
    if dump:
        if g.n > MAX_DUMP_N:
            raise SizeGuardError(f"forest dump is limited to n <= {MAX_DUMP_N}")
        forests = oracle.enumerate_rooted_forests(alpha_scale(g, oracle.exact(cfg.alpha)))
        with open(dump, "w", encoding="utf-8") as fh:
            json.dump(
                [
                    {"edges": [[u, v, str(w)] for u, v, w in f.edges], "roots": list(f.roots), "weight": str(f.weight)}
                    for f in forests
                ],
                fh,
                indent=1,
            )
        payload["forests_dumped"] = len(forests)
    emit(payload, cfg.fmt, text)
    if raw > cfg.tol:
        print(f"kernel defect {sci(raw)} exceeds tolerance {cfg.tol:g}", file=sys.stderr)
        raise _Violation


def cmd_limits(cfg: RunConfig, g: WeightedMultigraph) -> None:
    payload: dict = {}
    lines = []
    ok = True
    grid = cfg.alpha_grid
    if grid:
        decreasing = len(grid) > 1 and all(b < a for a, b in zip(grid, grid[1:]))
        report = limit_small_alpha(g, grid) if decreasing else limit_large_alpha(g, grid)
        payload = report.to_dict()
        for rec in payload["records"]:
            for key, val in rec.items():
                rec[key] = num(val) if val is not None else None
        lines.append(f"{report.direction}-alpha convergence (monotone: {report.monotone})")
        for rec in payload["records"]:
            lines.append(
                "  " + ", ".join(f"{k}={'null' if v is None else text_num(v)}" for k, v in rec.items())
            )
    if cfg.extra.get("check_extension"):
        if cfg.alpha is None:
            raise DomainError("--check-extension needs --alpha")
        tol = cfg.extra.get("tol_given") or 1e-8
        rep = alpha_extension_identity_check(g, cfg.alpha_float, tol=tol, strict=False)
        payload["extension"] = {"passed": bool(rep.passed), "alpha": num(cfg.alpha_float), "max_defect": num(rep.measures["max_defect"]), "tol": tol}
        verdict = "identity holds" if rep.passed else "identity FAILS"
        lines.append(f"alpha-extension {verdict} at alpha={text_num(cfg.alpha_float)}, max defect {sci(rep.measures['max_defect'])} <= {tol:g}"
                     if rep.passed else f"alpha-extension {verdict}: max defect {sci(rep.measures['max_defect'])} > {tol:g}")
        ok = rep.passed
    if not payload:
        raise DomainError("limits needs --alpha-grid and/or --check-extension")
    emit(payload, cfg.fmt, "\n".join(lines))
    if not ok:
        raise _Violation


def cmd_resistance(cfg: RunConfig, g: WeightedMultigraph) -> None:
    res = resistance_distance_matrix(g)
    labels = vertex_labels(g)
    wire = res.to_wire(num)
    if cfg.fmt == "csv":
        path = Path(f"{cfg.extra.get('out') or cfg.input.stem}_resistance.csv")
        write_csv(path, res.as_array(), labels)
        print(path)
        return
    payload = {"kind": "resistance", "n": g.n, "r": {str(a): {str(b): x for b, x in zip(labels, row)} for a, row in zip(labels, wire)}}
    emit(payload, cfg.fmt, text_matrix("resistance", res.as_array(), labels))


COMMANDS = {
    "compute": cmd_compute,
    "perturb": cmd_perturb,
    "oracle": cmd_oracle,
    "limits": cmd_limits,
    "resistance": cmd_resistance,
}


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _grid(text: str) -> list:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad alpha grid {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forestmetric", description="Forest metrics of weighted multigraphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, fmts=("json", "csv", "text")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("input", type=Path, help="edge-list file")
        p.add_argument("--format", choices=fmts, default="json")
        p.add_argument("--tol", type=float, default=None)
        return p

    p = add("compute", "Q, d, rho, theta and diameters")
    p.add_argument("--alpha", type=Fraction, required=True)
    p.add_argument("--out", help="CSV file prefix (default: input file stem)")

    p = add("perturb", "closed-form single-edge increments vs recomputation", ("json", "text"))
    p.add_argument("--alpha", type=Fraction, required=True)
    p.add_argument("--edge", type=int, nargs=2, metavar=("K", "T"), required=True)
    p.add_argument("--eps", type=Fraction, required=True)
    p.add_argument("--round-trip", action="store_true", help="also apply the reverse delta and report the defect")

    p = add("oracle", "exact rooted-forest accessibilities and distances", ("json", "text"))
    p.add_argument("--alpha", type=Fraction, required=True)
    p.add_argument("--pair", type=int, nargs=2, metavar=("I", "J"), required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--dump-forests", metavar="PATH", help=f"write every rooted forest as JSON (n <= {MAX_DUMP_N})")

    p = add("limits", "small/large alpha convergence and the alpha-extension identity", ("json", "text"))
    p.add_argument("--alpha-grid", type=_grid, default=[])
    p.add_argument("--alpha", type=Fraction)
    p.add_argument("--check-extension", action="store_true")

    p = add("resistance", "resistance distance matrix")
    p.add_argument("--out", help="CSV file prefix (default: input file stem)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    extra = {}
    for key in ("out", "edge", "eps", "round_trip", "pair", "dump_forests", "check_extension"):
        if hasattr(args, key):
            extra[key] = getattr(args, key)
    if getattr(args, "eps", None) == 0:
        raise DomainError("eps must be nonzero")
    if getattr(args, "samples", None) is not None and getattr(args, "seed", None) is None:
        raise DomainError("--samples requires --seed")
    extra["tol_given"] = args.tol
    return RunConfig(
        input=args.input,
        command=args.command,
        alpha=getattr(args, "alpha", None),
        alpha_grid=getattr(args, "alpha_grid", []),
        fmt=args.format,
        tol=DEFAULT_TOL if args.tol is None else args.tol,
        seed=getattr(args, "seed", None),
        samples=getattr(args, "samples", None),
        extra=extra,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        g = read_edge_list(cfg.input)
    except OSError as exc:
        print(f"error: cannot read {cfg.input}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except ParseError as exc:
        print(f"error: {cfg.input}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        COMMANDS[cfg.command](cfg, g)
    except _Violation:
        return EXIT_VIOLATION
    except PropertyViolation as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
