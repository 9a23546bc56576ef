"""Command-line front end.

Every run writes a single report document (JSON, or CSV with a
``#``-prefixed header block) and exits 0 when all verdicts match
expectations, 1 when a battery records a violation or an unexpected
verdict, and 2 on usage errors.  Reruns with the same arguments and seed
are byte-identical: reports carry no timestamps and all randomness flows
from the seed echoed in the header.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__, classical, fourier, freegroup, groups, semigroup, verify
from .errors import QGHarmError


class _F(float):
    """Float that prints with 17 significant digits (diffable CSV output)."""

    def __str__(self):
        return f"{float(self):.17g}"

    __repr__ = __str__


def _fmt(value):
    if isinstance(value, bool) or value is None:
        return "" if value is None else value
    if isinstance(value, float):
        return _F(value)
    return value


THRESHOLDS = {
    "scan_slope_threshold": semigroup.SLOPE_THRESHOLD,
    "scan_ratio_threshold": semigroup.RATIO_THRESHOLD,
    "trend_slope_max": verify.TREND_SLOPE_MAX,
    "hy_slack": verify.HY_SLACK,
    "ball_scan_divergent_slope": verify.BALL_SCAN_DIVERGENT_SLOPE,
}


def _echo_args(args) -> list:
    # The output destination does not affect the computation; leaving it out
    # keeps reports byte-comparable across locations.
    out = []
    skip = False
    for arg in args:
        if skip:
            skip = False
            continue
        if arg == "--output":
            skip = True
            continue
        if arg.startswith("--output="):
            continue
        out.append(arg)
    return out


def _header(args, seed=None) -> dict:
    return {
        "command": "qgharm " + " ".join(_echo_args(args)),
        "seed": seed,
        "version": __version__,
        "thresholds": THRESHOLDS,
    }


def _write_json(stream, header, body):
    json.dump({"header": header, "report": body}, stream, sort_keys=True)
    stream.write("\n")


def _write_csv(stream, header, columns, rows):
    for key, value in header.items():
        if key == "thresholds":
            for tkey, tvalue in value.items():
                stream.write(f"# threshold {tkey}: {_F(tvalue)}\n")
        else:
            stream.write(f"# {key}: {'none' if value is None else value}\n")
    writer = csv.writer(stream, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])


def _emit(args_ns, argv, body_json, columns, rows, seed=None) -> None:
    header = _header(argv, seed=seed)
    out = io.StringIO()
    if args_ns.format == "json":
        _write_json(out, header, body_json)
    else:
        _write_csv(out, header, columns, rows)
    text = out.getvalue()
    if args_ns.output:
        with open(args_ns.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_label(group, text: str):
    if group.has_degree_labels:
        return int(text)
    if group.kind == "fdual":
        return groups.word_from_str(text)
    return tuple(int(x) for x in text.split(","))


def _label_str(group, label) -> str:
    if group.kind == "fdual":
        return groups.word_to_str(label)
    if group.kind == "zd":
        return ",".join(str(x) for x in label)
    return str(label)


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_dims(ns, argv) -> int:
    group = groups.parse_group(ns.group)
    rows = []
    b = 0
    for k in range(ns.kmax + 1):
        n = groups.dimension(group, k) if group.has_degree_labels else 1
        s = groups.sphere_size(group, k)
        b += s
        rows.append((k, n, s, b))
    body = {"group": str(group), "rows": [list(r) for r in rows]}
    _emit(ns, argv, body, ("k", "n_k", "s_k", "b_k"), rows)
    return 0


def _cmd_growth(ns, argv) -> int:
    group = groups.parse_group(ns.group)
    gamma_hat = groups.growth_order_estimate(group, ns.kmax)
    body = {"group": str(group), "kmax": ns.kmax, "gamma_hat": gamma_hat}
    _emit(ns, argv, body, ("group", "kmax", "gamma_hat"), [(str(group), ns.kmax, gamma_hat)])
    return 0


def _sort_key(label):
    if isinstance(label, tuple):
        return (len(label), label)
    return (0, (label,))


def _cmd_fusion(ns, argv) -> int:
    group = groups.parse_group(ns.group)
    a = _parse_label(group, ns.a)
    b = _parse_label(group, ns.b)
    decomp = groups.fusion_decompose(group, a, b)
    rows = [
        (_label_str(group, c), mult, groups.dimension(group, c))
        for c, mult in sorted(decomp.items(), key=lambda kv: _sort_key(kv[0]))
    ]
    body = {
        "group": str(group),
        "a": _label_str(group, a),
        "b": _label_str(group, b),
        "terms": [list(r) for r in rows],
    }
    _emit(ns, argv, body, ("label", "multiplicity", "dim"), rows)
    return 0


def _cmd_norm(ns, argv) -> int:
    with open(ns.coeffs, encoding="utf-8") as fh:
        doc = json.load(fh)
    is_central = doc.get("coeffs") and "k" in doc["coeffs"][0]
    if is_central:
        element = fourier.CentralElement.from_json_dict(doc)
    else:
        element = fourier.FourierCoefficients.from_json_dict(doc)
    p = math.inf if ns.p in ("inf", "oo") else float(ns.p)
    if ns.side == "dual":
        value = fourier.dual_lp_norm(element, p)
    elif ns.side == "plancherel":
        value = fourier.plancherel_l2_norm(element)
    elif ns.side == "classical":
        if not is_central:
            element = fourier.CentralElement.from_fourier(element)
        value = classical.central_lp_norm(element, p)
    else:  # linf
        if not is_central:
            element = fourier.CentralElement.from_fourier(element)
        value = classical.central_linf_norm(element)
    body = {"group": doc["group"], "side": ns.side, "p": None if p == math.inf else p, "value": value}
    _emit(ns, argv, body, ("side", "p", "value"), [(ns.side, "inf" if p == math.inf else p, value)])
    return 0


def _cmd_fgnorm(ns, argv) -> int:
    with open(ns.terms, encoding="utf-8") as fh:
        f = freegroup.GroupElementCoeffs.from_json_dict(json.load(fh))
    lower = freegroup.truncated_operator_norm(f, ns.m, tol=ns.tol)
    upper = freegroup.haagerup_upper_bound(f)
    body = {
        "N": f.n_generators,
        "m": ns.m,
        "truncated_norm": lower,
        "haagerup_bound": upper,
        "ratio": lower / upper if upper else math.nan,
    }
    _emit(
        ns,
        argv,
        body,
        ("m", "truncated_norm", "haagerup_bound", "ratio"),
        [(ns.m, lower, upper, lower / upper if upper else math.nan)],
    )
    return 0


def _scan_rows(report):
    return [
        (t, v, "" if tail is None else tail)
        for t, v, tail in zip(report.grid, report.values, report.tails)
    ]


def _cmd_scan_ultra(ns, argv) -> int:
    group = groups.parse_group(ns.group)
    grid = semigroup.log_grid(ns.tmin, ns.tmax, ns.points)
    decision = verify.ultracontractivity_decision(group, ns.s, grid)
    body = decision.to_json_dict()
    _emit(ns, argv, body, ("t", "value", "certified_tail"), _scan_rows(decision.report))
    if ns.expect == "none":
        return 0
    expected = decision.expected if ns.expect == "auto" else ns.expect
    return 0 if decision.verdict == expected else 1


def _cmd_scan_sharpness(ns, argv) -> int:
    group = groups.parse_group(ns.group)
    m_values = range(ns.mmin, ns.mmax + 1)
    report = verify.ball_sharpness_scan(group, ns.s, m_values, q_mmax=ns.q_mmax)
    body = report.to_json_dict()
    _emit(ns, argv, body, ("m", "value", "certified_tail"), _scan_rows(report))
    if ns.expect == "none":
        return 0
    if ns.expect == "auto":
        threshold = 0.75
        if abs(ns.s - threshold) < 0.05:
            return 0
        expected = "divergent" if ns.s < threshold else "bounded"
    else:
        expected = ns.expect
    return 0 if report.verdict == expected else 1


def _cmd_rd_degree(ns, argv) -> int:
    group = groups.parse_group(ns.group)
    s_grid = [float(x) for x in ns.s.split(",")]
    verdicts = verify.rd_degree_scan(group, s_grid, kmax=ns.kmax)
    threshold = verify.rd_threshold(group)
    rows = []
    code = 0
    for v in verdicts:
        expected = "convergent" if v.s > threshold else "divergent"
        rows.append((v.s, v.route, v.verdict, v.value, "" if v.tail_bound is None else v.tail_bound))
        if v.verdict != expected:
            code = 1
    body = {
        "group": str(group),
        "threshold": threshold,
        "verdicts": [v.to_json_dict() for v in verdicts],
    }
    _emit(ns, argv, body, ("s", "route", "verdict", "value", "tail_bound"), rows)
    return code


def _cmd_verify(ns, argv) -> int:
    group = groups.parse_group(ns.group) if ns.group else None
    if ns.battery == "hy":
        report = verify.hausdorff_young_battery(
            group, ns.p, trials=ns.trials, seed=ns.seed, degree=ns.degree
        )
        code = 0 if report.verdict == "holds" else 1
    elif ns.battery == "shy":
        report = verify.sharpened_hy_trend(group, ns.p, beta=ns.beta, m_max=ns.mmax)
        code = 0 if report.verdict == "bounded" else 1
    elif ns.battery == "sobolev":
        report = verify.sobolev_trend(group, ns.p, s=ns.s, m_max=ns.mmax)
        code = 0 if report.verdict == "bounded" else 1
    elif ns.battery == "hl":
        report = verify.hardy_littlewood_trend(group, ns.p, beta=ns.beta, m_max=ns.mmax)
        code = 0 if report.verdict == "bounded" else 1
    elif ns.battery == "exponents":
        kinds = ("hl_free_threshold", "sphere_mixed_threshold", "sobolev_interp_exponent", "two_step_interp") if ns.kind == "all" else (ns.kind,)
        checks = [verify.exponent_algebra_check(kind) for kind in kinds]
        body = {"checks": [c.to_json_dict() for c in checks]}
        rows = [(c.kind, c.ok, c.max_residual, len(c.flags)) for c in checks]
        _emit(ns, argv, body, ("kind", "ok", "max_residual", "flags"), rows, seed=ns.seed)
        return 0 if all(c.ok for c in checks) else 1
    else:  # ultra
        decision = verify.ultracontractivity_decision(group, ns.s)
        body = decision.to_json_dict()
        _emit(ns, argv, body, ("t", "value", "certified_tail"), _scan_rows(decision.report), seed=ns.seed)
        return 0 if decision.verdict == decision.expected else 1
    _emit(
        ns,
        argv,
        report.to_json_dict(),
        ("instance", "tag", "lhs", "rhs", "ratio"),
        list(report.csv_rows()),
        seed=ns.seed,
    )
    return code


# ---------------------------------------------------------------------------
# Parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgharm",
        description="Harmonic-analysis computations and verification batteries "
        "on compact matrix quantum groups of Kac type.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", default=None, help="output path (default stdout)")

    p = sub.add_parser("dims", help="dimension/sphere/ball table")
    p.add_argument("--group", required=True)
    p.add_argument("--kmax", type=int, default=10)
    common(p)
    p.set_defaults(func=_cmd_dims)

    p = sub.add_parser("growth", help="fitted polynomial growth order")
    p.add_argument("--group", required=True)
    p.add_argument("--kmax", type=int, default=200)
    common(p)
    p.set_defaults(func=_cmd_growth)

    p = sub.add_parser("fusion", help="tensor product decomposition")
    p.add_argument("--group", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    common(p)
    p.set_defaults(func=_cmd_fusion)

    p = sub.add_parser("norm", help="norms of a coefficient file")
    p.add_argument("--coeffs", required=True, help="JSON coefficient document")
    p.add_argument("--p", default="2")
    p.add_argument("--side", choices=("dual", "classical", "plancherel", "linf"), default="dual")
    common(p)
    p.set_defaults(func=_cmd_norm)

    p = sub.add_parser("fgnorm", help="free group operator norm bracket")
    p.add_argument("--terms", required=True, help="JSON group-element document")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    common(p)
    p.set_defaults(func=_cmd_fgnorm)

    p = sub.add_parser("scan-ultra", help="ultracontractivity sup scan")
    p.add_argument("--group", required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--tmin", type=float, default=1e-3)
    p.add_argument("--tmax", type=float, default=10.0)
    p.add_argument("--points", type=int, default=60)
    p.add_argument("--expect", choices=("auto", "bounded", "divergent", "none"), default="auto")
    common(p)
    p.set_defaults(func=_cmd_scan_ultra)

    p = sub.add_parser("scan-sharpness", help="ball-average sharpness scan")
    p.add_argument("--group", required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--mmin", type=int, default=20)
    p.add_argument("--mmax", type=int, default=200)
    p.add_argument("--q-mmax", dest="q_mmax", type=int, default=40)
    p.add_argument("--expect", choices=("auto", "bounded", "divergent", "none"), default="auto")
    common(p)
    p.set_defaults(func=_cmd_scan_sharpness)

    p = sub.add_parser("rd-degree", help="rapid decay degree classification")
    p.add_argument("--group", required=True)
    p.add_argument("--s", required=True, help="comma-separated s values")
    p.add_argument("--kmax", type=int, default=100_000)
    common(p)
    p.set_defaults(func=_cmd_rd_degree)

    p = sub.add_parser("verify", help="inequality verification batteries")
    p.add_argument("battery", choices=("hy", "shy", "sobolev", "hl", "exponents", "ultra"))
    p.add_argument("--group", default=None)
    p.add_argument("--p", type=float, default=4.0 / 3.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--s", type=float, default=3.0)
    p.add_argument("--mmax", type=int, default=60)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--degree", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", default="all", choices=("all", "hl_free_threshold", "sphere_mixed_threshold", "sobolev_interp_exponent", "two_step_interp"))
    common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def run(argv) -> int:
    """Parse and execute; returns the process exit code."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return ns.func(ns, list(argv))
    except (QGHarmError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"qgharm: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
