"""Command-line experiment runner.

Every subcommand builds a ``Table`` and emits it as CSV (RFC 4180) or, with
``--json``, as UTF-8 JSON with sorted keys.  Exit status: 0 ok, 1 a checked
identity failed, 2 usage, schema or guardrail error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, builtins
from .arith import mobius_inversion_table, primes_up_to
from .characters import (
    character_group,
    error_term_characters,
    error_term_smooth,
    exp_p_smooth_coefficient,
    gauss_sum,
)
from .correlations import correlate, error_term, hl_experiment, reef_rhs, singular_series
from .counterexample import (
    CounterexampleSpec,
    f0_prime_table,
    f0_table,
    mean_value_partial,
    multiplicative_order,
    reef_failure_demo,
    s_case,
    s_prime_power,
)
from .decomposition import (
    GuardrailError,
    decomposition_residual_7,
    decomposition_residual_8,
    fai_split,
    finwin_record,
    irregular_series,
    reef_check,
    wintner_ksum,
)
from .ramanujan import ramanujan_sum, ramanujan_sum_holder, ramanujan_sum_real
from .smooth import constant_coefficients, smooth_ramanujan_sum
from .specs import (
    MANIFEST_SCHEMA,
    SchemaError,
    correlation_spec_from_dict,
    load_correlation_spec,
    load_manifest,
    parse_number,
    random_spec_dict,
    validate,
)
from .transforms import (
    DEFAULT_LADDER,
    CoefficientTable,
    PartialLimit,
    carmichael_partial,
    hypothesis_report,
    p_smooth_wintner,
    set_threads,
    theorem1C1_coefficient,
    wintner_partial,
)


class CheckFailed(Exception):
    """An identity checked by a subcommand did not hold."""


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    text: str | None = None


def fmt(v):
    """JSON-safe scalar: ints and floats stay numeric, Fractions and complex become strings."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, (complex, np.complexfloating)):
        v = complex(v)
        return float(v.real) if v.imag == 0 else f"{v.real!r}{v.imag:+.17g}j"
    if isinstance(v, (list, tuple)):
        return [fmt(x) for x in v]
    if isinstance(v, dict):
        return {str(k): fmt(x) for k, x in v.items()}
    return v


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow(["" if x is None else fmt(x) for x in row])
    return buf.getvalue()


def to_json(table: Table) -> str:
    doc = {
        "columns": table.columns,
        "rows": [dict(zip(table.columns, (fmt(x) for x in row))) for row in table.rows],
        "meta": fmt(table.meta),
    }
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def _ints(s: str) -> list[int]:
    """Comma list with optional ranges: 1,2,5-8."""
    out = []
    for part in s.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part[0] + part[1:].split("-", 1)[0], part[1:].split("-", 1)[1]
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _ladder(args, X: int | None = None) -> list[int] | None:
    if args.cutoffs:
        return _ints(args.cutoffs)
    if X is None:
        return list(DEFAULT_LADDER)
    return None


def _pl_rows(prefix: tuple, pl: PartialLimit) -> list[tuple]:
    if pl.provenance == "exact":
        return [prefix + ("exact", pl.value, 0)]
    rows, prev = [], None
    for c, v in zip(pl.cutoffs, pl.partials):
        rows.append(prefix + (c, v, None if prev is None else abs(v - prev)))
        prev = v
    return rows


def _check(ok: bool, what: str) -> None:
    if not ok:
        raise CheckFailed(what)


# ---------------------------------------------------------------------------
# subcommands


def cmd_csum(args) -> Table:
    q, a = args.q, args.a
    k = ramanujan_sum(q, a)
    h = ramanujan_sum_holder(q, a)
    c = ramanujan_sum_real(q, a)
    _check(k == h and abs(k - c) <= 1e-9 * max(1, q), f"c_{q}({a}) routes disagree: {k}, {h}, {c}")
    return Table(["q", "a", "value"], [(q, a, k)], text=f"c_{q}({a}) = {k}")


def _X_and_cuts(args):
    cuts = _ladder(args, args.X)
    return (max(cuts) if cuts else args.X), cuts


def cmd_wintner(args) -> Table:
    b = builtins.get(args.function)
    X, cuts = _X_and_cuts(args)
    rows = []
    for q in _ints(args.q):
        if args.P:
            pl = p_smooth_wintner(b.Fp, q, args.P, X)
        else:
            pl = wintner_partial(b.Fp, q, X, cuts)
        rows += _pl_rows((q,), pl)
    return Table(["q", "cutoff", "value", "increment"], rows, {"function": args.function, "P": args.P})


def cmd_carmichael(args) -> Table:
    b = builtins.get(args.function)
    X, cuts = _X_and_cuts(args)
    rows = []
    for q in _ints(args.q):
        if args.P:
            pl = theorem1C1_coefficient(b.F, q, args.P, X)
        else:
            pl = carmichael_partial(b.F, q, X, cuts)
        rows += _pl_rows((q,), pl)
    return Table(["q", "cutoff", "value", "increment"], rows, {"function": args.function, "P": args.P})


def cmd_hypotheses(args) -> Table:
    b = builtins.get(args.function)
    X, cuts = _X_and_cuts(args)
    ladder = _ints(args.P) if args.P else [2, 3, 5, 7, 11, 13]
    rep = hypothesis_report(b.Fp, X, ladder, b.win, cuts)
    return Table(["hypothesis", "P", "cutoff", "value", "increment"], rep.rows(), {"function": args.function})


def _coefficients(spec: str):
    kind, _, rest = spec.partition(":")
    if kind == "const":
        return constant_coefficients(parse_number(rest) if "/" in rest or rest.lstrip("-").isdigit() else float(rest))
    if kind == "builtin":
        b = builtins.get(rest)
        if b.win is None:
            raise ValueError(f"builtin {rest} has no Wintner table")
        return b.win
    if kind == "table":
        path = Path(rest)
        if path.suffix == ".json":
            raw = json.loads(path.read_text(encoding="utf-8"))
            entries = {int(k): parse_number(v) for k, v in raw.items()}
        else:
            with open(path, newline="", encoding="utf-8") as fh:
                entries = {int(r["q"]): parse_number(r["value"]) for r in csv.DictReader(fh)}
        return CoefficientTable("wintner", entries, provenance="file", finite_support=True)
    raise ValueError(f"unknown coefficient source {spec!r}")


def cmd_smoothsum(args) -> Table:
    G = _coefficients(args.coeff)
    rows = [(a, P, smooth_ramanujan_sum(G, a, P)) for P in _ints(args.P) for a in _ints(args.a)]
    return Table(["a", "P", "value"], rows, {"coeff": args.coeff})


def cmd_irr(args) -> Table:
    b = builtins.get(args.function)
    X, cuts = _X_and_cuts(args)
    rows = []
    for d in _ints(args.d):
        pl = irregular_series(b.Fp, d, args.P, X, cuts)
        closed = None
        if b.win is not None:
            closed = wintner_ksum(b.win, d, args.P) - b.Fp(d)
        if pl.provenance == "exact":
            rows.append((d, args.P, "exact", pl.value, None if closed is None else pl.value - closed))
        else:
            for c, v in zip(pl.cutoffs, pl.partials):
                rows.append((d, args.P, c, v, None if closed is None else v - closed))
    return Table(["d", "P", "cutoff", "value", "residual"], rows, {"function": args.function})


def _tol_ok(r, tol: float) -> bool:
    return abs(r) <= tol


def cmd_decomp(args) -> Table:
    b = builtins.get(args.function)
    if b.win is None:
        raise ValueError(f"builtin {args.function} has no Wintner table")
    X = args.X
    rows, worst = [], 0.0
    if args.form == "transform":
        cols = ["d", "P", "cutoff", "value", "residual"]
        for d in _ints(args.n):
            r = decomposition_residual_7(b.Fp, b.win, d, args.P, X)
            rows.append((d, args.P, X, b.Fp(d), r))
            worst = max(worst, abs(r))
    else:
        cols = ["a", "P", "cutoff", "value", "residual"]
        for a in _ints(args.n):
            r = decomposition_residual_8(b.F, b.Fp, b.win, a, args.P, X)
            rows.append((a, args.P, X, b.F(a), r))
            worst = max(worst, abs(r))
    t = Table(cols, rows, {"function": args.function, "form": args.form, "max_residual": worst})
    _check(worst <= args.tol, f"decomposition residual {worst} exceeds {args.tol}")
    return t


def cmd_fai(args) -> Table:
    b = builtins.get(args.function)
    if b.win is None:
        raise ValueError(f"builtin {args.function} has no Wintner table")
    rec = finwin_record(b.win, args.scan)
    split = fai_split(b.Fp, rec, args.X)
    rows, worst = [], 0
    for a in range(1, args.a_max + 1):
        Fa = b.F(a)
        A = split.A(a)
        r_closed = Fa - (A - split.I_closed(a))
        r_trunc = float(Fa) - (float(A) - float(split.I(a)))
        rows.append((a, rec.P_F, args.X, Fa, r_trunc, r_closed))
        worst = max(worst, abs(r_closed))
    t = Table(["a", "P", "cutoff", "value", "residual", "residual_closed"], rows, {"Q_F": rec.Q_F, "P_F": rec.P_F})
    _check(worst <= args.tol, f"analytic/irregular split residual {worst} exceeds {args.tol}")
    return t


def cmd_reef(args) -> Table:
    if args.spec:
        spec = load_correlation_spec(args.spec)
        rows = []
        for a in range(1, args.a_max + 1):
            C = correlate(spec, a)
            R = reef_rhs(spec, a)
            rows.append((a, spec.N, spec.Q, C, R, C - R))
        worst = max((abs(r[-1]) for r in rows), default=0)
        return Table(["a", "N", "Q", "value", "reef", "residual"], rows, {"spec": args.spec, "max_residual": worst})
    b = builtins.get(args.function)
    if b.win is None:
        raise ValueError(f"builtin {args.function} has no Wintner table")
    rep = reef_check(b.F, b.win, args.Q, args.a_max, b.Fp)
    rows = [(a, None, args.Q, b.F(a), b.F(a) - r, r) for a, r in rep.residuals.items()]
    return Table(["a", "N", "Q", "value", "reef", "residual"], rows,
                 {"function": args.function, "max_residual": rep.max_residual, "ell_F": rep.ell_F, "d_F": rep.d_F})


def cmd_correlate(args) -> Table:
    spec = load_correlation_spec(args.spec)
    rows = [(a, spec.N, spec.Q, correlate(spec, a)) for a in range(1, args.a_max + 1)]
    return Table(["a", "N", "Q", "value"], rows, {"spec": args.spec})


def cmd_error(args) -> Table:
    spec = load_correlation_spec(args.spec)
    rows = []
    for a in range(1, args.a_max + 1):
        C = correlate(spec, a)
        R = reef_rhs(spec, a)
        rows.append((a, C, R, C - R))
    return Table(["a", "correlation", "reef", "error"], rows, {"spec": args.spec})


def cmd_singular(args) -> Table:
    rows = []
    for tk in _ints(args.two_k):
        p = singular_series(tk, "product", args.product_bound)
        s = singular_series(tk, "series", args.series_bound)
        rows.append((tk, p, s, abs(p - s)))
    return Table(["two_k", "product", "series", "difference"], rows,
                 {"product_bound": args.product_bound, "series_bound": args.series_bound})


def cmd_hl(args) -> Table:
    res = hl_experiment(args.N, _ints(args.shifts))
    cols = ["two_k", "N", "C_full", "C_truncated", "main_term", "ratio", "gap", "gap_scale"]
    rows = [(r.two_k, r.N, r.C_full, r.C_truncated, r.main_term, r.ratio, r.gap, r.gap_scale) for r in res]
    return Table(cols, rows)


def cmd_chars(args) -> Table:
    G = character_group(args.q)
    rows = []
    for chi in G:
        for n in range(args.q):
            v = chi(n)
            rows.append((chi.index, " ".join(map(str, chi.exponents)), n, round(v.real, 15) + 0.0, round(v.imag, 15) + 0.0))
    return Table(["chi", "exponents", "n", "re", "im"], rows, {"q": args.q, "count": len(G)})


def cmd_gauss(args) -> Table:
    G = character_group(args.q)
    rows = []
    for chi in G:
        t = gauss_sum(chi)
        rows.append((chi.index, " ".join(map(str, chi.exponents)), t.real, t.imag, abs(t)))
    return Table(["chi", "exponents", "re", "im", "abs"], rows, {"q": args.q})


def cmd_theorem5(args) -> Table:
    rows, worst = [], 0.0
    for l in _ints(args.l):
        a = exp_p_smooth_coefficient(args.q, args.j, l, args.P, "lemma8")
        b = exp_p_smooth_coefficient(args.q, args.j, l, args.P, "theorem5")
        rows.append((args.q, args.j, l, args.P, a, b, abs(a - b)))
        worst = max(worst, abs(a - b))
    t = Table(["q", "j", "l", "P", "lemma8", "theorem5", "difference"], rows, {"max_difference": worst})
    _check(worst <= args.tol, f"explicit-formula routes differ by {worst}")
    return t


def cmd_error_chars(args) -> Table:
    if args.spec:
        specs = [(args.spec, load_correlation_spec(args.spec))]
    else:
        rng = np.random.default_rng(args.seed)
        specs = [(f"random:{k}", correlation_spec_from_dict(random_spec_dict(rng))) for k in range(args.random)]
    rows, worst = [], 0.0
    for name, spec in specs:
        for a in range(1, args.a_max + 1):
            E = error_term(spec, a)
            Ec = error_term_characters(spec, a)
            d = abs(complex(E) - Ec)
            Es = None
            if args.P:
                Es = error_term_smooth(spec, a, args.P)
                d = max(d, abs(complex(E) - Es))
            rows.append((name, a, E, Ec, Es, d))
            worst = max(worst, d)
    t = Table(["spec", "a", "definition", "characters", "smooth", "difference"], rows, {"max_difference": worst})
    _check(worst <= args.tol, f"error-term routes differ by {worst}")
    return t


def cmd_counterexample(args) -> Table:
    spec = CounterexampleSpec(args.p0)
    p0 = args.p0
    dmax = args.dmax
    inv = mobius_inversion_table(f0_table(spec, dmax).astype(object))
    closed = f0_prime_table(spec, dmax)
    mismatches = [d for d in range(1, dmax + 1) if inv[d] != closed[d]]
    _check(not mismatches, f"closed form of F_0' fails at {mismatches[:5]}")
    cases = {0: 0, 1: 0, 2: 0}
    for d in range(2, min(dmax, 10**4) + 1):
        cases[s_case(spec, d).case] += 1
    pattern = {}
    for p in primes_up_to(19):
        if p == p0:
            continue
        o = multiplicative_order(p, p0)
        seq = [s_prime_power(spec, p, K) for K in range(1, 41)]
        expect = [(1 if K % o == 0 else 0) - (1 if (K - 1) % o == 0 else 0) for K in range(1, 41)]
        _check(seq == expect, f"prime-power pattern fails at p={p}")
        pattern[p] = {"order": o, "nonzero": sum(1 for s in seq if s)}
    x1 = max(10, dmax // 2)
    means = [mean_value_partial(spec, x) for x in (x1, 2 * x1)]
    rep = reef_failure_demo(spec, max(p0, args.Q or p0), args.a_max, X=args.X)
    rows = [(a, r) for a, r in rep.residuals.items()]
    meta = {
        "p0": p0,
        "dmax": dmax,
        "closed_form_checked_to": dmax,
        "case_counts": {f"case{k}": v for k, v in cases.items()},
        "prime_power_pattern": pattern,
        "mean_value": [{"x": m.x, "raw": m.raw, "flat": m.flat, "relative_gap": m.relative_gap} for m in means],
        "win": rep.win,
        "win_check": rep.win_check,
        "zero_residual": rep.zero_residual,
        "residual_at_1": rep.residuals[1],
    }
    return Table(["a", "residual"], rows, meta)


# ---------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--threads", type=int, default=1, help="worker cap for table builds")
    common.add_argument("--cutoffs", help="comma list overriding the doubling cutoff ladder")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="rsm", description="Ramanujan-sum and smooth-summation experiments")
    p.add_argument("--version", action="version", version=f"rsm {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("csum", cmd_csum, "exact Ramanujan sum c_q(a)")
    sp.add_argument("q", type=int)
    sp.add_argument("a", type=int)

    for name, fn, h in (
        ("wintner", cmd_wintner, "Wintner coefficient partial sums"),
        ("carmichael", cmd_carmichael, "Carmichael coefficient partial averages"),
    ):
        sp = add(name, fn, h)
        sp.add_argument("--function", required=True)
        sp.add_argument("--q", required=True, help="modulus list, e.g. 1-12")
        sp.add_argument("--P", type=int, help="P-smooth variant")
        sp.add_argument("--X", type=int, default=1 << 20)

    sp = add("hypotheses", cmd_hypotheses, "partial-sum trends of the convergence hypotheses")
    sp.add_argument("--function", required=True)
    sp.add_argument("--P", help="prime ladder for the sifted tails")
    sp.add_argument("--X", type=int, default=1 << 20)
    sp.add_argument("--q", help="accepted for symmetry; unused")

    sp = add("smoothsum", cmd_smoothsum, "smooth Ramanujan sum over q in (P)")
    sp.add_argument("--coeff", required=True, help="const:C | table:FILE | builtin:NAME")
    sp.add_argument("--a", required=True)
    sp.add_argument("--P", required=True)

    sp = add("irr", cmd_irr, "irregular series partial sums")
    sp.add_argument("--function", required=True)
    sp.add_argument("--d", required=True)
    sp.add_argument("--P", type=int, required=True)
    sp.add_argument("--X", type=int, default=1 << 20)

    sp = add("decomp", cmd_decomp, "orthogonal decomposition residuals")
    sp.add_argument("--function", required=True)
    sp.add_argument("--form", choices=["transform", "function"], default="transform")
    sp.add_argument("--n", required=True, help="d values (transform) or a values (function)")
    sp.add_argument("--P", type=int, required=True)
    sp.add_argument("--X", type=int, default=1 << 20)
    sp.add_argument("--tol", type=float, default=1e-3)

    sp = add("fai", cmd_fai, "analytic minus irregular split")
    sp.add_argument("--function", required=True)
    sp.add_argument("--a-max", type=int, default=20)
    sp.add_argument("--scan", type=int)
    sp.add_argument("--X", type=int, default=1 << 18)
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = add("reef", cmd_reef, "finite Ramanujan expansion residuals")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--spec")
    g.add_argument("--function")
    sp.add_argument("--Q", type=int, default=1)
    sp.add_argument("--a-max", type=int, default=20)

    sp = add("correlate", cmd_correlate, "correlation C_{f,g}(N, a)")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--a-max", type=int, default=20)

    sp = add("error", cmd_error, "correlation minus its finite expansion")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--a-max", type=int, default=20)

    sp = add("singular", cmd_singular, "singular series by product and by series")
    sp.add_argument("--two-k", default="2,4,6,8")
    sp.add_argument("--product-bound", type=int, default=10**6)
    sp.add_argument("--series-bound", type=int, default=10**5)

    sp = add("hl", cmd_hl, "prime-pair correlation against the singular series")
    sp.add_argument("--N", type=int, default=10**6)
    sp.add_argument("--shifts", default="2,4,6,8")

    sp = add("chars", cmd_chars, "Dirichlet character table")
    sp.add_argument("q", type=int)

    sp = add("gauss", cmd_gauss, "Gauss sums of all characters")
    sp.add_argument("q", type=int)

    sp = add("theorem5", cmd_theorem5, "P-smooth Carmichael coefficients of e(jn/q), two routes")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--l", required=True)
    sp.add_argument("--P", type=int, required=True)
    sp.add_argument("--tol", type=float, default=1e-8)

    sp = add("error-chars", cmd_error_chars, "error term by characters against the definition")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--spec")
    g.add_argument("--random", type=int, help="number of random specs drawn from --seed")
    sp.add_argument("--a-max", type=int, default=10)
    sp.add_argument("--P", type=int, help="also check the smooth-coefficient route")
    sp.add_argument("--tol", type=float, default=1e-6)

    sp = add("counterexample", cmd_counterexample, "full report on F_0(a) = c_p0(a - 1)")
    sp.add_argument("--p0", type=int, default=5)
    sp.add_argument("--dmax", type=int, default=10**4)
    sp.add_argument("--a-max", type=int, default=20)
    sp.add_argument("--Q", type=int)
    sp.add_argument("--X", type=int, default=1 << 18)

    sp = sub.add_parser("run", help="run an experiment manifest")
    sp.add_argument("manifest")
    sp.set_defaults(fn=None)
    return p


def _emit(table: Table, args) -> str:
    if args.json:
        return to_json(table)
    if table.text is not None and table.columns == ["q", "a", "value"]:
        return table.text + "\n"
    return to_csv(table)


def _execute(args) -> tuple[Table, int]:
    set_threads(args.threads)
    try:
        return args.fn(args), 0
    except CheckFailed as e:
        print(f"check failed: {e}", file=sys.stderr)
        return None, 1


_POSITIONAL = {"csum": ("q", "a"), "chars": ("q",), "gauss": ("q",)}


def manifest_argv(doc: dict) -> list[str]:
    """Translate manifest parameters into a subcommand argv."""
    cmd = doc["subcommand"]
    params = dict(doc["parameters"])
    argv = [cmd]
    for name in _POSITIONAL.get(cmd, ()):
        if name not in params:
            raise SchemaError(f"parameters: {name!r} is required for {cmd}")
        argv.append(str(params.pop(name)))
    for k in sorted(params):
        v = params[k]
        flag = "--" + k.replace("_", "-")
        if v is True:
            argv.append(flag)
        elif v is False or v is None:
            continue
        elif isinstance(v, list):
            argv += [flag, ",".join(str(x) for x in v)]
        else:
            argv += [flag, str(v)]
    if "seed" in doc:
        argv += ["--seed", str(doc["seed"])]
    if "cutoffs" in doc:
        argv += ["--cutoffs", ",".join(str(c) for c in doc["cutoffs"])]
    return argv


def run(manifest: dict | str | Path) -> int:
    """Run one manifest; writes the requested outputs and returns the exit status."""
    doc = load_manifest(manifest) if not isinstance(manifest, dict) else manifest
    validate(doc, MANIFEST_SCHEMA)
    argv = manifest_argv(doc)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    table, status = _execute(args)
    if table is None:
        return status
    outs = doc.get("outputs", {})
    if "csv" in outs:
        Path(outs["csv"]).write_text(to_csv(table), encoding="utf-8", newline="")
    if "json" in outs:
        Path(outs["json"]).write_text(to_json(table), encoding="utf-8")
    if not outs:
        sys.stdout.write(to_csv(table))
    return status


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.command == "run":
            return run(args.manifest)
        table, status = _execute(args)
        if table is None:
            return status
        text = _emit(table, args)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8", newline="")
        else:
            sys.stdout.write(text)
        if args.command == "reef" and not args.json:
            print(f"max |residual| = {fmt(table.meta['max_residual'])}", file=sys.stderr)
        return status
    except (SchemaError, GuardrailError, builtins.UnknownBuiltin, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
