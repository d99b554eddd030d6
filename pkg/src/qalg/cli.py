"""``qalg`` command line: verify, contract, expand, act.

Exit codes: 0 when everything passes, 1 when a check fails or a limit
diverges, 2 for usage, parse, and elaboration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path

from . import builtins, contraction, hopf, realization, specdsl
from .ncalgebra import check_jacobi, specialize_tau_zero, subalgebra_closure
from .report import CheckItem, Report
from .scalars import DEFAULT_ORDER

CHECK_GROUPS = ("jacobi", "hopf", "rmatrix", "realization", "symmetry", "subalgebras")
QYBE_MAX_ORDER = 4
MAPS = {"poincare": contraction.POINCARE_MAP, "identity": contraction.IDENTITY_MAP, "classical": contraction.CLASSICAL_LIMIT_MAP}
REALIZATION_KIND = {"so22": "classical", "uso22": "deformed"}


class UsageError(Exception):
    pass


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0.0.0"


def default_order() -> int:
    raw = os.environ.get("QALG_ORDER")
    if raw is None:
        return DEFAULT_ORDER
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"QALG_ORDER must be an integer, got {raw!r}") from None
    if value < 0:
        raise UsageError("QALG_ORDER must be non-negative")
    return value


# -- resolving algebras ----------------------------------------------------------
@dataclass
class Resolved:
    """An algebra named on the command line, at one truncation order."""

    name: str
    algebra: object
    hopf: hopf.HopfSpec | None
    realization: dict | None = None
    realization_kind: str | None = None
    contraction: contraction.ContractionMap | None = None
    subalgebra_facts: list = field(default_factory=list)
    warnings: list = field(default_factory=list)


def resolve(ref: str, order: int) -> Resolved:
    if ref in builtins.BUILTIN_NAMES:
        hs = builtins.builtin(ref, order)
        kind = REALIZATION_KIND.get(ref)
        table = realization.realization_table(kind, order) if kind else None
        return Resolved(ref, hs.base, hs, table, kind, None, builtins.SUBALGEBRA_FACTS.get(ref, []))
    path = Path(ref)
    if not path.is_file():
        raise UsageError(f"{ref!r} is neither a built-in ({', '.join(builtins.BUILTIN_NAMES)}) nor a readable file")
    doc = specdsl.parse_bytes(path.read_bytes())
    elab = specdsl.elaborate(doc, order)
    return Resolved(elab.name, elab.algebra, elab.hopf, elab.realization, None, elab.contraction, [], elab.warnings)


# -- check groups --------------------------------------------------------------------
def _subalgebra_report(res: Resolved) -> Report:
    report = Report(f"subalgebras {res.name}")
    for subset, kind in res.subalgebra_facts:
        label = "{" + ",".join(subset) + "}"
        if kind == "closed":
            report.extend(subalgebra_closure(res.algebra, subset))
        elif kind == "not-closed":
            closure = subalgebra_closure(res.algebra, subset)
            bad = closure.failures()
            report.add("not-closed", label, bool(bad), residual="; ".join(f"{i.subject} = {i.residual}" for i in bad) or None)
        elif kind == "hopf":
            report.extend(hopf.check_hopf_subalgebra(res.hopf, subset))
        elif kind == "closed-not-hopf":
            report.extend(subalgebra_closure(res.algebra, subset))
            report.extend(hopf.check_not_hopf_subalgebra(res.hopf, subset))
    return report


def _rmatrix_report(ref: str, res: Resolved, order: int) -> Report:
    report = Report(f"R-matrix {res.name}")
    report.extend(hopf.check_intertwining(res.hopf))
    qybe_order = min(order, QYBE_MAX_ORDER)
    small = res if qybe_order == order else resolve(ref, qybe_order)
    report.extend(hopf.check_qybe(small.hopf))
    classical = specialize_tau_zero(res.algebra)
    report.extend(hopf.check_cocommutator(res.hopf, classical))
    r = hopf.classical_r(res.algebra, res.hopf.r_exponents)
    report.extend(contraction.check_cybe(classical, contraction.tensor_components(r), "r"))
    return report


def _symmetry_report(res: Resolved, order: int) -> Report:
    kind = res.realization_kind
    report = Report(f"{kind} wave equation")
    for f in realization.solution_set(order):
        start = time.perf_counter()
        residual = realization.wave_residual(kind, f)
        report.add("wave-solution", str(f), residual.is_zero(), residual=None if residual.is_zero() else str(residual),
                   seconds=time.perf_counter() - start)
    for gen in res.algebra.generators:
        report.extend(realization.check_symmetry(kind, gen, order))
    for gen in res.algebra.generators:
        for f in realization.solution_set(order):
            report.extend(realization.check_solution_preservation(kind, gen, f))
    return report


def applicable(res: Resolved, group: str) -> str | None:
    """Reason a check group cannot run on ``res``, or None."""
    if group in ("hopf", "rmatrix") and res.hopf is None:
        return "no coproducts defined"
    if group == "realization" and res.realization is None:
        return "no realization defined"
    if group == "symmetry" and res.realization_kind is None:
        return "no wave-equation realization for this algebra"
    if group == "subalgebras" and not res.subalgebra_facts:
        return "no subalgebra statements for this algebra"
    return None


def run_group(ref: str, group: str, order: int) -> Report:
    res = resolve(ref, order)
    start = time.perf_counter()
    if group == "jacobi":
        report = check_jacobi(res.algebra)
    elif group == "hopf":
        report = hopf.hopf_suite(res.hopf)
    elif group == "rmatrix":
        report = _rmatrix_report(ref, res, order)
    elif group == "realization":
        report = realization.check_realization(res.algebra, res.realization)
    elif group == "symmetry":
        report = _symmetry_report(res, order)
    elif group == "subalgebras":
        report = _subalgebra_report(res)
    else:
        raise UsageError(f"unknown check {group!r}")
    if report.items and not any(item.seconds for item in report.items):
        share = (time.perf_counter() - start) / len(report.items)
        for item in report.items:
            item.seconds = share
    return report


# -- reports --------------------------------------------------------------------------
@dataclass
class VerificationReport:
    """Outcome of one command: ordered items plus notes."""

    command: str
    algebra: str
    order: int
    items: list[CheckItem] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    tool_version: str = field(default_factory=tool_version)

    @property
    def ok(self) -> bool:
        return all(item.ok for item in self.items)

    def to_dict(self, timings: bool = True) -> dict:
        return {
            "tool_version": self.tool_version,
            "command": self.command,
            "algebra": self.algebra,
            "order": self.order,
            "status": "pass" if self.ok else "fail",
            "items": [item.to_dict(timings) for item in self.items],
            "notes": list(self.notes),
        }

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=2)

    def to_text(self, timings: bool = True) -> str:
        lines = [f"qalg {self.tool_version} {self.command} {self.algebra} (order {self.order})"]
        lines += [f"note: {n}" for n in self.notes]
        for item in self.items:
            line = f"[{item.status}] {item.check} {item.subject}"
            if timings:
                line += f"  {item.seconds:.3f}s"
            lines.append(line)
            if item.detail and (item.check in ("relation", "coproduct", "rmatrix") or not item.ok):
                lines.append(f"    {item.detail}")
            if item.residual is not None:
                lines.append(f"    {'witness' if item.ok else 'residual'}: {item.residual}")
        failed = sum(not item.ok for item in self.items)
        lines.append(f"{len(self.items)} items, {failed} not passing: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)


def parse_checks(text: str) -> list[str]:
    if text == "all":
        return list(CHECK_GROUPS)
    groups = [c.strip() for c in text.split(",") if c.strip()]
    unknown = [c for c in groups if c not in CHECK_GROUPS]
    if unknown or not groups:
        raise UsageError(f"unknown check(s) {', '.join(unknown) or '(none)'}; choose from {', '.join(CHECK_GROUPS)} or all")
    return [c for c in CHECK_GROUPS if c in groups]


def verify(ref: str, checks="all", order: int = DEFAULT_ORDER, jobs: int = 1) -> VerificationReport:
    """Run check groups in a fixed order; groups may run in worker processes."""
    groups = parse_checks(checks) if isinstance(checks, str) else list(checks)
    res = resolve(ref, order)
    out = VerificationReport("verify", res.name, order)
    out.notes += [f"warning: {w}" for w in res.warnings]
    explicit = checks != "all"
    runnable = []
    for group in groups:
        reason = applicable(res, group)
        if reason is None:
            runnable.append(group)
        elif explicit:
            raise UsageError(f"check {group!r} cannot run on {res.name}: {reason}")
        else:
            out.notes.append(f"skipped {group}: {reason}")
    if jobs > 1 and len(runnable) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(run_group, [ref] * len(runnable), runnable, [order] * len(runnable)))
    else:
        reports = [run_group(ref, group, order) for group in runnable]
    for report in reports:
        out.items.extend(report.items)
    return out


def contract(source: str, target: str | None, cmap: contraction.ContractionMap, order: int) -> VerificationReport:
    src = resolve(source, order)
    if src.hopf is None:
        raise UsageError(f"{source!r} has no coproducts to contract")
    tgt = None
    if target is not None:
        tgt = resolve(target, order)
        if tgt.hopf is None:
            raise UsageError(f"{target!r} has no coproducts to compare against")
        if tgt.algebra.generators != src.algebra.generators:
            raise UsageError("source and target must declare the same generators in the same order")
    report = contraction.contract_full(cmap, src.hopf, tgt.hopf if tgt else None)
    name = f"{src.name} -> {tgt.name if tgt else '(no target)'}"
    out = VerificationReport("contract", name, order, report.items)
    out.notes.append(f"map {cmap.name}: " + ", ".join(f"{g}: {cmap.generator_scale.get(g, 0)}" for g in src.algebra.generators)
                     + f", tau: {cmap.tau_exponent}")
    if tgt is None:
        out.notes.append("no target given; limits are reported, not compared")
    return out


def load_map(ref: str, order: int) -> contraction.ContractionMap:
    if ref in MAPS:
        return MAPS[ref]
    path = Path(ref)
    if not path.is_file():
        raise UsageError(f"map {ref!r} is neither one of {', '.join(MAPS)} nor a readable file")
    doc = specdsl.parse_bytes(path.read_bytes())
    if doc.contraction is None:
        raise UsageError(f"{ref!r} has no contraction section")
    scale = {g: doc.contraction["scale"].get(g, 0) for g in doc.generators}
    tau = doc.contraction["tau"]
    return contraction.ContractionMap(scale, 1 if tau is None else tau, path.stem)


def expand(expr: str, ref: str, order: int):
    """Normal-ordered, truncated value of ``expr`` in the algebra ``ref``."""
    probe = resolve(ref, order)
    functions = frozenset({"exp", "S"}) if probe.hopf is not None else frozenset({"exp"})
    ctx = specdsl.Context(frozenset(probe.algebra.generators) | {"tau"}, functions, label="expand")
    node = specdsl.parse_expression(expr, ctx)
    work = specdsl._working_order(order, node)
    res = probe if work == order else resolve(ref, work)
    spec = res.algebra
    fns = {"S": lambda a: hopf.antipode_of(res.hopf, a)} if res.hopf is not None else {}
    value = specdsl.Evaluator(spec.gen, spec.one, functions=fns)(node)
    return specdsl._finish(value, order, node.span)


def act(target: str, function: str, kind: str, order: int) -> tuple[str, str | None]:
    """Image of a polynomial under a realized generator or the wave operator."""
    f = specdsl.parse_function(function, order)
    if target == "casimir":
        op = realization.casimir(kind, order)
    else:
        build = realization.classical_realization if kind == "classical" else realization.deformed_realization
        try:
            op = build(target, order)
        except KeyError:
            raise UsageError(f"unknown generator {target!r}; choose from {', '.join(builtins.GENERATORS)} or casimir") from None
    image = realization.apply(op, f)
    status = None
    if target == "casimir":
        status = "solution" if image.is_zero() else "not a solution"
    return str(image), status


# -- argument parsing -------------------------------------------------------------------
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qalg", description="Exact checks for quantum deformations of so(2,2).")
    p.add_argument("--version", action="version", version=f"qalg {tool_version()}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run algebraic checks on an algebra")
    v.add_argument("--algebra", default="uso22", help="built-in name or path to a .qalg file")
    v.add_argument("--checks", default="all", help=f"comma list of {','.join(CHECK_GROUPS)}, or all")
    v.add_argument("--jobs", type=int, default=1, help="worker processes for independent check groups")

    c = sub.add_parser("contract", help="contract a deformed algebra and compare with a target")
    c.add_argument("--source", default="uso22")
    c.add_argument("--target", default=None, help="built-in or file; omitted means report only")
    c.add_argument("--map", default="poincare", help=f"{', '.join(MAPS)}, or a .qalg file with a contraction section")
    c.add_argument("--no-param-rescale", action="store_true", help="keep tau fixed instead of tau -> tau/eps")

    e = sub.add_parser("expand", help="normal-order an expression")
    e.add_argument("expr")
    e.add_argument("--algebra", default="uso22")

    a = sub.add_parser("act", help="apply a realized generator or the wave operator to a polynomial")
    a.add_argument("target", help="generator name or casimir, optionally suffixed -classical or -deformed")
    a.add_argument("function", help='polynomial in x and t, e.g. "x^2 + t^2"')
    a.add_argument("--kind", choices=("classical", "deformed"), default=None)

    for sp in (v, c, e, a):
        sp.add_argument("--order", type=int, default=None, help="truncation order N (default 6 or $QALG_ORDER)")
    for sp in (v, c):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--deterministic", action="store_true", help="omit wall times")
    return p


def _emit(report: VerificationReport, args) -> int:
    timings = not args.deterministic
    print(report.to_json(timings) if args.format == "json" else report.to_text(timings))
    return 0 if report.ok else 1


def _main(argv) -> int:
    args = build_parser().parse_args(argv)
    order = args.order if args.order is not None else default_order()
    if order < 0:
        raise UsageError("--order must be non-negative")
    if args.command == "verify":
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        return _emit(verify(args.algebra, args.checks, order, args.jobs), args)
    if args.command == "contract":
        cmap = load_map(args.map, order)
        if args.no_param_rescale:
            cmap = cmap.without_param_rescale()
        target = args.target
        if target is None and args.map == "poincare":
            target = "uiso21"
        return _emit(contract(args.source, target, cmap, order), args)
    if args.command == "expand":
        print(expand(args.expr, args.algebra, order).format(show_order=True))
        return 0
    target, kind = args.target, args.kind
    for suffix in ("classical", "deformed"):
        if target.endswith("-" + suffix):
            target = target[: -len(suffix) - 1]
            if kind not in (None, suffix):
                raise UsageError(f"{args.target!r} conflicts with --kind {kind}")
            kind = suffix
    image, status = act(target, args.function, kind or "deformed", order)
    print(image)
    if status:
        print(status)
    return 0


def main(argv=None) -> int:
    try:
        code = _main(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        if code not in (0, 1, 2):
            code = 2
    except (UsageError, specdsl.SpecError, realization.TruncationError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"qalg: error: {msg}", file=sys.stderr)
        code = 2
    except Exception as exc:  # a failed computation counts as a failed check
        print(f"qalg: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        code = 1
    return code


if __name__ == "__main__":
    sys.exit(main())
