from __future__ import annotations
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional, TextIO, Tuple

from engine.adapters.expectations import (
    expectations_by_forward,
    expectations_fb,
    second_order_expectation,
)
from engine.adapters.tape import AdTape, ad_forward_grad, ad_reverse_grad
from engine.adapters.zdd import zdd_polynomial
from engine.algebra.instances import real
from engine.algebra.semiring import OpCounter, SemiringSpec
from engine.api.adapter_base import Features
from engine.api.config import RunConfig
from engine.api.errors import EngineError, SchemaError, SemiringMismatch
from engine.app.context import RunContext
from engine.app.loader import (
    load_adapter,
    load_adapter_manifest,
    load_document,
    read_features,
    resolve_semialgebra,
    resolve_semiring,
)
from engine.app.report import WRITERS, Report
from engine.app.validate import DEFAULT_SUITE, validate_instance
from engine.graph.io import dump_graph
from engine.passes.backward import forward_backward
from engine.passes.forward import forward, free_forward
from engine.semialgebra.spec import bc_semialgebra, tensor_product

logger = logging.getLogger(__name__)


def open_run(cfg: RunConfig, counter: Optional[OpCounter] = None) -> RunContext:
    """Loads the input document, picks its adapter by `kind` and builds the graph."""
    doc = load_document(Path(cfg.input_path))
    kind = doc.get("kind", "graph")
    if not isinstance(kind, str):
        raise SchemaError("expected a string", "kind")
    manifest = load_adapter_manifest(kind)
    adapter = load_adapter(manifest)
    built = adapter.build(adapter.parse(doc))
    logger.info("%s document -> %r", kind, built.graph)
    return RunContext(cfg=cfg, manifest=manifest, adapter=adapter, built=built, counter=counter)


def source_values(ctx: RunContext, s: SemiringSpec) -> Dict[int, Any]:
    """xi in s: text values are parsed by s, model values are lifted into s."""
    built = ctx.built
    if built.raw_xi:
        if s.parse is None:
            raise SchemaError(f"{s.name} values cannot be read from text", "xi")
        out = {}
        for v, text in built.raw_xi.items():
            try:
                out[v] = s.parse(text)
            except SchemaError as e:
                raise SchemaError(str(e), f"xi.{v}") from None
        return out
    if built.xi is not None:
        if s.lift is None:
            raise SemiringMismatch(f"{s.name} cannot take the model's real source values")
        return {v: s.lift(x) for v, x in built.xi.items()}
    return {}


def _scalar(ctx: RunContext) -> SemiringSpec:
    return resolve_semiring(ctx.semiring_name, ctx.semiring_params(), ctx.counter)


def _features(ctx: RunContext, s: SemiringSpec) -> Features:
    if ctx.cfg.features_path:
        features = read_features(Path(ctx.cfg.features_path), ctx.built)
    else:
        features = ctx.adapter.default_features(ctx.built)
    if not features:
        raise SchemaError(f"{ctx.kind} documents have no default features; pass --features", "features")
    if s.lift is None:
        raise SemiringMismatch(f"{s.name} cannot take real feature values")
    return [(name, {v: s.lift(c) for v, c in psi.items()}) for name, psi in features]


def cmd_forward(ctx: RunContext, report: Report) -> None:
    s = _scalar(ctx)
    xi = source_values(ctx, s)
    if ctx.counter is not None:
        ctx.counter.reset()
    result = forward(ctx.built.graph, s, xi, ctx.cfg.checkpoint)
    report.semiring = s.name
    report.add("sink_sum", s.fmt(result.sink_sum))
    for v, value in result.sink_values().items():
        report.add(f"alpha[{v}]", s.fmt(value))


def cmd_free_forward(ctx: RunContext, report: Report) -> None:
    built = ctx.built
    if ctx.kind == "zdd":
        poly = zdd_polynomial(built.model, built, ctx.counter)
        names = list(built.model.variables)
    else:
        poly = free_forward(built.graph, ctx.cfg.checkpoint, ctx.counter).sink_sum
        names = built.legend_list()
    report.semiring = f"natpoly({poly.n_vars})"
    report.add("sink_sum", str(poly))
    for i, name in enumerate(names):
        report.add(f"x{i}", name)


def cmd_fb(ctx: RunContext, report: Report) -> None:
    a = resolve_semialgebra(ctx.semiring_name, ctx.semiring_params(), ctx.counter)
    tspec = tensor_product(a, bc_semialgebra(a.scalar, 1))
    t = tspec.as_semiring()
    xi = source_values(ctx, t)
    result = forward_backward(ctx.built.graph, a, xi, ctx.cfg.checkpoint)
    algebra = result.algebra
    report.semiring = tspec.name
    report.add("combined", t.fmt(result.combined))
    report.add("sink_sum", algebra.fmt(result.alpha0.sink_sum))
    for v in ctx.built.graph.source_order:
        report.add(f"beta[{v}]", algebra.fmt(result.beta[v]))


def cmd_expect(ctx: RunContext, report: Report) -> None:
    s = _scalar(ctx)
    xi0 = source_values(ctx, s)
    features = _features(ctx, s)
    g = ctx.built.graph
    if ctx.cfg.forward_mode:
        results = expectations_by_forward(g, xi0, features, s)
    else:
        results = expectations_fb(g, xi0, features, s, ctx.cfg.checkpoint)
    report.semiring = s.name
    report.add("z", s.fmt(results[0].z))
    for e in results:
        report.add(e.name, s.fmt(e.total))


def cmd_second_order(ctx: RunContext, report: Report) -> None:
    s = _scalar(ctx)
    xi0 = source_values(ctx, s)
    features = _features(ctx, s)
    if len(features) < 2:
        raise SchemaError("second-order needs two features", "features")
    (phi_name, phi), (psi_name, psi) = features[0], features[1]
    value = second_order_expectation(ctx.built.graph, xi0, phi, psi, s)
    report.semiring = s.name
    report.add("phi", phi_name)
    report.add("psi", psi_name)
    report.add("value", s.fmt(value))


def cmd_grad(ctx: RunContext, report: Report) -> None:
    if ctx.kind != "tape":
        raise SchemaError(f"grad needs a tape document, got {ctx.kind}", "kind")
    s = _scalar(ctx)
    if s.name != "real":
        raise SchemaError(f"grad runs over real, not {s.name}", "semiring")
    tape: AdTape = ctx.built.model
    if ctx.cfg.point is not None:
        tape = tape.at(ctx.cfg.point)
    if ctx.cfg.forward_mode:
        runs = [ad_forward_grad(tape, k, s) for k in range(tape.num_inputs)]
        value = runs[0][0] if runs else s.zero
        grad = tuple(d for _, d in runs)
    else:
        value, grad = ad_reverse_grad(tape, s, ctx.cfg.checkpoint)
    report.semiring = s.name
    report.add("value", s.fmt(value))
    for k, d in enumerate(grad):
        report.add(f"grad[{k}]", s.fmt(d))


HANDLERS: Dict[str, Callable[[RunContext, Report], None]] = {
    "forward": cmd_forward,
    "free-forward": cmd_free_forward,
    "fb": cmd_fb,
    "expect": cmd_expect,
    "second-order": cmd_second_order,
    "grad": cmd_grad,
}


def run_validate(cfg: RunConfig) -> Tuple[Report, bool]:
    names = [cfg.semiring] if cfg.semiring else list(DEFAULT_SUITE)
    params = {"atol": cfg.tolerance.abs, "rtol": cfg.tolerance.rel}
    report = Report("validate", semiring=cfg.semiring or "")
    ok = True
    for name in names:
        for r in validate_instance(name, cfg.cases, cfg.seed, params):
            if r.passed:
                report.add(f"{r.instance}: {r.law}", "pass")
            else:
                ok = False
                report.add(f"{r.instance}: {r.law}", f"FAIL {r.failures}/{r.cases} e.g. {r.example}")
    return report, ok


def _graph_xi(ctx: RunContext) -> Optional[Dict[int, str]]:
    built = ctx.built
    if built.raw_xi:
        return dict(built.raw_xi)
    if built.xi is not None:
        fmt = real().fmt
        return {v: fmt(x) for v, x in built.xi.items()}
    return None


def run(cfg: RunConfig, out: Optional[TextIO] = None) -> int:
    """
    Runs one command and writes its report. Exit codes: 0 ok, 1 a validate law
    failed, 2 unreadable or malformed input, 3 any other engine error.
    """
    out = out or sys.stdout
    counter = OpCounter() if cfg.telemetry else None
    logger.info("start %s %s", cfg.command, cfg.input_path or "")
    try:
        if cfg.command == "validate":
            report, ok = run_validate(cfg)
        else:
            ctx = open_run(cfg, counter)
            report = Report(cfg.command)
            HANDLERS[cfg.command](ctx, report)
            if cfg.emit_graph:
                report.graph = dump_graph(ctx.built.graph, _graph_xi(ctx))
            report.telemetry = counter
            ok = True
    except SchemaError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return 2
    except EngineError as e:
        print(f"ERROR: {type(e).__name__}: {e}", file=sys.stderr)
        return 3
    WRITERS[cfg.output_format](report, out)
    logger.info("done %s", cfg.command)
    return 0 if ok else 1
