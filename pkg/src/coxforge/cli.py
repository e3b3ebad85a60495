"""Command-line front end: build cases, verify tables and audits,
emit JSON or text reports.

Commands: graph, invariants, cox, reduce, verify, report. Output goes
to stdout or --out as UTF-8. Exit codes: 0 ok, 1 verification
mismatch, 2 usage error, 3 resource-cap error. Reports are byte-stable
for a fixed configuration; --timings adds wall-clock milliseconds and
is the one switch that breaks that stability.
"""

import argparse
import itertools
import json
import os
import sys
import time

from . import reduction
from .cox import lead_term_of, presentation_from_graph, relation_from_graph, verify_presentation
from .errors import (
    CoxforgeError,
    ParameterError,
    ResourceCapError,
    UnsupportedGraphError,
)
from .graphs import build_custom_tree, build_singularity
from .invariants import verify_invariant_table
from .rings import normal_form

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

DEFAULT_GRID = 2000
DEFAULT_SEED = 20240
DEFAULT_CAPS = {
    "cokernel": reduction.DEFAULT_COKERNEL_CAP,
    "step": reduction.DEFAULT_STEP_CAP,
    "relation": None,
}
AUDIT_DEGREE_COUNT = 6


def parse_case(text):
    """Build the resolution graph named by a case string such as
    ``A3``, ``D5``, ``E7`` or ``custom:2,2,3``."""
    text = str(text).strip()
    if not text:
        raise ParameterError("empty case")
    if text.lower().startswith("custom:"):
        body = text.split(":", 1)[1]
        try:
            lengths = tuple(int(part) for part in body.split(",") if part.strip())
        except ValueError:
            raise ParameterError("branch lengths must be integers: %r" % body)
        if not lengths:
            raise ParameterError("custom case needs branch lengths")
        return build_custom_tree(lengths)
    family = text[0].upper()
    try:
        n = int(text[1:])
    except ValueError:
        raise ParameterError("cannot parse case %r" % text)
    return build_singularity(family, n)


def grid_sample(width, count, seed=DEFAULT_SEED, lo=-3, hi=3):
    """Deterministic sample of integer vectors in [lo, hi]^width. The
    full box is returned in lexicographic order when it fits in
    ``count``; otherwise a fixed-seed generator draws ``count``
    distinct cells."""
    span = hi - lo + 1
    if span ** width <= count:
        return [tuple(d) for d in itertools.product(range(lo, hi + 1), repeat=width)]
    out = []
    seen = set()
    state = seed & ((1 << 64) - 1)
    while len(out) < count:
        cell = []
        for _ in range(width):
            state = (state * 6364136223846793005 + 1442695040888963407) % (1 << 64)
            cell.append(lo + (state >> 33) % span)
        cell = tuple(cell)
        if cell not in seen:
            seen.add(cell)
            out.append(cell)
    return out


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise ParameterError("cannot read config %s: %s" % (path, exc))
    if not isinstance(data, dict):
        raise ParameterError("config must be a JSON object")
    return data


def _parse_caps_flags(entries):
    caps = {}
    for entry in entries or ():
        for piece in entry.split(","):
            piece = piece.strip()
            if not piece:
                continue
            if "=" not in piece:
                raise ParameterError("caps entries look like key=value: %r" % piece)
            key, _, value = piece.partition("=")
            key = key.strip()
            if key not in DEFAULT_CAPS:
                raise ParameterError(
                    "unknown cap %r (known: %s)" % (key, ", ".join(sorted(DEFAULT_CAPS)))
                )
            try:
                caps[key] = int(value)
            except ValueError:
                raise ParameterError("cap %r needs an integer, got %r" % (key, value))
    return caps


def resolve_settings(args, environ=None):
    """Merge caps, seed and grid size: flags override the environment,
    which overrides the config file, which overrides defaults."""
    environ = os.environ if environ is None else environ
    config = _load_config(args.config)
    caps = dict(DEFAULT_CAPS)
    config_caps = config.get("caps", {})
    if not isinstance(config_caps, dict):
        raise ParameterError("config caps must be an object")
    for key, value in config_caps.items():
        if key not in DEFAULT_CAPS:
            raise ParameterError("unknown cap %r in config" % key)
        caps[key] = int(value)
    env_cap = environ.get("COXFORGE_CAP")
    if env_cap is not None:
        try:
            caps["cokernel"] = int(env_cap)
        except ValueError:
            raise ParameterError("COXFORGE_CAP needs an integer, got %r" % env_cap)
    caps.update(_parse_caps_flags(args.caps))
    grid = args.grid if args.grid is not None else config.get("grid", DEFAULT_GRID)
    seed = config.get("seed", DEFAULT_SEED)
    return {"caps": caps, "grid": int(grid), "seed": int(seed)}


def _split_case(graph):
    label = graph.label or ""
    if label.startswith("custom"):
        return None, None
    return label[0], int(label[1:])


def cmd_graph(graph, settings):
    payload = graph.to_dict()
    payload["intersection_matrix"] = [list(row) for row in graph.intersection_matrix()]
    payload["grading_matrix"] = [list(row) for row in graph.grading().matrix]
    payload["variables"] = list(graph.grading().variables)
    payload["negative_definite"] = graph.is_negative_definite()
    return payload, EXIT_OK


def cmd_invariants(graph, settings):
    family, n = _split_case(graph)
    if family is None:
        raise ParameterError("custom trees have no reference invariant table")
    report = verify_invariant_table(family, n, relation_cap=settings["caps"]["relation"])
    return report, EXIT_OK if report["ok"] else EXIT_MISMATCH


def _custom_cox_report(graph):
    grading = graph.grading()
    rel = relation_from_graph(graph, grading)
    pres = presentation_from_graph(graph)
    report = {
        "case": graph.label,
        "variables": list(grading.variables),
        "relation": grading.format_polynomial(rel) if rel is not None else None,
        "lead": grading.format_monomial(lead_term_of(graph, grading))
        if rel is not None
        else None,
        "cuts": [],
    }
    ok = True
    if rel is not None:
        nf = normal_form(rel, pres)
        report["normal_form_zero"] = nf.is_zero()
        ok = nf.is_zero()
    report["ok"] = ok
    return report


def cmd_cox(graph, settings):
    family, n = _split_case(graph)
    if family is None:
        report = _custom_cox_report(graph)
    else:
        report = verify_presentation(family, n)
    return report, EXIT_OK if report["ok"] else EXIT_MISMATCH


def cmd_reduce(graph, degree, settings):
    caps = settings["caps"]
    nef = reduction.reduce_to_nef(degree, graph, caps["step"])
    steps = list(nef.steps)
    terminal = nef.terminal
    terminated = nef.terminated
    measures = ()
    if nef.terminated:
        basic = reduction.reduce_nef_to_basic(nef.terminal, graph, caps["step"])
        steps += list(basic.steps)
        terminal = basic.terminal
        terminated = basic.terminated
        measures = basic.measures
    if terminated:
        # a runaway trace is reported as such, not audited step by step
        pres = presentation_from_graph(graph)
        for step in steps:
            reduction.audit_step(pres, step, graph, caps["cokernel"])
    combined = reduction.ReductionTrace(degree, terminal, steps, terminated, measures)
    payload = combined.to_dict()
    payload["case"] = graph.label
    return payload, EXIT_OK if payload["ok"] else EXIT_MISMATCH


def _termination_sweep(graph, settings):
    caps = settings["caps"]
    cells = grid_sample(len(graph.nodes), settings["grid"], settings["seed"])
    is_d_type = (graph.label or "").startswith("D")
    max_steps = 0
    for d in cells:
        nef = reduction.reduce_to_nef(d, graph, caps["step"])
        basic = reduction.reduce_nef_to_basic(nef.terminal, graph, caps["step"])
        if not (nef.terminated and basic.terminated):
            return {"cells": len(cells), "ok": False, "failed_at": list(d)}
        if not reduction.is_basic(basic.terminal, graph):
            return {"cells": len(cells), "ok": False, "failed_at": list(d)}
        if is_d_type:
            ms = basic.measures
            if any(a < b for a, b in zip(ms, ms[1:])):
                return {"cells": len(cells), "ok": False, "failed_at": list(d)}
        max_steps = max(max_steps, len(nef.steps) + len(basic.steps))
    return {"cells": len(cells), "ok": True, "max_steps": max_steps}


def _audit_sample(graph, settings):
    caps = settings["caps"]
    cells = grid_sample(len(graph.nodes), settings["grid"], settings["seed"])
    reports = []
    ok = True
    for d in cells[:AUDIT_DEGREE_COUNT]:
        rep = reduction.full_equivalence_audit(
            graph, d, cap=caps["cokernel"], step_cap=caps["step"]
        )
        reports.append(
            {
                "initial": rep["initial"],
                "steps": len(rep["steps"]),
                "base_case": None if rep["base_case"] is None else rep["base_case"]["ok"],
                "ok": rep["ok"],
            }
        )
        ok = ok and rep["ok"]
    return {"degrees": reports, "ok": ok}


def _counterexample_section(graph, settings):
    caps = settings["caps"]
    pres = presentation_from_graph(graph)
    audits = []
    any_failed = False
    ends = graph.branch_ends() if graph.center() is not None else graph.leaves()
    for leaf in ends:
        rep = reduction.audit_add_curve(graph, leaf, k=2, cap=caps["cokernel"], pres=pres)
        audits.append(rep)
        any_failed = any_failed or not rep["ok"]
    verdict = "rule-fails-as-predicted" if any_failed else "rule-holds-on-sample"
    return {"audits": audits, "verdict": verdict, "ok": True}


def _timed(sections, timings, name, fn):
    start = time.perf_counter()
    result = fn()
    timings[name] = int((time.perf_counter() - start) * 1000)
    sections[name] = result
    return result


def cmd_verify(graph, settings, with_timings):
    family, _ = _split_case(graph)
    sections = {}
    timings = {}
    if family is None:
        _timed(sections, timings, "cox", lambda: _custom_cox_report(graph))
        if graph.is_negative_definite():
            _timed(sections, timings, "reduction", lambda: _termination_sweep(graph, settings))
        else:
            # greedy reduction has no termination certificate off the
            # negative-definite lattice, so the sweep would only time out
            sections["reduction"] = {
                "skipped": "intersection form is not negative definite",
                "ok": True,
            }
        cex = _timed(
            sections, timings, "counterexample", lambda: _counterexample_section(graph, settings)
        )
        ok = all(section["ok"] for section in sections.values())
        payload = {
            "case": graph.label,
            "sections": sections,
            "verdict": cex["verdict"],
            "ok": ok,
        }
        if with_timings:
            payload["timings"] = timings
        return payload, EXIT_OK if ok else EXIT_MISMATCH
    _timed(sections, timings, "invariants", lambda: cmd_invariants(graph, settings)[0])
    _timed(sections, timings, "cox", lambda: cmd_cox(graph, settings)[0])
    _timed(sections, timings, "reduction", lambda: _termination_sweep(graph, settings))
    _timed(sections, timings, "audits", lambda: _audit_sample(graph, settings))
    ok = all(section["ok"] for section in sections.values())
    payload = {"case": graph.label, "sections": sections, "ok": ok}
    if with_timings:
        payload["timings"] = timings
    return payload, EXIT_OK if ok else EXIT_MISMATCH


def cmd_report(graph, settings, with_timings):
    family, _ = _split_case(graph)
    sections = {}
    timings = {}
    _timed(sections, timings, "graph", lambda: cmd_graph(graph, settings)[0])
    if family is not None:
        _timed(sections, timings, "invariants", lambda: cmd_invariants(graph, settings)[0])
    _timed(sections, timings, "cox", lambda: cmd_cox(graph, settings)[0])
    if family is not None:
        _timed(sections, timings, "audits", lambda: _audit_sample(graph, settings))
    else:
        _timed(
            sections, timings, "counterexample", lambda: _counterexample_section(graph, settings)
        )
    ok = all(section.get("ok", True) for section in sections.values())
    payload = {"case": graph.label, "sections": sections, "ok": ok}
    if with_timings:
        payload["timings"] = timings
    return payload, EXIT_OK if ok else EXIT_MISMATCH


def _render_text(payload):
    lines = []
    case = payload.get("case", payload.get("label"))
    if case is not None:
        lines.append("case %s" % case)
    if "negative_definite" in payload:
        lines.append(
            "  nodes: %d" % len(payload.get("nodes", ()))
        )
        lines.append(
            "  negative definite: %s" % ("yes" if payload["negative_definite"] else "no")
        )
    if "sections" in payload:
        for name in sorted(payload["sections"]):
            section = payload["sections"][name]
            flag = section.get("ok", section.get("negative_definite"))
            lines.append("  %s: %s" % (name, "ok" if flag else "FAIL"))
    if "verdict" in payload:
        lines.append("  verdict: %s" % payload["verdict"])
    if "steps" in payload and "terminal" in payload:
        lines.append("  steps: %d" % len(payload["steps"]))
        lines.append("  terminal: %s" % payload["terminal"])
    if "ok" in payload:
        lines.append("ok" if payload["ok"] else "FAIL")
    return "\n".join(lines) + "\n"


def _emit(payload, args):
    if args.format == "text":
        text = _render_text(payload)
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_degree(text, graph):
    try:
        degree = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ParameterError("degree must be comma-separated integers: %r" % text)
    if len(degree) != len(graph.nodes):
        raise ParameterError(
            "degree needs %d coordinates, got %d" % (len(graph.nodes), len(degree))
        )
    return degree


def build_parser():
    parser = argparse.ArgumentParser(
        prog="coxforge",
        description="Cox rings of ADE surface singularity resolutions: "
        "invariant tables, candidate presentations, reduction audits.",
    )
    parser.add_argument("command", choices=["graph", "invariants", "cox", "reduce", "verify", "report"])
    parser.add_argument("--case", required=True, help="A<n>, D<n>, E<n>, or custom:l1,l2,...")
    parser.add_argument("--degree", help="comma-separated multidegree (reduce only)")
    parser.add_argument("--grid", type=int, help="max sampled degree cells for verify")
    parser.add_argument(
        "--caps",
        action="append",
        metavar="KEY=N",
        help="override caps: cokernel, step, relation (repeat or comma-separate)",
    )
    parser.add_argument("--config", help="JSON config file with caps/seed/grid")
    parser.add_argument("--format", choices=["json", "text"], default="json")
    parser.add_argument("--out", help="write output to this path instead of stdout")
    parser.add_argument("--timings", action="store_true", help="include per-section milliseconds")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        settings = resolve_settings(args)
        graph = parse_case(args.case)
        if args.command == "graph":
            payload, code = cmd_graph(graph, settings)
        elif args.command == "invariants":
            payload, code = cmd_invariants(graph, settings)
        elif args.command == "cox":
            payload, code = cmd_cox(graph, settings)
        elif args.command == "reduce":
            if not args.degree:
                raise ParameterError("reduce needs --degree")
            degree = _parse_degree(args.degree, graph)
            payload, code = cmd_reduce(graph, degree, settings)
        elif args.command == "verify":
            payload, code = cmd_verify(graph, settings, args.timings)
        else:
            payload, code = cmd_report(graph, settings, args.timings)
    except ResourceCapError as exc:
        _emit({"error": "resource-cap", "message": str(exc)}, args)
        return EXIT_RESOURCE
    except (ParameterError, UnsupportedGraphError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_USAGE
    except CoxforgeError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_MISMATCH
    _emit(payload, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
