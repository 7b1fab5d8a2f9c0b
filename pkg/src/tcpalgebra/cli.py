"""Command-line front end: ``tcp <subcommand> ...``.

Exit codes: 0 success, 1 a check found a violation, 2 usage or input
error, 3 a resource bound was hit.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

from . import models
from .errors import DepthExceeded, StateBoundExceeded, TcpError, UnknownName, UnknownState
from .kernel import Alphabet, Label, free_vars, sort_of
from .lts import DEFAULT_MAX_STATES, deadlocks, find_path, isomorphic, sem
from .sos import step
from .syntax import ModelFile, json_to_lts, lts_to_dot, lts_to_json, parse_model, print_expr, print_model
from .verify import builtin_corpus, check_prop2_star, check_prop2_tensor, check_wire_laws, discrepancy, synth_expr

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3


class _Usage(Exception):
    pass


def format_label(lab: Label) -> str:
    return f"⟨{','.join(lab.left)} / {','.join(lab.right)}⟩"


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def _load(path) -> ModelFile:
    return parse_model(_read(path))


def _select(model: ModelFile, name):
    if not model.definitions:
        raise _Usage("model has no definitions")
    if name is None:
        name = list(model.definitions)[-1]
    return name, model[name]


def _emit(args, text):
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_parse(args):
    model = _load(args.file)
    lines = [f"alphabet: {', '.join(model.alphabet.actions)}"]
    for name, e in model.definitions.items():
        s = sort_of(e)
        lines.append(f"{name}:{s.left}->{s.right}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_steps(args):
    name, e = _select(_load(args.file), args.defn)
    if free_vars(e):
        print(f"warning: {name} has free variables, which have no transitions", file=sys.stderr)
    lines = [f"{format_label(st.label)} → {print_expr(st.target)}" for st in step(e)]
    _emit(args, "".join(line + "\n" for line in lines))
    return EXIT_OK


def cmd_sem(args):
    model = _load(args.file)
    _, e = _select(model, args.defn)
    t = sem(e, args.max_states, model.alphabet)
    _emit(args, lts_to_dot(t) if args.format == "dot" else lts_to_json(t))
    return EXIT_OK


def cmd_analyze(args):
    model = _load(args.file)
    name, e = _select(model, args.defn)
    t = sem(e, args.max_states, model.alphabet)
    stuck = deadlocks(t)
    out = [f"{name}: {len(t.states)} states, {len(t.transitions)} transitions", f"deadlocks: {len(stuck)}"]
    for x in stuck:
        out.append(f"  state {x}: {t.payload[x]}")
    out.append("return paths to the initial state:")
    for x in t.states:
        if x == t.initial:
            continue
        path = find_path(t, x, t.initial)
        if path is None:
            out.append(f"  state {x}: none")
        else:
            trail = " ".join(f"{tr.source}->{tr.target}" for tr in path)
            noun = "step" if len(path) == 1 else "steps"
            out.append(f"  state {x}: {len(path)} {noun} ({trail})")
    _emit(args, "\n".join(out) + "\n")
    return EXIT_VIOLATION if (stuck and args.fail_on_deadlock) else EXIT_OK


def cmd_iso(args):
    a, b = json_to_lts(_read(args.lhs)), json_to_lts(_read(args.rhs))
    theta = isomorphic(a, b)
    if theta is None:
        _emit(args, f"not isomorphic: {json.dumps(discrepancy(a, b), ensure_ascii=False)}\n")
        return EXIT_VIOLATION
    pairs = ", ".join(f"{x}->{theta[x]}" for x in a.states)
    _emit(args, f"isomorphic\n{pairs}\n")
    return EXIT_OK


def cmd_synth(args):
    t = json_to_lts(_read(args.lts))
    state = t.initial
    if args.state is not None:
        by_text = {str(x): x for x in t.states}
        if args.state not in by_text:
            raise UnknownState(f"unknown state {args.state!r}")
        state = by_text[args.state]
    model = ModelFile(Alphabet(t.alphabet), {args.name: synth_expr(t, state)})
    _emit(args, print_model(model))
    return EXIT_OK


def _file_reports(model: ModelFile, max_states):
    reports = check_wire_laws(model.alphabet)
    defs = list(model.definitions.items())
    for (n1, p), (n2, q) in itertools.product(defs, repeat=2):
        reports.append(check_prop2_tensor(p, q, max_states))
        reports[-1].law += f" [{n1}, {n2}]"
        if sort_of(p).right == sort_of(q).left:
            reports.append(check_prop2_star(p, q, max_states))
            reports[-1].law += f" [{n1}, {n2}]"
    return reports


def cmd_verify(args):
    if args.builtin == (args.file is not None):
        raise _Usage("give either a model file or --builtin")
    if args.builtin:
        reports = builtin_corpus(args.seed, args.samples)
    else:
        reports = _file_reports(_load(args.file), args.max_states)
    failed = [r for r in reports if not r.holds]
    if args.format == "json":
        text = json.dumps([r.to_dict() for r in reports], indent=2, ensure_ascii=False) + "\n"
    else:
        lines = [r.to_text() for r in reports]
        lines.append(f"{len(reports) - len(failed)}/{len(reports)} checks hold")
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_examples(args):
    if args.name is None:
        _emit(args, "".join(n + "\n" for n in models.available()))
        return EXIT_OK
    name = args.name if args.name.endswith(".tcp") else args.name + ".tcp"
    if name not in models.available():
        raise UnknownName(f"no bundled model {args.name!r}")
    _emit(args, models.model_text(name))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tcp", description="TCP process algebra engine")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True, defn=False, states=False):
        if model:
            p.add_argument("file", help="model file (.tcp)")
        if defn:
            p.add_argument("--def", dest="defn", metavar="NAME", help="definition to use (default: the last one)")
        if states:
            p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
        p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    p = sub.add_parser("parse", help="check a model and list its definitions")
    common(p)
    p.set_defaults(run=cmd_parse)

    p = sub.add_parser("steps", help="one-step transitions of a definition")
    common(p, defn=True)
    p.set_defaults(run=cmd_steps)

    p = sub.add_parser("sem", help="reachable LTS of a definition")
    common(p, defn=True, states=True)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(run=cmd_sem)

    p = sub.add_parser("analyze", help="deadlocks and return paths")
    common(p, defn=True, states=True)
    p.add_argument("--fail-on-deadlock", action="store_true", help="exit 1 when a deadlock exists")
    p.set_defaults(run=cmd_analyze)

    p = sub.add_parser("iso", help="compare two LTS documents up to isomorphism")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(run=cmd_iso)

    p = sub.add_parser("synth", help="expression whose semantics is a given LTS")
    p.add_argument("lts", help="LTS document (.json)")
    p.add_argument("--state", help="state to start from (default: the initial state)")
    p.add_argument("--name", default="Synth", help="name of the emitted definition")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(run=cmd_synth)

    p = sub.add_parser("verify", help="check compositionality and wire laws")
    p.add_argument("file", nargs="?", help="model file; checks pairs of its definitions")
    p.add_argument("--builtin", action="store_true", help="run the bundled corpus instead")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=200, help="random pairs in the built-in corpus")
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("examples", help="list or print the bundled models")
    p.add_argument("name", nargs="?")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(run=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (StateBoundExceeded, DepthExceeded) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (TcpError, _Usage) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
