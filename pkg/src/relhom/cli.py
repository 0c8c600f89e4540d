"""The ``relhom`` command line.

Every command builds a JSON-ready result with a ``status`` of ``pass``,
``finding`` or ``fail``.  Exit codes: 0 when everything passes, 1 when a
finding or failure is present, 2 on input errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Callable, Sequence

from . import __version__
from . import diagnostics as dg
from .algebra import Module, validate_algebra, validate_module
from .homtensor import is_semidualizing
from .io import Instance, InstanceError, dumps, load_instance, load_shipped_corpus
from .relative import (
    ApproxClass,
    UncertifiedClass,
    e_l_dim,
    injective_class,
    l_dim,
    projective_class,
    relative_ext_dims,
)
from .resolutions import default_cutoff, dim_to_json, ext_dims, inj_dim, proj_dim

STATUS_ORDER = {"pass": 0, "finding": 1, "fail": 2}


def worst(statuses) -> str:
    return max(statuses, key=STATUS_ORDER.__getitem__, default="pass")


class Context:
    def __init__(self, inst: Instance, algebra: str | None, cutoff: int, resolve: bool = True):
        self.inst = inst
        self.alg = inst.algebra(algebra) if resolve else algebra
        self.cutoff = cutoff

    def module(self, name: str) -> Module:
        return self.inst.module(name, self.alg)

    def family(self) -> list[Module]:
        return [self.inst.modules[k] for k in self.inst.module_names(self.alg)]

    def cls(self, spec: str, certify: bool = True) -> ApproxClass:
        a = self.inst.algebras[self.alg]
        if spec in ("proj", "projectives"):
            c = projective_class(a)
        elif spec in ("inj", "injectives"):
            c = injective_class(a)
        elif spec in self.inst.classes:
            kind, witness = self.inst.classes[spec]
            c = ApproxClass(kind, self.inst.modules[witness])
        elif ":" in spec:
            kind, _, name = spec.partition(":")
            if kind not in ("add", "prod"):
                raise InstanceError("/classes", f"unknown class kind {kind!r} in {spec!r}")
            c = ApproxClass(kind, self.module(name))
        else:
            raise InstanceError("/classes", f"cannot parse class {spec!r}; use add:NAME, prod:NAME, proj or inj")
        return c.certified(self.cutoff) if certify else c


def _report_result(rep: dg.TheoremReport, **extra) -> dict:
    out = rep.to_json()
    out.update(extra)
    out["status"] = rep.overall
    return out


# --------------------------------------------------------------------------
# command implementations; each takes the context and a dict of options


def cmd_validate(ctx: Context, opts: dict) -> dict:
    inst = ctx.inst
    algebras = {}
    for name, a in inst.algebras.items():
        r = validate_algebra(a)
        algebras[name] = {"dim": a.dim, "p": a.p, "commutative": r.commutative, "valid": r.valid}
    modules = {}
    for name, m in inst.modules.items():
        modules[name] = {"dim": m.dim, "valid": validate_module(m).valid}
    ok = all(v["valid"] for v in algebras.values()) and all(v["valid"] for v in modules.values())
    return {"command": "validate", "algebras": algebras, "modules": modules, "status": "pass" if ok else "fail"}


def cmd_dim(ctx: Context, opts: dict) -> dict:
    cls = ctx.cls(opts["class"])
    m = ctx.module(opts["module"])
    left = cls.kind == "add"
    ld = l_dim(cls, m, ctx.cutoff)
    ed = e_l_dim(cls, m, ctx.cutoff)
    names = ("l_dim", "e_l_dim") if left else ("r_dim", "e_r_dim")
    out = {
        "command": "dim",
        "class": repr(cls),
        "module": m.name,
        "cutoff": ctx.cutoff,
        names[0]: dim_to_json(ld),
        names[1]: dim_to_json(ed),
        "status": "pass" if ld == ed else "finding",
    }
    if ld != ed:
        out["findings"] = [f"{names[0]} and {names[1]} differ"]
    return out


def cmd_ext(ctx: Context, opts: dict) -> dict:
    m, n = ctx.module(opts["M"]), ctx.module(opts["N"])
    upto = opts.get("upto") or 4
    return {
        "command": "ext",
        "M": m.name,
        "N": n.name,
        "dims": ext_dims(m, n, upto),
        "proj_dim_M": dim_to_json(proj_dim(m, ctx.cutoff)),
        "inj_dim_N": dim_to_json(inj_dim(n, ctx.cutoff)),
        "status": "pass",
    }


def cmd_relext(ctx: Context, opts: dict) -> dict:
    cls = ctx.cls(opts["class"])
    m, n = ctx.module(opts["M"]), ctx.module(opts["N"])
    upto = opts.get("upto") or 4
    return {
        "command": "relext",
        "class": repr(cls),
        "M": m.name,
        "N": n.name,
        "dims": relative_ext_dims(cls, m, n, upto),
        "status": "pass",
    }


def check_semidualizing(ctx: Context, opts: dict) -> dict:
    c = ctx.module(opts["C"])
    return _report_result(dg.check_semidualizing(c, ctx.cutoff), summary=is_semidualizing(c, ctx.cutoff).summary())


def check_hom_faithful(ctx: Context, opts: dict) -> dict:
    return _report_result(dg.check_hom_faithful(ctx.cls(opts["class"], certify=False), ctx.family()))


def check_self_orthogonal(ctx: Context, opts: dict) -> dict:
    return _report_result(dg.check_self_orthogonal(ctx.module(opts["C"]), ctx.cutoff))


def check_purity(ctx: Context, opts: dict) -> dict:
    rep = dg.check_prop_4_6(ctx.module(opts["C"]), ctx.module(opts["N"]), ctx.cutoff)
    return _report_result(rep, counts=rep.counts, gen_dim=dim_to_json(rep.gen_dim))


def verify_cor_3_5(ctx: Context, opts: dict) -> dict:
    rep = dg.check_cor_3_5(ctx.module(opts["C"]), ctx.module(opts["M"]), ctx.cutoff)
    return _report_result(rep, table=[list(r) for r in rep.rows])


def verify_thm_5_2(ctx: Context, opts: dict) -> dict:
    return _report_result(dg.check_thm_5_2(ctx.cls(opts["class"]), ctx.module(opts["M"]), ctx.family(), ctx.cutoff))


def verify_prop_2_6(ctx: Context, opts: dict) -> dict:
    return _report_result(dg.check_prop_2_6(ctx.cls(opts["class"]), ctx.module(opts["M"]), ctx.cutoff))


def verify_thm_2_8(ctx: Context, opts: dict) -> dict:
    rep = dg.check_thm_2_8(ctx.cls(opts["class"]), ctx.family(), ctx.cutoff)
    return _report_result(rep, verdicts=rep.verdicts)


def verify_balance(ctx: Context, opts: dict) -> dict:
    x = ctx.cls(opts.get("X") or "proj")
    y = ctx.cls(opts.get("Y") or "inj")
    fam = ctx.family()
    ms = [ctx.module(opts["M"])] if opts.get("M") else fam
    ns = [ctx.module(opts["N"])] if opts.get("N") else fam
    rep = dg.check_balance(x, y, [(m, n) for m in ms for n in ns], opts.get("upto") or 4)
    return _report_result(rep, table=[[m, n, [list(t) for t in rows]] for m, n, rows in rep.rows])


def verify_global_dim(ctx: Context, opts: dict) -> dict:
    rep = dg.check_global_dim(ctx.cls(opts["class"]), ctx.family(), ctx.cutoff)
    return _report_result(
        rep,
        sup=dim_to_json(rep.sup),
        add_equals_projectives=rep.add_equals_projectives,
        generator_caveat=rep.generator_caveat,
    )


CHECKS: dict[str, Callable[[Context, dict], dict]] = {
    "semidualizing": check_semidualizing,
    "hom-faithful": check_hom_faithful,
    "self-orthogonal": check_self_orthogonal,
    "purity": check_purity,
}
VERIFIES: dict[str, Callable[[Context, dict], dict]] = {
    "cor-3-5": verify_cor_3_5,
    "thm-5-2": verify_thm_5_2,
    "prop-2-6": verify_prop_2_6,
    "thm-2-8": verify_thm_2_8,
    "balance": verify_balance,
    "global-dim": verify_global_dim,
}


def run_task(ctx: Context, task: dict) -> dict:
    """Dispatch one task dictionary (the format used in instance files)."""
    command = task["command"]
    try:
        if command in ("check", "verify"):
            table = CHECKS if command == "check" else VERIFIES
            target = task.get("target")
            if target not in table:
                raise InstanceError("/tasks", f"unknown {command} target {target!r}")
            out = table[target](ctx, task)
            out.setdefault("command", f"{command} {target}")
            return out
        if command == "validate":
            return cmd_validate(ctx, task)
        simple = {"validate": cmd_validate, "dim": cmd_dim, "ext": cmd_ext, "relext": cmd_relext}
        if command not in simple:
            raise InstanceError("/tasks", f"unknown command {command!r}")
        return simple[command](ctx, task)
    except UncertifiedClass as exc:
        label = f"{command} {task['target']}" if task.get("target") else command
        return {"command": label, "status": "fail", "findings": [str(exc)]}
    except InstanceError:
        raise
    except ValueError as exc:
        # precondition violations (a map that is not monic, N outside add(C), ...)
        label = f"{command} {task['target']}" if task.get("target") else command
        raise InstanceError("/tasks", f"{label}: {exc}") from None


# --------------------------------------------------------------------------
# the default suite run by ``report`` when the instance lists no tasks


def default_tasks(inst: Instance) -> list[dict]:
    tasks: list[dict] = [{"command": "validate"}]
    for alg, a in inst.algebras.items():
        names = [inst.modules[k].name for k in inst.module_names(alg)]
        add_classes = [c for c, (kind, w) in inst.classes.items() if kind == "add" and inst.module_algebra[w] == alg]
        tasks.append({"command": "verify", "target": "balance", "algebra": alg, "X": "proj", "Y": "inj"})
        for cname in add_classes:
            w = inst.modules[inst.classes[cname][1]].name
            tasks.append({"command": "check", "target": "self-orthogonal", "algebra": alg, "C": w})
            tasks.append({"command": "check", "target": "hom-faithful", "algebra": alg, "class": cname})
            tasks.append({"command": "verify", "target": "thm-2-8", "algebra": alg, "class": cname})
            tasks.append({"command": "verify", "target": "global-dim", "algebra": alg, "class": cname})
            for m in names:
                tasks.append({"command": "verify", "target": "prop-2-6", "algebra": alg, "class": cname, "M": m})
                tasks.append({"command": "verify", "target": "thm-5-2", "algebra": alg, "class": cname, "M": m})
            if a.commutative and is_semidualizing(inst.modules[inst.classes[cname][1]]).verdict:
                tasks.append({"command": "check", "target": "semidualizing", "algebra": alg, "C": w})
                for m in names:
                    tasks.append({"command": "verify", "target": "cor-3-5", "algebra": alg, "C": w, "M": m})
    return tasks


def cmd_report(inst: Instance, cutoff: int, algebra: str | None, canonical: bool) -> dict:
    tasks = inst.tasks or default_tasks(inst)
    results = []
    for i, task in enumerate(tasks):
        ctx = Context(inst, task.get("algebra", algebra), task.get("cutoff", cutoff))
        start = time.perf_counter()
        res = run_task(ctx, task)
        res = {"task": i, "algebra": ctx.alg, **res}
        if not canonical:
            print(f"[{i + 1}/{len(tasks)}] {res.get('command')} {ctx.alg}: {res['status']} "
                  f"({time.perf_counter() - start:.2f}s)", file=sys.stderr)
        results.append(res)
    return {"command": "report", "cutoff": cutoff, "results": results, "status": worst(r["status"] for r in results)}


# --------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def render_text(result: dict) -> str:
    """Aligned key/value text; nested reports are rendered one per block."""
    if result.get("command") == "report":
        blocks = [render_text(r) for r in result["results"]]
        blocks.append(f"overall: {result['status']}")
        return "\n\n".join(blocks) + "\n"
    lines = []
    scalars = [(k, v) for k, v in result.items() if not isinstance(v, (dict, list)) or k in ("dims",)]
    width = max((len(k) for k, _ in scalars), default=0)
    for k, v in scalars:
        lines.append(f"{k.ljust(width)}  {_fmt(v)}")
    if "table" in result:
        rows = [[_fmt(c) for c in row] for row in result["table"]]
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))] if rows else []
        for r in rows:
            lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(r, widths)))
    for a in result.get("assertions", []):
        lines.append(f"  [{a['verdict']}] {a['claim']}")
    for f in result.get("findings", []):
        lines.append(f"  finding: {f}")
    for f in result.get("notes", []):
        lines.append(f"  note: {f}")
    return "\n".join(lines) + "\n"


def emit(result: dict, fmt: str) -> None:
    sys.stdout.write(dumps(result) if fmt == "json" else render_text(result))


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", help="instance JSON file (default: the shipped corpus)")
    common.add_argument("--algebra", help="algebra name inside the instance")
    common.add_argument("--cutoff", type=int, help="dimension cutoff (default: $RELHOM_CUTOFF or 6)")
    common.add_argument("--canonical", action="store_true", help="deterministic output, no timing")
    common.add_argument("--format", choices=("json", "text"), default="text")

    parser = argparse.ArgumentParser(prog="relhom", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"relhom {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate instance files")
    p.add_argument("files", nargs="*")

    p = sub.add_parser("dim", parents=[common], help="relative dimensions of a module")
    p.add_argument("--class", dest="class_", required=True)
    p.add_argument("--module", required=True)

    p = sub.add_parser("ext", parents=[common], help="classical Ext dimensions")
    p.add_argument("--M", required=True)
    p.add_argument("--N", required=True)
    p.add_argument("--upto", type=int, default=4)

    p = sub.add_parser("relext", parents=[common], help="relative Ext dimensions")
    p.add_argument("--class", dest="class_", required=True)
    p.add_argument("--M", required=True)
    p.add_argument("--N", required=True)
    p.add_argument("--upto", type=int, default=4)

    p = sub.add_parser("check", parents=[common], help="hypothesis checks")
    p.add_argument("target", choices=sorted(CHECKS))
    p.add_argument("--C")
    p.add_argument("--N")
    p.add_argument("--class", dest="class_")

    p = sub.add_parser("verify", parents=[common], help="theorem verification on instances")
    p.add_argument("target", choices=sorted(VERIFIES))
    p.add_argument("--C")
    p.add_argument("--M")
    p.add_argument("--N")
    p.add_argument("--X")
    p.add_argument("--Y")
    p.add_argument("--class", dest="class_")
    p.add_argument("--upto", type=int)

    p = sub.add_parser("report", parents=[common], help="run the tasks of an instance (or the default suite)")
    p.add_argument("file", nargs="?")
    return parser


REQUIRED = {
    ("check", "semidualizing"): ("C",),
    ("check", "hom-faithful"): ("class",),
    ("check", "self-orthogonal"): ("C",),
    ("check", "purity"): ("C", "N"),
    ("verify", "cor-3-5"): ("C", "M"),
    ("verify", "thm-5-2"): ("class", "M"),
    ("verify", "prop-2-6"): ("class", "M"),
    ("verify", "thm-2-8"): ("class",),
    ("verify", "global-dim"): ("class",),
    ("verify", "balance"): (),
}


def _load(path: str | None) -> Instance:
    return load_instance(path) if path else load_shipped_corpus()


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cutoff = args.cutoff if args.cutoff is not None else default_cutoff()
    try:
        if args.command == "validate":
            paths = args.files or [args.instance]
            results = []
            for path in paths:
                res = cmd_validate(Context(_load(path), None, cutoff, resolve=False), {})
                res["file"] = path or "corpus.json"
                results.append(res)
            result = results[0] if len(results) == 1 else {
                "command": "validate", "results": results, "status": worst(r["status"] for r in results)}
        elif args.command == "report":
            inst = _load(args.file or args.instance)
            result = cmd_report(inst, cutoff, args.algebra, args.canonical)
        else:
            inst = _load(args.instance)
            ctx = Context(inst, args.algebra, cutoff)
            opts = {k.rstrip("_"): v for k, v in vars(args).items() if v is not None}
            if args.command in ("check", "verify"):
                for need in REQUIRED[(args.command, args.target)]:
                    if need not in opts:
                        parser.error(f"{args.command} {args.target} needs --{need}")
            if args.command == "dim":
                opts["module"] = args.module
            result = run_task(ctx, {**opts, "command": args.command})
    except InstanceError as exc:
        print(f"relhom: input error at {exc.pointer}: {exc.message}", file=sys.stderr)
        return 2
    emit(result, args.format)
    return 0 if result["status"] == "pass" else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
