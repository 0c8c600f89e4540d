"""JSON instance files: loading with path-addressed errors, and writing.

An instance file looks like::

    {
      "p": 2,
      "default_algebra": "R3",
      "algebras": {"R3": {"dim": 3, "index_order": "ijk",
                          "structure_constants": [...n^3 integers...],
                          "unit": [1, 0, 0]}},
      "modules": {"R3/k": {"algebra": "R3", "dim": 1,
                           "action": [[[1]], [[0]], [[0]]]}},
      "classes": {"add_omega": {"kind": "add", "witness": "R3/omega"}},
      "tasks": [{"command": "verify", "target": "cor-3-5", "C": "omega", "M": "k"}]
    }

``structure_constants`` is flat in ``[i][j][k]`` order: entry
``(i*n + j)*n + k`` is the coefficient of ``b_k`` in ``b_i b_j``.  An
algebra may carry its own ``"p"``, overriding the file-level field.
Module keys may be qualified as ``"<algebra>/<name>"``; lookups accept the
short name together with an algebra.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .algebra import Algebra, Module, validate_algebra, validate_module
from .linalg import is_prime

FORMAT = "relhom-instance/1"


class InstanceError(ValueError):
    """A schema or validation problem, located by a JSON-pointer path."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"
        self.message = message


def _ptr(*parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


@dataclass
class Instance:
    p: int
    algebras: dict[str, Algebra]
    modules: dict[str, Module]
    module_algebra: dict[str, str]
    classes: dict[str, tuple[str, str]] = field(default_factory=dict)
    tasks: list[dict] = field(default_factory=list)
    default_algebra: str | None = None

    def algebra(self, name: str | None) -> str:
        name = name or self.default_algebra
        if name is None:
            if len(self.algebras) == 1:
                return next(iter(self.algebras))
            raise InstanceError("/algebras", "several algebras and no default: pass an algebra name")
        if name not in self.algebras:
            raise InstanceError(_ptr("algebras", name), "unknown algebra")
        return name

    def module(self, name: str, algebra: str | None = None) -> Module:
        if name in self.modules and (algebra is None or self.module_algebra[name] == algebra):
            return self.modules[name]
        alg = self.algebra(algebra)
        key = f"{alg}/{name}"
        if key in self.modules:
            return self.modules[key]
        raise InstanceError(_ptr("modules", name), f"unknown module over {alg}")

    def module_names(self, algebra: str | None = None) -> list[str]:
        alg = self.algebra(algebra)
        return [k for k, a in self.module_algebra.items() if a == alg]


# --------------------------------------------------------------------------
# reading


def _int_array(value: Any, pointer: str, shape: tuple[int, ...]) -> np.ndarray:
    try:
        arr = np.array(value, dtype=object)
    except Exception as exc:  # ragged nesting
        raise InstanceError(pointer, f"not a rectangular integer array ({exc})") from None
    if arr.shape != shape:
        raise InstanceError(pointer, f"expected shape {list(shape)}, got {list(arr.shape)}")
    flat = arr.reshape(-1)
    for idx, v in enumerate(flat):
        if isinstance(v, bool) or not isinstance(v, int):
            where = np.unravel_index(idx, shape) if shape else ()
            raise InstanceError(pointer + _ptr(*[int(i) for i in where]), f"expected an integer, got {v!r}")
    return arr.astype(np.int64)


def _require(obj: dict, key: str, pointer: str, kind: type):
    if not isinstance(obj, dict):
        raise InstanceError(pointer, "expected an object")
    if key not in obj:
        raise InstanceError(pointer + _ptr(key), "missing field")
    val = obj[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise InstanceError(pointer + _ptr(key), f"expected an integer, got {val!r}")
    if kind is not int and not isinstance(val, kind):
        raise InstanceError(pointer + _ptr(key), f"expected {kind.__name__}")
    return val


def _prime(value: int, pointer: str) -> int:
    if not is_prime(value) or value > 97:
        raise InstanceError(pointer, f"{value} is not a prime <= 97")
    return value


def instance_from_json(data: Any) -> Instance:
    if not isinstance(data, dict):
        raise InstanceError("", "an instance must be a JSON object")
    p = _prime(_require(data, "p", "", int), "/p")
    algebras: dict[str, Algebra] = {}
    for name, spec in _require(data, "algebras", "", dict).items():
        ptr = _ptr("algebras", name)
        ap = _prime(_require(spec, "p", ptr, int), ptr + "/p") if "p" in spec else p
        n = _require(spec, "dim", ptr, int)
        if n < 1:
            raise InstanceError(ptr + "/dim", "dimension must be positive")
        if spec.get("index_order", "ijk") != "ijk":
            raise InstanceError(ptr + "/index_order", "only [i][j][k] order is supported")
        consts = _int_array(_require(spec, "structure_constants", ptr, list), ptr + "/structure_constants", (n**3,))
        unit = _int_array(_require(spec, "unit", ptr, list), ptr + "/unit", (n,))
        alg = Algebra(ap, consts.reshape(n, n, n), unit, name)
        report = validate_algebra(alg)
        if not report.valid:
            raise InstanceError(ptr, "; ".join(report.violations))
        algebras[name] = alg

    modules: dict[str, Module] = {}
    owner: dict[str, str] = {}
    for name, spec in _require(data, "modules", "", dict).items():
        ptr = _ptr("modules", name)
        alg_name = _require(spec, "algebra", ptr, str)
        if alg_name not in algebras:
            raise InstanceError(ptr + "/algebra", f"unknown algebra {alg_name!r}")
        a = algebras[alg_name]
        m = _require(spec, "dim", ptr, int)
        if m < 0:
            raise InstanceError(ptr + "/dim", "dimension must be nonnegative")
        action = _int_array(_require(spec, "action", ptr, list), ptr + "/action", (a.dim, m, m)) if m else np.zeros((a.dim, 0, 0), dtype=np.int64)
        short = spec.get("name", name.split("/")[-1])
        mod = Module(a, action, short)
        report = validate_module(mod)
        if not report.valid:
            raise InstanceError(ptr, "; ".join(report.violations))
        modules[name] = mod
        owner[name] = alg_name

    classes: dict[str, tuple[str, str]] = {}
    for name, spec in data.get("classes", {}).items():
        ptr = _ptr("classes", name)
        kind = _require(spec, "kind", ptr, str)
        if kind not in ("add", "prod"):
            raise InstanceError(ptr + "/kind", f"unknown class kind {kind!r}")
        witness = _require(spec, "witness", ptr, str)
        if witness not in modules:
            raise InstanceError(ptr + "/witness", f"unknown module {witness!r}")
        classes[name] = (kind, witness)

    tasks = data.get("tasks", [])
    if not isinstance(tasks, list):
        raise InstanceError("/tasks", "expected a list")
    for i, t in enumerate(tasks):
        _require(t, "command", _ptr("tasks", i), str)

    default = data.get("default_algebra")
    if default is not None and default not in algebras:
        raise InstanceError("/default_algebra", f"unknown algebra {default!r}")
    return Instance(p, algebras, modules, owner, classes, tasks, default)


def load_instance(path: str | Path) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError("", f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return instance_from_json(data)


# --------------------------------------------------------------------------
# writing


def algebra_to_json(a: Algebra, p: int | None = None) -> dict:
    out = {
        "dim": a.dim,
        "index_order": "ijk",
        "structure_constants": a.structure_constants.reshape(-1).tolist(),
        "unit": a.unit.tolist(),
    }
    if p is None or a.p != p:
        out = {"p": a.p, **out}
    return out


def module_to_json(m: Module, algebra_name: str) -> dict:
    return {"algebra": algebra_name, "name": m.name, "dim": m.dim, "action": m.action.tolist()}


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def corpus_instance() -> dict:
    """The built-in corpus as an instance document."""
    from .corpus import all_corpora

    doc: dict = {"format": FORMAT, "p": 2, "default_algebra": "R3", "algebras": {}, "modules": {}, "classes": {}}
    for cname, corp in all_corpora().items():
        doc["algebras"][cname] = algebra_to_json(corp.algebra, 2)
        for mname, m in corp.modules.items():
            doc["modules"][f"{cname}/{mname}"] = module_to_json(m, cname)
        if corp.witness:
            doc["classes"][f"{cname}/add"] = {"kind": "add", "witness": f"{cname}/{corp.witness}"}
    return doc


def shipped_corpus_path() -> Path:
    return Path(str(resources.files("relhom") / "data" / "corpus.json"))


def load_shipped_corpus() -> Instance:
    return load_instance(shipped_corpus_path())
