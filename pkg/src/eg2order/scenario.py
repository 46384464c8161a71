"""Scenario and chain files (JSON) and run records."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone

from eg2order import __version__
from eg2order.core import DomainError, EG2Params
from eg2order.majorization import ParamMatrix, TTransform
from eg2order.orders import DEFAULT_GRID, DEFAULT_TOL, GridSpec
from eg2order.systems import ComponentSet, SystemKind

MAX_COMPONENTS = 10_000
ORDERS = ("st", "fr", "rf", "lr")


class ScenarioError(ValueError):
    pass


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if text.splitlines() else ""
        raise ScenarioError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}") from None


def _expect(obj, where, required, optional=()):
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where}: expected an object")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise ScenarioError(f"{where}: unknown key(s) {', '.join(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise ScenarioError(f"{where}: missing key(s) {', '.join(missing)}")


def _number(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(f"{where}: expected a number, got {v!r}")
    return float(v)


def _components(raw, where):
    if not isinstance(raw, list) or not raw:
        raise ScenarioError(f"{where}: expected a non-empty list of components")
    if len(raw) > MAX_COMPONENTS:
        raise ScenarioError(f"{where}: at most {MAX_COMPONENTS} components are supported")
    comps = []
    for k, c in enumerate(raw):
        here = f"{where}[{k}]"
        _expect(c, here, ("theta", "phi", "alpha"))
        vals = [_number(c[key], f"{here}.{key}") for key in ("theta", "phi", "alpha")]
        try:
            comps.append(EG2Params(*vals))
        except DomainError as exc:
            raise ScenarioError(f"{here}: {exc}") from None
    return ComponentSet(tuple(comps))


def _grid(raw, where="grid"):
    if raw is None:
        return DEFAULT_GRID
    _expect(raw, where, (), ("x_min", "x_max", "count", "spacing"))
    d = DEFAULT_GRID.to_dict()
    d.update(raw)
    try:
        return GridSpec(_number(d["x_min"], f"{where}.x_min"), _number(d["x_max"], f"{where}.x_max"),
                        d["count"], d["spacing"])
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"{where}: {exc}") from None


@dataclass(frozen=True)
class Scenario:
    A: ComponentSet
    B: ComponentSet
    kind: SystemKind
    order: str = "st"
    grid: GridSpec = DEFAULT_GRID
    tol: float = DEFAULT_TOL
    name: str = ""

    @classmethod
    def from_dict(cls, raw, where="scenario"):
        _expect(raw, where, ("A", "B", "kind"), ("order", "grid", "tolerances", "name", "description"))
        try:
            kind = SystemKind.parse(raw["kind"])
        except ValueError as exc:
            raise ScenarioError(f"{where}.kind: {exc}") from None
        order = raw.get("order", "st")
        if order not in ORDERS:
            raise ScenarioError(f"{where}.order: expected one of {', '.join(ORDERS)}, got {order!r}")
        tol = DEFAULT_TOL
        if "tolerances" in raw:
            _expect(raw["tolerances"], f"{where}.tolerances", (), ("dominance",))
            tol = _number(raw["tolerances"].get("dominance", DEFAULT_TOL), f"{where}.tolerances.dominance")
            if not tol > 0:
                raise ScenarioError(f"{where}.tolerances.dominance: must be > 0")
        name = raw.get("name", "")
        if not isinstance(name, str):
            raise ScenarioError(f"{where}.name: expected a string")
        return cls(_components(raw["A"], f"{where}.A"), _components(raw["B"], f"{where}.B"),
                   kind, order, _grid(raw.get("grid")), tol, name)

    def to_dict(self):
        def comps(cs):
            return [{"theta": c.theta, "phi": c.phi, "alpha": c.alpha} for c in cs]
        return {
            "name": self.name,
            "kind": self.kind.value,
            "order": self.order,
            "A": comps(self.A),
            "B": comps(self.B),
            "grid": self.grid.to_dict(),
            "tolerances": {"dominance": self.tol},
        }

    def normalized_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def digest(self):
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()


def load_scenario(path):
    return Scenario.from_dict(_read_json(path), where=str(path))


@dataclass(frozen=True)
class ChainSpec:
    start: ParamMatrix
    target_set: str
    transforms: tuple
    phi: float = 2.0


def load_chain(path):
    raw = _read_json(path)
    where = str(path)
    _expect(raw, where, ("A", "set", "transforms"), ("phi", "name", "description"))
    _expect(raw["A"], f"{where}.A", ("alphas", "thetas"))
    try:
        start = ParamMatrix(raw["A"]["alphas"], raw["A"]["thetas"])
    except (ValueError, TypeError, DomainError) as exc:
        raise ScenarioError(f"{where}.A: {exc}") from None
    target = raw["set"]
    if target not in ("S", "T"):
        raise ScenarioError(f"{where}.set: expected 'S' or 'T', got {target!r}")
    if not isinstance(raw["transforms"], list):
        raise ScenarioError(f"{where}.transforms: expected a list")
    ts = []
    for k, t in enumerate(raw["transforms"]):
        here = f"{where}.transforms[{k}]"
        _expect(t, here, ("i", "j", "w"))
        if not all(isinstance(t[key], int) and not isinstance(t[key], bool) for key in ("i", "j")):
            raise ScenarioError(f"{here}: i and j must be integers")
        try:
            ts.append(TTransform(start.n, t["i"], t["j"], _number(t["w"], f"{here}.w")))
        except ValueError as exc:
            raise ScenarioError(f"{here}: {exc}") from None
    phi = _number(raw.get("phi", 2.0), f"{where}.phi")
    if not phi > 0:
        raise ScenarioError(f"{where}.phi: must be > 0")
    return ChainSpec(start, target, tuple(ts), phi)


@dataclass(frozen=True)
class RunRecord:
    digest: str
    verdict: str
    crossings: tuple
    timestamp: str
    version: str = __version__

    @classmethod
    def now(cls, digest, verdict, crossings):
        ts = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return cls(digest, verdict, tuple(crossings), ts)

    def to_json(self):
        return json.dumps({"digest": self.digest, "verdict": self.verdict,
                           "crossings": [list(c) for c in self.crossings],
                           "timestamp": self.timestamp, "version": self.version},
                          indent=2) + "\n"
