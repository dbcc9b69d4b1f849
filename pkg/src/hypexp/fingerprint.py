"""Character-table queries and the data-driven candidate-group eliminations.

The bundled JSON tables give, for each candidate group, its degree-23
rational character on conjugacy classes (rational-class granularity),
element orders, class sizes, and power maps for the primes up to 7.
`identify` feeds a sequence of Frobenius traces through every table and
reports, per group, the classes whose power-trace profile matches.

Candidate list (fixed): A24, S24, M24, PSL2(23), PGL2(23), Co3, Co2.
Groups whose degree-23 characters are irrational (an extraspecial
normalizer, PSL2(47)) cannot carry an integer trace sequence and are
excluded up front.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path

DEFAULT_DATA_DIR = Path(__file__).parent / "data"
DATA_DIR_ENV = "HYPEXP_DATA_DIR"

CANDIDATE_FILES = {
    "A24": "a24.json",
    "S24": "s24.json",
    "M24": "m24.json",
    "PSL2(23)": "psl2_23.json",
    "PGL2(23)": "pgl2_23.json",
    "Co3": "co3.json",
    "Co2": "co2.json",
}

POWER_MAP_PRIMES = (2, 3, 5, 7)


class SchemaError(ValueError):
    """The table file does not match the expected JSON schema."""


class InvariantViolation(ValueError):
    """The table data violates a character-table invariant."""


class MissingPowerMap(KeyError):
    """A required prime power map is absent."""


@dataclass(frozen=True)
class ClassData:
    name: str
    order: int
    size: int
    chi: int
    power_maps: dict


@dataclass
class CharTable:
    group_name: str
    group_order: int
    degree: int
    classes: list
    aliases: dict

    def class_named(self, name: str) -> ClassData:
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError(f"{self.group_name} has no class {name!r}")

    def resolve_alias(self, paper_name: str) -> ClassData:
        return self.class_named(self.aliases.get(paper_name, paper_name))

    @property
    def min_chi(self) -> int:
        return min(c.chi for c in self.classes)


def data_dir() -> Path:
    return Path(os.environ.get(DATA_DIR_ENV, DEFAULT_DATA_DIR))


def load_table(path) -> CharTable:
    """Load and fully validate a character-table file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    for key in ("group", "group_order", "degree", "classes", "aliases"):
        if key not in raw:
            raise SchemaError(f"{path}: missing top-level key {key!r}")
    if raw["degree"] != 23:
        raise SchemaError(f"{path}: degree {raw['degree']} != 23")
    classes = []
    for c in raw["classes"]:
        for key in ("name", "order", "size", "chi", "power_maps"):
            if key not in c:
                raise SchemaError(f"{path}: class entry missing {key!r}")
        if not isinstance(c["chi"], int):
            raise SchemaError(f"{path}: class {c['name']}: chi must be an integer")
        pm = {}
        for ell in POWER_MAP_PRIMES:
            if str(ell) not in c["power_maps"]:
                raise SchemaError(f"{path}: class {c['name']} lacks power map {ell}")
            pm[ell] = c["power_maps"][str(ell)]
        classes.append(ClassData(c["name"], c["order"], c["size"], c["chi"], pm))
    table = CharTable(raw["group"], raw["group_order"], raw["degree"],
                      classes, dict(raw["aliases"]))
    _validate(table)
    return table


def _validate(table: CharTable):
    names = {c.name for c in table.classes}
    if len(names) != len(table.classes):
        raise InvariantViolation(f"{table.group_name}: duplicate class names")
    ident = [c for c in table.classes if c.order == 1]
    if len(ident) != 1 or ident[0].chi != 23:
        raise InvariantViolation(f"{table.group_name}: identity class must have chi 23")
    by_name = {c.name: c for c in table.classes}
    for c in table.classes:
        for ell, target in c.power_maps.items():
            if target not in names:
                raise InvariantViolation(
                    f"{table.group_name}: class {c.name}: power map {ell} "
                    f"points to unknown class {target!r}")
            t = by_name[target]
            if t.order != c.order // gcd(c.order, ell):
                raise InvariantViolation(
                    f"{table.group_name}: class {c.name}: order of {ell}-th power "
                    f"is {t.order}, expected {c.order // gcd(c.order, ell)}")
    total = sum(c.size for c in table.classes)
    if total != table.group_order:
        raise InvariantViolation(
            f"{table.group_name}: class sizes sum to {total}, not |G|")
    if sum(c.size * c.chi for c in table.classes) != 0:
        raise InvariantViolation(
            f"{table.group_name}: chi is not orthogonal to the trivial character")
    if sum(c.size * c.chi ** 2 for c in table.classes) != table.group_order:
        raise InvariantViolation(f"{table.group_name}: chi has norm != 1")
    for name, target in table.aliases.items():
        if target not in names:
            raise InvariantViolation(
                f"{table.group_name}: alias {name!r} -> unknown class {target!r}")


def load_candidates(directory=None) -> list:
    """The fixed candidate tables, from the data directory."""
    base = Path(directory) if directory is not None else data_dir()
    return [load_table(base / fname) for fname in CANDIDATE_FILES.values()]


# ---------------------------------------------------------------------------
# trace sequences and matching
# ---------------------------------------------------------------------------

def _decompose_power(k: int):
    """k as a list of primes <= 7 (e.g. 6 -> [2, 3]); None if impossible."""
    out = []
    for ell in POWER_MAP_PRIMES:
        while k % ell == 0:
            out.append(ell)
            k //= ell
    return out if k == 1 else None


def trace_sequence_of_class(table: CharTable, c, kmax: int) -> list:
    """(chi(c), chi(c^2), ..., chi(c^kmax)) via prime power-map composition."""
    if isinstance(c, str):
        c = table.class_named(c)
    by_name = {cl.name: cl for cl in table.classes}
    out = []
    for k in range(1, kmax + 1):
        primes = _decompose_power(k)
        if primes is None:
            raise MissingPowerMap(
                f"power {k} needs a prime factor beyond {POWER_MAP_PRIMES}")
        cur = c
        for ell in primes:
            cur = by_name[cur.power_maps[ell]]
        out.append(cur.chi)
    return out


def find_classes_matching(table: CharTable, seq) -> list:
    """Classes whose trace sequence equals seq exactly."""
    seq = [int(x) for x in seq]
    out = []
    for c in table.classes:
        if trace_sequence_of_class(table, c, len(seq)) == seq:
            out.append(c)
    return out


@dataclass
class GroupVerdict:
    group: str
    admits: list
    reason: str = ""


@dataclass
class IdentificationReport:
    sequence: list
    verdicts: dict = field(default_factory=dict)

    @property
    def admitted_groups(self) -> list:
        return sorted(g for g, v in self.verdicts.items() if v.admits)

    def to_json(self) -> str:
        return json.dumps({
            "sequence": self.sequence,
            "admitted_groups": self.admitted_groups,
            "verdicts": {
                g: {"admits": [c.name for c in v.admits], "reason": v.reason}
                for g, v in sorted(self.verdicts.items())
            },
        }, sort_keys=True)


def _elimination_reason(table: CharTable, seq) -> str:
    if min(seq) < table.min_chi:
        return (f"min-value rule: chi >= {table.min_chi} on {table.group_name} "
                f"but the sequence contains {min(seq)}")
    # near-miss diagnosis along the final trace
    last = seq[-1]
    k = len(seq)
    finals = [c for c in table.classes if c.chi == last]
    by_name = {cl.name: cl for cl in table.classes}
    primes = _decompose_power(k)
    hits = []
    for c in table.classes:
        cur = c
        for ell in primes:
            cur = by_name[cur.power_maps[ell]]
        if cur.chi == last:
            hits.append(c)
    details = []
    for c in hits:
        got = trace_sequence_of_class(table, c, k)
        bad = next(i for i in range(k) if got[i] != seq[i])
        details.append(f"class {c.name} fails at power {bad + 1} "
                       f"(trace {got[bad]}, needed {seq[bad]})")
    if not hits:
        return (f"no class has its {k}-th power on a class of trace {last} "
                f"(classes of trace {last}: {[c.name for c in finals] or 'none'})")
    return "; ".join(details)


def identify(tables, seq) -> IdentificationReport:
    """Per-group admits/eliminated verdicts for a trace sequence."""
    seq = [int(x) for x in seq]
    report = IdentificationReport(seq)
    for table in tables:
        admits = find_classes_matching(table, seq)
        reason = "" if admits else _elimination_reason(table, seq)
        report.verdicts[table.group_name] = GroupVerdict(table.group_name, admits, reason)
    return report
