"""Scenario files: topology, scripted tester events, variants, property.

The format is line oriented.  A line like "nodes:" opens a section and the
following lines are its items, one per line; an item may also sit on the
header line itself.  '#' starts a comment.  Node names are symbolic and map
to ids 1..N in listing order.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, replace
from pathlib import Path

from .core import VariantFlags
from .properties import Property, PropertyError, parse_property


@dataclass(frozen=True)
class InjectPkt:
    at: int
    dest: int
    data: int


@dataclass(frozen=True)
class Connect:
    a: int
    b: int


@dataclass(frozen=True)
class Disconnect:
    a: int
    b: int


TesterEvent = InjectPkt | Connect | Disconnect


class ScenarioError(ValueError):
    """Parse or validation failure, message carries the line number."""


_SECTIONS = ("name", "nodes", "links", "events", "variants", "property")
_RESERVED = {"rt", "delivered", "loop_free", "tester_pc"}


@dataclass(frozen=True)
class Scenario:
    name: str
    node_names: tuple[str, ...]
    links: tuple[tuple[int, int], ...]
    events: tuple[TesterEvent, ...]
    variants: VariantFlags
    property_text: str
    events_sequential_first: bool = False

    @property
    def n(self) -> int:
        return len(self.node_names)

    def id_of(self, name: str) -> int:
        return self.node_names.index(name) + 1

    def name_of(self, ip: int) -> str:
        return self.node_names[ip - 1]

    @property
    def node_ids(self) -> dict[str, int]:
        return {name: i + 1 for i, name in enumerate(self.node_names)}

    def parsed_property(self) -> Property:
        return parse_property(self.property_text, self.node_ids)


def _fail(lineno: int, msg: str):
    raise ScenarioError(f"line {lineno}: {msg}")


_FLAGS = {"true": True, "false": False, "on": True, "off": False}


def parse_scenario(text: str, name: str = "") -> Scenario:
    items: dict[str, list[tuple[int, str]]] = {s: [] for s in _SECTIONS}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(":", 1)
        if len(head) == 2 and head[0].strip() in _SECTIONS:
            section = head[0].strip()
            rest = head[1].strip()
            if rest:
                items[section].append((lineno, rest))
            continue
        if section is None:
            _fail(lineno, f"expected a section header, one of {', '.join(_SECTIONS)}")
        items[section].append((lineno, line))

    if items["name"]:
        if len(items["name"]) > 1:
            _fail(items["name"][1][0], "more than one name")
        name = items["name"][0][1]

    names: list[str] = []
    for lineno, item in items["nodes"]:
        for tok in item.split():
            if not tok.isidentifier():
                _fail(lineno, f"bad node name {tok!r}")
            if tok in _RESERVED:
                _fail(lineno, f"node name {tok!r} is reserved")
            if tok in names:
                _fail(lineno, f"duplicate node {tok!r}")
            names.append(tok)
    if not names:
        _fail(1, "no nodes declared")
    ids = {nm: i + 1 for i, nm in enumerate(names)}

    def node_id(lineno: int, tok: str) -> int:
        if tok not in ids:
            _fail(lineno, f"unknown node {tok!r}")
        return ids[tok]

    links: list[tuple[int, int]] = []
    for lineno, item in items["links"]:
        toks = item.replace("-", " ").split()
        if len(toks) != 2:
            _fail(lineno, f"bad link {item!r} (want two node names)")
        a, b = (node_id(lineno, t) for t in toks)
        if a == b:
            _fail(lineno, f"self-link {toks[0]!r}")
        pair = (min(a, b), max(a, b))
        if pair in links:
            _fail(lineno, f"duplicate link {item!r}")
        links.append(pair)

    events: list[TesterEvent] = []
    auto_payload = 0
    for lineno, item in items["events"]:
        toks = item.split()
        verb = toks[0] if toks else ""
        if verb == "inject" and len(toks) in (3, 4):
            at, dest = node_id(lineno, toks[1]), node_id(lineno, toks[2])
            if at == dest:
                _fail(lineno, f"inject with at == dest ({toks[1]!r})")
            auto_payload += 1
            if len(toks) == 4:
                if not toks[3].lstrip("-").isdigit():
                    _fail(lineno, f"bad payload {toks[3]!r}")
                data = int(toks[3])
            else:
                data = auto_payload
            events.append(InjectPkt(at, dest, data))
        elif verb in ("connect", "disconnect") and len(toks) == 3:
            a, b = node_id(lineno, toks[1]), node_id(lineno, toks[2])
            if a == b:
                _fail(lineno, f"self-link {toks[1]!r}")
            cls = Connect if verb == "connect" else Disconnect
            events.append(cls(min(a, b), max(a, b)))
        else:
            _fail(lineno, f"malformed event {item!r}"
                  " (want: inject FROM DEST [DATA] | connect A B | disconnect A B)")

    variants = VariantFlags()
    seq_first = False
    for lineno, item in items["variants"]:
        toks = item.replace("=", " ").split()
        flag = toks[0] if toks else ""
        if len(toks) == 1:
            value = True
        elif len(toks) == 2 and toks[1].lower() in _FLAGS:
            value = _FLAGS[toks[1].lower()]
        else:
            _fail(lineno, f"malformed variant {item!r}")
        if flag == "forward_all_rreps":
            variants = replace(variants, forward_all_rreps=value)
        elif flag == "dest_forwards_rreq":
            variants = replace(variants, dest_forwards_rreq=value)
        elif flag == "events_sequential_first":
            seq_first = value
        else:
            _fail(lineno, f"unknown variant {flag!r}")

    if not items["property"]:
        _fail(len(text.splitlines()) or 1, "missing property")
    if len(items["property"]) > 1:
        _fail(items["property"][1][0], "more than one property line")
    prop_lineno, prop_text = items["property"][0]
    try:
        parse_property(prop_text, ids)
    except PropertyError as exc:
        _fail(prop_lineno, f"bad property: {exc}")

    return Scenario(
        name=name,
        node_names=tuple(names),
        links=tuple(links),
        events=tuple(events),
        variants=variants,
        property_text=prop_text,
        events_sequential_first=seq_first,
    )


def serialize_scenario(scen: Scenario) -> str:
    out = []
    if scen.name:
        out.append(f"name: {scen.name}")
    out.append("nodes:")
    out.extend(f"  {nm}" for nm in scen.node_names)
    out.append("links:")
    out.extend(f"  {scen.name_of(a)} {scen.name_of(b)}" for a, b in scen.links)
    if scen.events:
        out.append("events:")
    for ev in scen.events:
        match ev:
            case InjectPkt(at=at, dest=dest, data=data):
                out.append(f"  inject {scen.name_of(at)} {scen.name_of(dest)} {data}")
            case Connect(a=a, b=b):
                out.append(f"  connect {scen.name_of(a)} {scen.name_of(b)}")
            case Disconnect(a=a, b=b):
                out.append(f"  disconnect {scen.name_of(a)} {scen.name_of(b)}")
    flags = []
    if scen.variants.forward_all_rreps:
        flags.append("forward_all_rreps true")
    if scen.variants.dest_forwards_rreq:
        flags.append("dest_forwards_rreq true")
    if scen.events_sequential_first:
        flags.append("events_sequential_first true")
    if flags:
        out.append("variants:")
        out.extend(f"  {f}" for f in flags)
    out.append(f"property: {scen.property_text}")
    return "\n".join(out) + "\n"


def load_scenario(path: str | Path) -> Scenario:
    """Read a scenario file; a bare name like 'paper1' finds a bundled one."""
    p = Path(path)
    if not p.exists():
        bundled = bundled_scenario_path(p.stem)
        if bundled is not None:
            p = bundled
        else:
            raise ScenarioError(f"no such scenario file: {path}")
    return parse_scenario(p.read_text(), name=p.stem)


def bundled_scenario_path(name: str) -> Path | None:
    res = importlib.resources.files("aodvmc.scenarios") / f"{name}.scn"
    try:
        if res.is_file():
            return Path(str(res))
    except (TypeError, OSError):
        return None
    return None


def bundled_scenario_names() -> list[str]:
    res = importlib.resources.files("aodvmc.scenarios")
    return sorted(p.name[:-4] for p in res.iterdir() if p.name.endswith(".scn"))
