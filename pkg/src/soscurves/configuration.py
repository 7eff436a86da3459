"""Abstract curve configurations and their combinatorics.

A configuration records what the geometry engine (or a hand-written JSON
file) knows about a curve: one entry per irreducible component with its
three-valued attribute flags, and one entry per intersection point with the
components it joins.  Everything in this module is purely combinatorial; no
polynomial arithmetic happens here.

The incidence graph is bipartite: component nodes on one side, point nodes
on the other, an edge for each incidence.  A point on exactly two components
behaves like the classical "edge between two vertices" picture; a point on
three or more components becomes a star, which keeps the forest test aligned
with the attachment-order criterion (a multigraph reading would call three
concurrent lines cyclic even though they can be attached one at a time).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .tribool import TriBool, all_of


class ConfigurationError(ValueError):
    """The component and point lists do not describe a valid configuration."""


@dataclass(frozen=True)
class OwnSingularity:
    point: str
    ompit: TriBool


@dataclass(frozen=True)
class ConfigComponent:
    id: str
    label: str
    is_real: TriBool
    has_real_points: TriBool
    bounded_ring_trivial: TriBool
    rational_open_A1: TriBool
    own_singularities: tuple[OwnSingularity, ...] = ()
    parametrization: Mapping[str, Any] | None = None


@dataclass(frozen=True)
class ConfigPoint:
    id: str
    realness: TriBool
    components: tuple[str, ...]
    ompit: TriBool
    in_S: bool | None = None
    # parameter of the point on each incident component's line-type chart,
    # when known and rational; the preorder operations evaluate restricted
    # functions through this table
    params: Mapping[str, Fraction] | None = None


@dataclass(frozen=True)
class Forest:
    pass


@dataclass(frozen=True)
class Cycle:
    """A simple cycle as an alternating component/point node sequence."""

    nodes: tuple[str, ...]

    def __str__(self) -> str:
        return " - ".join(self.nodes)


@dataclass(frozen=True)
class AttachmentOrder:
    order: tuple[str, ...]


@dataclass(frozen=True)
class CPrimeSplit:
    members: tuple[str, ...]
    unknown: tuple[str, ...]


@dataclass(frozen=True)
class ConnectedPiece:
    components: tuple[str, ...]
    bounded_ring_trivial: TriBool


@dataclass(frozen=True)
class CurveConfiguration:
    components: tuple[ConfigComponent, ...]
    points: tuple[ConfigPoint, ...]
    _by_id: dict[str, ConfigComponent] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_id: dict[str, ConfigComponent] = {}
        for comp in self.components:
            if comp.id in by_id:
                raise ConfigurationError(f"duplicate component id {comp.id!r}")
            by_id[comp.id] = comp
        object.__setattr__(self, "_by_id", by_id)
        seen_points: set[str] = set()
        for pt in self.points:
            if pt.id in seen_points:
                raise ConfigurationError(f"duplicate point id {pt.id!r}")
            seen_points.add(pt.id)
            if len(set(pt.components)) < 2:
                raise ConfigurationError(
                    f"point {pt.id!r} must join at least two distinct components"
                )
            for cid in pt.components:
                if cid not in by_id:
                    raise ConfigurationError(
                        f"point {pt.id!r} references unknown component {cid!r}"
                    )

    def component(self, cid: str) -> ConfigComponent:
        return self._by_id[cid]

    def component_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.components)


def _incidence(
    config: CurveConfiguration, subset: Iterable[str]
) -> dict[str, list[str]]:
    """Bipartite adjacency restricted to the subset.

    Point nodes appear only when the point joins at least two subset
    components; neighbor lists are sorted so traversals are deterministic.
    """
    chosen = set(subset)
    unknown = chosen - set(config.component_ids())
    if unknown:
        raise ConfigurationError(f"subset references unknown components {sorted(unknown)}")
    adj: dict[str, list[str]] = {cid: [] for cid in sorted(chosen)}
    for pt in config.points:
        incident = sorted(set(pt.components) & chosen)
        if len(incident) < 2:
            continue
        adj[pt.id] = incident
        for cid in incident:
            adj[cid].append(pt.id)
    for node in adj:
        adj[node].sort()
    return adj


def _canonical_cycle(nodes: list[str]) -> Cycle:
    """Rotate and orient a cycle so the listing is lexicographically minimal."""
    best: tuple[str, ...] | None = None
    n = len(nodes)
    for seq in (nodes, nodes[::-1]):
        start = seq.index(min(seq))
        rotated = tuple(seq[start:] + seq[:start])
        if best is None or rotated < best:
            best = rotated
    assert best is not None
    return Cycle(best)


def is_forest(config: CurveConfiguration, subset: Iterable[str]) -> Forest | Cycle:
    """Forest test on the incidence graph of the chosen components.

    Realness of the points does not matter here; the test is purely
    combinatorial.  On failure the witness is a simple cycle, alternating
    component and point nodes, in canonical (lexicographically minimal)
    order.
    """
    adj = _incidence(config, subset)
    color: dict[str, int] = {}
    parent: dict[str, str | None] = {}
    for root in sorted(adj):
        if root in color:
            continue
        color[root] = 0
        parent[root] = None
        stack = [(root, iter(adj[root]))]
        while stack:
            node, nbrs = stack[-1]
            advanced = False
            for nxt in nbrs:
                if nxt == parent[node]:
                    continue
                if nxt in color:
                    # walk both endpoints up to their common ancestor
                    path_a = [node]
                    while path_a[-1] != root:
                        path_a.append(parent[path_a[-1]])
                    path_b = [nxt]
                    while path_b[-1] != root:
                        path_b.append(parent[path_b[-1]])
                    on_a = set(path_a)
                    meet = next(x for x in path_b if x in on_a)
                    cyc = path_a[: path_a.index(meet) + 1]
                    cyc += path_b[: path_b.index(meet)][::-1]
                    return _canonical_cycle(cyc)
                color[nxt] = 0
                parent[nxt] = node
                stack.append((nxt, iter(adj[nxt])))
                advanced = True
                break
            if not advanced:
                stack.pop()
    return Forest()


def attachment_order(
    config: CurveConfiguration, subset: Iterable[str]
) -> AttachmentOrder | Cycle:
    """Order the components so each meets its predecessors in at most one point.

    Works by leaf removal: repeatedly peel a component that shares at most
    one distinct point with the rest, smallest id first.  Succeeds exactly
    when the incidence graph is a forest; otherwise the obstructing cycle is
    returned.
    """
    chosen = sorted(set(subset))
    point_sets: dict[str, list[str]] = {cid: [] for cid in chosen}
    for pt in config.points:
        incident = set(pt.components) & set(chosen)
        if len(incident) < 2:
            continue
        for cid in incident:
            point_sets[cid].append(pt.id)
    remaining = set(chosen)
    peeled: list[str] = []
    while remaining:
        pick = None
        for cid in sorted(remaining):
            shared = {
                pid
                for pid in point_sets[cid]
                if any(
                    other != cid and pid in point_sets[other] for other in remaining
                )
            }
            if len(shared) <= 1:
                pick = cid
                break
        if pick is None:
            witness = is_forest(config, remaining)
            assert isinstance(witness, Cycle), "peel stuck on an acyclic graph"
            return witness
        remaining.discard(pick)
        peeled.append(pick)
    return AttachmentOrder(tuple(reversed(peeled)))


def extract_C_prime(config: CurveConfiguration) -> CPrimeSplit:
    """Components whose ring of bounded functions is trivial, i.e. just R.

    Components with an Unknown flag are reported separately so callers can
    propagate three-valued answers.
    """
    members = tuple(
        c.id for c in config.components if c.bounded_ring_trivial is TriBool.YES
    )
    unknown = tuple(
        c.id for c in config.components if c.bounded_ring_trivial is TriBool.UNKNOWN
    )
    return CPrimeSplit(members, unknown)


def connectivity_report(config: CurveConfiguration) -> tuple[ConnectedPiece, ...]:
    """Partition into connected pieces of the full incidence graph.

    A piece has a trivial bounded ring exactly when all its members do; on a
    connected curve a bounded function must agree across every intersection,
    so triviality is decided memberwise.
    """
    adj = _incidence(config, config.component_ids())
    seen: set[str] = set()
    pieces: list[ConnectedPiece] = []
    for root in (c.id for c in config.components):
        if root in seen:
            continue
        stack = [root]
        seen.add(root)
        members: list[str] = []
        while stack:
            node = stack.pop()
            if node in config._by_id:
                members.append(node)
            for nxt in adj[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        members.sort()
        flag = all_of(
            config.component(cid).bounded_ring_trivial for cid in members
        )
        pieces.append(ConnectedPiece(tuple(members), flag))
    return tuple(pieces)


def induced_subconfiguration(
    config: CurveConfiguration, subset: Iterable[str]
) -> CurveConfiguration:
    """Restriction to a component subset; points keep only surviving incidences."""
    chosen = set(subset)
    comps = tuple(c for c in config.components if c.id in chosen)
    pts = []
    for pt in config.points:
        incident = tuple(cid for cid in pt.components if cid in chosen)
        if len(set(incident)) >= 2:
            params = None
            if pt.params:
                params = {c: v for c, v in pt.params.items() if c in chosen} or None
            pts.append(
                ConfigPoint(pt.id, pt.realness, incident, pt.ompit, pt.in_S, params)
            )
    return CurveConfiguration(comps, tuple(pts))


# -- JSON mapping --------------------------------------------------------------


def _flag_to_json(flag: TriBool) -> str:
    return flag.value


def _flag_from_json(raw: Any, where: str) -> TriBool:
    try:
        return TriBool(raw)
    except ValueError:
        raise ConfigurationError(f"{where}: bad flag value {raw!r}") from None


def configuration_to_json(config: CurveConfiguration) -> dict[str, Any]:
    comps = []
    for c in config.components:
        entry: dict[str, Any] = {
            "id": c.id,
            "label": c.label,
            "is_real": _flag_to_json(c.is_real),
            "has_real_points": _flag_to_json(c.has_real_points),
            "bounded_ring_trivial": _flag_to_json(c.bounded_ring_trivial),
            "rational_open_A1": _flag_to_json(c.rational_open_A1),
            "own_singularities": [
                {"point": s.point, "ompit": _flag_to_json(s.ompit)}
                for s in c.own_singularities
            ],
            "parametrization": dict(c.parametrization) if c.parametrization else None,
        }
        comps.append(entry)
    pts = []
    for p in config.points:
        entry = {
            "id": p.id,
            "realness": _flag_to_json(p.realness),
            "components": list(p.components),
            "ompit": _flag_to_json(p.ompit),
        }
        if p.in_S is not None:
            entry["in_S"] = p.in_S
        if p.params:
            entry["params"] = {cid: str(v) for cid, v in sorted(p.params.items())}
        pts.append(entry)
    return {"components": comps, "intersection_points": pts}


def configuration_from_json(data: Mapping[str, Any]) -> CurveConfiguration:
    if not isinstance(data, Mapping):
        raise ConfigurationError("configuration must be a JSON object")
    raw_comps = data.get("components")
    raw_pts = data.get("intersection_points", [])
    if not isinstance(raw_comps, Sequence) or isinstance(raw_comps, str):
        raise ConfigurationError("'components' must be a list")
    comps = []
    for i, rc in enumerate(raw_comps):
        where = f"components[{i}]"
        if not isinstance(rc, Mapping) or "id" not in rc:
            raise ConfigurationError(f"{where}: missing id")
        own = []
        for rs in rc.get("own_singularities", []):
            own.append(
                OwnSingularity(
                    str(rs["point"]), _flag_from_json(rs.get("ompit", "unknown"), where)
                )
            )
        comps.append(
            ConfigComponent(
                id=str(rc["id"]),
                label=str(rc.get("label", rc["id"])),
                is_real=_flag_from_json(rc.get("is_real", "unknown"), where),
                has_real_points=_flag_from_json(
                    rc.get("has_real_points", "unknown"), where
                ),
                bounded_ring_trivial=_flag_from_json(
                    rc.get("bounded_ring_trivial", "unknown"), where
                ),
                rational_open_A1=_flag_from_json(
                    rc.get("rational_open_A1", "unknown"), where
                ),
                own_singularities=tuple(own),
                parametrization=rc.get("parametrization") or None,
            )
        )
    pts = []
    for i, rp in enumerate(raw_pts):
        where = f"intersection_points[{i}]"
        if not isinstance(rp, Mapping) or "id" not in rp:
            raise ConfigurationError(f"{where}: missing id")
        params = None
        raw_params = rp.get("params")
        if raw_params:
            if not isinstance(raw_params, Mapping):
                raise ConfigurationError(f"{where}: 'params' must be an object")
            try:
                params = {str(c): Fraction(str(v)) for c, v in raw_params.items()}
            except (ValueError, ZeroDivisionError):
                raise ConfigurationError(f"{where}: bad parameter value") from None
        pts.append(
            ConfigPoint(
                id=str(rp["id"]),
                realness=_flag_from_json(rp.get("realness", "unknown"), where),
                components=tuple(str(c) for c in rp.get("components", [])),
                ompit=_flag_from_json(rp.get("ompit", "unknown"), where),
                in_S=rp.get("in_S"),
                params=params,
            )
        )
    return CurveConfiguration(tuple(comps), tuple(pts))
