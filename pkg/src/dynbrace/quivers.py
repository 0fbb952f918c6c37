"""Labelled quivers in functional form, connectivity analysis, DOT export.

Every quiver this package produces has one outgoing arrow per (vertex, label)
pair, i.e. it is the quiver of a transition map; quivers with vertex-dependent
out-degree are out of scope.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InputError


class UnionFind:
    """Array union-find with path compression; single-owner, not thread safe."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


@dataclass(frozen=True)
class LabelledQuiver:
    """Vertices, labels, and the transition map phi as a vertex-by-label matrix.

    The arrow with source ``v`` and label ``a`` has target ``phi[v][a]``.
    """

    vertices: tuple[str, ...]
    labels: tuple[str, ...]
    phi: tuple[tuple[int, ...], ...]

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def label_count(self) -> int:
        return len(self.labels)

    @property
    def arrow_count(self) -> int:
        return len(self.vertices) * len(self.labels)

    def target(self, vertex: int, label: int) -> int:
        return self.phi[vertex][label]

    def vertex_index(self, name: str) -> int:
        try:
            return self.vertices.index(name)
        except ValueError:
            raise InputError(f"unknown vertex {name!r}") from None

    def arrow_counts(self) -> dict[tuple[int, int], int]:
        """Number of parallel arrows per ordered (source, target) pair."""
        counts: dict[tuple[int, int], int] = {}
        for v, row in enumerate(self.phi):
            for w in row:
                counts[(v, w)] = counts.get((v, w), 0) + 1
        return counts


@dataclass(frozen=True)
class ComponentReport:
    """Undirected-connectivity partition with per-component completeness data."""

    component_of: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]
    degrees: tuple[int | None, ...]
    witnesses: tuple[tuple[int, int] | None, ...]

    @property
    def count(self) -> int:
        return len(self.members)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(m) for m in self.members)


def quiver_of_dynamical_set(
    vertices: Sequence[str],
    labels: Sequence[str],
    phi: Sequence[Sequence[int]],
) -> LabelledQuiver:
    """Wrap a total transition map as a labelled quiver, validating ranges."""
    nv, nl = len(vertices), len(labels)
    if nv == 0:
        raise InputError("a quiver needs at least one vertex")
    if len(phi) != nv:
        raise InputError(f"phi has {len(phi)} rows for {nv} vertices")
    for v, row in enumerate(phi):
        if len(row) != nl:
            raise InputError(f"phi row {v} has {len(row)} entries for {nl} labels")
        for a, w in enumerate(row):
            if not (0 <= int(w) < nv):
                raise InputError(f"phi[{v}][{a}] = {w} is not a vertex index")
    return LabelledQuiver(
        vertices=tuple(str(v) for v in vertices),
        labels=tuple(str(a) for a in labels),
        phi=tuple(tuple(int(w) for w in row) for row in phi),
    )


def connected_components(quiver: LabelledQuiver) -> ComponentReport:
    """Undirected connectivity; components numbered by smallest member vertex."""
    nv = quiver.vertex_count
    uf = UnionFind(nv)
    for v, row in enumerate(quiver.phi):
        for w in row:
            uf.union(v, w)
    roots: dict[int, list[int]] = {}
    for v in range(nv):
        roots.setdefault(uf.find(v), []).append(v)
    members = tuple(tuple(group) for _, group in sorted(roots.items()))
    component_of = [0] * nv
    for cid, group in enumerate(members):
        for v in group:
            component_of[v] = cid
    degrees = []
    witnesses = []
    for cid in range(len(members)):
        d, witness = _component_degree(quiver, members[cid])
        degrees.append(d)
        witnesses.append(witness)
    return ComponentReport(
        component_of=tuple(component_of),
        members=members,
        degrees=tuple(degrees),
        witnesses=tuple(witnesses),
    )


def _component_degree(quiver, members):
    member_set = set(members)
    counts = {(v, w): 0 for v in members for w in members}
    for v in members:
        for w in quiver.phi[v]:
            if w not in member_set:
                return None, (v, w)
            counts[(v, w)] += 1
    values = set(counts.values())
    if len(values) == 1:
        return values.pop(), None
    # witness: first ordered pair whose arrow count deviates
    expected = counts[(members[0], quiver.phi[members[0]][0])]
    for v in members:
        for w in members:
            if counts[(v, w)] != expected:
                return None, (v, w)
    return None, (members[0], members[0])


def completeness_degree(
    quiver: LabelledQuiver, report: ComponentReport, component: int
) -> tuple[int | None, tuple[int, int] | None]:
    """Degree d of a complete component, or (None, witness pair)."""
    if not (0 <= component < report.count):
        raise InputError(f"component {component} out of range")
    return report.degrees[component], report.witnesses[component]


@dataclass(frozen=True)
class HomogeneityResult:
    weight: int | None
    failing_component: int | None

    @property
    def is_homogeneous(self) -> bool:
        return self.weight is not None


def is_homogeneous(quiver: LabelledQuiver, report: ComponentReport | None = None) -> HomogeneityResult:
    """Weight n if every component is complete with degree*size == n, else the failure."""
    if report is None:
        report = connected_components(quiver)
    weight = None
    for cid in range(report.count):
        d = report.degrees[cid]
        if d is None:
            return HomogeneityResult(None, cid)
        w = d * len(report.members[cid])
        if weight is None:
            weight = w
        elif w != weight:
            return HomogeneityResult(None, cid)
    return HomogeneityResult(weight, None)


def export_dot(quiver: LabelledQuiver, collapse_labels: bool = False, name: str = "quiver") -> str:
    """Deterministic DOT text; byte-identical across runs for identical input."""
    lines = [f"digraph {name} {{"]
    for v in quiver.vertices:
        lines.append(f'  "{v}";')
    if collapse_labels:
        counts = quiver.arrow_counts()
        for (v, w), k in sorted(counts.items()):
            lines.append(
                f'  "{quiver.vertices[v]}" -> "{quiver.vertices[w]}" [label="×{k}"];'
            )
    else:
        for v, row in enumerate(quiver.phi):
            for a, w in enumerate(row):
                lines.append(
                    f'  "{quiver.vertices[v]}" -> "{quiver.vertices[w]}" '
                    f'[label="{quiver.labels[a]}"];'
                )
    lines.append("}")
    return "\n".join(lines) + "\n"


def quiver_to_json(quiver: LabelledQuiver) -> dict:
    return {
        "vertices": list(quiver.vertices),
        "labels": list(quiver.labels),
        "phi": [list(row) for row in quiver.phi],
    }


def quiver_from_json(data: Mapping) -> LabelledQuiver:
    for key in ("vertices", "labels", "phi"):
        if key not in data:
            raise InputError(f"quiver JSON needs a {key!r} key")
    return quiver_of_dynamical_set(data["vertices"], data["labels"], data["phi"])
