"""Turning connected bracoids back into dynamical structures, and the
degree-one correspondence with ternary tables.

A connected groupoid-with-braiding admits per-vertex out-star labellings whose
transported vertex group law is the same everywhere; transporting along a
chosen transversal of arrows out of a base vertex produces such a labelling
explicitly, with no choice principle needed at finite scale.  Complete quivers
of degree one correspond to ternary operations; pointing one of those at a
vertex recovers a group.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import InputError
from .groups import FiniteGroup, make_group
from .quivers import connected_components
from .structures import (
    LABEL_DTYPE,
    VERTEX_DTYPE,
    Check,
    DynamicalSkewBrace,
    QuiverBraiding,
    Report,
    SkewBracoid,
    braiding_of_qtsb,
    is_zero_symmetric,
    make_bracoid,
    make_dsb,
    verify_dsb,
)


def _require_connected_groupoid(bracoid: SkewBracoid) -> None:
    if not bool(bracoid.unital.all()):
        lam = int(np.argwhere(~bracoid.unital)[0][0])
        raise InputError(f"vertex {bracoid.vertex_names[lam]} is initial; need a groupoid")
    report = connected_components(bracoid.quiver())
    if report.count > 1:
        a = bracoid.vertex_names[report.members[0][0]]
        b = bracoid.vertex_names[report.members[1][0]]
        raise InputError(f"quiver is disconnected: no path between {a} and {b}")


@dataclass(frozen=True, eq=False)
class PairSubgroupoid:
    """A wide Schurian subgroupoid: exactly one chosen arrow per vertex pair.

    ``arrow_label[lam, mu]`` is the label at lam of the chosen arrow lam -> mu.
    """

    vertex_names: tuple[str, ...]
    base: int
    arrow_label: np.ndarray


def schurian_transversal(bracoid: SkewBracoid, base: int | str) -> PairSubgroupoid:
    """One arrow per ordered vertex pair, generated by a transversal at ``base``.

    The arrow chosen from the base to each vertex is the one with the smallest
    label (the unit loop for the base itself); the arrow lam -> mu is the
    composite of the inverse of the lam-transversal with the mu-transversal,
    which is closed under composition and inversion by construction.
    """
    _require_connected_groupoid(bracoid)
    zeta = bracoid.vertex_index(base) if isinstance(base, str) else int(base)
    phi, B, units = bracoid.phi, bracoid.bullet, bracoid.units
    L, n = phi.shape
    if not (0 <= zeta < L):
        raise InputError(f"base vertex {base!r} out of range")

    transversal = np.zeros(L, dtype=np.intp)
    for mu in range(L):
        if mu == zeta:
            transversal[mu] = int(units[zeta])
            continue
        candidates = np.argwhere(phi[zeta] == mu)
        transversal[mu] = int(candidates[0][0])

    # inverse label of each transversal arrow, an arrow target -> base
    ldiv_row = B[zeta]  # (n, n)
    inv_label = np.zeros(L, dtype=np.intp)
    for mu in range(L):
        inv_label[mu] = int(np.argwhere(ldiv_row[transversal[mu]] == units[zeta])[0][0])

    source = phi[zeta].astype(np.intp)[transversal][:, None]  # = lam, per construction
    arr = B[source, inv_label[:, None], transversal[None, :]]
    arr = np.ascontiguousarray(arr, dtype=LABEL_DTYPE)

    lam2 = np.arange(L, dtype=np.intp)[:, None]
    if not (phi[lam2, arr] == np.arange(L, dtype=phi.dtype)[None, :]).all():
        raise AssertionError("transversal composite has the wrong target")
    lam3 = np.arange(L, dtype=np.intp)[:, None, None]
    closed = B[lam3, arr[:, :, None], arr[None, :, :]] == arr[:, None, :]
    if not closed.all():
        raise AssertionError("pair subgroupoid is not closed under composition")
    if not (arr[np.arange(L), np.arange(L)] == units).all():
        raise AssertionError("pair subgroupoid misses a unit")
    return PairSubgroupoid(bracoid.vertex_names, zeta, arr)


@dataclass(frozen=True, eq=False)
class ParallelLabelling:
    """Per-vertex out-star bijections making every vertex group law agree.

    ``maps[lam, old_label]`` is the common label assigned to the arrow
    [lam|old_label]; ``transversal[lam]`` is the label at the base of the
    chosen arrow base -> lam.
    """

    base: int
    label_names: tuple[str, ...]
    maps: np.ndarray
    transversal: np.ndarray


def default_base_labelling(bracoid: SkewBracoid, zeta: int) -> np.ndarray:
    """Out-star of the base ordered by (target vertex, label); unit loop -> 0."""
    n = bracoid.label_count
    u = int(bracoid.units[zeta])
    order = sorted(range(n), key=lambda x: (int(bracoid.phi[zeta, x]), x))
    sequence = [u] + [x for x in order if x != u]
    out = np.zeros(n, dtype=LABEL_DTYPE)
    for new, old in enumerate(sequence):
        out[old] = new
    return out


def parallelise(
    bracoid: SkewBracoid,
    base: int | str,
    base_labelling: Sequence[int] | None = None,
) -> tuple[ParallelLabelling, DynamicalSkewBrace]:
    """Relabel a connected zero-symmetric bracoid into a dynamical structure.

    The labelling at each vertex is forced by transporting the base labelling
    through the braiding's left component along the transversal arrows.  The
    transported vertex group laws must all coincide; this is verified
    exhaustively and a failure raises with a witness, since it signals either
    a bug or an input that is not a bracoid.
    """
    pg = schurian_transversal(bracoid, base)
    zeta = pg.base
    phi, B, D = bracoid.phi, bracoid.bullet, bracoid.dot
    L, n = phi.shape
    braiding = braiding_of_qtsb(bracoid)
    SR = braiding.right

    if base_labelling is None:
        maps_base = default_base_labelling(bracoid, zeta)
    else:
        maps_base = np.ascontiguousarray(base_labelling, dtype=LABEL_DTYPE)
        if maps_base.shape != (n,) or sorted(maps_base.tolist()) != list(range(n)):
            raise InputError("base labelling must be a permutation of the labels")

    transversal = pg.arrow_label[zeta].astype(np.intp)
    maps = maps_base[SR[zeta, transversal[:, None], np.arange(n, dtype=np.intp)[None, :]]]
    maps = np.ascontiguousarray(maps, dtype=LABEL_DTYPE)

    inv_maps = np.zeros_like(maps)
    lam2 = np.arange(L, dtype=np.intp)[:, None]
    inv_maps[lam2, maps.astype(np.intp)] = np.arange(n, dtype=LABEL_DTYPE)[None, :]

    lam3 = np.arange(L, dtype=np.intp)[:, None, None]
    old_x = inv_maps[:, :, None].astype(np.intp)
    old_y = inv_maps[:, None, :].astype(np.intp)
    transported = maps[lam3, D[lam3, old_x, old_y]]
    agree = transported == transported[zeta][None, :, :]
    if not agree.all():
        lam, x, y = (int(v) for v in np.argwhere(~agree)[0])
        raise AssertionError(
            "transported vertex group laws disagree: "
            f"vertex={bracoid.vertex_names[lam]} labels=({x},{y}) "
            f"lhs={int(transported[lam, x, y])} rhs={int(transported[zeta, x, y])}"
        )

    identity = int(maps[zeta, int(bracoid.units[zeta])])
    group = make_group(
        [[int(v) for v in row] for row in transported[zeta]],
        name="parallelised",
        identity=identity,
    )

    phi_new = phi[lam2, inv_maps.astype(np.intp)]
    mu = phi_new[:, :, None].astype(np.intp)
    old_b = inv_maps[mu, np.arange(n, dtype=np.intp)[None, None, :]].astype(np.intp)
    ops_new = maps[lam3, B[lam3, old_x, old_b]]

    dsb = make_dsb(group, bracoid.vertex_names, phi_new, ops_new)
    report = verify_dsb(dsb)
    if not report.passed or not is_zero_symmetric(dsb):
        raise AssertionError(
            "parallelised output is not a zero-symmetric dynamical structure: "
            + "; ".join(c.line() for c in report.failures())
        )
    labelling = ParallelLabelling(
        base=zeta,
        label_names=group.names,
        maps=maps,
        transversal=np.ascontiguousarray(transversal, dtype=LABEL_DTYPE),
    )
    return labelling, dsb


# ---------------------------------------------------------------------------
# ternary tables of degree-one braidings


@dataclass(frozen=True, eq=False)
class TernaryHeap:
    """A ternary table on a vertex set."""

    names: tuple[str, ...]
    table: np.ndarray

    @property
    def size(self) -> int:
        return len(self.names)

    def value(self, a: int, b: int, c: int) -> int:
        return int(self.table[a, b, c])

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputError(f"unknown element {name!r}") from None


def make_heap(names: Sequence[str], table) -> TernaryHeap:
    names = tuple(str(x) for x in names)
    arr = np.ascontiguousarray(table, dtype=LABEL_DTYPE)
    m = len(names)
    if arr.shape != (m, m, m):
        raise InputError(f"ternary table shape {arr.shape}, expected {(m, m, m)}")
    if m and (arr.min() < 0 or arr.max() >= m):
        raise InputError("ternary table entries out of range")
    arr.setflags(write=False)
    return TernaryHeap(names, arr)


def verify_heap(heap: TernaryHeap) -> Report:
    """Mal'tsev identities, both associativity forms, their agreement, and
    commutativity as a reported fact."""
    T = heap.table
    m = heap.size
    names = heap.names
    checks = []
    a2 = np.arange(m, dtype=np.intp)[:, None]
    b2 = np.arange(m, dtype=np.intp)[None, :]

    def add(name, ok, witness_axes, required=True, lhs=None, rhs=None):
        ok = np.asarray(ok)
        if bool(ok.all()):
            checks.append(Check(name, True, required=required))
            return True
        idx = tuple(int(v) for v in np.argwhere(~ok)[0])
        wit = {"elements": tuple(names[idx[ax]] for ax in range(len(idx)))}
        if lhs is not None:
            wit["lhs"] = int(lhs[idx])
        if rhs is not None:
            wit["rhs"] = int(rhs[idx])
        checks.append(Check(name, False, required=required, witness=wit))
        return False

    m1_ok = add("maltsev1", T[a2, b2, b2] == a2, 2)
    m2_ok = add("maltsev2", T[a2, a2, b2] == b2, 2)

    a5 = np.arange(m, dtype=np.intp).reshape(m, 1, 1, 1, 1)
    b5 = np.arange(m, dtype=np.intp).reshape(1, m, 1, 1, 1)
    c5 = np.arange(m, dtype=np.intp).reshape(1, 1, m, 1, 1)
    d5 = np.arange(m, dtype=np.intp).reshape(1, 1, 1, m, 1)
    e5 = np.arange(m, dtype=np.intp).reshape(1, 1, 1, 1, m)
    lhs = T[a5, b5, T[c5, d5, e5]]
    rhs = T[T[:, :, :, None, None], d5, e5]
    a_ok = add("assoc", lhs == rhs, 5, lhs=lhs, rhs=rhs)

    a4 = np.arange(m, dtype=np.intp).reshape(m, 1, 1, 1)
    b4 = np.arange(m, dtype=np.intp).reshape(1, m, 1, 1)
    c4 = np.arange(m, dtype=np.intp).reshape(1, 1, m, 1)
    d4 = np.arange(m, dtype=np.intp).reshape(1, 1, 1, m)
    lhs1 = np.broadcast_to(T[a4, b4, d4], (m, m, m, m))
    rhs1 = T[T[:, :, :, None], c4, d4]
    a1_ok = add("assoc1", lhs1 == rhs1, 4, lhs=lhs1, rhs=rhs1)
    lhs2 = np.broadcast_to(T[a4, c4, d4], (m, m, m, m))
    rhs2 = T[a4, b4, T[b4, c4, d4]]
    a2_ok = add("assoc2", lhs2 == rhs2, 4, lhs=lhs2, rhs=rhs2)

    if m1_ok and m2_ok:
        checks.append(Check("assoc_equivalence", a_ok == (a1_ok and a2_ok)))
    else:
        checks.append(Check("assoc_equivalence", True, required=False))

    add("abelian", T == T.transpose(2, 1, 0), 3, required=False)
    return Report(tuple(checks))


def heap_from_group(group: FiniteGroup) -> TernaryHeap:
    """The ternary table a * b^-1 * c of a group."""
    m = group.order
    M = np.array(group.table, dtype=LABEL_DTYPE)
    I = np.array(group.inverses, dtype=np.intp)
    a3 = np.arange(m, dtype=np.intp)[:, None, None]
    b3 = np.arange(m, dtype=np.intp)[None, :, None]
    c3 = np.arange(m, dtype=np.intp)[None, None, :]
    T = M[M[a3, I[b3]], c3]
    return make_heap(group.names, T)


def group_from_pointed_heap(heap: TernaryHeap, base: int | str) -> FiniteGroup:
    """The group <a, base, b> with unit at the distinguished element."""
    report = verify_heap(heap)
    if not report.passed:
        raise InputError("not a heap: " + "; ".join(c.line() for c in report.failures()))
    zeta = heap.index(base) if isinstance(base, str) else int(base)
    if not (0 <= zeta < heap.size):
        raise InputError(f"base element {base!r} out of range")
    table = [[int(heap.table[a, zeta, b]) for b in range(heap.size)] for a in range(heap.size)]
    return make_group(table, name=f"pointed:{heap.names[zeta]}", names=heap.names, identity=zeta)


def ternary_of_braiding(bracoid: SkewBracoid, braiding: QuiverBraiding) -> TernaryHeap:
    """The ternary table of a degree-one braiding: the middle vertex of the
    image of each two-step path.  The result is verified to be a heap."""
    phi = bracoid.phi
    L, n = phi.shape
    if n != L:
        raise InputError(f"quiver has degree {n}/{L}, need a complete quiver of degree 1")
    aran = np.arange(L, dtype=phi.dtype)
    if not (np.sort(phi, axis=1) == aran).all():
        raise InputError("quiver is not complete of degree 1")
    lab = np.zeros((L, L), dtype=np.intp)
    lam2 = np.arange(L, dtype=np.intp)[:, None]
    lab[lam2, phi.astype(np.intp)] = np.arange(L, dtype=np.intp)[None, :]

    a3 = np.arange(L, dtype=np.intp)[:, None, None]
    lab_ab = lab[:, :, None]
    lab_bc = lab[None, :, :]
    middle = phi[a3, braiding.right[a3, lab_ab, lab_bc].astype(np.intp)]
    heap = make_heap(bracoid.vertex_names, middle)
    report = verify_heap(heap)
    if not report.passed:
        raise AssertionError(
            "degree-one braiding did not induce a heap: "
            + "; ".join(c.line() for c in report.failures())
        )
    return heap


def braiding_from_heap(heap: TernaryHeap) -> tuple[SkewBracoid, QuiverBraiding]:
    """The degree-one braided groupoid over the heap's element set."""
    report = verify_heap(heap)
    if not report.passed:
        raise InputError("not a heap: " + "; ".join(c.line() for c in report.failures()))
    m = heap.size
    T = heap.table
    aran_v = np.arange(m, dtype=VERTEX_DTYPE)
    aran_l = np.arange(m, dtype=LABEL_DTYPE)
    phi = np.broadcast_to(aran_v[None, :], (m, m)).copy()
    bullet = np.broadcast_to(aran_l[None, None, :], (m, m, m)).copy()
    dot = np.ascontiguousarray(T.transpose(1, 0, 2))
    units = aran_l.copy()
    unital = np.ones(m, dtype=bool)
    bracoid = make_bracoid(heap.names, heap.names, phi, bullet, dot, units, unital)
    right = np.ascontiguousarray(T, dtype=LABEL_DTYPE)
    left = np.broadcast_to(aran_l[None, None, :], (m, m, m)).copy()
    braiding = QuiverBraiding(right, left)
    return bracoid, braiding


def complete_heap_table(
    names: Sequence[str],
    entries: Mapping[tuple[int, int, int], int],
) -> TernaryHeap:
    """Complete a partial ternary table using the first associativity form.

    The Mal'tsev rows are filled in automatically; remaining cells are derived
    by chaining <a,b,d> = <<a,b,c>, c, d> until a fixpoint.  Contradictions and
    underdetermined tables are rejected.
    """
    m = len(names)
    table: dict[tuple[int, int, int], int] = {}

    def put(key, value):
        old = table.get(key)
        if old is None:
            table[key] = value
            return True
        if old != value:
            raise InputError(f"inconsistent ternary data at {key}: {old} vs {value}")
        return False

    for i in range(m):
        for j in range(m):
            put((i, i, j), j)
            put((i, j, j), i)
    for key, value in entries.items():
        key = tuple(int(x) for x in key)
        if len(key) != 3 or not all(0 <= x < m for x in key):
            raise InputError(f"bad ternary cell {key}")
        put(key, int(value))

    changed = True
    while changed:
        changed = False
        for (a, b, c), v in list(table.items()):
            for d in range(m):
                w = table.get((v, c, d))
                if w is not None:
                    changed |= put((a, b, d), w)
                w = table.get((a, b, d))
                if w is not None:
                    changed |= put((v, c, d), w)
    missing = m**3 - len(table)
    if missing:
        raise InputError(f"ternary table underdetermined: {missing} cells not derivable")
    arr = np.zeros((m, m, m), dtype=LABEL_DTYPE)
    for (a, b, c), v in table.items():
        arr[a, b, c] = v
    return make_heap(names, arr)


# ---------------------------------------------------------------------------
# braiding-intertwining isomorphism search


def find_braiding_isomorphism(
    bracoid_a: SkewBracoid,
    braiding_a: QuiverBraiding,
    bracoid_b: SkewBracoid,
    braiding_b: QuiverBraiding,
) -> tuple[tuple[int, ...], np.ndarray] | None:
    """First (lexicographic) arrow bijection intertwining two braidings.

    Returns (vertex map, per-vertex label maps) or None.  The search fixes the
    image of vertex 0 and its out-star bijection, then propagates through the
    braidings along a transversal, so only |vertices| * |labels|! candidates
    are ever checked.
    """
    La, n = bracoid_a.phi.shape
    Lb, nb = bracoid_b.phi.shape
    if (La, n) != (Lb, nb):
        return None
    _require_connected_groupoid(bracoid_a)
    _require_connected_groupoid(bracoid_b)
    pg = schurian_transversal(bracoid_a, 0)
    trans = pg.arrow_label[0].astype(np.intp)
    phiA, phiB = bracoid_a.phi, bracoid_b.phi
    SRa, SLa = braiding_a.right, braiding_a.left
    SRb, SLb = braiding_b.right, braiding_b.left

    lam2 = np.arange(La, dtype=np.intp)[:, None]
    lam3 = np.arange(La, dtype=np.intp)[:, None, None]
    a_idx = np.arange(n, dtype=np.intp)

    for mu0 in range(Lb):
        for beta in itertools.permutations(range(n)):
            beta_arr = np.array(beta, dtype=np.intp)
            f0 = np.zeros(La, dtype=np.intp)
            f1 = np.zeros((La, n), dtype=np.intp)
            for lam in range(La):
                x = trans[lam]
                bx = beta_arr[x]
                f0[lam] = int(phiB[mu0, bx])
                row = SRb[mu0, bx].astype(np.intp)
                inv_row = np.zeros(n, dtype=np.intp)
                inv_row[row] = a_idx
                f1[lam] = inv_row[beta_arr[SRa[0, x].astype(np.intp)]]
            if len(set(f0.tolist())) != La:
                continue
            if not (np.sort(f1, axis=1) == a_idx[None, :]).all():
                continue
            if not (phiB[f0[:, None], f1] == f0[phiA.astype(np.intp)]).all():
                continue
            # sigma intertwining on all composable pairs
            mu = phiA.astype(np.intp)
            fy = f1[mu[:, :, None], a_idx[None, None, :]]
            got_r = SRb[f0[lam3], f1[:, :, None], fy]
            want_r = f1[lam3, SRa.astype(np.intp)]
            if not (got_r == want_r).all():
                continue
            wA = phiA[lam3, SRa.astype(np.intp)].astype(np.intp)
            want_l = f1[wA, SLa.astype(np.intp)]
            got_l = SLb[f0[lam3], f1[:, :, None], fy]
            if not (got_l == want_l).all():
                continue
            return tuple(int(v) for v in f0), f1.astype(LABEL_DTYPE)
    return None
