"""Cell census of the CW model: cells per z, 1-skeleton, components and Euler characteristics.

Every ancestry labels one cell whose dimension is its number of +2 entries.
Vertices are the sign vectors (dimension-0 ancestries); a one-dimensional
ancestry is an edge joining its sign vector to the click of that vector along
its two anchors.  Higher cells lie in the component of their sign vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ancestry import (
    CosetData,
    anchors,
    click_mask,
    dimension,
    enumerate_preancestries,
    fixed_mask,
    format_ancestry,
    predicted_counts,
    signs_from_mask,
    submasks,
    thin_masks,
    vertex_codes,
)
from .clifford import CliffordElement, QuatMonomial, orbit_decomposition
from .perm import Permutation, ReducedWord, canonical_word, format_perm, format_word


def euler(counts: Sequence[int]) -> int:
    return sum(c if d % 2 == 0 else -c for d, c in enumerate(counts))


def trim(counts: Sequence[int]) -> list[int]:
    out = list(counts)
    while out and out[-1] == 0:
        out.pop()
    return out


@dataclass
class ComponentStats:
    cells: list[int]
    chi: int
    thin: bool = False

    @property
    def top_dimension(self) -> int:
        return len(self.cells) - 1

    @property
    def has_cycle(self) -> bool:
        # a connected graph with at least as many edges as vertices contains a cycle
        return len(self.cells) > 1 and self.cells[1] >= self.cells[0]

    def label(self) -> str:
        """Census-level classification only; homotopy type is never certified."""
        if self.thin:
            return "thin"
        if self.chi == 1:
            return "candidate-trivial"
        return "nontrivial"

    def to_json(self) -> dict:
        return {"cells": self.cells, "chi": self.chi, "dimension": self.top_dimension,
                "label": self.label(), "skeletonCycle": self.has_cycle}


@dataclass
class ZCensus:
    z: CliffordElement
    counts: list[int]
    components: list[ComponentStats]
    cells: dict[int, list[str]] | None = None
    edges: list[tuple[str, str]] | None = None

    @property
    def chi(self) -> int:
        return euler(self.counts)

    @property
    def thin(self) -> int:
        return sum(1 for c in self.components if c.thin)

    def signature(self) -> tuple:
        return (tuple(self.counts), tuple(sorted((tuple(c.cells), c.chi, c.thin) for c in self.components)))


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


class SigmaCensus:
    """Census of every signed piece BL_z of one permutation, computed in one pass."""

    def __init__(self, w: ReducedWord, keep: Iterable[CliffordElement] = ()):
        self.word = w
        self.data = CosetData(w)
        l = w.length
        codes = vertex_codes(w)
        self.codes = codes
        keep_codes = {self._q_code(z) for z in keep}
        uf = _UnionFind(1 << l)
        pre = enumerate_preancestries(w)
        self.preancestries = pre
        self.max_dim = max(dimension(p) for p in pre)

        # edges first so that components are final before anything is counted
        edges: list[tuple[int, int]] = []
        for eps0 in pre:
            if dimension(eps0) != 1:
                continue
            k1, k2 = anchors(eps0)
            flip = click_mask(w, k1, k2)
            forced, free = fixed_mask(eps0)
            for sub in submasks(free):
                v1 = forced | sub
                v2 = v1 ^ flip
                if codes[v1] != codes[v2]:
                    raise ArithmeticError("click changed the target of an edge")
                uf.union(v1, v2)
                edges.append((v1, v2))

        tally: dict[int, dict[int, list[int]]] = {}
        kept_cells: dict[int, dict[int, list[str]]] = {c: {} for c in keep_codes}

        def add(v: int, d: int, eps: tuple[int, ...] | None = None) -> None:
            q = codes[v]
            root = uf.find(v)
            per_root = tally.setdefault(q, {})
            counts = per_root.get(root)
            if counts is None:
                counts = per_root[root] = [0] * (self.max_dim + 1)
            counts[d] += 1
            if q in kept_cells:
                kept_cells[q].setdefault(d, []).append(
                    format_ancestry(eps if eps is not None else signs_from_mask(v, l)))

        for v in range(1 << l):
            add(v, 0)
        for eps0 in pre:
            d = dimension(eps0)
            if d == 0:
                continue
            forced, free = fixed_mask(eps0)
            want_cells = bool(kept_cells)
            for sub in submasks(free):
                v = forced | sub
                if want_cells and codes[v] in kept_cells:
                    add(v, d, _merge(eps0, v))
                else:
                    add(v, d)

        thin = set(thin_masks(w))
        self._thin_roots = {uf.find(v) for v in thin}
        self._tally = tally
        self._uf = uf
        self._edges = edges
        self._kept = kept_cells

    def _q_code(self, z: CliffordElement) -> int:
        u = QuatMonomial.decode(self.data.code_of(z))
        return u.inverse().encode()

    def census(self, z: CliffordElement) -> ZCensus:
        q = self._q_code(z)
        per_root = self._tally.get(q, {})
        comps = []
        total = [0] * (self.max_dim + 1)
        for root, counts in per_root.items():
            cells = trim(counts)
            thin = root in self._thin_roots and cells == [1]
            comps.append(ComponentStats(cells, euler(cells), thin))
            for d, c in enumerate(counts):
                total[d] += c
        comps.sort(key=lambda c: (c.thin, [-x for x in c.cells], c.chi))
        cells = edges = None
        if q in self._kept:
            l = self.word.length
            cells = {d: sorted(v) for d, v in sorted(self._kept[q].items())}
            edges = [(format_ancestry(signs_from_mask(a, l)), format_ancestry(signs_from_mask(b, l)))
                     for a, b in self._edges if self.codes[a] == q]
        return ZCensus(z, trim(total), comps, cells, edges)

    def all_censuses(self) -> list[ZCensus]:
        return [self.census(z) for _, z in sorted(self.data.elements.items())]


def _merge(eps0: Sequence[int], mask: int) -> tuple[int, ...]:
    return tuple(e if abs(e) == 2 else (1 if mask >> k & 1 else -1) for k, e in enumerate(eps0))


def build_census(w: ReducedWord, z: CliffordElement) -> ZCensus:
    """Full census of one z, including explicit cell labels and the 1-skeleton."""
    return SigmaCensus(w, keep=[z]).census(z)


def euler_check(w: ReducedWord, z: CliffordElement) -> tuple[int, int]:
    census = build_census(w, z)
    data = CosetData(w)
    predicted = 0
    for eps0 in enumerate_preancestries(w):
        n = predicted_counts(w, eps0, z, data).value
        predicted += -n if dimension(eps0) % 2 else n
    return census.chi, predicted


def to_dot(census: ZCensus, name: str = "skeleton") -> str:
    if census.cells is None or census.edges is None:
        raise ValueError("census was built without explicit cells")
    lines = [f"graph {name} {{"]
    for v in census.cells.get(0, []):
        lines.append(f'  "{v}";')
    for a, b in census.edges:
        lines.append(f'  "{a}" -- "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# whole-permutation reports


@dataclass
class OrbitReport:
    z: CliffordElement
    size: int
    counts: list[int]
    components: list[ComponentStats]

    @property
    def thin(self) -> int:
        return sum(1 for c in self.components if c.thin)

    def to_json(self) -> dict:
        return {
            "z": self.z.serialize(),
            "orbitSize": self.size,
            "counts": self.counts,
            "chi": euler(self.counts),
            "thin": self.thin,
            "components": [c.to_json() for c in self.components],
        }


@dataclass
class ComponentReport:
    sigma: Permutation
    word: ReducedWord
    orbits: list[OrbitReport]
    totals: dict = field(default_factory=dict)

    @property
    def components(self) -> int:
        return self.totals["components"]

    def to_json(self) -> dict:
        return {
            "sigma": format_perm(self.sigma),
            "word": format_word(self.word.letters),
            "orbits": [o.to_json() for o in self.orbits],
            "totals": self.totals,
        }

    def comparable(self) -> dict:
        """The report without the word it was computed from."""
        out = self.to_json()
        del out["word"]
        return out


def _totals(orbits: list[OrbitReport], max_dim: int) -> dict:
    cells = [0] * (max_dim + 1)
    chi_hist: dict[int, int] = {}
    labels: dict[str, int] = {}
    components = 0
    for o in orbits:
        for d, c in enumerate(o.counts):
            cells[d] += o.size * c
        for comp in o.components:
            components += o.size
            chi_hist[comp.chi] = chi_hist.get(comp.chi, 0) + o.size
            labels[comp.label()] = labels.get(comp.label(), 0) + o.size
    return {
        "components": components,
        "cells": trim(cells),
        "chi": euler(cells),
        "chiHistogram": {str(k): v for k, v in sorted(chi_hist.items())},
        "labels": dict(sorted(labels.items())),
        "thin": labels.get("thin", 0),
    }


def component_report(sigma: Permutation | ReducedWord, check_orbits: bool = False) -> ComponentReport:
    w = sigma if isinstance(sigma, ReducedWord) else canonical_word(sigma)
    census = SigmaCensus(w)
    orbits = []
    for orbit in orbit_decomposition(w):
        rep = census.census(orbit.representative)
        if check_orbits:
            for z in orbit.members:
                if census.census(z).signature() != rep.signature():
                    raise ArithmeticError(f"census differs inside the orbit of {orbit.representative}")
        orbits.append(OrbitReport(orbit.representative, orbit.size, rep.counts, rep.components))
    return ComponentReport(w.perm(), w, orbits, _totals(orbits, census.max_dim))
