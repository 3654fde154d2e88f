"""Sort hierarchy backing ``sort(X) =< s`` conditions."""

from __future__ import annotations

import graphlib
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from .errors import SortHierarchyError, UnknownSortError
from .terms import Term, Vit

TOP = "top"


class SortHierarchy:
    """An is-a DAG with a distinguished ``top`` sort.

    Sorts without a declared parent hang directly below ``top``.  Subsumption
    is the reflexive-transitive closure of the edges and is precomputed, so
    queries are set lookups.
    """

    def __init__(self, parents: Dict[str, Iterable[str]], declared_edges: Tuple = ()):
        self.parents: Dict[str, FrozenSet[str]] = {s: frozenset(ps) for s, ps in parents.items()}
        self.parents.setdefault(TOP, frozenset())
        self.declared_edges = tuple(declared_edges)
        if self.parents[TOP]:
            raise SortHierarchyError(f"{TOP} cannot have a parent")
        for s in list(self.parents):
            for p in self.parents[s]:
                self.parents.setdefault(p, frozenset())
        for s, ps in list(self.parents.items()):
            if s != TOP and not ps:
                self.parents[s] = frozenset([TOP])
        try:
            order = list(graphlib.TopologicalSorter(self.parents).static_order())
        except graphlib.CycleError as exc:
            cycle = " -> ".join(exc.args[1])
            raise SortHierarchyError(f"cycle in sort hierarchy: {cycle}") from None
        self._ancestors: Dict[str, FrozenSet[str]] = {}
        for s in order:
            up = {s}
            for p in self.parents[s]:
                up |= self._ancestors[p]
            self._ancestors[s] = frozenset(up)

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[str, str]]) -> "SortHierarchy":
        edges = list(edges)
        seen = set()
        parents: Dict[str, set] = {}
        for child, parent in edges:
            if (child, parent) in seen:
                raise SortHierarchyError(f"duplicate edge isa({child},{parent})")
            if child == TOP:
                raise SortHierarchyError(f"{TOP} may only appear as a parent")
            seen.add((child, parent))
            parents.setdefault(child, set()).add(parent)
        return cls(parents, edges)

    @property
    def sorts(self) -> FrozenSet[str]:
        return frozenset(self.parents)

    def __contains__(self, sort: str) -> bool:
        return sort in self.parents

    def ancestors(self, sort: str) -> FrozenSet[str]:
        try:
            return self._ancestors[sort]
        except KeyError:
            raise UnknownSortError(f"unknown sort {sort!r}") from None

    def subsumes(self, general: str, specific: str) -> bool:
        """True iff *specific* is below or equal to *general*."""
        if general not in self.parents:
            raise UnknownSortError(f"unknown sort {general!r}")
        return general in self.ancestors(specific)


def subsumes(h: SortHierarchy, general: str, specific: str) -> bool:
    return h.subsumes(general, specific)


def sort_of(vit: Vit, marker) -> Optional[str]:
    """The sort table entry for *marker* (a name or a Term), or None."""
    name = marker.name if isinstance(marker, Term) else marker
    return vit.sorts.get(name)
