"""Directed acyclic graphs: ordering, ancestry and d-separation."""

from collections import deque
from typing import Hashable, Iterable, Sequence

from .errors import CycleDetected, OverlappingSets, UnknownNode

Node = Hashable


class Dag:
    """An immutable DAG over named nodes.

    Declaration order of ``nodes`` is kept and used to break every tie, so
    all derived orders (topological order, parent lists) are deterministic.

    Parameters
    ----------
    nodes:
        Node identifiers in declaration order.
    edges:
        ``(parent, child)`` pairs.
    """

    def __init__(self, nodes: Sequence[Node], edges: Iterable[tuple[Node, Node]] = ()):
        self._nodes = tuple(nodes)
        if len(set(self._nodes)) != len(self._nodes):
            raise ValueError("duplicate node names")
        self._pos = {n: i for i, n in enumerate(self._nodes)}
        edge_list = []
        seen = set()
        for parent, child in edges:
            for n in (parent, child):
                if n not in self._pos:
                    raise UnknownNode(f"edge endpoint {n!r} is not a declared node")
            if parent == child:
                raise CycleDetected([parent, child])
            if (parent, child) in seen:
                raise ValueError(f"duplicate edge {parent!r} -> {child!r}")
            seen.add((parent, child))
            edge_list.append((parent, child))
        self._edges = frozenset(edge_list)
        self._parents = {n: [] for n in self._nodes}
        self._children = {n: [] for n in self._nodes}
        for parent, child in edge_list:
            self._parents[child].append(parent)
            self._children[parent].append(child)
        for n in self._nodes:
            self._parents[n] = tuple(sorted(self._parents[n], key=self._pos.__getitem__))
            self._children[n] = tuple(sorted(self._children[n], key=self._pos.__getitem__))
        self._order = self._toposort()

    @property
    def nodes(self) -> tuple:
        return self._nodes

    @property
    def edges(self) -> frozenset:
        return self._edges

    def __contains__(self, node) -> bool:
        return node in self._pos

    def __repr__(self):
        return f"Dag(nodes={list(self._nodes)!r}, edges={sorted(self._edges, key=self._edge_key)!r})"

    def _edge_key(self, e):
        return self._pos[e[0]], self._pos[e[1]]

    def sorted_edges(self) -> list:
        return sorted(self._edges, key=self._edge_key)

    def _check(self, node):
        if node not in self._pos:
            raise UnknownNode(f"unknown node {node!r}")

    def parents(self, node) -> tuple:
        self._check(node)
        return self._parents[node]

    def children(self, node) -> tuple:
        self._check(node)
        return self._children[node]

    def sort(self, nodes: Iterable[Node]) -> tuple:
        """Return ``nodes`` in topological order."""
        nodes = set(nodes)
        for n in nodes:
            self._check(n)
        return tuple(n for n in self._order if n in nodes)

    def _toposort(self):
        indeg = {n: len(self._parents[n]) for n in self._nodes}
        order = []
        # Kahn's algorithm; always take the earliest-declared ready node.
        ready = [n for n in self._nodes if indeg[n] == 0]
        while ready:
            ready.sort(key=self._pos.__getitem__)
            n = ready.pop(0)
            order.append(n)
            for c in self._children[n]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if len(order) != len(self._nodes):
            raise CycleDetected(self._find_cycle({n for n in self._nodes if indeg[n] > 0}))
        return tuple(order)

    def _find_cycle(self, remaining):
        # every remaining node has a parent among the remaining ones
        start = min(remaining, key=self._pos.__getitem__)
        path, index = [], {}
        n = start
        while n not in index:
            index[n] = len(path)
            path.append(n)
            n = next(p for p in self._parents[n] if p in remaining)
        cycle = path[index[n]:] + [n]
        cycle.reverse()
        return cycle

    def topological_order(self) -> tuple:
        return self._order

    def descendants(self, node) -> set:
        """Nodes reachable from ``node`` by a directed path (excluding itself)."""
        self._check(node)
        out, stack = set(), list(self._children[node])
        while stack:
            n = stack.pop()
            if n not in out:
                out.add(n)
                stack.extend(self._children[n])
        return out

    def ancestors(self, node) -> set:
        self._check(node)
        out, stack = set(), list(self._parents[node])
        while stack:
            n = stack.pop()
            if n not in out:
                out.add(n)
                stack.extend(self._parents[n])
        return out

    def nondescendants(self, node) -> set:
        desc = self.descendants(node)
        return {n for n in self._nodes if n != node and n not in desc}

    def d_separated(self, x: Iterable[Node], z: Iterable[Node], given: Iterable[Node] = ()) -> bool:
        """True iff every path between ``x`` and ``z`` is blocked by ``given``.

        Linear-time reachability over (node, direction) states: a trail can
        leave a node upward (towards parents) only when it arrived from a
        child and the node is unobserved, or when the node is an activated
        collider (observed, or with an observed descendant).
        """
        x, z, given = set(x), set(z), set(given)
        for n in x | z | given:
            self._check(n)
        if x & z or x & given or z & given:
            raise OverlappingSets("X, Z and Y must be pairwise disjoint")
        if not x or not z:
            return True

        # nodes that are in `given` or have a descendant in it
        activated = set()
        stack = list(given)
        while stack:
            n = stack.pop()
            if n not in activated:
                activated.add(n)
                stack.extend(self._parents[n])

        UP, DOWN = 0, 1  # UP: arrived from a child; DOWN: arrived from a parent
        visited = set()
        queue = deque((n, UP) for n in x)
        while queue:
            n, d = queue.popleft()
            if (n, d) in visited:
                continue
            visited.add((n, d))
            if n in z and n not in given:
                return False
            if d == UP and n not in given:
                queue.extend((p, UP) for p in self._parents[n])
                queue.extend((c, DOWN) for c in self._children[n])
            elif d == DOWN:
                if n not in given:
                    queue.extend((c, DOWN) for c in self._children[n])
                if n in activated:
                    queue.extend((p, UP) for p in self._parents[n])
        return True


def topological_order(dag: Dag) -> tuple:
    return dag.topological_order()


def nondescendants(dag: Dag, node) -> set:
    return dag.nondescendants(node)


def d_separated(dag: Dag, x, z, given=()) -> bool:
    return dag.d_separated(x, z, given)
