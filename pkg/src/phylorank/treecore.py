"""Rooted non-plane leaf-labeled k-ary trees.

A tree is built from :class:`Vertex` nodes: a leaf carries a positive integer
label, an internal vertex carries exactly ``k`` children.  Only the leaves are
labeled.  Children are semantically an unordered set; the stored order is
canonical — larger subtrees first (by leaf count), ties broken by the minimum
leaf label — so structural equality coincides with semantic equality and
serialization is deterministic.  The three trees on {1,2,3} with k=2 thus
serialize as ``((1,2),3);``, ``((1,3),2);`` and ``((2,3),1);``.

The *rank* of a vertex is its distance to the nearest descendant leaf: leaves
have rank 0, parents of leaves have rank 1, and so on.

All traversals are iterative; trees with thousands of leaves (and hence
potentially very deep spines) are safe to process.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import DomainError, InvalidTreeError, NewickParseError


class Vertex:
    """A single tree vertex: either a labeled leaf or an internal vertex.

    Instances are immutable once constructed.  Use :func:`leaf` and
    :func:`internal` instead of calling the constructor directly.
    """

    __slots__ = ("label", "children", "min_label", "size")

    def __init__(self, label, children, min_label, size):
        self.label = label
        self.children = children
        self.min_label = min_label
        self.size = size  # number of leaves in the subtree

    @property
    def is_leaf(self) -> bool:
        return self.label is not None

    def sort_key(self) -> tuple[int, int]:
        """Canonical sibling order: more leaves first, ties by min leaf label."""
        return (-self.size, self.min_label)

    def __repr__(self):
        if self.is_leaf:
            return f"Vertex(leaf {self.label})"
        return f"Vertex(internal, {len(self.children)} children, {self.size} leaves)"


def leaf(label: int) -> Vertex:
    """A leaf vertex carrying ``label`` (a positive integer)."""
    if not isinstance(label, int) or isinstance(label, bool) or label < 1:
        raise DomainError(f"leaf labels must be positive integers, got {label!r}")
    return Vertex(label, (), label, 1)


def internal(children) -> Vertex:
    """An internal vertex over ``children``, stored in canonical order.

    Siblings have disjoint leaf-label sets in a valid tree, so the
    (size, min-label) key is a total order and the stored form is unique.
    """
    kids = tuple(sorted(children, key=Vertex.sort_key))
    if not kids:
        raise DomainError("an internal vertex needs at least one child")
    return Vertex(None, kids, min(c.min_label for c in kids), sum(c.size for c in kids))


class Tree:
    """A k-phylogenetic tree: a canonical root vertex plus its branching factor."""

    __slots__ = ("root", "k", "_newick", "_ranks")

    def __init__(self, root: Vertex, k: int):
        if not isinstance(k, int) or k < 2:
            raise DomainError(f"branching factor must be an integer >= 2, got {k!r}")
        self.root = root
        self.k = k
        self._newick = None
        self._ranks = None

    def vertices(self) -> Iterator[Vertex]:
        """All vertices in preorder (iterative)."""
        stack = [self.root]
        while stack:
            v = stack.pop()
            yield v
            if not v.is_leaf:
                stack.extend(reversed(v.children))

    def leaf_labels(self) -> list[int]:
        """Labels of all leaves, in no particular order (duplicates preserved)."""
        return [v.label for v in self.vertices() if v.is_leaf]

    @property
    def n_leaves(self) -> int:
        return sum(1 for v in self.vertices() if v.is_leaf)

    @property
    def n_vertices(self) -> int:
        return sum(1 for _ in self.vertices())

    def _rank_map(self) -> dict[int, int]:
        if self._ranks is None:
            ranks: dict[int, int] = {}
            order = list(self.vertices())
            for v in reversed(order):  # children precede parents
                if v.is_leaf:
                    ranks[id(v)] = 0
                else:
                    ranks[id(v)] = 1 + min(ranks[id(c)] for c in v.children)
            self._ranks = ranks
        return self._ranks

    def __eq__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return self.k == other.k and to_newick(self) == to_newick(other)

    def __hash__(self):
        return hash((self.k, to_newick(self)))

    def __repr__(self):
        return f"Tree(k={self.k}, {to_newick(self)})"


@dataclass(frozen=True)
class RankCensus:
    """Per-rank vertex counts of a single tree.

    ``by_rank[i]`` counts vertices of rank exactly ``i`` for ``i <= max_rank``;
    vertices of higher rank are aggregated into ``tail``.
    """

    by_rank: dict[int, int]
    tail: int
    total: int

    def count_rank_ge(self, i: int) -> int:
        """Vertices of rank >= i.  Only defined for i <= max_rank + 1."""
        if i > len(self.by_rank):
            raise DomainError(f"census only covers ranks up to {len(self.by_rank) - 1}")
        return self.total - sum(self.by_rank.get(j, 0) for j in range(i))


def validate(tree: Tree) -> str | None:
    """Check all tree invariants; return None if valid, else the first violation.

    Invariants: every vertex is a leaf or has exactly k children; leaf labels
    are exactly {1, ..., n} with each label appearing once; children of every
    internal vertex are in canonical (min-label) order.
    """
    k = tree.k
    labels = []
    for v in tree.vertices():
        if v.is_leaf:
            if not isinstance(v.label, int) or v.label < 1:
                return f"leaf label {v.label!r} is not a positive integer"
            labels.append(v.label)
        else:
            if len(v.children) != k:
                return (
                    f"internal vertex has {len(v.children)} children, expected {k}"
                )
            keys = [c.sort_key() for c in v.children]
            if keys != sorted(keys):
                return "children are not in canonical order"
    n = len(labels)
    if sorted(labels) != list(range(1, n + 1)):
        return f"leaf labels {sorted(labels)} are not exactly 1..{n}"
    return None


def is_valid(tree: Tree) -> bool:
    return validate(tree) is None


def rank_of(tree: Tree, vertex: Vertex) -> int:
    """Rank of ``vertex``: distance to its nearest descendant leaf."""
    ranks = tree._rank_map()
    try:
        return ranks[id(vertex)]
    except KeyError:
        raise DomainError("vertex does not belong to this tree") from None


def census_of(tree: Tree, max_rank: int) -> RankCensus:
    """Count vertices of each rank 0..max_rank; higher ranks go into the tail."""
    if max_rank < 0:
        raise DomainError("max_rank must be >= 0")
    ranks = tree._rank_map()
    by_rank = {i: 0 for i in range(max_rank + 1)}
    tail = 0
    for r in ranks.values():
        if r <= max_rank:
            by_rank[r] += 1
        else:
            tail += 1
    return RankCensus(by_rank=by_rank, tail=tail, total=len(ranks))


def to_newick(tree: Tree) -> str:
    """Canonical Newick serialization, e.g. ``((1,2),3);`` — children in canonical order."""
    if tree._newick is None:
        parts: dict[int, str] = {}
        for v in reversed(list(tree.vertices())):
            if v.is_leaf:
                parts[id(v)] = str(v.label)
            else:
                parts[id(v)] = "(" + ",".join(parts[id(c)] for c in v.children) + ")"
        tree._newick = parts[id(tree.root)] + ";"
    return tree._newick


def from_newick(text: str, k: int) -> Tree:
    """Parse a Newick string and validate it as a k-phylogenetic tree.

    Whitespace is tolerated anywhere; output is canonicalized, so
    ``to_newick(from_newick(s, k))`` is the canonical form of ``s``.
    Raises :class:`NewickParseError` on syntax errors and
    :class:`InvalidTreeError` on arity or label violations.
    """
    stack: list[list[Vertex]] = []
    done: Vertex | None = None
    expect_item = True  # a subtree may start here ('(' or a label)
    terminated = False
    i, n = 0, len(text)

    def fail(msg, pos):
        raise NewickParseError(msg, pos)

    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "(":
            if not expect_item:
                fail("unexpected '('", i)
            stack.append([])
            i += 1
        elif ch.isdigit():
            if not expect_item:
                fail("unexpected label", i)
            j = i
            while j < n and text[j].isdigit():
                j += 1
            node = leaf(int(text[i:j]))
            if stack:
                stack[-1].append(node)
            else:
                done = node
            expect_item = False
            i = j
        elif ch == ",":
            if not stack or expect_item:
                fail("unexpected ','", i)
            expect_item = True
            i += 1
        elif ch == ")":
            if not stack:
                fail("unbalanced ')'", i)
            if expect_item:
                fail("missing subtree before ')'", i)
            kids = stack.pop()
            node = internal(kids)
            if stack:
                stack[-1].append(node)
            else:
                done = node
            i += 1
        elif ch == ";":
            if stack:
                fail("';' inside an unbalanced subtree", i)
            if done is None:
                fail("';' with no tree", i)
            i += 1
            if text[i:].strip():
                fail("trailing content after ';'", i)
            terminated = True
            break
        else:
            fail(f"unexpected character {ch!r}", i)

    if not terminated:
        fail("unterminated tree (missing ';')", n)

    tree = Tree(done, k)
    problem = validate(tree)
    if problem is not None:
        raise InvalidTreeError(problem)
    return tree
