"""Development-tree data model and its structural invariants.

The tree has a fixed root with two named subtrees: the core asset repository
(base components, each with nested version children) and the products subtree
(base products, each owning a composition list and nested product versions).
All node ids share a single namespace.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import ClassVar, Union

from .errors import InvalidId

ROOT_TAG = "Software_Product_Line"
REPOSITORY_TAG = "Core_Asset_Repository"
PRODUCTS_TAG = "Product"

# Structural element names; a node with one of these ids would be
# indistinguishable from the skeleton in the XML encoding.
RESERVED_IDS = frozenset({ROOT_TAG, REPOSITORY_TAG, PRODUCTS_TAG})

_ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*")

# Characters XML 1.0 can carry in text content.
_XML_ILLEGAL_RE = re.compile("[^\t\n\r\x20-\ud7ff\ue000-\ufffd\U00010000-\U0010ffff]")


def is_valid_id(value: object) -> bool:
    return (
        isinstance(value, str)
        and _ID_RE.fullmatch(value) is not None
        and value not in RESERVED_IDS
    )


def check_id(value: object) -> str:
    """Return *value* unchanged if it is a usable node id, else raise InvalidId."""
    if not is_valid_id(value):
        raise InvalidId(repr(value))
    return value  # type: ignore[return-value]


@dataclass(frozen=True)
class CompositionEntry:
    component_ref: str


@dataclass(eq=False)
class ComponentNode:
    """A core asset. ``version_children`` are its later versions."""

    id: str
    insertion_index: int
    parent: str | None = None
    version_children: list[ComponentNode] = field(default_factory=list, repr=False)

    kind: ClassVar[str] = "component"


@dataclass(eq=False)
class ProductNode:
    id: str
    insertion_index: int
    parent: str | None = None
    composition: list[CompositionEntry] = field(default_factory=list)
    version_children: list[ProductNode] = field(default_factory=list, repr=False)

    kind: ClassVar[str] = "product"

    @property
    def is_version(self) -> bool:
        return self.parent is not None

    @property
    def component_refs(self) -> list[str]:
        return [entry.component_ref for entry in self.composition]


Node = Union[ComponentNode, ProductNode]


def walk(roots: Iterable[Node]) -> Iterator[tuple[Node, int]]:
    """Yield ``(node, depth)`` in pre-order; ``roots`` sit at depth 0.

    Iterative, so arbitrarily long version chains do not hit the recursion
    limit.
    """
    stack = [(node, 0) for node in reversed(list(roots))]
    while stack:
        node, depth = stack.pop()
        yield node, depth
        stack.extend((child, depth + 1) for child in reversed(node.version_children))


class DevelopmentTree:
    """The whole registry: repository subtree plus products subtree.

    ``id_index`` maps every node id to its node object. Mutations belong in
    :mod:`spltree.ops`, which keeps the index, parent links and insertion
    ordinals consistent.
    """

    def __init__(self) -> None:
        self.repository: list[ComponentNode] = []
        self.products: list[ProductNode] = []
        self.id_index: dict[str, Node] = {}
        self._next_index = 0

    def allocate_index(self) -> int:
        self._next_index += 1
        return self._next_index

    def get(self, node_id: str) -> Node | None:
        return self.id_index.get(node_id)

    def __contains__(self, node_id: object) -> bool:
        return node_id in self.id_index

    def __len__(self) -> int:
        return len(self.id_index)

    def components(self) -> Iterator[ComponentNode]:
        for node, _ in walk(self.repository):
            yield node  # type: ignore[misc]

    def products_preorder(self) -> Iterator[ProductNode]:
        for node, _ in walk(self.products):
            yield node  # type: ignore[misc]

    def signature(self) -> tuple:
        """Order-sensitive structural fingerprint, ignoring insertion ordinals.

        A pre-order listing with depths determines the tree shape exactly, so
        two trees are structurally equal iff their signatures are equal.
        """
        repo = tuple((n.id, d) for n, d in walk(self.repository))
        prods = tuple(
            (n.id, d, tuple(n.component_refs))  # type: ignore[union-attr]
            for n, d in walk(self.products)
        )
        return (repo, prods)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DevelopmentTree):
            return NotImplemented
        return self.signature() == other.signature()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        n_components = sum(1 for _ in self.components())
        return f"DevelopmentTree(components={n_components}, products={len(self) - n_components})"


class Outcome(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    UNTESTED = "untested"


@dataclass(frozen=True)
class MetadataRecord:
    """Per-node attributes kept beside the tree."""

    author: str
    developed_date: date
    release_date: date | None = None
    test_date: date | None = None
    test_result: Outcome | None = None
    notes: str | None = None

    def problems(self) -> list[str]:
        found = []
        if not isinstance(self.developed_date, date):
            found.append("developed_date must be a date")
            return found
        if self.release_date is not None and self.release_date < self.developed_date:
            found.append("release_date precedes developed_date")
        if self.test_date is not None and self.test_date < self.developed_date:
            found.append("test_date precedes developed_date")
        if self.test_result is not None and not isinstance(self.test_result, Outcome):
            found.append(f"test_result {self.test_result!r} is not pass/fail/untested")
        for name in ("author", "notes"):
            value = getattr(self, name)
            if value is not None and (
                not isinstance(value, str) or _XML_ILLEGAL_RE.search(value)
            ):
                found.append(f"{name} contains characters XML cannot store")
        return found


@dataclass(frozen=True)
class Violation:
    rule: str
    ids: tuple[str, ...]
    message: str = ""

    def __str__(self) -> str:
        return f"{self.rule}{{{', '.join(self.ids)}}}"


def check_invariants(tree: DevelopmentTree) -> list[Violation]:
    """Return every structural invariant the tree breaks (empty when sound)."""
    violations: list[Violation] = []
    seen: dict[str, Node] = {}
    visited: set[int] = set()
    component_ids: set[str] = set()

    def scan(roots: list, expected_type: type) -> None:
        # (node, parent) pairs; parent None for bases
        stack = [(node, None) for node in reversed(roots)]
        while stack:
            node, parent = stack.pop()
            if id(node) in visited:
                violations.append(Violation("SharedNode", (node.id,), "node reachable twice"))
                continue
            visited.add(id(node))
            if not isinstance(node, expected_type):
                violations.append(
                    Violation("KindMismatch", (node.id,), f"expected {expected_type.kind}")
                )
                continue
            if not is_valid_id(node.id):
                violations.append(Violation("InvalidId", (str(node.id),)))
            if node.id in seen:
                violations.append(Violation("DuplicateId", (node.id,)))
            else:
                seen[node.id] = node
            if expected_type is ComponentNode:
                component_ids.add(node.id)
            parent_id = parent.id if parent is not None else None
            if node.parent != parent_id:
                violations.append(
                    Violation("ParentMismatch", (node.id,), f"recorded {node.parent!r}, actual {parent_id!r}")
                )
            if parent is not None and node.insertion_index <= parent.insertion_index:
                violations.append(Violation("InsertionOrder", (parent.id, node.id)))
            for left, right in zip(node.version_children, node.version_children[1:]):
                if left.insertion_index >= right.insertion_index:
                    violations.append(Violation("InsertionOrder", (left.id, right.id)))
            stack.extend((child, node) for child in reversed(node.version_children))

    scan(tree.repository, ComponentNode)
    scan(tree.products, ProductNode)
    for left, right in zip(tree.repository, tree.repository[1:]):
        if left.insertion_index >= right.insertion_index:
            violations.append(Violation("InsertionOrder", (left.id, right.id)))
    for left, right in zip(tree.products, tree.products[1:]):
        if left.insertion_index >= right.insertion_index:
            violations.append(Violation("InsertionOrder", (left.id, right.id)))

    for node_id, node in tree.id_index.items():
        if seen.get(node_id) is not node:
            violations.append(Violation("IndexMismatch", (node_id,), "index entry not found by traversal"))
    for node_id in seen.keys() - tree.id_index.keys():
        violations.append(Violation("IndexMismatch", (node_id,), "node missing from index"))

    for product in seen.values():
        if not isinstance(product, ProductNode):
            continue
        refs = product.component_refs
        for ref in refs:
            if ref not in component_ids:
                violations.append(Violation("DanglingReference", (product.id, ref)))
        if len(set(refs)) != len(refs):
            violations.append(Violation("DuplicateEntry", (product.id,)))
    return violations
