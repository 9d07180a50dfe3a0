"""Mutations of the development tree and the whole-tree traversal.

Every mutation validates all of its preconditions before touching the tree,
so a raised error always leaves the tree exactly as it was.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

from .errors import DuplicateEntry, DuplicateId, InUse, KindMismatch, UnknownNode
from .model import (
    PRODUCTS_TAG,
    REPOSITORY_TAG,
    ROOT_TAG,
    ComponentNode,
    CompositionEntry,
    DevelopmentTree,
    Node,
    ProductNode,
    check_id,
    walk,
)

if TYPE_CHECKING:
    from .metadata import MetadataDocument


class EntryKind(str, Enum):
    ROOT = "root"
    REPOSITORY_ROOT = "repository_root"
    COMPONENT = "component"
    PRODUCTS_ROOT = "products_root"
    PRODUCT = "product"
    COMPOSITION_REF = "composition_ref"
    PRODUCT_VERSION = "product_version"


@dataclass(frozen=True)
class TraversalEntry:
    id: str
    kind: EntryKind
    depth: int


def new_tree() -> DevelopmentTree:
    return DevelopmentTree()


def _lookup(tree: DevelopmentTree, node_id: str, expected: type) -> Node:
    node = tree.get(node_id)
    if node is None:
        raise UnknownNode(node_id)
    if not isinstance(node, expected):
        raise KindMismatch(f"{node_id} is a {node.kind}, expected {expected.kind}")
    return node


def get_component(tree: DevelopmentTree, node_id: str) -> ComponentNode:
    return _lookup(tree, node_id, ComponentNode)  # type: ignore[return-value]


def get_product(tree: DevelopmentTree, node_id: str) -> ProductNode:
    return _lookup(tree, node_id, ProductNode)  # type: ignore[return-value]


def _require_fresh(tree: DevelopmentTree, node_id: str) -> None:
    check_id(node_id)
    if node_id in tree:
        raise DuplicateId(node_id)


def add_component(tree: DevelopmentTree, node_id: str) -> None:
    _require_fresh(tree, node_id)
    node = ComponentNode(node_id, tree.allocate_index())
    tree.repository.append(node)
    tree.id_index[node_id] = node


def add_component_version(tree: DevelopmentTree, base: str, new_id: str) -> None:
    parent = get_component(tree, base)
    _require_fresh(tree, new_id)
    node = ComponentNode(new_id, tree.allocate_index(), parent=base)
    parent.version_children.append(node)
    tree.id_index[new_id] = node


def add_product(tree: DevelopmentTree, node_id: str) -> None:
    _require_fresh(tree, node_id)
    node = ProductNode(node_id, tree.allocate_index())
    tree.products.append(node)
    tree.id_index[node_id] = node


def add_to_composition(tree: DevelopmentTree, product: str, component: str) -> None:
    """Append *component* to the composition of base product *product*.

    Product versions get their composition once, at creation, and are frozen
    afterwards.
    """
    target = get_product(tree, product)
    if target.is_version:
        raise KindMismatch(f"{product} is a product version; its composition is frozen")
    get_component(tree, component)
    if component in target.component_refs:
        raise DuplicateEntry(f"{component} already in {product}")
    target.composition.append(CompositionEntry(component))


def add_product_version(
    tree: DevelopmentTree, base: str, new_id: str, composition: Iterable[str]
) -> None:
    parent = get_product(tree, base)
    _require_fresh(tree, new_id)
    refs = list(composition)
    for ref in refs:
        get_component(tree, ref)
    if len(set(refs)) != len(refs):
        dupes = sorted({r for r in refs if refs.count(r) > 1})
        raise DuplicateEntry(" ".join(dupes))
    node = ProductNode(
        new_id,
        tree.allocate_index(),
        parent=base,
        composition=[CompositionEntry(ref) for ref in refs],
    )
    parent.version_children.append(node)
    tree.id_index[new_id] = node


def _users_of(tree: DevelopmentTree, ids: set[str]) -> list[str]:
    return [p.id for p in tree.products_preorder() if ids.intersection(p.component_refs)]


def _siblings(tree: DevelopmentTree, node: Node) -> list:
    if node.parent is not None:
        return tree.id_index[node.parent].version_children
    return tree.repository if isinstance(node, ComponentNode) else tree.products


def remove_node(tree: DevelopmentTree, node_id: str, force: bool = False) -> list[str]:
    """Remove a node; return the removed ids in pre-order.

    Without *force* the node must have no version children and no product may
    reference it. With *force* the node's whole version subtree goes, along
    with every composition entry that pointed into it.
    """
    node = tree.get(node_id)
    if node is None:
        raise UnknownNode(node_id)
    if not force:
        if isinstance(node, ComponentNode):
            users = _users_of(tree, {node_id})
            if users:
                raise InUse(node_id, users)
        if node.version_children:
            raise InUse(node_id, [child.id for child in node.version_children])

    removed = [n.id for n, _ in walk([node])]
    _siblings(tree, node).remove(node)
    for rid in removed:
        del tree.id_index[rid]
    if isinstance(node, ComponentNode):
        gone = set(removed)
        for product in tree.products_preorder():
            if gone.intersection(product.component_refs):
                product.composition = [
                    e for e in product.composition if e.component_ref not in gone
                ]
    return removed


def rename_node(
    tree: DevelopmentTree,
    node_id: str,
    new_id: str,
    metadata: MetadataDocument | None = None,
) -> None:
    """Rename a node, rewriting every reference to it.

    When *metadata* is given, the node's record moves to the new key too.
    """
    node = tree.get(node_id)
    if node is None:
        raise UnknownNode(node_id)
    _require_fresh(tree, new_id)

    node.id = new_id
    for child in node.version_children:
        child.parent = new_id
    del tree.id_index[node_id]
    tree.id_index[new_id] = node
    if isinstance(node, ComponentNode):
        for product in tree.products_preorder():
            if node_id in product.component_refs:
                product.composition = [
                    CompositionEntry(new_id) if e.component_ref == node_id else e
                    for e in product.composition
                ]
    if metadata is not None:
        metadata.rename(node_id, new_id)


def traverse(tree: DevelopmentTree) -> list[TraversalEntry]:
    """Depth-first pre-order listing of the whole tree.

    Order: root, repository container, components (each before its versions),
    products container, then each product followed by its composition
    container, the composition entries, and its product versions. Each
    product's composition container is reported with kind
    ``repository_root``, since it is that product's own core asset repository.
    """
    entries = [
        TraversalEntry(ROOT_TAG, EntryKind.ROOT, 0),
        TraversalEntry(REPOSITORY_TAG, EntryKind.REPOSITORY_ROOT, 1),
    ]
    for node, depth in walk(tree.repository):
        entries.append(TraversalEntry(node.id, EntryKind.COMPONENT, depth + 2))
    entries.append(TraversalEntry(PRODUCTS_TAG, EntryKind.PRODUCTS_ROOT, 1))
    for node, depth in walk(tree.products):
        level = depth + 2
        kind = EntryKind.PRODUCT_VERSION if node.parent is not None else EntryKind.PRODUCT
        entries.append(TraversalEntry(node.id, kind, level))
        entries.append(TraversalEntry(REPOSITORY_TAG, EntryKind.REPOSITORY_ROOT, level + 1))
        entries.extend(
            TraversalEntry(ref, EntryKind.COMPOSITION_REF, level + 2)
            for ref in node.component_refs  # type: ignore[union-attr]
        )
    return entries
