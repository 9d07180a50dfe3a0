"""Read-only traceability queries over a development tree.

All results are ordered lists: pre-order for node enumerations, insertion
order for compositions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import DevelopmentTree, Node, walk
from .ops import get_component, get_product


@dataclass(frozen=True)
class UsageReport:
    component: str
    direct_users: list[str]
    lineage_users: list[str]


def list_core_assets(tree: DevelopmentTree) -> list[str]:
    return [node.id for node in tree.components()]


def list_products(tree: DevelopmentTree) -> list[str]:
    return [node.id for node in tree.products_preorder()]


def _path_from_base(tree: DevelopmentTree, node: Node) -> list[str]:
    path = [node.id]
    while node.parent is not None:
        node = tree.id_index[node.parent]
        path.append(node.id)
    path.reverse()
    return path


def version_history(tree: DevelopmentTree, node_id: str) -> list[str]:
    """Ids from the original base component down to *node_id*, oldest first."""
    return _path_from_base(tree, get_component(tree, node_id))


def latest_versions(tree: DevelopmentTree, node_id: str) -> list[str]:
    """Leaf descendants of *node_id* (the node itself when it has no versions)."""
    start = get_component(tree, node_id)
    return [node.id for node, _ in walk([start]) if not node.version_children]


def composition(tree: DevelopmentTree, product: str) -> list[str]:
    return get_product(tree, product).component_refs


def product_lineage(tree: DevelopmentTree, product: str) -> list[str]:
    return _path_from_base(tree, get_product(tree, product))


def where_used(tree: DevelopmentTree, component: str) -> UsageReport:
    """Products using *component* directly, and using any node of its version tree.

    The version tree spans the component's base and every descendant of that
    base, so ancestors and sibling branches count toward ``lineage_users``.
    """
    node = get_component(tree, component)
    base = node
    while base.parent is not None:
        base = tree.id_index[base.parent]
    family = {n.id for n, _ in walk([base])}

    direct, lineage = [], []
    for product in tree.products_preorder():
        refs = product.component_refs
        if component in refs:
            direct.append(product.id)
        if family.intersection(refs):
            lineage.append(product.id)
    return UsageReport(component, direct, lineage)
