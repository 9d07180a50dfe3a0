"""Tree document encoding: canonical writer, reader and grammar validator.

Node ids are used directly as element names::

    <Software_Product_Line>
      <Core_Asset_Repository>
        <C1>
          <C4></C4>
        </C1>
      </Core_Asset_Repository>
      <Product>
        <P2>
          <Core_Asset_Repository>
            <C4></C4>
          </Core_Asset_Repository>
        </P2>
      </Product>
    </Software_Product_Line>

Component versions nest inside their base. Every product element starts with
its own ``Core_Asset_Repository`` listing the components it is composed of,
followed by its product-version elements, which share the same shape.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from . import ops
from .errors import DanglingReference, InvalidTree, ParseError, SchemaError
from .model import (
    PRODUCTS_TAG,
    REPOSITORY_TAG,
    ROOT_TAG,
    DevelopmentTree,
    check_invariants,
    is_valid_id,
)

FORMAT_VERSION = "1"
XML_DECLARATION = '<?xml version="1.0" encoding="UTF-8"?>'
FORMAT_COMMENT = f"<!-- spltree format {FORMAT_VERSION} -->"

# Rule names reported by validate().
WELL_FORMED = "well-formed"
ROOT_NAME = "root name"
ROOT_SHAPE = "root shape"
NODE_NAME = "node name"
PRODUCT_SHAPE = "product shape"
COMPOSITION_ENTRY = "composition entry"
ATTRIBUTES = "attributes"
TEXT_CONTENT = "text content"
UNIQUE_IDS = "unique ids"
DUPLICATE_ENTRY = "duplicate entry"
DANGLING_REFERENCE = "dangling reference"


@dataclass(frozen=True)
class Issue:
    rule: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule}\t{self.path}\t{self.message}"


@dataclass
class ValidationReport:
    issues: list[Issue] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.issues

    @property
    def rules(self) -> set[str]:
        return {issue.rule for issue in self.issues}


def to_element(tree: DevelopmentTree) -> ET.Element:
    root = ET.Element(ROOT_TAG)
    repo = ET.SubElement(root, REPOSITORY_TAG)
    products = ET.SubElement(root, PRODUCTS_TAG)

    stack = [(node, repo) for node in reversed(tree.repository)]
    while stack:
        node, parent_el = stack.pop()
        el = ET.SubElement(parent_el, node.id)
        stack.extend((child, el) for child in reversed(node.version_children))

    stack = [(node, products) for node in reversed(tree.products)]
    while stack:
        node, parent_el = stack.pop()
        el = ET.SubElement(parent_el, node.id)
        container = ET.SubElement(el, REPOSITORY_TAG)
        for ref in node.component_refs:
            ET.SubElement(container, ref)
        stack.extend((child, el) for child in reversed(node.version_children))
    return root


def render_element(root: ET.Element) -> list[str]:
    """Lines for an attribute- and text-free element tree, 2-space indented."""
    lines = []
    stack: list[tuple[ET.Element, int, bool]] = [(root, 0, False)]
    while stack:
        el, depth, closing = stack.pop()
        pad = "  " * depth
        if closing:
            lines.append(f"{pad}</{el.tag}>")
        elif len(el) == 0:
            lines.append(f"{pad}<{el.tag}></{el.tag}>")
        else:
            lines.append(f"{pad}<{el.tag}>")
            stack.append((el, depth, True))
            stack.extend((child, depth + 1, False) for child in reversed(el))
    return lines


def to_xml(tree: DevelopmentTree) -> str:
    """Canonical document text; identical trees give identical bytes."""
    violations = check_invariants(tree)
    if violations:
        raise InvalidTree("; ".join(str(v) for v in violations))
    lines = [XML_DECLARATION, FORMAT_COMMENT, *render_element(to_element(tree))]
    return "\n".join(lines) + "\n"


def parse_document(text: str | bytes) -> ET.Element:
    try:
        return ET.fromstring(text)
    except ET.ParseError as exc:
        raise ParseError(str(exc)) from exc


def _check(root: ET.Element) -> list[Issue]:
    issues: list[Issue] = []
    ids: dict[str, str] = {}
    component_ids: set[str] = set()
    compositions: list[tuple[str, list[str]]] = []

    def local(el: ET.Element, path: str) -> None:
        if el.attrib:
            issues.append(Issue(ATTRIBUTES, path, f"unexpected attributes {sorted(el.attrib)}"))
        if el.text and el.text.strip():
            issues.append(Issue(TEXT_CONTENT, path, "element carries text"))
        for child in el:
            if child.tail and child.tail.strip():
                issues.append(Issue(TEXT_CONTENT, path, f"text after <{child.tag}>"))

    def claim(name: str, path: str) -> bool:
        if not is_valid_id(name):
            issues.append(Issue(NODE_NAME, path, f"{name!r} is not a usable node id"))
            return False
        if name in ids:
            issues.append(Issue(UNIQUE_IDS, path, f"{name} already defined at {ids[name]}"))
            return False
        ids[name] = path
        return True

    root_path = f"/{root.tag}"
    if root.tag != ROOT_TAG:
        issues.append(Issue(ROOT_NAME, root_path, f"expected <{ROOT_TAG}>, found <{root.tag}>"))
    local(root, root_path)
    tags = [child.tag for child in root]
    if tags != [REPOSITORY_TAG, PRODUCTS_TAG]:
        issues.append(
            Issue(ROOT_SHAPE, root_path, f"expected children {REPOSITORY_TAG}, {PRODUCTS_TAG}; found {', '.join(tags) or 'none'}")
        )
    repo = root.find(REPOSITORY_TAG)
    products = root.find(PRODUCTS_TAG)

    if repo is not None:
        repo_path = f"{root_path}/{REPOSITORY_TAG}"
        local(repo, repo_path)
        stack = [(el, repo_path) for el in reversed(list(repo))]
        while stack:
            el, parent_path = stack.pop()
            path = f"{parent_path}/{el.tag}"
            local(el, path)
            if claim(el.tag, path):
                component_ids.add(el.tag)
            stack.extend((child, path) for child in reversed(list(el)))

    if products is not None:
        products_path = f"{root_path}/{PRODUCTS_TAG}"
        local(products, products_path)
        stack = [(el, products_path) for el in reversed(list(products))]
        while stack:
            el, parent_path = stack.pop()
            path = f"{parent_path}/{el.tag}"
            local(el, path)
            claim(el.tag, path)
            children = list(el)
            containers = [c for c in children if c.tag == REPOSITORY_TAG]
            if not children or children[0].tag != REPOSITORY_TAG or len(containers) != 1:
                issues.append(
                    Issue(PRODUCT_SHAPE, path, f"expected one leading <{REPOSITORY_TAG}>, found {len(containers)}")
                )
            for container in containers:
                container_path = f"{path}/{REPOSITORY_TAG}"
                local(container, container_path)
                refs = []
                for entry in container:
                    entry_path = f"{container_path}/{entry.tag}"
                    local(entry, entry_path)
                    if len(entry):
                        issues.append(Issue(COMPOSITION_ENTRY, entry_path, "composition entries must be empty"))
                    if not is_valid_id(entry.tag):
                        issues.append(Issue(NODE_NAME, entry_path, f"{entry.tag!r} is not a usable node id"))
                    elif entry.tag in refs:
                        issues.append(Issue(DUPLICATE_ENTRY, entry_path, f"{entry.tag} listed twice"))
                    else:
                        refs.append(entry.tag)
                compositions.append((container_path, refs))
            versions = [c for c in children if c.tag != REPOSITORY_TAG]
            stack.extend((child, path) for child in reversed(versions))

    for container_path, refs in compositions:
        for ref in refs:
            if ref not in component_ids:
                issues.append(
                    Issue(DANGLING_REFERENCE, f"{container_path}/{ref}", f"{ref} is not in the core asset repository")
                )
    return issues


def validate(text: str | bytes) -> ValidationReport:
    """Check a document against the tree grammar, reporting every violation."""
    try:
        root = parse_document(text)
    except ParseError as exc:
        return ValidationReport([Issue(WELL_FORMED, "/", exc.detail)])
    return ValidationReport(_check(root))


def from_xml(text: str | bytes) -> DevelopmentTree:
    root = parse_document(text)
    issues = _check(root)
    if issues:
        detail = "; ".join(f"{i.rule} at {i.path}" for i in issues)
        if all(i.rule == DANGLING_REFERENCE for i in issues):
            raise DanglingReference(detail, issues)
        raise SchemaError(detail, issues)

    tree = ops.new_tree()
    repo = root.find(REPOSITORY_TAG)
    stack = [(el, None) for el in reversed(list(repo))]
    while stack:
        el, base = stack.pop()
        if base is None:
            ops.add_component(tree, el.tag)
        else:
            ops.add_component_version(tree, base, el.tag)
        stack.extend((child, el.tag) for child in reversed(list(el)))

    products = root.find(PRODUCTS_TAG)
    stack = [(el, None) for el in reversed(list(products))]
    while stack:
        el, base = stack.pop()
        children = list(el)
        refs = [entry.tag for entry in children[0]]
        if base is None:
            ops.add_product(tree, el.tag)
            for ref in refs:
                ops.add_to_composition(tree, el.tag, ref)
        else:
            ops.add_product_version(tree, base, el.tag, refs)
        stack.extend((child, el.tag) for child in reversed(children[1:]))
    return tree


def canonicalize(text: str | bytes) -> str:
    return to_xml(from_xml(text))
