"""``spltree`` command-line interface.

Exit codes: 0 success, 1 domain error (unknown node, duplicate id, node in
use, invalid document on ``validate``, ...), 2 usage error, 3 file or parse
error. Errors are reported on stderr as a single ``ERROR <code>: <detail>``
line.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys
import xml.etree.ElementTree as ET
from collections.abc import Iterator, Sequence
from pathlib import Path
from typing import TextIO

from . import ops, queries
from .errors import NoMetadata, SplError, StoreError, UnknownNode
from .metadata import (
    MetadataDocument,
    format_date,
    get_metadata,
    load_metadata,
    metadata_to_xml,
    parse_date,
    reconcile,
    set_metadata,
)
from .model import DevelopmentTree, MetadataRecord, Outcome
from .store import StoreLocator, atomic_write, exclusive_lock
from .xmlio import from_xml, to_xml, validate

STORE_ENV = "SPLTREE_STORE"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


def _date_arg(text: str):
    try:
        return parse_date(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    # Shared options are accepted both before and after the subcommand.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--store", "-s", default=argparse.SUPPRESS,
                        help=f"tree file of the store (default: ${STORE_ENV})")
    common.add_argument("--format", choices=("lines", "xml"), default=argparse.SUPPRESS,
                        help="output format for read commands (default: lines)")

    parser = _Parser(prog="spltree", parents=[common],
                     description="Software product line component and product registry.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name: str, help: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help)

    p = cmd("init", "create an empty store")
    p.add_argument("file")
    cmd("add-component", "add a base component").add_argument("id")
    p = cmd("add-version", "add a later version of a component")
    p.add_argument("base")
    p.add_argument("new")
    cmd("add-product", "add a product").add_argument("id")
    p = cmd("compose", "append components to a product's composition")
    p.add_argument("product")
    p.add_argument("components", nargs="+")
    p = cmd("add-product-version", "add a product version with a fixed composition")
    p.add_argument("base")
    p.add_argument("new")
    p.add_argument("--with", dest="components", nargs="*", default=[], metavar="COMPONENT")
    p = cmd("remove", "remove a node")
    p.add_argument("id")
    p.add_argument("--force", action="store_true",
                   help="also remove version descendants and composition entries")
    p = cmd("rename", "rename a node and every reference to it")
    p.add_argument("id")
    p.add_argument("new")
    p = cmd("list", "list components and/or products")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--components", action="store_true")
    group.add_argument("--products", action="store_true")
    cmd("history", "version path from the base component").add_argument("id")
    cmd("latest", "newest versions in a component's version tree").add_argument("component")
    cmd("where-used", "products using a component").add_argument("component")
    cmd("composition", "components of a product").add_argument("product")
    cmd("lineage", "version path from the base product").add_argument("product")
    cmd("traverse", "print the whole development tree")
    cmd("validate", "check a tree document").add_argument("file")
    p = cmd("export", "write the tree document")
    p.add_argument("-o", "--output")
    cmd("import", "replace the store's tree with a document").add_argument("file")

    meta = cmd("meta", "per-node metadata")
    meta_sub = meta.add_subparsers(dest="meta_command", required=True, parser_class=_Parser)
    p = meta_sub.add_parser("set", parents=[common], help="set a node's metadata")
    p.add_argument("id")
    p.add_argument("--author", required=True)
    p.add_argument("--developed", required=True, type=_date_arg)
    p.add_argument("--released", type=_date_arg)
    p.add_argument("--tested", type=_date_arg)
    p.add_argument("--result", choices=[o.value for o in Outcome])
    p.add_argument("--notes")
    meta_sub.add_parser("get", parents=[common], help="show a node's metadata").add_argument("id")
    return parser


class Store:
    """Loaded tree + metadata for one command invocation."""

    def __init__(self, locator: StoreLocator, tree: DevelopmentTree, meta: MetadataDocument) -> None:
        self.locator = locator
        self.tree = tree
        self.meta = meta

    @classmethod
    def load(cls, locator: StoreLocator, allow_missing: bool = False) -> Store:
        try:
            text = locator.tree_path.read_bytes()
        except FileNotFoundError:
            if not allow_missing:
                raise StoreError(f"no store at {locator.tree_path}") from None
            tree = ops.new_tree()
        else:
            tree = from_xml(text)
        meta = MetadataDocument()
        if locator.meta_path.exists():
            meta = load_metadata(locator.meta_path)
        return cls(locator, tree, meta)

    @classmethod
    @contextlib.contextmanager
    def mutate(cls, locator: StoreLocator, allow_missing: bool = False) -> Iterator[Store]:
        """Load under the store lock; write both files back only on success."""
        with exclusive_lock(locator.lock_path):
            store = cls.load(locator, allow_missing)
            meta_before = metadata_to_xml(store.meta)
            yield store
            meta_after = metadata_to_xml(store.meta)
            if meta_after != meta_before:
                atomic_write(locator.meta_path, meta_after)
            atomic_write(locator.tree_path, to_xml(store.tree))


def _result_xml(query: str, subject: str | None = None) -> ET.Element:
    el = ET.Element("Result", query=query)
    if subject is not None:
        el.set("subject", subject)
    return el


def _dump(el: ET.Element) -> str:
    ET.indent(el)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(el, encoding="unicode") + "\n"


def _emit_items(out: TextIO, fmt: str, query: str, subject: str | None, items: list[str]) -> None:
    if fmt == "xml":
        el = _result_xml(query, subject)
        for item in items:
            ET.SubElement(el, "Item").text = item
        out.write(_dump(el))
    else:
        out.writelines(f"{item}\n" for item in items)


def _locator(args: argparse.Namespace) -> StoreLocator:
    path = getattr(args, "store", None) or os.environ.get(STORE_ENV)
    if not path:
        raise UsageError(f"no store given; pass --store or set {STORE_ENV}")
    return StoreLocator(Path(path))


def _meta_lines(record: MetadataRecord) -> list[str]:
    lines = [f"author: {record.author}", f"developed: {format_date(record.developed_date)}"]
    if record.release_date is not None:
        lines.append(f"released: {format_date(record.release_date)}")
    if record.test_date is not None:
        lines.append(f"tested: {format_date(record.test_date)}")
    if record.test_result is not None:
        lines.append(f"result: {record.test_result.value}")
    if record.notes is not None:
        lines.append(f"notes: {record.notes}")
    return lines


def _dispatch(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    command = args.command
    fmt = getattr(args, "format", "lines")

    if command == "init":
        locator = StoreLocator(Path(args.file))
        with exclusive_lock(locator.lock_path):
            if locator.tree_path.exists():
                raise StoreError(f"{locator.tree_path} already exists")
            atomic_write(locator.tree_path, to_xml(ops.new_tree()))
        return 0

    if command == "validate":
        report = validate(Path(args.file).read_bytes())
        if fmt == "xml":
            el = _result_xml("validate", args.file)
            el.set("valid", str(report.valid).lower())
            for issue in report.issues:
                ET.SubElement(el, "Issue", rule=issue.rule, path=issue.path).text = issue.message
            out.write(_dump(el))
        elif report.valid:
            out.write("valid\n")
        else:
            out.writelines(f"{issue}\n" for issue in report.issues)
        return 0 if report.valid else 1

    locator = _locator(args)

    if command == "add-component":
        with Store.mutate(locator) as s:
            ops.add_component(s.tree, args.id)
    elif command == "add-version":
        with Store.mutate(locator) as s:
            ops.add_component_version(s.tree, args.base, args.new)
    elif command == "add-product":
        with Store.mutate(locator) as s:
            ops.add_product(s.tree, args.id)
    elif command == "compose":
        with Store.mutate(locator) as s:
            for component in args.components:
                ops.add_to_composition(s.tree, args.product, component)
    elif command == "add-product-version":
        with Store.mutate(locator) as s:
            ops.add_product_version(s.tree, args.base, args.new, args.components)
    elif command == "remove":
        with Store.mutate(locator) as s:
            removed = ops.remove_node(s.tree, args.id, force=args.force)
            s.meta.discard(removed)
    elif command == "rename":
        with Store.mutate(locator) as s:
            ops.rename_node(s.tree, args.id, args.new, metadata=s.meta)
    elif command == "import":
        tree = from_xml(Path(args.file).read_bytes())
        with Store.mutate(locator, allow_missing=True) as s:
            s.tree = tree
            orphans = reconcile(s.meta, tree)
        if orphans:
            err.write(f"warning: metadata without a node: {' '.join(orphans)}\n")
    elif command == "export":
        text = to_xml(Store.load(locator).tree)
        if args.output:
            atomic_write(Path(args.output), text)
        else:
            out.write(text)
    elif command == "meta":
        if args.meta_command == "set":
            record = MetadataRecord(
                author=args.author,
                developed_date=args.developed,
                release_date=args.released,
                test_date=args.tested,
                test_result=Outcome(args.result) if args.result else None,
                notes=args.notes,
            )
            with Store.mutate(locator) as s:
                if args.id not in s.tree:
                    raise UnknownNode(args.id)
                set_metadata(s.meta, args.id, record)
        else:
            s = Store.load(locator)
            if args.id not in s.tree:
                raise UnknownNode(args.id)
            record = get_metadata(s.meta, args.id)
            if record is None:
                raise NoMetadata(args.id)
            if fmt == "xml":
                out.write(metadata_to_xml(MetadataDocument({args.id: record})))
            else:
                out.writelines(f"{line}\n" for line in _meta_lines(record))
    else:
        _query(command, args, Store.load(locator).tree, fmt, out)
    return 0


def _query(command: str, args: argparse.Namespace, tree: DevelopmentTree, fmt: str, out: TextIO) -> None:
    if command == "list":
        items = []
        if not args.products:
            items += queries.list_core_assets(tree)
        if not args.components:
            items += queries.list_products(tree)
        _emit_items(out, fmt, "list", None, items)
    elif command == "history":
        _emit_items(out, fmt, "history", args.id, queries.version_history(tree, args.id))
    elif command == "latest":
        _emit_items(out, fmt, "latest", args.component, queries.latest_versions(tree, args.component))
    elif command == "composition":
        _emit_items(out, fmt, "composition", args.product, queries.composition(tree, args.product))
    elif command == "lineage":
        _emit_items(out, fmt, "lineage", args.product, queries.product_lineage(tree, args.product))
    elif command == "where-used":
        report = queries.where_used(tree, args.component)
        if fmt == "xml":
            el = _result_xml("where-used", args.component)
            for tag, users in (("Direct", report.direct_users), ("Lineage", report.lineage_users)):
                group = ET.SubElement(el, tag)
                for user in users:
                    ET.SubElement(group, "Item").text = user
            out.write(_dump(el))
        else:
            out.write(" ".join(["direct:", *report.direct_users]) + "\n")
            out.write(" ".join(["lineage:", *report.lineage_users]) + "\n")
    elif command == "traverse":
        entries = ops.traverse(tree)
        if fmt == "xml":
            el = _result_xml("traverse")
            for entry in entries:
                ET.SubElement(el, "Entry", kind=entry.kind.value, depth=str(entry.depth)).text = entry.id
            out.write(_dump(el))
        else:
            out.writelines(f"{'  ' * entry.depth}{entry.id}\n" for entry in entries)
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown command {command}")


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    """Run one command; return its exit code."""
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    try:
        with contextlib.redirect_stdout(out):
            args = build_parser().parse_args(argv)
        return _dispatch(args, out, err)
    except UsageError as exc:
        err.write(f"ERROR Usage: {exc}\n")
        return 2
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else 0
    except SplError as exc:
        err.write(f"ERROR {exc.code}: {exc.detail}\n")
        return exc.exit_code
    except OSError as exc:
        err.write(f"ERROR StoreError: {exc}\n")
        return 3


def main() -> None:
    sys.exit(run())
