"""Per-node metadata kept in an XML sidecar next to the tree document.

Sidecar layout, nodes sorted by id, optional fields omitted when unset::

    <Metadata>
      <Node id="C1">
        <Author>ahmed</Author>
        <DevelopedDate>2004-11-01</DevelopedDate>
        <ReleaseDate>2004-12-01</ReleaseDate>
        <TestDate>2004-11-20</TestDate>
        <TestResult>pass</TestResult>
        <Notes>first cut</Notes>
      </Node>
    </Metadata>
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

from .errors import InvalidRecord, ParseError, SchemaError
from .model import DevelopmentTree, MetadataRecord, Outcome, is_valid_id
from .store import atomic_write
from .xmlio import XML_DECLARATION

_DATE_RE = re.compile(r"\d{4}-\d{2}-\d{2}")

# element name -> (record field, is a date)
_FIELDS = {
    "Author": ("author", False),
    "DevelopedDate": ("developed_date", True),
    "ReleaseDate": ("release_date", True),
    "TestDate": ("test_date", True),
    "TestResult": ("test_result", False),
    "Notes": ("notes", False),
}


def format_date(value: date) -> str:
    return f"{value.year:04d}-{value.month:02d}-{value.day:02d}"


def parse_date(text: str) -> date:
    """Parse a zero-padded ``YYYY-MM-DD`` date; anything else is rejected."""
    if not _DATE_RE.fullmatch(text):
        raise ValueError(f"not a YYYY-MM-DD date: {text!r}")
    year, month, day = (int(part) for part in text.split("-"))
    return date(year, month, day)


@dataclass
class MetadataDocument:
    entries: dict[str, MetadataRecord] = field(default_factory=dict)

    def rename(self, old: str, new: str) -> None:
        record = self.entries.pop(old, None)
        if record is not None:
            self.entries[new] = record
        else:
            self.entries.pop(new, None)

    def discard(self, ids) -> None:
        for node_id in ids:
            self.entries.pop(node_id, None)


def set_metadata(doc: MetadataDocument, node_id: str, record: MetadataRecord) -> None:
    if not is_valid_id(node_id):
        raise InvalidRecord(f"{node_id!r} is not a usable node id")
    problems = record.problems()
    if problems:
        raise InvalidRecord("; ".join(problems))
    doc.entries[node_id] = record


def get_metadata(doc: MetadataDocument, node_id: str) -> MetadataRecord | None:
    return doc.entries.get(node_id)


def reconcile(doc: MetadataDocument, tree: DevelopmentTree) -> list[str]:
    """Ids that have metadata but no node in *tree*, sorted."""
    return sorted(node_id for node_id in doc.entries if node_id not in tree)


def _text(value: str) -> str:
    # a raw CR would be normalised to LF by any parser
    return escape(value).replace("\r", "&#13;")


def metadata_to_xml(doc: MetadataDocument) -> str:
    if not doc.entries:
        return f"{XML_DECLARATION}\n<Metadata></Metadata>\n"
    lines = [XML_DECLARATION, "<Metadata>"]
    for node_id in sorted(doc.entries):
        record = doc.entries[node_id]
        lines.append(f"  <Node id={quoteattr(node_id)}>")
        for tag, (name, is_date) in _FIELDS.items():
            value = getattr(record, name)
            if value is None:
                continue
            if is_date:
                value = format_date(value)
            elif isinstance(value, Outcome):
                value = value.value
            lines.append(f"    <{tag}>{_text(value)}</{tag}>")
        lines.append("  </Node>")
    lines.append("</Metadata>")
    return "\n".join(lines) + "\n"


def _record_from_element(node: ET.Element, node_id: str) -> MetadataRecord:
    values: dict = {}
    for child in node:
        if child.tag not in _FIELDS:
            raise SchemaError(f"{node_id}: unknown field <{child.tag}>")
        name, is_date = _FIELDS[child.tag]
        if name in values:
            raise SchemaError(f"{node_id}: field <{child.tag}> repeated")
        if len(child) or child.attrib:
            raise SchemaError(f"{node_id}: field <{child.tag}> must be plain text")
        text = child.text or ""
        if is_date:
            try:
                values[name] = parse_date(text)
            except ValueError as exc:
                raise SchemaError(f"{node_id}: {exc}") from exc
        elif name == "test_result":
            try:
                values[name] = Outcome(text)
            except ValueError as exc:
                raise SchemaError(f"{node_id}: bad test result {text!r}") from exc
        else:
            values[name] = text
    for required in ("author", "developed_date"):
        if required not in values:
            raise SchemaError(f"{node_id}: missing {required}")
    record = MetadataRecord(**values)
    problems = record.problems()
    if problems:
        raise SchemaError(f"{node_id}: {'; '.join(problems)}")
    return record


def metadata_from_xml(text: str | bytes) -> MetadataDocument:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise ParseError(str(exc)) from exc
    if root.tag != "Metadata":
        raise SchemaError(f"expected <Metadata> root, found <{root.tag}>")
    doc = MetadataDocument()
    for node in root:
        if node.tag != "Node":
            raise SchemaError(f"unexpected <{node.tag}> in <Metadata>")
        node_id = node.get("id")
        if node_id is None or not is_valid_id(node_id):
            raise SchemaError(f"bad node id {node_id!r}")
        if node_id in doc.entries:
            raise SchemaError(f"duplicate metadata for {node_id}")
        doc.entries[node_id] = _record_from_element(node, node_id)
    return doc


def save_metadata(doc: MetadataDocument, path: str | Path) -> None:
    atomic_write(Path(path), metadata_to_xml(doc))


def load_metadata(path: str | Path) -> MetadataDocument:
    return metadata_from_xml(Path(path).read_bytes())
