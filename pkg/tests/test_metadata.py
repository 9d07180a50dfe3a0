from datetime import date

import pytest
from hypothesis import given, strategies as st

from spltree import (
    MetadataDocument,
    MetadataRecord,
    Outcome,
    get_metadata,
    load_metadata,
    metadata_from_xml,
    metadata_to_xml,
    new_tree,
    reconcile,
    remove_node,
    rename_node,
    save_metadata,
    set_metadata,
)
from spltree.errors import InvalidRecord, ParseError, SchemaError
from spltree.metadata import parse_date
from spltree.model import is_valid_id

FULL = MetadataRecord(
    author="ahmed",
    developed_date=date(2004, 11, 1),
    release_date=date(2004, 12, 15),
    test_date=date(2004, 11, 20),
    test_result=Outcome.PASS,
    notes="first cut & review",
)


def test_write_then_read():
    doc = MetadataDocument()
    record = MetadataRecord("ahmed", date(2004, 11, 1), test_result=Outcome.PASS)
    set_metadata(doc, "C1", record)
    assert get_metadata(doc, "C1") == record
    assert get_metadata(doc, "C2") is None


@pytest.mark.parametrize(
    "record",
    [
        MetadataRecord("a", date(2004, 11, 1), test_date=date(2004, 10, 31)),
        MetadataRecord("a", date(2004, 11, 1), release_date=date(2003, 1, 1)),
        MetadataRecord("a", date(2004, 11, 1), notes="bell\x07"),
        MetadataRecord("a", "2004-11-01"),
    ],
)
def test_invalid_records(record):
    doc = MetadataDocument()
    with pytest.raises(InvalidRecord):
        set_metadata(doc, "C1", record)
    assert doc.entries == {}


def test_same_day_dates_are_fine():
    d = date(2004, 11, 1)
    set_metadata(MetadataDocument(), "C1", MetadataRecord("a", d, release_date=d, test_date=d))


def test_last_write_wins():
    doc = MetadataDocument()
    set_metadata(doc, "C1", MetadataRecord("a", date(2004, 1, 1), release_date=date(2004, 2, 1)))
    set_metadata(doc, "C1", MetadataRecord("a", date(2004, 1, 1), release_date=date(2004, 3, 1)))
    assert get_metadata(doc, "C1").release_date == date(2004, 3, 1)


def test_empty_document():
    text = metadata_to_xml(MetadataDocument())
    assert text.splitlines()[-1] == "<Metadata></Metadata>"
    assert metadata_from_xml(text) == MetadataDocument()


def test_full_record_golden(data_dir):
    doc = MetadataDocument({"C1": FULL})
    assert metadata_to_xml(doc) == (data_dir / "full_record.spl.meta.xml").read_text()


def test_save_load(tmp_path):
    doc = MetadataDocument({"C1": FULL, "A0": MetadataRecord("x", date(1999, 1, 2))})
    path = tmp_path / "reg.spl.meta.xml"
    save_metadata(doc, path)
    assert load_metadata(path) == doc
    # nodes are written sorted by id
    assert path.read_text().index('id="A0"') < path.read_text().index('id="C1"')


def test_reconcile(fig12):
    doc = MetadataDocument()
    assert reconcile(doc, new_tree()) == []
    set_metadata(doc, "C1", FULL)
    remove_node(fig12, "C1", force=True)
    assert reconcile(doc, fig12) == ["C1"]


def test_reconcile_after_rename(fig12):
    doc = MetadataDocument({"C1": FULL})
    rename_node(fig12, "C1", "C1a", metadata=doc)
    assert reconcile(doc, fig12) == []
    assert get_metadata(doc, "C1a") == FULL


@pytest.mark.parametrize("text", ["2004-11-01", "0999-01-31"])
def test_date_format_accepted(text):
    assert parse_date(text).isoformat() == text


@pytest.mark.parametrize("text", ["2004-1-01", "20041101", "01-11-2004", "2004/11/01", "2004-02-30", " 2004-11-01"])
def test_date_format_rejected(text):
    with pytest.raises(ValueError):
        parse_date(text)


@pytest.mark.parametrize(
    "body, error",
    [
        ("<Metadata>", ParseError),
        ("<Other></Other>", SchemaError),
        ('<Metadata><Thing id="C1"/></Metadata>', SchemaError),
        ('<Metadata><Node id="1x"><Author>a</Author><DevelopedDate>2004-01-01</DevelopedDate></Node></Metadata>', SchemaError),
        ('<Metadata><Node id="C1"><Author>a</Author></Node></Metadata>', SchemaError),
        ('<Metadata><Node id="C1"><Author>a</Author><DevelopedDate>2004-1-1</DevelopedDate></Node></Metadata>', SchemaError),
        ('<Metadata><Node id="C1"><Author>a</Author><DevelopedDate>2004-01-01</DevelopedDate><TestResult>ok</TestResult></Node></Metadata>', SchemaError),
        ('<Metadata><Node id="C1"><Author>a</Author><DevelopedDate>2004-01-01</DevelopedDate><TestDate>2003-01-01</TestDate></Node></Metadata>', SchemaError),
        ('<Metadata><Node id="C1"><Author>a</Author><Author>b</Author><DevelopedDate>2004-01-01</DevelopedDate></Node></Metadata>', SchemaError),
        ('<Metadata><Node id="C1"><Author>a</Author><DevelopedDate>2004-01-01</DevelopedDate><Colour>red</Colour></Node></Metadata>', SchemaError),
    ],
)
def test_load_errors(body, error):
    with pytest.raises(error):
        metadata_from_xml(body)


def test_duplicate_node_rejected():
    node = '<Node id="C1"><Author>a</Author><DevelopedDate>2004-01-01</DevelopedDate></Node>'
    with pytest.raises(SchemaError):
        metadata_from_xml(f"<Metadata>{node}{node}</Metadata>")


# text XML 1.0 can carry
xml_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Cc"), blacklist_characters="\ufffe\uffff")
    | st.sampled_from("\t\n\r"),
    max_size=20,
)


@st.composite
def records(draw):
    developed = draw(st.dates())
    later = st.none() | st.dates(min_value=developed)
    return MetadataRecord(
        author=draw(xml_text),
        developed_date=developed,
        release_date=draw(later),
        test_date=draw(later),
        test_result=draw(st.none() | st.sampled_from(Outcome)),
        notes=draw(st.none() | xml_text),
    )


node_ids = st.from_regex(r"[A-Za-z_][A-Za-z0-9_.\-]{0,8}", fullmatch=True).filter(is_valid_id)


@given(st.dictionaries(node_ids, records(), max_size=6))
def test_save_load_identity(entries):
    doc = MetadataDocument()
    for node_id, record in entries.items():
        set_metadata(doc, node_id, record)
    text = metadata_to_xml(doc)
    assert metadata_from_xml(text) == doc
    assert metadata_to_xml(metadata_from_xml(text)) == text
