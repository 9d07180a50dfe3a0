"""Registry for a software product line's components, versions and products.

The development tree keeps a shared core asset repository (components and
their version trees) next to the products built from them, answers
traceability queries in both directions, and persists to an XML document with
a metadata sidecar.
"""

from .errors import (
    DanglingReference,
    DuplicateEntry,
    DuplicateId,
    InUse,
    InvalidId,
    InvalidRecord,
    InvalidTree,
    KindMismatch,
    ParseError,
    SchemaError,
    SplError,
    UnknownNode,
)
from .metadata import (
    MetadataDocument,
    get_metadata,
    load_metadata,
    metadata_from_xml,
    metadata_to_xml,
    reconcile,
    save_metadata,
    set_metadata,
)
from .model import (
    ComponentNode,
    CompositionEntry,
    DevelopmentTree,
    MetadataRecord,
    Outcome,
    ProductNode,
    Violation,
    check_invariants,
)
from .ops import (
    EntryKind,
    TraversalEntry,
    add_component,
    add_component_version,
    add_product,
    add_product_version,
    add_to_composition,
    new_tree,
    remove_node,
    rename_node,
    traverse,
)
from .queries import (
    UsageReport,
    composition,
    latest_versions,
    list_core_assets,
    list_products,
    product_lineage,
    version_history,
    where_used,
)
from .xmlio import ValidationReport, from_xml, to_xml, validate

__version__ = "0.1.0"
