"""Powers of conjugacy classes: exact class algebra against character-table criteria."""

__version__ = "0.1.0"

from .catalogue import CatalogueEntry, build_catalogue, check_entry, get_entry
from .chartable import CharacterTable, compute_character_table, export_table, import_table
from .classalg import Shape, class_power, class_product, classify_support, structure_constants
from .criteria import (
    alpha_multiplicities,
    char1_check,
    char2_check,
    char3_check,
    scan_group,
    scan_table,
)
from .estimator import ClassPowerScanner
from .group import FiniteGroup, Perm, conjugacy_classes, enumerate_group
from .presentation import group_from_presentation, load_group

__all__ = [
    "CatalogueEntry",
    "CharacterTable",
    "ClassPowerScanner",
    "FiniteGroup",
    "Perm",
    "Shape",
    "alpha_multiplicities",
    "build_catalogue",
    "char1_check",
    "char2_check",
    "char3_check",
    "check_entry",
    "class_power",
    "class_product",
    "classify_support",
    "compute_character_table",
    "conjugacy_classes",
    "enumerate_group",
    "export_table",
    "get_entry",
    "group_from_presentation",
    "import_table",
    "load_group",
    "scan_group",
    "scan_table",
    "structure_constants",
]
