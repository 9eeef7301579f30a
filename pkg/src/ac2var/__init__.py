"""Membership testing for the variety generated by the semigroup AC2."""

from .core import (
    ElementSet,
    Morphism,
    Semigroup,
    build_named,
    direct_product,
    find_embedding,
    from_table,
    idempotents,
    is_regular_element,
    subsemigroup_closure,
)
from .membership import MembershipReport, idempotent_closure, membership_AC2
from .words import Identity, Word, check_identity, holds_in_AC2, parse_word, word_graph

__all__ = [
    "ElementSet",
    "Identity",
    "MembershipReport",
    "Morphism",
    "Semigroup",
    "Word",
    "build_named",
    "check_identity",
    "direct_product",
    "find_embedding",
    "from_table",
    "holds_in_AC2",
    "idempotent_closure",
    "idempotents",
    "is_regular_element",
    "membership_AC2",
    "parse_word",
    "subsemigroup_closure",
    "word_graph",
]
