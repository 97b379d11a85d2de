"""Fixed 11-entry category table for disaster scenes.

Ids 1-4 are the four building damage levels (kept contiguous so damage
categories can be range-checked), 5-10 are the other semantic categories,
0 is background.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownCategory, UnknownCategoryId

KIND_BACKGROUND = "background"
KIND_DAMAGE = "damage-level"
KIND_SEMANTIC = "semantic"


@dataclass(frozen=True)
class CategoryInfo:
    id: int
    name: str
    kind: str


CATEGORIES: tuple[CategoryInfo, ...] = (
    CategoryInfo(0, "background", KIND_BACKGROUND),
    CategoryInfo(1, "building_no_damage", KIND_DAMAGE),
    CategoryInfo(2, "building_minor_damage", KIND_DAMAGE),
    CategoryInfo(3, "building_major_damage", KIND_DAMAGE),
    CategoryInfo(4, "building_total_destruction", KIND_DAMAGE),
    CategoryInfo(5, "water", KIND_SEMANTIC),
    CategoryInfo(6, "vehicle", KIND_SEMANTIC),
    CategoryInfo(7, "road_clear", KIND_SEMANTIC),
    CategoryInfo(8, "road_blocked", KIND_SEMANTIC),
    CategoryInfo(9, "pool", KIND_SEMANTIC),
    CategoryInfo(10, "tree", KIND_SEMANTIC),
)

DAMAGE_CATEGORIES = tuple(c for c in CATEGORIES if c.kind == KIND_DAMAGE)
SEMANTIC_CATEGORIES = tuple(c for c in CATEGORIES if c.kind == KIND_SEMANTIC)
MAX_CATEGORY_ID = CATEGORIES[-1].id

_BY_ID = {c.id: c for c in CATEGORIES}
_BY_NAME = {c.name: c for c in CATEGORIES}


def _normalize(name: str) -> str:
    return name.strip().lower().replace(" ", "_")


def category_lookup(key: int | str) -> CategoryInfo:
    """Resolve a category by id or by (case/space-insensitive) name."""
    if isinstance(key, bool):
        raise UnknownCategory(f"not a category key: {key!r}")
    if isinstance(key, int):
        info = _BY_ID.get(key)
        if info is None:
            raise UnknownCategoryId(f"unknown category id: {key}")
        return info
    if isinstance(key, str):
        info = _BY_NAME.get(_normalize(key))
        if info is None:
            raise UnknownCategory(f"unknown category: {key!r}")
        return info
    raise UnknownCategory(f"not a category key: {key!r}")


def is_valid_id(cid: int) -> bool:
    return cid in _BY_ID
