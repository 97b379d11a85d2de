"""The fixed 11-entry category table of the exchange format.

Replicated on the adapter side (rather than imported from the
orchestrator) so exports can be validated before hand-off with no
dependency on the consuming package. Mask pixel value = category id.
"""

CATEGORY_IDS = {
    "background": 0,
    "building_no_damage": 1,
    "building_minor_damage": 2,
    "building_major_damage": 3,
    "building_total_destruction": 4,
    "water": 5,
    "vehicle": 6,
    "road_clear": 7,
    "road_blocked": 8,
    "pool": 9,
    "tree": 10,
}

CATEGORY_NAMES = {v: k for k, v in CATEGORY_IDS.items()}

MAX_CATEGORY_ID = max(CATEGORY_IDS.values())


def is_valid_category(name: str) -> bool:
    return name in CATEGORY_IDS


def is_valid_id(cid: int) -> bool:
    return cid in CATEGORY_NAMES
