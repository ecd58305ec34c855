"""Canonical category vocabulary shared by recognizers, corpus index, and search."""

# Seven classes sourced from general-purpose doodle data, sixteen from
# UI-specific doodle data.  Alphabetical order is canonical everywhere a
# confidence vector, logit order, or tie-break is involved.
GENERAL_CATEGORIES = (
    "camera",
    "cloud",
    "envelope",
    "house",
    "jail_window",
    "square",
    "star",
)

UI_CATEGORIES = (
    "avatar",
    "back",
    "cancel",
    "checkbox",
    "drop_down",
    "forward",
    "left_arrow",
    "menu",
    "play",
    "plus",
    "search",
    "setting",
    "share",
    "slider",
    "squiggle",
    "switch",
)

CATEGORIES: tuple[str, ...] = tuple(sorted(GENERAL_CATEGORIES + UI_CATEGORIES))

# Compound query element produced by fusing a squiggle inside a square.
# Not drawable directly, but it ranks and matches like a 24th category.
TEXT_BUTTON = "text_button"

QUERY_CATEGORIES: tuple[str, ...] = CATEGORIES + (TEXT_BUTTON,)

CATEGORY_INDEX: dict[str, int] = {name: i for i, name in enumerate(QUERY_CATEGORIES)}

N_CATEGORIES = len(CATEGORIES)
N_QUERY_CATEGORIES = len(QUERY_CATEGORIES)
