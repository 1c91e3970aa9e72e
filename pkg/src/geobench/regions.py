"""Canonical Italian region names and spelling normalization."""

from __future__ import annotations

import re
import unicodedata

# Canonical order is alphabetical; it is the tie-break order used everywhere.
REGIONS: tuple[str, ...] = (
    "Abruzzo",
    "Basilicata",
    "Calabria",
    "Campania",
    "Emilia-Romagna",
    "Friuli-Venezia Giulia",
    "Lazio",
    "Liguria",
    "Lombardia",
    "Marche",
    "Molise",
    "Piemonte",
    "Puglia",
    "Sardegna",
    "Sicilia",
    "Toscana",
    "Trentino-Alto Adige",
    "Umbria",
    "Valle d'Aosta",
    "Veneto",
)

_REGION_SET = frozenset(REGIONS)
_ORDER = {name: i for i, name in enumerate(REGIONS)}

# Exact (case-sensitive) spellings seen in the wild, mapped to canonical names.
ALIASES: dict[str, str] = {
    "Valle d’Aosta": "Valle d'Aosta",
    "Valle d`Aosta": "Valle d'Aosta",
    "Valle D'Aosta": "Valle d'Aosta",
    "Valle D’Aosta": "Valle d'Aosta",
    "Valle d'Aosta/Vallée d'Aoste": "Valle d'Aosta",
    "Valle d’Aosta/Vallée d’Aoste": "Valle d'Aosta",
    "Trentino Alto Adige": "Trentino-Alto Adige",
    "Trentino-Alto Adige/Südtirol": "Trentino-Alto Adige",
    "Trentino Alto-Adige": "Trentino-Alto Adige",
    "Trentino-Alto-Adige": "Trentino-Alto Adige",
    "Friuli Venezia Giulia": "Friuli-Venezia Giulia",
    "Friuli-Venezia-Giulia": "Friuli-Venezia Giulia",
    "Emilia Romagna": "Emilia-Romagna",
}

_SPACES = re.compile(r"\s+")


class UnknownRegionError(ValueError):
    pass


def _squash(name: str) -> str:
    return _SPACES.sub(" ", name.strip())


def normalize_region(name: str) -> str:
    """Map a region spelling to its canonical form.

    Whitespace is trimmed and collapsed, then the name must match a canonical
    region or an entry of :data:`ALIASES` exactly (case-sensitive).
    """
    squashed = _squash(name)
    if squashed in _REGION_SET:
        return squashed
    try:
        return ALIASES[squashed]
    except KeyError:
        raise UnknownRegionError(f"unknown region {name!r}") from None


def is_region(name: str) -> bool:
    return name in _REGION_SET


def _fold(text: str) -> str:
    # casefold, strip accents, drop every non-alphanumeric character
    text = unicodedata.normalize("NFKD", text.casefold())
    return "".join(ch for ch in text if ch.isalnum())


_FOLDED: dict[str, str] = {}
for _name in (*REGIONS, *ALIASES):
    _FOLDED.setdefault(_fold(_name), normalize_region(_name))
# spoken shorthand that models tend to emit
_FOLDED.setdefault(_fold("Trentino"), "Trentino-Alto Adige")
_FOLDED.setdefault(_fold("Friuli"), "Friuli-Venezia Giulia")
_FOLDED.setdefault(_fold("Valle d Aosta"), "Valle d'Aosta")
_FOLDED_BY_LENGTH = sorted(_FOLDED.items(), key=lambda kv: (-len(kv[0]), kv[0]))


def resolve_region_loose(text: str) -> str | None:
    """Best-effort region lookup used when repairing model output.

    Ignores case, accents, punctuation and spacing. If the whole string does not
    match, the longest known name that prefixes it wins ("Lazio." or
    "Campania e basta" both resolve). Returns ``None`` when nothing matches.
    """
    folded = _fold(text)
    if not folded:
        return None
    if folded in _FOLDED:
        return _FOLDED[folded]
    for key, region in _FOLDED_BY_LENGTH:
        if folded.startswith(key):
            return region
    return None


def region_sort_key(label: str) -> tuple[int, int, str]:
    """Canonical regions first in canonical order, any other label after them."""
    idx = _ORDER.get(label)
    if idx is None:
        return (1, 0, label)
    return (0, idx, label)
