"""Deterministic synthetic corpora for testing the pipeline without real data."""

from __future__ import annotations

import random
from importlib import resources
from pathlib import Path

from geobench.ingest import Record
from geobench.regions import REGIONS

# Rough regional capitals, used only as sampling centres.
REGION_CENTRES: dict[str, tuple[float, float]] = {
    "Abruzzo": (42.3498, 13.3995),
    "Basilicata": (40.6401, 15.8056),
    "Calabria": (38.9098, 16.5877),
    "Campania": (40.8518, 14.2681),
    "Emilia-Romagna": (44.4949, 11.3426),
    "Friuli-Venezia Giulia": (45.6495, 13.7768),
    "Lazio": (41.9028, 12.4964),
    "Liguria": (44.4056, 8.9463),
    "Lombardia": (45.4642, 9.1900),
    "Marche": (43.6158, 13.5189),
    "Molise": (41.5603, 14.6627),
    "Piemonte": (45.0703, 7.6869),
    "Puglia": (41.1171, 16.8719),
    "Sardegna": (39.2238, 9.1217),
    "Sicilia": (38.1157, 13.3615),
    "Toscana": (43.7696, 11.2558),
    "Trentino-Alto Adige": (46.0748, 11.1217),
    "Umbria": (43.1107, 12.3908),
    "Valle d'Aosta": (45.7376, 7.3172),
    "Veneto": (45.4408, 12.3155),
}

FILLER = (
    "ciao", "oggi", "domani", "sempre", "niente", "mamma", "casa", "bello",
    "tutto", "molto", "pure", "quando", "dopo", "fuori", "gente", "strada",
    "mangiare", "partita", "lavoro", "sole", "[USER]", "[URL]",
)


def region_marker(region: str) -> str:
    """A token whose character n-grams occur for no other region."""
    letter = chr(ord("a") + REGIONS.index(region))
    return f"zx{letter * 4}"


def separable_corpus(
    per_region: int, seed: int = 0, *, id_offset: int = 0, jitter: float = 0.15
) -> list[Record]:
    """``per_region`` records for each of the 20 regions.

    Every text carries its region's exclusive marker three times among shared
    filler words; coordinates scatter around the region centre.
    """
    rng = random.Random(seed)
    records = []
    next_id = id_offset
    for _ in range(per_region):
        for region in REGIONS:
            words = [rng.choice(FILLER) for _ in range(rng.randint(2, 6))]
            marker = region_marker(region)
            for _ in range(3):
                words.insert(rng.randint(0, len(words)), marker)
            lat0, lon0 = REGION_CENTRES[region]
            lat = round(lat0 + rng.gauss(0.0, jitter), 4)
            lon = round(lon0 + rng.gauss(0.0, jitter), 4)
            records.append(Record(str(next_id), " ".join(words), region, lat, lon))
            next_id += 1
    return records


def fixture_dir() -> Path:
    """Directory of the small shipped fixture (TSV splits and synthetic geometry)."""
    return Path(str(resources.files("geobench") / "data" / "fixture"))
