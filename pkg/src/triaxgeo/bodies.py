"""Catalog of reference bodies and the ``name,a_x,a_y,a_z`` catalog file format.

Catalog files are UTF-8 text, one body per line, semiaxes in km; ``#``
starts a comment and blank lines are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Literal

from .ellipsoid import TriaxialEllipsoid

# semiaxes in km, kept as decimal strings
_BUILTIN = (
    ("Ariel", "581.1", "577.9", "577.7"),
    ("Earth", "6378.173435", "6378.1039", "6356.7544"),
    ("Enceladus", "256.6", "251.4", "248.3"),
    ("Europa", "1564.13", "1561.23", "1560.93"),
    ("Io", "1829.4", "1819.3", "1815.7"),
    ("Mars", "3394.6", "3393.3", "3376.3"),
    ("Mimas", "207.4", "196.8", "190.6"),
    ("Miranda", "240.4", "234.2", "232.9"),
    ("Moon", "1735.55", "1735.324", "1734.898"),
    ("Tethys", "535.6", "528.2", "525.8"),
)


class CatalogError(ValueError):
    pass


class UnknownBodyError(KeyError):
    pass


@dataclass(frozen=True)
class BodyRecord:
    name: str
    ellipsoid: TriaxialEllipsoid
    source: Literal["builtin", "user"] = "builtin"


def builtin_catalog() -> list[BodyRecord]:
    return [
        BodyRecord(name, TriaxialEllipsoid(float(ax), float(ay), float(az)), "builtin")
        for name, ax, ay, az in _BUILTIN
    ]


def lookup(name: str, catalog: Iterable[BodyRecord] | None = None) -> BodyRecord:
    """Body by name; exact match first, then case-insensitive."""
    records = list(builtin_catalog() if catalog is None else catalog)
    for rec in records:
        if rec.name == name:
            return rec
    folded = name.casefold()
    for rec in records:
        if rec.name.casefold() == folded:
            return rec
    raise UnknownBodyError(f"unknown body {name!r}")


def parse_catalog(text: str, origin: str = "<string>") -> list[BodyRecord]:
    records: list[BodyRecord] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 4:
            raise CatalogError(
                f"{origin}:{lineno}: expected 4 fields 'name,a_x,a_y,a_z', got {len(fields)}"
            )
        name = fields[0]
        if not name:
            raise CatalogError(f"{origin}:{lineno}: field 'name' is empty")
        axes = []
        for label, value in zip(("a_x", "a_y", "a_z"), fields[1:]):
            try:
                axes.append(float(value))
            except ValueError:
                raise CatalogError(
                    f"{origin}:{lineno}: field '{label}' is not a number: {value!r}"
                ) from None
        if name in seen:
            raise CatalogError(f"{origin}:{lineno}: duplicate body {name!r}")
        try:
            ellipsoid = TriaxialEllipsoid(*axes)
        except ValueError as exc:
            raise CatalogError(f"{origin}:{lineno}: body {name!r}: {exc}") from None
        seen.add(name)
        records.append(BodyRecord(name, ellipsoid, "user"))
    return records


def load_catalog(path) -> list[BodyRecord]:
    """Builtin bodies merged with those in ``path``; user entries win on name collision."""
    path = Path(path)
    user = parse_catalog(path.read_text(encoding="utf-8"), origin=str(path))
    merged = {rec.name: rec for rec in builtin_catalog()}
    for rec in user:
        merged[rec.name] = rec
    return list(merged.values())


def serialize_catalog(records: Iterable[BodyRecord]) -> str:
    lines = ["# name,a_x,a_y,a_z (km)"]
    for rec in records:
        ax, ay, az = rec.ellipsoid.semiaxes
        lines.append(f"{rec.name},{ax!r},{ay!r},{az!r}")
    return "\n".join(lines) + "\n"
