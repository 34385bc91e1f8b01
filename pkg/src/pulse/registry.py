"""Campus topology: buildings, functional zones, and access points.

The registry is loaded once from a JSON file and treated as immutable
afterwards; every other part of the pipeline resolves access points and
zones through it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Union


class Category(Enum):
    """Functional category of a building; doubles as its icon key."""

    LIBRARY = "library"
    CANTEEN = "canteen"
    DORMITORY = "dormitory"
    ACADEMIC = "academic"
    SPORTS = "sports"
    ADMINISTRATION = "administration"
    OTHER = "other"


@dataclass(frozen=True)
class Building:
    id: str
    name: str
    zone_id: str
    latitude: float
    longitude: float
    category: Category
    important: bool


@dataclass(frozen=True)
class Zone:
    id: str
    name: str


@dataclass(frozen=True)
class AccessPoint:
    id: str
    building_id: str


class RegistryError(ValueError):
    """Base class for registry load failures."""


class RegistryParseError(RegistryError):
    """The file is not valid JSON or not the expected document shape."""


class RegistryValidationError(RegistryError):
    """One or more entries break an invariant; carries every problem found."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("invalid registry:\n  " + "\n  ".join(self.problems))


class UnknownBuildingError(KeyError):
    """A building id that does not exist in the registry."""


@dataclass(frozen=True)
class Registry:
    """Validated campus topology. All cross-references are guaranteed to resolve."""

    buildings: dict[str, Building]
    zones: dict[str, Zone]
    aps: dict[str, AccessPoint]

    def building_of_ap(self, ap_id: str) -> Building:
        return self.buildings[self.aps[ap_id].building_id]

    def important_buildings(self) -> list[Building]:
        """Buildings in the pop-up rotation, in ascending id order."""
        return [b for _, b in sorted(self.buildings.items()) if b.important]

    def building_ids(self) -> list[str]:
        return sorted(self.buildings)

    def zone_ids(self) -> list[str]:
        return sorted(self.zones)

    def zone_id_of(self, building_id: str) -> str:
        try:
            return self.buildings[building_id].zone_id
        except KeyError:
            raise UnknownBuildingError(building_id) from None


def zone_of(registry: Registry, building_id: str) -> Zone:
    """The zone owning a building.

    Raises UnknownBuildingError if the building is not registered.
    """
    try:
        building = registry.buildings[building_id]
    except KeyError:
        raise UnknownBuildingError(building_id) from None
    return registry.zones[building.zone_id]


def _string_field(entry: dict, key: str, where: str, problems: list[str]) -> str:
    value = entry.get(key)
    if not isinstance(value, str) or not value:
        problems.append(f"{where}: field {key!r} must be a non-empty string")
        return ""
    return value


def _build_registry(doc: dict) -> Registry:
    if not isinstance(doc, dict):
        raise RegistryParseError("registry document must be a JSON object")
    for section in ("zones", "buildings", "aps"):
        if not isinstance(doc.get(section), list):
            raise RegistryParseError(f"registry document needs a top-level {section!r} array")

    problems: list[str] = []

    zones: dict[str, Zone] = {}
    for i, entry in enumerate(doc["zones"]):
        where = f"zones[{i}]"
        zid = _string_field(entry, "id", where, problems)
        name = _string_field(entry, "name", where, problems)
        if not zid:
            continue
        if zid in zones:
            problems.append(f"{where}: duplicate zone id {zid!r}")
            continue
        zones[zid] = Zone(id=zid, name=name)

    buildings: dict[str, Building] = {}
    for i, entry in enumerate(doc["buildings"]):
        where = f"buildings[{i}]"
        bid = _string_field(entry, "id", where, problems)
        name = _string_field(entry, "name", where, problems)
        zone_id = _string_field(entry, "zone_id", where, problems)
        lat = entry.get("latitude")
        lon = entry.get("longitude")
        if not isinstance(lat, (int, float)) or isinstance(lat, bool) or not -90 <= lat <= 90:
            problems.append(f"{where}: latitude must be a number in [-90, 90]")
            lat = 0.0
        if not isinstance(lon, (int, float)) or isinstance(lon, bool) or not -180 <= lon <= 180:
            problems.append(f"{where}: longitude must be a number in [-180, 180]")
            lon = 0.0
        try:
            category = Category(entry.get("category"))
        except ValueError:
            problems.append(f"{where}: unknown category {entry.get('category')!r}")
            category = Category.OTHER
        important = entry.get("important", False)
        if not isinstance(important, bool):
            problems.append(f"{where}: field 'important' must be a boolean")
            important = False
        if not bid:
            continue
        if bid in buildings:
            problems.append(f"{where}: duplicate building id {bid!r}")
            continue
        if zone_id and zone_id not in zones:
            problems.append(f'building "{bid}" references unknown zone "{zone_id}"')
        buildings[bid] = Building(
            id=bid, name=name, zone_id=zone_id,
            latitude=float(lat), longitude=float(lon),
            category=category, important=important,
        )

    aps: dict[str, AccessPoint] = {}
    for i, entry in enumerate(doc["aps"]):
        where = f"aps[{i}]"
        apid = _string_field(entry, "id", where, problems)
        building_id = _string_field(entry, "building_id", where, problems)
        if not apid:
            continue
        if apid in aps:
            problems.append(f"{where}: duplicate ap id {apid!r}")
            continue
        if building_id and building_id not in buildings:
            problems.append(f'AP "{apid}" references unknown building "{building_id}"')
        aps[apid] = AccessPoint(id=apid, building_id=building_id)

    if not any(b.important for b in buildings.values()):
        problems.append("no important facilities: at least one building must set important=true")

    if problems:
        raise RegistryValidationError(problems)
    return Registry(buildings=buildings, zones=zones, aps=aps)


def load_registry(path: Union[str, Path]) -> Registry:
    """Load and validate a registry file.

    Raises FileNotFoundError, RegistryParseError (with line info), or
    RegistryValidationError listing every broken invariant at once.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RegistryParseError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return _build_registry(doc)


def loads_registry(text: str) -> Registry:
    """Parse a registry from a JSON string (same validation as load_registry)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RegistryParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return _build_registry(doc)


def dump_registry(registry: Registry) -> dict:
    """Registry as a JSON-serializable document in the on-disk layout."""
    return {
        "zones": [{"id": z.id, "name": z.name} for _, z in sorted(registry.zones.items())],
        "buildings": [
            {
                "id": b.id,
                "name": b.name,
                "zone_id": b.zone_id,
                "latitude": b.latitude,
                "longitude": b.longitude,
                "category": b.category.value,
                "important": b.important,
            }
            for _, b in sorted(registry.buildings.items())
        ],
        "aps": [
            {"id": a.id, "building_id": a.building_id}
            for _, a in sorted(registry.aps.items())
        ],
    }


def save_registry(registry: Registry, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(dump_registry(registry), indent=2) + "\n", encoding="utf-8")
