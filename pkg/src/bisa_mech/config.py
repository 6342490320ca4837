"""Run configuration: JSON in mm / N / kPa / deg, converted to SI here."""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .core import BlsModel, ChamberStack, DomainError, LoadCase, Material, RectSection
from .gripper import GripperConfig

MM = 1e-3
KPA = 1e3


def _data(name: str) -> Any:
    return json.loads(resources.files("bisa_mech").joinpath("data", name).read_text())


def config_schema() -> dict:
    return _data("config.schema.json")


def report_schema() -> dict:
    return _data("report.schema.json")


def default_document() -> dict:
    return _data("default_config.json")


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def parse_range(text: str) -> list[float]:
    """``start:stop:step`` in degrees, stop inclusive -> list of degrees."""
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise DomainError("alpha_range", f"expected start:stop:step, got {text!r}") from None
    if not (step > 0.0 and stop >= start and all(map(math.isfinite, (start, stop, step)))):
        raise DomainError("alpha_range", f"need step > 0 and stop >= start, got {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


@dataclass
class RunConfig:
    document: dict

    @classmethod
    def load(cls, path: str | Path | None = None) -> RunConfig:
        """Shipped defaults, overlaid with the file at ``path`` if given."""
        doc = default_document()
        if path is not None:
            with open(path) as fh:
                user = json.load(fh)
            if not isinstance(user, dict):
                raise DomainError("config", "top level must be a JSON object")
            doc = _merge(doc, user)
        return cls.from_document(doc)

    @classmethod
    def from_document(cls, doc: dict) -> RunConfig:
        jsonschema.validate(doc, config_schema())
        cfg = cls(doc)
        cfg.bls()  # surface domain errors before any computation
        cfg.stack()
        cfg.gripper()
        return cfg

    def __getitem__(self, key: str) -> dict:
        return self.document[key]

    def material(self) -> Material:
        m = self["material"]
        return Material(m["young_modulus_MPa"] * 1e6, m["poisson_ratio"])

    def section(self) -> RectSection:
        s = self["section"]
        return RectSection(s["width_mm"] * MM, s["aspect_ratio"])

    def bls(self, **overrides) -> BlsModel:
        b = self["bls"]
        kw = dict(
            material=self.material(),
            section=self.section(),
            arc_length=b["arc_length_mm"] * MM,
            structure_height=b["structure_height_mm"] * MM,
            segment_length=b["segment_length_mm"] * MM,
            segment_count=b["segment_count"],
            pretension=b["pretension_N"],
        )
        kw.update(overrides)
        return BlsModel(**kw)

    def stack(self) -> ChamberStack:
        c = self["chambers"]
        return ChamberStack(
            half_width=c["half_width_mm"] * MM,
            half_height=c["half_height_mm"] * MM,
            chamber_count=c["chamber_count"],
            contact_moment_area=c["contact_moment_area_mm3"] * MM**3,
            restoring_moment=c["restoring_moment_Nmm"] * MM,
            tendon_critical_moment=c["tendon_critical_moment_Nmm"] * MM,
        )

    def load_case(self) -> LoadCase:
        ld = self["load"]
        return LoadCase(ld["external_force_N"], ld["pressure_kPa"] * KPA)

    def gripper(self, bls: BlsModel | None = None, stack: ChamberStack | None = None) -> GripperConfig:
        g = self["gripper"]
        limit = g["tendon_limit_N"]
        return GripperConfig.uniform(
            g["finger_count"],
            bls or self.bls(),
            stack or self.stack(),
            friction_coefficient=g["friction_coefficient"],
            allowable_deflection=g["allowable_deflection_mm"] * MM,
            mount_tilt_deg=g["mount_tilt_deg"],
            tendon_limit=math.inf if limit is None else limit,
        )

    def alpha_range_deg(self) -> list[float]:
        return parse_range(self["sweep"]["alpha_range_deg"])
