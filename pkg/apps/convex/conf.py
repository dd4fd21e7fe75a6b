"""Library configuration: tolerance profiles and sampling defaults.

Values come from ``django.conf.settings`` (``FORGE_*``) when settings are
configured, otherwise from the built-in defaults below.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from typing import Dict, Mapping, Optional

from django.conf import settings


@dataclass(frozen=True)
class Tolerances:
    """Named numeric gates used by every verdict.

    Relative gates are scaled by the diameter of the point cloud or body they
    are applied to; angular gates are in radians.
    """

    tangency: float = 1e-8
    boundary: float = 1e-10
    collinearity: float = 1e-9
    planarity: float = 1e-6
    ellipse: float = 1e-6
    symmetry: float = 1e-7
    angle: float = 1e-6
    bisector: float = 1e-7
    affine_diameter: float = 1e-7
    conjugacy: float = 1e-7
    normality: float = 1e-9
    pole: float = 1e-7
    hausdorff: float = 1e-6
    margin: float = 1e-6

    def with_overrides(self, overrides: Optional[Mapping[str, float]] = None) -> "Tolerances":
        """Return a copy with single gates replaced.

        Raises ``ValueError`` for unknown gate names or non-positive values.
        """

        if not overrides:
            return self
        known = {f.name for f in fields(self)}
        clean: Dict[str, float] = {}
        for name, value in overrides.items():
            if name not in known:
                raise ValueError(f"Unknown tolerance '{name}' (expected one of {', '.join(sorted(known))})")
            value = float(value)
            if not value > 0:
                raise ValueError(f"Tolerance '{name}' must be positive, got {value}")
            clean[name] = value
        return replace(self, **clean)

    def scaled(self, factor: float) -> "Tolerances":
        return replace(self, **{f.name: getattr(self, f.name) * factor for f in fields(self)})

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


PROFILES: Dict[str, Tolerances] = {
    "default": Tolerances(),
    "strict": Tolerances().scaled(0.1),
    "loose": Tolerances().scaled(100.0),
}


@dataclass(frozen=True)
class SamplingConfig:
    seed: int = 20240521
    curve_samples: int = 64
    # Floor for curves handed out as artifacts; checks sample below it internally
    min_curve_samples: int = 64
    directions: int = 512
    diameters: int = 128
    slab_planes: int = 7
    workers: int = 1


def _setting(name: str, default):
    if not settings.configured:
        return default
    return getattr(settings, name, default)


def get_tolerances(profile: Optional[str] = None, overrides: Optional[Mapping[str, float]] = None) -> Tolerances:
    """Resolve the active tolerance profile.

    ``profile`` defaults to ``settings.FORGE_TOLERANCE_PROFILE``; overrides from
    ``settings.FORGE_TOLERANCES`` are applied first, then ``overrides``.
    """

    name = profile or _setting("FORGE_TOLERANCE_PROFILE", "default")
    try:
        base = PROFILES[name]
    except KeyError:
        raise ValueError(f"Unknown tolerance profile '{name}' (expected one of {', '.join(PROFILES)})")
    base = base.with_overrides(_setting("FORGE_TOLERANCES", None))
    return base.with_overrides(overrides)


def get_sampling() -> SamplingConfig:
    return SamplingConfig(
        seed=int(_setting("FORGE_SEED", SamplingConfig.seed)),
        curve_samples=int(_setting("FORGE_CURVE_SAMPLES", SamplingConfig.curve_samples)),
        min_curve_samples=int(_setting("FORGE_MIN_CURVE_SAMPLES", SamplingConfig.min_curve_samples)),
        directions=int(_setting("FORGE_DIRECTIONS", SamplingConfig.directions)),
        diameters=int(_setting("FORGE_DIAMETERS", SamplingConfig.diameters)),
        slab_planes=int(_setting("FORGE_SLAB_PLANES", SamplingConfig.slab_planes)),
        workers=max(1, int(_setting("FORGE_WORKERS", SamplingConfig.workers))),
    )


__all__ = ["Tolerances", "PROFILES", "SamplingConfig", "get_tolerances", "get_sampling"]
