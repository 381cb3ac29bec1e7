"""All numeric tolerances in one configuration record.

Every cutoff used anywhere in the package lives here so that the CLI (and the
``WLAB_TOLERANCE_SCALE`` environment variable) can scale them uniformly.
Integer and rational quantities downstream of multiplicity extraction are
exact and never touch these values.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

ENV_SCALE = "WLAB_TOLERANCE_SCALE"

# Default seed for the rotation-normalization RNG; recorded in every report
# and overridable with --seed on the command line.
DEFAULT_SEED = 1729

# Fields of Tolerances that are genuine tolerances (scaled by the env var).
# mesh_exclusion_factor is a geometric default, not a tolerance, and the
# quadrature target is a requested accuracy; both stay fixed under scaling.
_SCALED = (
    "eps_pt",
    "eps_res",
    "eps_gcd",
    "eps_coeff",
    "eps_conformal",
    "eps_period_rel",
    "residue_cross_rtol",
)


@dataclass(frozen=True)
class Tolerances:
    """Numeric cutoffs shared across the package.

    Attributes:
        eps_pt: point identity on the sphere; two finite points closer than
            this are the same point (infinity only equals infinity).
        eps_res: root residual bound, relative to the coefficient scale and
            ``(1+|r|)^deg``.
        eps_gcd: relative threshold that classifies a Euclidean remainder as
            zero during approximate polynomial gcd.
        eps_coeff: relative threshold below which a trailing coefficient of a
            computed polynomial is treated as zero (degree trimming).
        eps_conformal: relative bound on the residual of the quadratic-form
            identity satisfied by the four component 1-forms.
        eps_period_rel: period-condition cutoff, relative to the coefficient
            scale of the 1-forms.
        quad_rtol: requested relative accuracy of adaptive quadrature.
        residue_cross_rtol: allowed disagreement between exact residues and
            the contour-quadrature cross-check.
        mesh_exclusion_factor: exclusion radius around singular points when
            meshing, as a fraction of the region diameter.
    """

    eps_pt: float = 1e-8
    eps_res: float = 1e-9
    eps_gcd: float = 1e-8
    eps_coeff: float = 1e-12
    eps_conformal: float = 1e-12
    eps_period_rel: float = 1e-10
    quad_rtol: float = 1e-3
    residue_cross_rtol: float = 1e-6
    mesh_exclusion_factor: float = 1e-3

    def scaled(self, factor: float) -> "Tolerances":
        """Return a copy with every tolerance multiplied by ``factor``."""
        if factor <= 0:
            raise ValueError("tolerance scale must be positive")
        kwargs = {}
        for f in fields(self):
            v = getattr(self, f.name)
            kwargs[f.name] = v * factor if f.name in _SCALED else v
        return Tolerances(**kwargs)


def env_scale() -> float:
    """Read the tolerance scale from the environment (default 1.0)."""
    raw = os.environ.get(ENV_SCALE, "").strip()
    if not raw:
        return 1.0
    try:
        scale = float(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_SCALE} must be a number, got {raw!r}") from exc
    return scale


def default_tolerances() -> Tolerances:
    """Tolerances scaled by ``WLAB_TOLERANCE_SCALE`` (read at call time)."""
    scale = env_scale()
    base = Tolerances()
    return base if scale == 1.0 else base.scaled(scale)
