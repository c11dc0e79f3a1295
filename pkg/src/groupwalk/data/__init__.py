"""Bundled example step measures with documented oracle values.

Three measures ship with the package (see README.md next to the JSON files
for the derivations):

- sl2_rare_kick: a strongly contracting SL_2 diagonal perturbed by a rare
  rotation; the generated group is Zariski dense and the walk has a slow,
  measurable central-limit rate, which the rate experiments need.
- gl2_mixed_sign: two atoms with opposite determinant signs and equal
  weights; the sign chain mixes in one step, so the two flag components are
  occupied half the time each.
- diag_commuting: two commuting positive diagonal atoms; every walk
  functional has an elementary closed form, making this the machine-precision
  oracle for the heavy linear-algebra paths.
"""

from __future__ import annotations

import json
from importlib import resources

from ..errors import ValidationError
from ..measures import AtomicMeasure, parse_measure

BUNDLED = ("sl2_rare_kick", "gl2_mixed_sign", "diag_commuting")


def load_measure(name: str) -> AtomicMeasure:
    """Load a bundled measure by name (one of BUNDLED)."""
    if name not in BUNDLED:
        raise ValidationError(f"unknown bundled measure {name!r}; have {BUNDLED}")
    text = resources.files(__package__).joinpath(f"{name}.json").read_text()
    return parse_measure(json.loads(text))


def measure_path(name: str) -> str:
    """Filesystem path of a bundled measure's JSON document."""
    if name not in BUNDLED:
        raise ValidationError(f"unknown bundled measure {name!r}; have {BUNDLED}")
    return str(resources.files(__package__).joinpath(f"{name}.json"))
