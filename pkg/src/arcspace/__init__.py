"""Finite-level combinatorics of the dyadic arc space and its mapping torus."""

from .cancellation import CancellationDiagram, cancellable, lift_diagram, parent_set, search, verify
from .dyadic import (
    Dyadic,
    Gen,
    Span,
    Window,
    all_gens,
    designated_window,
    point_on_arc,
    span_of,
    stage_generators,
    stage_windows,
    window_contains_span,
    window_generators,
)
from .shift import decode, shift, shift_iter
from .torus import (
    Certificate,
    MixedWord,
    TorusElement,
    equal,
    normalize,
    separating_window,
    torus_window_member,
    undetectable_certificate,
)
from .words import (
    Letter,
    Word,
    WordSyntaxError,
    detection_level,
    nc_member,
    reduce,
    retract,
    stage_member,
    window_member,
)

__version__ = "0.1.0"

__all__ = [
    "CancellationDiagram",
    "Certificate",
    "Dyadic",
    "Gen",
    "Letter",
    "MixedWord",
    "Span",
    "TorusElement",
    "Window",
    "Word",
    "WordSyntaxError",
    "all_gens",
    "cancellable",
    "decode",
    "designated_window",
    "detection_level",
    "equal",
    "lift_diagram",
    "nc_member",
    "normalize",
    "parent_set",
    "point_on_arc",
    "reduce",
    "retract",
    "search",
    "separating_window",
    "shift",
    "shift_iter",
    "span_of",
    "stage_generators",
    "stage_member",
    "stage_windows",
    "torus_window_member",
    "undetectable_certificate",
    "verify",
    "window_contains_span",
    "window_generators",
    "window_member",
]
